//! Twisted chain complex of a knot exterior with coefficients in
//! `t^α ⊗ Ad∘ρ`, its first homology torsion `Δ₁`, the twisted Alexander
//! invariant and the non-acyclic Reidemeister torsion.
//!
//! Block layout of `A^j`: rows indexed by generators `i ≠ j`, columns by
//! relators, block `(i, l) = Φ(∂r_l/∂x_i)ᵀ`, i.e. the transpose of the
//! relator-by-generator Fox matrix. Moving blocks without transposing them
//! would change the determinant once there are two or more relators. The
//! sign `τ₀` is fixed to `+1`, so every torsion value is defined up to one
//! global sign.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::foxcalc::{fox_derivative, FoxError, GroupRingElt};
use crate::laurent::{LaurentError, LaurentMatrix, LaurentPoly, RationalFunction};
use crate::presentation::{Presentation, Violation, Word};
use crate::reps::{adjoint_images, AdjointImage, Rep, RepError};
use crate::tolerances::Tolerances;

/// `|Δ₁(1)|` and `|Δ₁′(1)|` must be at most this times the coefficient scale.
pub const SIMPLE_ZERO_TOL: f64 = 1e-9;
/// `|(Δ₁/(t−1)²)(1)|` must exceed this times the coefficient scale.
pub const NONVANISHING_TOL: f64 = 1e-6;
/// Step for the naive limit `−TAI(1+h)/h`.
pub const NAIVE_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorsionError {
    #[error("not a knot presentation: {}", list(.0))]
    InvalidPresentation(Vec<Violation>),
    #[error("drop index {index} out of range for {rank} generators")]
    InvalidDrop { index: usize, rank: usize },
    #[error("generator {0} has α ≠ 1; the torsion formula needs a meridian")]
    NotMeridian(usize),
    #[error("parabolic/degenerate boundary trace: |Tr ρ(x²) − 2| = {0:.3e}")]
    DegenerateBoundary(f64),
    #[error("not a simple zero: ρ may not be λ-regular (remainders {0:.3e}, {1:.3e})")]
    NotSimpleZero(f64, f64),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Fox(#[from] FoxError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// `Φ(e) = Σ c_w t^{α(w)} Ad(ρ(w))` as a 3×3 Laurent matrix.
pub fn phi_of(e: &GroupRingElt, adj: &AdjointImage, p: &Presentation) -> LaurentMatrix {
    let mut by_degree: BTreeMap<i64, [[Complex64; 3]; 3]> = BTreeMap::new();
    for (w, c) in e.terms() {
        let c = c.to_f64().unwrap_or(f64::NAN);
        let m = adj.of_word(w);
        let slot = by_degree.entry(p.alpha_of(w)).or_default();
        for (i, row) in slot.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v += m[(i, j)] * c;
            }
        }
    }
    LaurentMatrix::from_fn(3, |i, j| {
        by_degree.iter().fold(LaurentPoly::zero(), |acc, (&d, m)| &acc + &LaurentPoly::monomial(m[i][j], d))
    })
}

fn check(p: &Presentation, drop: usize) -> Result<(), TorsionError> {
    let v = p.validate();
    if !v.is_empty() {
        return Err(TorsionError::InvalidPresentation(v));
    }
    if drop >= p.generator_count() {
        return Err(TorsionError::InvalidDrop { index: drop, rank: p.generator_count() });
    }
    Ok(())
}

/// `A^j`: the `3(k−1)`-square matrix of blocks `Φ(∂r_l/∂x_i)ᵀ` over `i ≠ drop`.
pub fn alexander_block_matrix(
    p: &Presentation,
    adj: &AdjointImage,
    drop: usize,
) -> Result<LaurentMatrix, TorsionError> {
    check(p, drop)?;
    let k = p.generator_count();
    let blocks = (0..k)
        .filter(|&i| i != drop)
        .map(|i| {
            p.relators()
                .iter()
                .map(|r| Ok(phi_of(&fox_derivative(r, i, k)?, adj, p).transpose()))
                .collect::<Result<Vec<_>, TorsionError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LaurentMatrix::from_blocks(&blocks))
}

/// `Δ₁(t) = det A^j`, cleaned and shifted to offset 0.
pub fn homology_torsion(p: &Presentation, r: &Rep, drop: usize, tol: &Tolerances) -> Result<LaurentPoly, TorsionError> {
    let adj = adjoint_images(r)?;
    let a = alexander_block_matrix(p, &adj, drop)?;
    Ok(a.determinant().cleanup(tol.cleanup).normalize_offset())
}

/// `det Φ(x_j − 1)`.
pub fn meridian_denominator(p: &Presentation, adj: &AdjointImage, j: usize) -> LaurentPoly {
    let e = &GroupRingElt::from_word(Word::generator(j)) - &GroupRingElt::one();
    phi_of(&e, adj, p).determinant()
}

/// `Δ₁ / det Φ(x_j − 1)`, normalized by a common power of `t`.
pub fn twisted_alexander_invariant(
    p: &Presentation,
    r: &Rep,
    drop: usize,
    tol: &Tolerances,
) -> Result<RationalFunction, TorsionError> {
    let num = homology_torsion(p, r, drop, tol)?;
    let adj = adjoint_images(r)?;
    let den = meridian_denominator(p, &adj, drop).cleanup(tol.cleanup);
    Ok(RationalFunction::new(num, den)?)
}

fn meridian_trace_sq(p: &Presentation, r: &Rep, drop: usize, tol: &Tolerances) -> Result<Complex64, TorsionError> {
    if p.alpha()[drop] != 1 {
        return Err(TorsionError::NotMeridian(drop));
    }
    let tr = r.trace_sq(drop);
    let gap = (tr - 2.0).norm();
    if gap <= tol.relation {
        return Err(TorsionError::DegenerateBoundary(gap));
    }
    Ok(tr)
}

/// `(Δ₁″(1)/2) / (Tr ρ(x_j²) − 2)` from an already computed `Δ₁`.
pub fn formula_from_delta(delta: &LaurentPoly, trace_sq: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let d2 = delta.derivative(2).evaluate(one).unwrap_or(Complex64::new(f64::NAN, 0.0));
    d2 / 2.0 / (trace_sq - 2.0)
}

/// Torsion via the second derivative of `Δ₁` at `t = 1`.
pub fn torsion_via_formula(
    p: &Presentation,
    r: &Rep,
    drop: usize,
    tol: &Tolerances,
) -> Result<Complex64, TorsionError> {
    check(p, drop)?;
    let tr = meridian_trace_sq(p, r, drop, tol)?;
    let delta = homology_torsion(p, r, drop, tol)?;
    Ok(formula_from_delta(&delta, tr))
}

/// Exact and naive limits of `−TAI(t)/(t − 1)` at `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitValue {
    pub exact: Complex64,
    pub naive: Complex64,
}

/// `−lim TAI/(t−1)` from `Δ₁` and `det Φ(x_j − 1)` by synthetic division:
/// `Δ₁ = (t−1)² f`, `det Φ(x_j − 1) = (t−1) q`, value `−f(1)/q(1)`.
pub fn limit_from_parts(delta: &LaurentPoly, den: &LaurentPoly) -> Result<LimitValue, TorsionError> {
    let one = Complex64::new(1.0, 0.0);
    let scale = delta.max_modulus();
    let (f, rem) = delta.divide_out_root(one, 2);
    let bound = SIMPLE_ZERO_TOL * scale;
    if rem.iter().any(|r| *r > bound) || scale == 0.0 {
        return Err(TorsionError::NotSimpleZero(rem[0], rem[1]));
    }
    let (q, _) = den.divide_out_root(one, 1);
    let q1 = q.evaluate(one)?;
    if q1.norm() == 0.0 {
        return Err(TorsionError::Laurent(LaurentError::ZeroDenominator));
    }
    let exact = -f.evaluate(one)? / q1;
    let z = Complex64::new(1.0 + NAIVE_STEP, 0.0);
    let naive = -(delta.evaluate(z)? / den.evaluate(z)?) / NAIVE_STEP;
    Ok(LimitValue { exact, naive })
}

/// Torsion as `−lim_{t→1} TAI(t)/(t − 1)`.
pub fn torsion_via_limit(p: &Presentation, r: &Rep, drop: usize, tol: &Tolerances) -> Result<LimitValue, TorsionError> {
    check(p, drop)?;
    meridian_trace_sq(p, r, drop, tol)?;
    let delta = homology_torsion(p, r, drop, tol)?;
    let adj = adjoint_images(r)?;
    let den = meridian_denominator(p, &adj, drop);
    limit_from_parts(&delta, &den)
}

/// Necessary-condition proxy for λ-regularity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `|TAI(1)|` after cancelling one common factor `t − 1`.
    pub tai_at_1: f64,
    pub delta_at_1: f64,
    pub delta_prime_at_1: f64,
    /// `|(Δ₁/(t−1)²)(1)|`.
    pub reduced_at_1: f64,
    /// Largest coefficient modulus of `Δ₁`; the thresholds are relative to it.
    pub scale: f64,
    pub simple_zero: bool,
    pub trace_x1_sq: Complex64,
    pub denominator_ok: bool,
    pub trace_mu: Complex64,
    pub irreducible: bool,
    /// `simple_zero ∧ irreducible ∧ denominator_ok`; a proxy, not a proof.
    pub regular_proxy: bool,
}

fn diagnostics_from(
    r: &Rep,
    drop: usize,
    delta: &LaurentPoly,
    den: &LaurentPoly,
    meridian: usize,
    tol: &Tolerances,
) -> Diagnostics {
    let one = Complex64::new(1.0, 0.0);
    let nan = Complex64::new(f64::NAN, 0.0);
    let scale = delta.max_modulus();
    let delta_at_1 = delta.evaluate(one).unwrap_or(nan).norm();
    let (d1, _) = delta.divide_out_root(one, 1);
    let (f, _) = d1.divide_out_root(one, 1);
    let delta_prime_at_1 = d1.evaluate(one).unwrap_or(nan).norm();
    let reduced_at_1 = f.evaluate(one).unwrap_or(nan).norm();
    let (q, _) = den.divide_out_root(one, 1);
    let tai_at_1 = (d1.evaluate(one).unwrap_or(nan) / q.evaluate(one).unwrap_or(nan)).norm();
    let simple_zero = scale > 0.0
        && delta_at_1 <= SIMPLE_ZERO_TOL * scale
        && delta_prime_at_1 <= SIMPLE_ZERO_TOL * scale
        && reduced_at_1 > NONVANISHING_TOL * scale;
    let trace_x1_sq = r.trace_sq(drop);
    let denominator_ok = (trace_x1_sq - 2.0).norm() > tol.relation;
    let irreducible = r.is_irreducible(tol.consistency);
    Diagnostics {
        tai_at_1,
        delta_at_1,
        delta_prime_at_1,
        reduced_at_1,
        scale,
        simple_zero,
        trace_x1_sq,
        denominator_ok,
        trace_mu: r.trace(meridian),
        irreducible,
        regular_proxy: simple_zero && irreducible && denominator_ok,
    }
}

/// Simple-zero test for `TAI` at `t = 1`, boundary trace and irreducibility.
pub fn regularity_diagnostics(
    p: &Presentation,
    r: &Rep,
    drop: usize,
    tol: &Tolerances,
) -> Result<Diagnostics, TorsionError> {
    check(p, drop)?;
    let delta = homology_torsion(p, r, drop, tol)?;
    let adj = adjoint_images(r)?;
    let den = meridian_denominator(p, &adj, drop);
    Ok(diagnostics_from(r, drop, &delta, &den, p.meridian(), tol))
}

/// Torsion with both computation routes and the regularity diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionResult {
    /// The limit value when it exists, otherwise the formula value.
    pub value: Complex64,
    pub formula_value: Complex64,
    pub limit_value: Option<Complex64>,
    pub naive_limit: Option<Complex64>,
    /// `|formula − limit| / max(1, |formula|)`.
    pub consistency: Option<f64>,
    pub drop: usize,
    pub delta_1: LaurentPoly,
    pub diagnostics: Diagnostics,
}

impl TorsionResult {
    pub fn is_consistent(&self, tol: &Tolerances) -> bool {
        self.consistency.is_some_and(|c| c <= tol.consistency)
    }
}

/// Runs both routes. Fails only on invalid input or a degenerate boundary
/// trace; a failed simple-zero test leaves `limit_value` empty.
pub fn compute_torsion(
    p: &Presentation,
    r: &Rep,
    drop: usize,
    tol: &Tolerances,
) -> Result<TorsionResult, TorsionError> {
    check(p, drop)?;
    let tr = meridian_trace_sq(p, r, drop, tol)?;
    let delta = homology_torsion(p, r, drop, tol)?;
    let adj = adjoint_images(r)?;
    let den = meridian_denominator(p, &adj, drop);
    let formula_value = formula_from_delta(&delta, tr);
    let limit = limit_from_parts(&delta, &den).ok();
    let diagnostics = diagnostics_from(r, drop, &delta, &den, p.meridian(), tol);
    let consistency = limit.map(|l| (formula_value - l.exact).norm() / formula_value.norm().max(1.0));
    Ok(TorsionResult {
        value: limit.map_or(formula_value, |l| l.exact),
        formula_value,
        limit_value: limit.map(|l| l.exact),
        naive_limit: limit.map(|l| l.naive),
        consistency,
        drop,
        delta_1: delta,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_word;
    use crate::reps::build_rep;

    fn five_two() -> Presentation {
        Presentation::two_bridge(parse_word("x^-1 y^-1 x y x^-1 y^-1", &["x", "y"]).unwrap())
    }

    fn closed_form(sigma: f64, u: f64) -> f64 {
        -(5.0 * sigma + 3.0) * u * u + (5.0 * sigma * sigma - 7.0 * sigma + 1.0) * u + 1.0 - 10.0 * sigma
    }

    #[test]
    fn phi_trivial_elements() {
        let p = five_two();
        let s = Complex64::from_polar(1.0, 2.0);
        let r = build_rep(&p, s, Complex64::new(-1.0, 0.3), s.sqrt(), 1e9).unwrap();
        let adj = adjoint_images(&r).unwrap();
        assert!(phi_of(&GroupRingElt::zero(), &adj, &p).determinant().is_zero());
        let xxinv = GroupRingElt::from_word(Word::generator(0).mul(&Word::generator(0).inverse()));
        let id = phi_of(&xxinv, &adj, &p);
        assert_eq!(id, LaurentMatrix::identity(3));
    }

    #[test]
    fn denominator_closed_form() {
        let p = five_two();
        let s = Complex64::from_polar(1.0, 0.7);
        let r = build_rep(&p, s, Complex64::new(0.4, -1.1), s.sqrt(), 1e9).unwrap();
        let adj = adjoint_images(&r).unwrap();
        let d = meridian_denominator(&p, &adj, 0);
        let sigma = s + s.inv();
        let one = Complex64::new(1.0, 0.0);
        let expect = LaurentPoly::new(0, vec![-one, one + sigma, -one - sigma, one]);
        assert!(d.max_coeff_distance(&expect) < 1e-12);
    }

    #[test]
    fn dihedral_values() {
        let p = five_two();
        let tol = Tolerances::default();
        let s = Complex64::new(-1.0, 0.0);
        for k in 1..=3 {
            let u = -2.0 - 2.0 * ((2 * k - 1) as f64 * std::f64::consts::PI / 7.0).cos();
            let r = build_rep(&p, s, Complex64::new(u, 0.0), Complex64::i(), tol.relation).unwrap();
            let res = compute_torsion(&p, &r, 0, &tol).unwrap();
            let expect = 7.0 * (u * u + 5.0 * u + 3.0);
            assert!((res.value.re.abs() - expect.abs()).abs() < 1e-8 * expect.abs());
            assert!(closed_form(-2.0, u).abs() - expect.abs() < 1e-9);
            assert!(res.diagnostics.simple_zero && res.is_consistent(&tol));
        }
    }

    #[test]
    fn reducible_point_fails_simple_zero() {
        let p = five_two();
        let zero = Complex64::new(0.0, 0.0);
        let s = Complex64::from_polar(1.0, 1.0);
        let d = crate::reps::Mat2::new(s.sqrt(), zero, zero, s.sqrt().inv());
        let r = Rep::from_images(&p, vec![d, d], 1e-9).unwrap();
        let diag = regularity_diagnostics(&p, &r, 0, &Tolerances::default()).unwrap();
        assert!(!diag.simple_zero && !diag.irreducible);
    }

    #[test]
    fn invalid_inputs() {
        let p = five_two();
        let s = Complex64::from_polar(1.0, 2.0);
        let r = build_rep(&p, s, Complex64::new(-1.0, 0.3), s.sqrt(), 1e9).unwrap();
        let adj = adjoint_images(&r).unwrap();
        assert!(matches!(alexander_block_matrix(&p, &adj, 2), Err(TorsionError::InvalidDrop { .. })));
        let id = crate::reps::Mat2::identity();
        let triv = Rep::from_images(&p, vec![id, id], 1e-9).unwrap();
        let err = torsion_via_formula(&p, &triv, 0, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, TorsionError::DegenerateBoundary(_)));
    }
}
