//! Exact Riley polynomial `φ(s, u) = W₁₁ + (1 − s) W₁₂` and its SU(2) real
//! solutions on the unit circle `s = e^{iθ}`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::roots::polynomial_roots;
use super::RepError;
use crate::laurent::IntLaurent;
use crate::presentation::Word;
use crate::tolerances::Tolerances;

/// Imaginary parts below this count as zero when specializing at `|s| = 1`
/// and when filtering real roots.
pub const REALITY_TOL: f64 = 1e-9;

/// Slack on the endpoints of `[2cosθ − 2, 0]`.
pub const INTERVAL_SLACK: f64 = 1e-9;

/// Polynomial in `u` with coefficients in `Z[s, s⁻¹]`, low degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct UPoly(Vec<IntLaurent>);

impl UPoly {
    fn constant(c: IntLaurent) -> Self {
        let mut p = Self(vec![c]);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let zero = IntLaurent::zero();
        let mut p = Self((0..n).map(|i| self.0.get(i).unwrap_or(&zero) + o.0.get(i).unwrap_or(&zero)).collect());
        p.trim();
        p
    }

    fn mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return Self::default();
        }
        let mut out = vec![IntLaurent::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        let mut p = Self(out);
        p.trim();
        p
    }
}

type SymMat = [[UPoly; 2]; 2];

fn sym_mul(a: &SymMat, b: &SymMat) -> SymMat {
    let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn s_pow(c: i64, e: i64) -> IntLaurent {
    IntLaurent::monomial(BigInt::from(c), e)
}

/// Exact `X^{±1}`, `Y^{±1}` of Riley's assignment over `Z[s^±][u]`.
fn letter_matrix(gen: usize, exp: i8) -> SymMat {
    let k = |c: IntLaurent| UPoly::constant(c);
    let zero = || UPoly::default();
    match (gen, exp) {
        // [[s, 1], [0, 1]]
        (0, 1) => [[k(s_pow(1, 1)), k(s_pow(1, 0))], [zero(), k(s_pow(1, 0))]],
        // [[1/s, -1/s], [0, 1]]
        (0, _) => [[k(s_pow(1, -1)), k(s_pow(-1, -1))], [zero(), k(s_pow(1, 0))]],
        // [[s, 0], [-s u, 1]]
        (_, 1) => [[k(s_pow(1, 1)), zero()], [UPoly(vec![IntLaurent::zero(), s_pow(-1, 1)]), k(s_pow(1, 0))]],
        // [[1/s, 0], [u, 1]]
        _ => [[k(s_pow(1, -1)), zero()], [UPoly(vec![IntLaurent::zero(), s_pow(1, 0)]), k(s_pow(1, 0))]],
    }
}

/// Riley polynomial in canonical unit normalization: multiplied by `±s^k`
/// so the lowest `s`-exponent over all coefficients is 0 and the leading
/// `u`-coefficient has positive lowest term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RileyPoly {
    coeffs: Vec<IntLaurent>,
}

impl RileyPoly {
    /// Normalizes an arbitrary bivariate polynomial (`coeffs[d]` multiplies
    /// `u^d`).
    pub fn from_coeffs(mut coeffs: Vec<IntLaurent>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let Some(low) = coeffs.iter().filter_map(|c| c.low()).min() else {
            return Self { coeffs };
        };
        let mut coeffs: Vec<IntLaurent> = coeffs.iter().map(|c| c.shift(-low)).collect();
        let lead = coeffs.last().unwrap();
        if lead.coeffs()[0].is_negative() {
            coeffs = coeffs.iter().map(|c| -c).collect();
        }
        Self { coeffs }
    }

    /// `coeffs()[d]` is the coefficient of `u^d`.
    pub fn coeffs(&self) -> &[IntLaurent] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn u_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Canonical normalization makes equality up to `±s^k` structural.
    pub fn equals_up_to_unit(&self, other: &Self) -> bool {
        self == other
    }

    pub fn evaluate(&self, s: Complex64, u: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c.evaluate(s))
    }

    /// `φ(s, 0)`, the specialization to reducible (diagonal `Y`) points.
    pub fn at_u_zero(&self) -> IntLaurent {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    fn exponent_window(&self) -> Option<(i64, i64)> {
        let lo = self.coeffs.iter().filter_map(|c| c.low()).min()?;
        let hi = self.coeffs.iter().filter_map(|c| c.high()).max()?;
        Some((lo, hi))
    }

    /// Coefficients in `u` at `s = e^{iθ}`, multiplied by `s^{-c}` where `c`
    /// is the center of the `s`-exponent window. For palindromic words
    /// these are real. Returns the complex values and the largest
    /// imaginary part relative to the largest modulus.
    pub fn specialize_centered(&self, theta: f64) -> (Vec<Complex64>, f64) {
        let Some((lo, hi)) = self.exponent_window() else {
            return (Vec::new(), 0.0);
        };
        let center = (lo + hi) as f64 / 2.0;
        let vals: Vec<Complex64> = self
            .coeffs
            .iter()
            .map(|p| {
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        let e = (p.offset() + i as i64) as f64 - center;
                        Complex64::from_polar(a.to_f64().unwrap_or(f64::NAN), e * theta)
                    })
                    .sum()
            })
            .collect();
        let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let imag = vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        (vals, if scale > 0.0 { imag / scale } else { 0.0 })
    }

    /// Expresses `φ` as a polynomial in `σ = s + 1/s`, if every coefficient
    /// is palindromic about a common integer center.
    pub fn sigma_coeffs(&self) -> Option<Vec<IntLaurent>> {
        let (lo, hi) = self.exponent_window()?;
        if (lo + hi) % 2 != 0 {
            return None;
        }
        let center = (lo + hi) / 2;
        // V_n(σ) = s^n + s^-n as integer polynomials in σ
        let sigma = IntLaurent::from_i64(1, &[1]);
        let mut v: Vec<IntLaurent> = vec![IntLaurent::from_i64(0, &[2]), sigma.clone()];
        let max_n = (hi - center) as usize;
        while v.len() <= max_n {
            let n = v.len();
            let next = &(&sigma * &v[n - 1]) - &v[n - 2];
            v.push(next);
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for p in &self.coeffs {
            if p.is_zero() {
                out.push(IntLaurent::zero());
                continue;
            }
            if p.palindromic_center2() != Some(2 * center) {
                return None;
            }
            let mut q = IntLaurent::monomial(p.coeff(center), 0);
            for j in 1..=max_n as i64 {
                let a = p.coeff(center + j);
                if !a.is_zero() {
                    q = &q + &v[j as usize].scale(&a);
                }
            }
            out.push(q);
        }
        Some(out)
    }

    /// Human-readable form in `σ = s + 1/s`, e.g.
    /// `u^3 - (2σ - 3)u^2 + (σ^2 - 3σ + 4)u - (2σ - 3)`.
    pub fn sigma_form(&self) -> Option<String> {
        let sc = self.sigma_coeffs()?;
        if sc.is_empty() {
            return Some("0".into());
        }
        let mut out = String::new();
        for (d, q) in sc.iter().enumerate().rev() {
            if q.is_zero() {
                continue;
            }
            let lead_neg = q.coeffs().last().unwrap().is_negative();
            let mag = if lead_neg { -q } else { q.clone() };
            let u = match d {
                0 => String::new(),
                1 => "u".into(),
                _ => format!("u^{d}"),
            };
            let single = mag.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
            let body = if mag == IntLaurent::one() && d > 0 {
                u
            } else if single {
                format!("{}{u}", mag.display_var("σ"))
            } else {
                format!("({}){u}", mag.display_var("σ"))
            };
            if out.is_empty() {
                if lead_neg {
                    out.push('-');
                }
            } else {
                out.push_str(if lead_neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        Some(out)
    }

    /// Human-readable form in `s` and `u`.
    pub fn display_su(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| match d {
                0 => format!("({})", c.display_var("s")),
                1 => format!("({})u", c.display_var("s")),
                _ => format!("({})u^{d}", c.display_var("s")),
            })
            .collect();
        parts.join(" + ")
    }

    /// JSON: `{ "u_degree", "coeffs": [{ "s_offset", "ints" }], "sigma_form" }`.
    /// Integers that do not fit in `i64` are written as strings.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|c| {
                let ints: Vec<Value> = c
                    .coeffs()
                    .iter()
                    .map(|a| a.to_i64().map(Value::from).unwrap_or_else(|| Value::from(a.to_string())))
                    .collect();
                json!({ "s_offset": c.offset(), "ints": ints })
            })
            .collect();
        json!({
            "u_degree": self.u_degree(),
            "coeffs": coeffs,
            "sigma_form": self.sigma_form(),
        })
    }
}

impl Serialize for RileyPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Exact `φ(s, u) = W₁₁ + (1 − s) W₁₂` where `W` is `w` evaluated on Riley's
/// matrices.
pub fn riley_polynomial(w: &Word) -> Result<RileyPoly, RepError> {
    if let Some(g) = w.max_generator().filter(|&g| g > 1) {
        return Err(RepError::TooManyGenerators(g));
    }
    let one = || UPoly::constant(IntLaurent::one());
    let mut m: SymMat = [[one(), UPoly::default()], [UPoly::default(), one()]];
    for l in w.letters() {
        m = sym_mul(&m, &letter_matrix(l.gen, l.exp));
    }
    let one_minus_s = UPoly::constant(IntLaurent::from_i64(0, &[1, -1]));
    let phi = m[0][0].add(&one_minus_s.mul(&m[0][1]));
    Ok(RileyPoly::from_coeffs(phi.0))
}

/// One real root `u` in the SU(2) interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionRoot {
    pub u: f64,
    /// Number of eigenvalues merged into this root.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Su2Solutions {
    pub theta: f64,
    pub sigma: f64,
    /// Sorted ascending.
    pub roots: Vec<SolutionRoot>,
    /// Two roots (complex pairs included) near the interval lie within the
    /// near-multiple threshold of each other.
    pub near_multiple: bool,
}

impl Su2Solutions {
    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.u).collect()
    }
}

/// Real roots `u ∈ [2cosθ − 2, 0]` of `φ(e^{iθ}, u)`.
///
/// Roots within `tol.multiplicity` of each other are merged into one multiple
/// root; any two roots within `tol.near_multiple` raise `near_multiple`.
pub fn su2_solutions(phi: &RileyPoly, theta: f64, tol: &Tolerances) -> Result<Su2Solutions, RepError> {
    if !(theta > 0.0 && theta < std::f64::consts::TAU) {
        return Err(RepError::ThetaOutOfRange(theta));
    }
    if phi.is_zero() {
        return Err(RepError::ZeroPolynomial);
    }
    let (vals, imag) = phi.specialize_centered(theta);
    if imag > REALITY_TOL {
        return Err(RepError::NotReal(imag));
    }
    let real: Vec<Complex64> = vals.iter().map(|v| Complex64::new(v.re, 0.0)).collect();
    if real.iter().all(|v| v.re == 0.0) {
        return Err(RepError::ZeroPolynomial);
    }
    let sigma = 2.0 * theta.cos();
    let (lo, hi) = (sigma - 2.0, 0.0);

    // cluster eigenvalues closer than the multiplicity threshold
    let mut raw = polynomial_roots(&real);
    raw.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for z in raw {
        match clusters.iter_mut().find(|(c, n)| (*c / *n as f64 - z).norm() < tol.multiplicity) {
            Some((sum, n)) => {
                *sum += z;
                *n += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    let clusters: Vec<(Complex64, usize)> = clusters.into_iter().map(|(s, n)| (s / n as f64, n)).collect();

    let near_interval = |z: Complex64| {
        z.im.abs() <= tol.near_multiple && z.re >= lo - tol.near_multiple && z.re <= hi + tol.near_multiple
    };
    let mut near_multiple = clusters.iter().any(|(z, n)| *n > 1 && near_interval(*z));
    for (i, (a, _)) in clusters.iter().enumerate() {
        for (b, _) in &clusters[i + 1..] {
            if (a - b).norm() < tol.near_multiple && (near_interval(*a) || near_interval(*b)) {
                near_multiple = true;
            }
        }
    }

    let mut roots: Vec<SolutionRoot> = clusters
        .iter()
        .filter(|(z, _)| z.im.abs() <= REALITY_TOL)
        .filter(|(z, _)| z.re >= lo - INTERVAL_SLACK && z.re <= hi + INTERVAL_SLACK)
        .map(|(z, n)| SolutionRoot { u: z.re, multiplicity: *n })
        .collect();
    roots.sort_by(|a, b| a.u.partial_cmp(&b.u).unwrap());
    Ok(Su2Solutions { theta, sigma, roots, near_multiple })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_word;

    fn w(text: &str) -> Word {
        parse_word(text, &["x", "y"]).unwrap()
    }

    /// `φ` for 5_2 as displayed in the literature, times `s^2`.
    fn five_two_expected() -> RileyPoly {
        // u^3 - (2σ-3)u^2 + (σ^2-3σ+4)u - (2σ-3), σ = s + 1/s, times s^2
        let c0 = IntLaurent::from_i64(1, &[-2, 3, -2]);
        let c1 = IntLaurent::from_i64(0, &[1, -3, 6, -3, 1]);
        let c2 = IntLaurent::from_i64(1, &[-2, 3, -2]);
        let c3 = IntLaurent::from_i64(2, &[1]);
        RileyPoly::from_coeffs(vec![c0, c1, c2, c3])
    }

    #[test]
    fn five_two_polynomial() {
        let phi = riley_polynomial(&w("x^-1 y^-1 x y x^-1 y^-1")).unwrap();
        assert!(phi.equals_up_to_unit(&five_two_expected()));
        assert_eq!(phi.sigma_form().unwrap(), "u^3 - (2σ - 3)u^2 + (σ^2 - 3σ + 4)u - (2σ - 3)");
    }

    #[test]
    fn trefoil_and_empty() {
        let phi = riley_polynomial(&w("x y")).unwrap();
        let expect = RileyPoly::from_coeffs(vec![IntLaurent::from_i64(0, &[-1, 1, -1]), IntLaurent::from_i64(1, &[1])]);
        assert_eq!(phi, expect);
        assert_eq!(phi.sigma_form().unwrap(), "u - (σ - 1)");
        let e = riley_polynomial(&Word::empty()).unwrap();
        assert_eq!(e.coeffs(), &[IntLaurent::one()]);
        assert_eq!(e.sigma_form().unwrap(), "1");
        assert!(matches!(riley_polynomial(&Word::from_pairs(&[(2, 1)])), Err(RepError::TooManyGenerators(2))));
    }

    #[test]
    fn theta_pi_roots() {
        let phi = riley_polynomial(&w("x^-1 y^-1 x y x^-1 y^-1")).unwrap();
        let sol = su2_solutions(&phi, std::f64::consts::PI, &Tolerances::default()).unwrap();
        let mut expect: Vec<f64> =
            (1..=3).map(|k| -2.0 - 2.0 * ((2 * k - 1) as f64 * std::f64::consts::PI / 7.0).cos()).collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(sol.roots.len(), 3);
        for (r, e) in sol.values().iter().zip(&expect) {
            assert!((r - e).abs() < 1e-12);
        }
        assert!(!sol.near_multiple);
    }

    #[test]
    fn json_layout() {
        let phi = riley_polynomial(&w("x y")).unwrap();
        let v = phi.to_json();
        assert_eq!(v["u_degree"], 1);
        assert_eq!(v["coeffs"][0]["ints"], json!([-1, 1, -1]));
        assert_eq!(v["coeffs"][1]["s_offset"], 1);
    }

    #[test]
    fn rejects_bad_theta() {
        let phi = riley_polynomial(&w("x y")).unwrap();
        assert!(su2_solutions(&phi, 0.0, &Tolerances::default()).is_err());
    }
}
