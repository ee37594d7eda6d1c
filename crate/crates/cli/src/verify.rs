//! Invariant suite: agreement of the two torsion routes, the 5_2 closed
//! form, and property checks with seeded random inputs.

use std::f64::consts::{PI, TAU};

use ktorsion::analysis::{
    critical_points, expected_dihedral_count, su2_points, torsion_derivative, Su2Point, SweepConfig,
};
use ktorsion::foxcalc::fundamental_identity_holds;
use ktorsion::presentation::Letter;
use ktorsion::reps::{build_rep, riley_assignment, riley_polynomial, su2_solutions, RepError};
use ktorsion::torsion::{
    compute_torsion, formula_from_delta, homology_torsion, limit_from_parts, meridian_denominator, torsion_via_formula,
};
use ktorsion::{reps, Complex64, LaurentPoly, Mat2, Presentation, Rep, Tolerances, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub detail: String,
}

impl Check {
    fn new(name: &str, max_error: f64, tolerance: f64, samples: usize, failures: usize, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: failures == 0 && max_error <= tolerance && samples > 0,
            max_error,
            tolerance,
            samples,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub knots: Vec<(String, Presentation)>,
    pub tol: Tolerances,
    pub seed: u64,
    /// Added to every sampled `u` before the representation is built.
    pub perturb: f64,
}

/// `(3 − √(13 + 16√2))/2`, where two SU(2) roots of the 5_2 Riley
/// polynomial merge.
pub fn sigma_star() -> f64 {
    (3.0 - (13.0 + 16.0 * 2f64.sqrt()).sqrt()) / 2.0
}

/// `−(5σ+3)u² + (5σ²−7σ+1)u + 1 − 10σ`.
pub fn five_two_closed_form(sigma: f64, u: f64) -> f64 {
    -(5.0 * sigma + 3.0) * u * u + (5.0 * sigma * sigma - 7.0 * sigma + 1.0) * u + 1.0 - 10.0 * sigma
}

pub fn five_two() -> Presentation {
    ktorsion::catalog::lookup("5_2").expect("5_2 is in the catalog")
}

pub fn trefoil() -> Presentation {
    ktorsion::catalog::lookup("3_1").expect("3_1 is in the catalog")
}

/// SU(2) points on a uniform grid of `n` values of `θ` in `(0, 2π)`, minus
/// those with `|σ − σ*| < band` when a band is given.
pub fn sample_points(p: &Presentation, n: usize, band: Option<f64>, tol: &Tolerances) -> Vec<Su2Point> {
    let thetas: Vec<f64> = (0..n).map(|i| TAU * (i as f64 + 0.5) / n as f64).collect();
    let pts = su2_points(p, &thetas, tol).unwrap_or_default();
    let star = sigma_star();
    pts.into_iter()
        .filter(|x| x.multiplicity == 1)
        .filter(|x| band.is_none_or(|b| (x.sigma - star).abs() >= b))
        .collect()
}

/// Samples of the 5_2 variety for the closed-form and route-agreement checks:
/// a uniform grid plus points just outside the `1e−3` band around `σ*`.
pub fn five_two_points(tol: &Tolerances) -> Vec<Su2Point> {
    let p = five_two();
    let mut pts = sample_points(&p, 48, Some(1e-3), tol);
    let star = sigma_star();
    let near: Vec<f64> = [-1e-2, -3e-3, -1.5e-3, 1.5e-3, 3e-3, 1e-2]
        .iter()
        .flat_map(|d| {
            let th = ((star + d) / 2.0).acos();
            [th, TAU - th]
        })
        .collect();
    pts.extend(su2_points(&p, &near, tol).unwrap_or_default().into_iter().filter(|x| x.multiplicity == 1));
    pts
}

fn rep_at(p: &Presentation, x: &Su2Point, du: f64, tol: &Tolerances) -> Result<Rep, RepError> {
    let s = Complex64::from_polar(1.0, x.theta);
    build_rep(p, s, Complex64::new(x.u + du, 0.0), Complex64::from_polar(1.0, x.theta / 2.0), tol.relation)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

/// `|formula − limit| ≤ tol·max(1, |formula|)` and the simple-zero test at
/// every sample.
pub fn limit_matches_formula(p: &Presentation, pts: &[Su2Point], tol: &Tolerances, perturb: f64) -> Check {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for x in pts {
        let res = rep_at(p, x, perturb, tol)
            .map_err(|e| e.to_string())
            .and_then(|r| compute_torsion(p, &r, p.meridian(), tol).map_err(|e| e.to_string()));
        match res {
            Ok(t) if t.diagnostics.simple_zero => match t.limit_value {
                Some(l) => worst = worst.max(rel(t.formula_value, l)),
                None => failures.push(format!("θ={:.4}: no limit", x.theta)),
            },
            Ok(_) => failures.push(format!("θ={:.4} u={:.4}: simple zero fails", x.theta, x.u)),
            Err(e) => failures.push(format!("θ={:.4}: {e}", x.theta)),
        }
    }
    let detail = match failures.first() {
        Some(f) => format!("{} failures, first: {f}", failures.len()),
        None => "formula and limit agree; TAI has a simple zero at t = 1".into(),
    };
    Check::new("limit_matches_formula", worst, tol.consistency, pts.len(), failures.len(), detail)
}

/// 5_2 torsion against the closed form, up to one global sign.
pub fn closed_form(pts: &[Su2Point], tol: &Tolerances, perturb: f64) -> Check {
    let p = five_two();
    let mut worst = 0.0f64;
    let mut sign = None;
    let mut failures = 0;
    let (mut three, mut one) = (0, 0);
    for x in pts {
        let Ok(v) = rep_at(&p, x, perturb, tol)
            .map_err(|_| ())
            .and_then(|r| torsion_via_formula(&p, &r, p.meridian(), tol).map_err(|_| ()))
        else {
            failures += 1;
            continue;
        };
        if x.sigma < sigma_star() {
            three += 1;
        } else {
            one += 1;
        }
        let cf = five_two_closed_form(x.sigma, x.u);
        let sg = *sign.get_or_insert(if (v.re * cf) < 0.0 { -1.0 } else { 1.0 });
        worst = worst.max((v - sg * cf).norm() / cf.abs());
    }
    let detail = format!(
        "global sign {}, {three} samples with 3 roots, {one} with 1 root",
        if sign == Some(-1.0) { "-1" } else { "+1" }
    );
    Check::new("closed_form_5_2", worst, tol.consistency, pts.len(), failures, detail)
}

/// `det Φ(x − 1) = (t − 1)(t² − (s + 1/s)t + 1)` for random `(s, u)`, `|s| = 1`.
pub fn denominator_identity(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let p = five_two();
    let mut worst = 0.0f64;
    let one = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        let s = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
        let u = Complex64::new(rng.gen_range(-4.0..1.0), 0.0);
        let (x, y) = riley_assignment(s, u);
        let k = s.sqrt().inv();
        let r = Rep::from_images(&p, vec![x.scale(k), y.scale(k)], f64::INFINITY).expect("nonsingular");
        let adj = reps::adjoint_images(&r).expect("nonsingular");
        let d = meridian_denominator(&p, &adj, 0);
        let sigma = s + s.inv();
        let expect = LaurentPoly::new(0, vec![-one, one + sigma, -one - sigma, one]);
        worst = worst.max(d.max_coeff_distance(&expect));
    }
    Check::new("denominator_identity", worst, 1e-12, n, 0, "coefficientwise, random s on the unit circle".into())
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(0..rank), if rng.gen_bool(0.5) { 1 } else { -1 })))
}

/// `Σ (∂r/∂x_j)(x_j − 1) = r − 1` exactly, on random words.
pub fn fox_identity(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let mut failures = 0;
    for _ in 0..n {
        let rank = rng.gen_range(1..=4);
        let w = random_word(rng, rank, 24);
        if !fundamental_identity_holds(&w, rank) {
            failures += 1;
        }
    }
    Check::new("fox_identity", failures as f64, 0.0, n, failures, "exact in Z[F]".into())
}

fn word_image(images: &[Mat2], w: &Word) -> Mat2 {
    w.letters().iter().fold(Mat2::identity(), |acc, l| {
        let m = images[l.gen];
        acc.mul(&if l.exp > 0 { m } else { m.inverse() })
    })
}

/// Adds `extra` generators `z = c x c⁻¹` for random words `c` and meridians
/// `x`, with relators `c x c⁻¹ z⁻¹`, extending the images accordingly.
pub fn extend_presentation(
    p: &Presentation,
    images: &[Mat2],
    extra: usize,
    rng: &mut ChaCha8Rng,
) -> (Presentation, Vec<Mat2>) {
    let mut names = p.names().to_vec();
    let mut relators = p.relators().to_vec();
    let mut alpha = p.alpha().to_vec();
    let mut images = images.to_vec();
    for _ in 0..extra {
        let k = names.len();
        let meridians: Vec<usize> = (0..k).filter(|&i| alpha[i] == 1).collect();
        let x = meridians[rng.gen_range(0..meridians.len())];
        let c = random_word(rng, k, 4);
        let xw = Word::generator(x);
        relators.push(c.mul(&xw).mul(&c.inverse()).mul(&Word::generator(k).inverse()));
        images.push(word_image(&images, &c.mul(&xw).mul(&c.inverse())));
        names.push(format!("z{k}"));
        alpha.push(1);
    }
    (Presentation::new(names, relators, p.meridian(), alpha), images)
}

/// Wirtinger presentation of the trefoil, `⟨a, b, c | a b a⁻¹ c⁻¹, b c b⁻¹ a⁻¹⟩`.
pub fn wirtinger_trefoil() -> Presentation {
    Presentation::parse("gens: a b c\nrel: a b a^-1 c^-1\nrel: b c b^-1 a^-1\n").expect("valid text")
}

/// `min over ±t^m of max|a − ±t^m b| / max|b|`. Shifts are searched rather
/// than normalized away, since roundoff at the ends of the support would
/// otherwise decide the alignment.
fn unit_distance(a: &LaurentPoly, b: &LaurentPoly) -> f64 {
    let scale = b.max_modulus().max(f64::MIN_POSITIVE);
    let (Some(alo), Some(ahi), Some(blo), Some(bhi)) = (a.low(), a.high(), b.low(), b.high()) else {
        return if a.max_modulus() == b.max_modulus() { 0.0 } else { 1.0 };
    };
    let mut best = f64::INFINITY;
    for m in (alo - bhi)..=(ahi - blo) {
        let shifted = b.shift(m);
        best = best.min(a.max_coeff_distance(&shifted)).min(a.max_coeff_distance(&(-&shifted)));
    }
    best / scale
}

/// Worst `unit_distance(N_j D_0, N_0 D_j)` over drops `j`, with that `j`.
fn wada_spread(p: &Presentation, r: &Rep, tol: &Tolerances) -> Result<(f64, usize), String> {
    let adj = reps::adjoint_images(r).map_err(|e| e.to_string())?;
    let parts = (0..p.generator_count())
        .map(|j| {
            let n = homology_torsion(p, r, j, tol).map_err(|e| e.to_string())?;
            Ok((n, meridian_denominator(p, &adj, j)))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let (n0, d0) = &parts[0];
    let mut worst = (0.0f64, 0);
    for (j, (nj, dj)) in parts.iter().enumerate().skip(1) {
        let e = unit_distance(&(nj * d0), &(n0 * dj));
        if e > worst.0 {
            worst = (e, j);
        }
    }
    Ok(worst)
}

/// `det A^j / det Φ(x_j − 1)` is independent of `j` up to `±t^m`.
pub fn wada_invariance(rng: &mut ChaCha8Rng, trials: usize, tol: &Tolerances) -> Check {
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    let mut failures = 0;
    let mut samples = 0;
    let bases = [five_two(), trefoil()];
    for i in 0..trials {
        let base = &bases[i % bases.len()];
        let pts = sample_points(base, 24, Some(1e-2), tol);
        let x = pts[rng.gen_range(0..pts.len())];
        // unitary images keep long conjugator words well conditioned
        let Some(r) = rep_at(base, &x, 0.0, tol).ok().and_then(|r| r.unitarized(tol.relation)) else {
            failures += 1;
            continue;
        };
        let extra = rng.gen_range(0..=3);
        let (q, imgs) = extend_presentation(base, r.images(), extra, rng);
        let outcome = Rep::from_images(&q, imgs, tol.relation)
            .map_err(|e| e.to_string())
            .and_then(|rq| wada_spread(&q, &rq, tol));
        samples += 1;
        match outcome {
            Ok((e, j)) if e > worst => {
                worst = e;
                worst_case = format!("; worst drop {} of {}", q.names()[j], q.to_text().replace('\n', "; "));
            }
            Ok(_) => {}
            Err(_) => failures += 1,
        }
    }
    // the 3-generator Wirtinger trefoil with a ↦ X, b ↦ Y, c ↦ X Y X⁻¹
    let w = wirtinger_trefoil();
    for x in sample_points(&trefoil(), 8, None, tol) {
        let Some(r) = rep_at(&trefoil(), &x, 0.0, tol).ok().and_then(|r| r.unitarized(tol.relation)) else {
            failures += 1;
            continue;
        };
        let (a, b) = (r.images()[0], r.images()[1]);
        let c = a.mul(&b).mul(&a.inverse());
        samples += 1;
        match Rep::from_images(&w, vec![a, b, c], tol.relation)
            .map_err(|e| e.to_string())
            .and_then(|rw| wada_spread(&w, &rw, tol))
        {
            Ok((e, _)) => worst = worst.max(e),
            Err(_) => failures += 1,
        }
    }
    let detail = if worst > 1e-8 {
        format!("k ≤ 5 generators{worst_case}")
    } else {
        "k ≤ 5 generators, all drops j, unitarized images".into()
    };
    Check::new("wada_invariance", worst, 1e-8, samples, failures, detail)
}

fn random_su2(rng: &mut ChaCha8Rng) -> Mat2 {
    let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = Complex64::new(v[0] / n, v[1] / n);
    let b = Complex64::new(v[2] / n, v[3] / n);
    Mat2::new(a, -b.conj(), b, a.conj())
}

/// Torsion is unchanged by conjugating every image by a random SU(2) matrix.
pub fn conjugation_invariance(p: &Presentation, pts: &[Su2Point], rng: &mut ChaCha8Rng, tol: &Tolerances) -> Check {
    let mut worst = 0.0f64;
    let mut failures = 0;
    for x in pts {
        let g = random_su2(rng);
        let pair = rep_at(p, x, 0.0, tol).ok().and_then(|r| {
            let a = torsion_via_formula(p, &r, p.meridian(), tol).ok()?;
            let b = torsion_via_formula(p, &r.conjugated(&g), p.meridian(), tol).ok()?;
            Some((a, b))
        });
        match pair {
            Some((a, b)) => worst = worst.max(rel(a, b)),
            None => failures += 1,
        }
    }
    Check::new("conjugation_invariance", worst, 1e-8, pts.len(), failures, "random SU(2) conjugator".into())
}

/// `√s ↦ −√s` is the sign twist `ερ`; the torsion must not change at all.
pub fn branch_invariance(p: &Presentation, pts: &[Su2Point], tol: &Tolerances) -> Check {
    let mut failures = 0;
    let mut worst = 0.0f64;
    for x in pts {
        let s = Complex64::from_polar(1.0, x.theta);
        let u = Complex64::new(x.u, 0.0);
        let root = Complex64::from_polar(1.0, x.theta / 2.0);
        let pair = build_rep(p, s, u, root, tol.relation).ok().zip(build_rep(p, s, u, -root, tol.relation).ok());
        let Some((a, b)) = pair else {
            failures += 1;
            continue;
        };
        let twisted = a.sign_twisted(p);
        if twisted.images() != b.images() {
            failures += 1;
        }
        match (compute_torsion(p, &a, p.meridian(), tol), compute_torsion(p, &b, p.meridian(), tol)) {
            (Ok(ta), Ok(tb)) => worst = worst.max((ta.value - tb.value).norm()),
            _ => failures += 1,
        }
    }
    Check::new("branch_invariance", worst, 0.0, pts.len(), failures, "exact equality under √s ↦ −√s".into())
}

/// Replacing `Δ₁` by `t^m Δ₁` leaves the synthetic-division route unchanged.
/// The second-derivative route picks up `mΔ₁′(1) + m(m−1)Δ₁(1)/2`, which is
/// only roundoff at a zero; its drift is reported, not gated.
pub fn tm_invariance(p: &Presentation, pts: &[Su2Point], tol: &Tolerances) -> Check {
    let mut worst = 0.0f64;
    let mut drift = 0.0f64;
    let mut failures = 0;
    for x in pts {
        let Ok(r) = rep_at(p, x, 0.0, tol) else {
            failures += 1;
            continue;
        };
        let Ok(delta) = homology_torsion(p, &r, p.meridian(), tol) else {
            failures += 1;
            continue;
        };
        let adj = reps::adjoint_images(&r).expect("nonsingular");
        let den = meridian_denominator(p, &adj, p.meridian());
        let tr = r.trace_sq(p.meridian());
        let (Ok(base), f0) = (limit_from_parts(&delta, &den), formula_from_delta(&delta, tr)) else {
            failures += 1;
            continue;
        };
        for m in [-2i64, 3, 7] {
            let shifted = delta.shift(m);
            match limit_from_parts(&shifted, &den) {
                Ok(l) => worst = worst.max(rel(base.exact, l.exact)),
                Err(_) => failures += 1,
            }
            drift = drift.max(rel(f0, formula_from_delta(&shifted, tr)));
        }
    }
    let detail = format!("shifts m = -2, 3, 7; second-derivative route drift {drift:.1e}");
    Check::new("tm_invariance", worst, 1e-12, pts.len(), failures, detail)
}

/// `u + δ` off the Riley curve must be rejected by the relator check.
pub fn off_curve_rejection(p: &Presentation, pts: &[Su2Point], tol: &Tolerances) -> Check {
    let accepted =
        pts.iter().filter(|x| !matches!(rep_at(p, x, 1e-3, tol), Err(RepError::RelatorResidual { .. }))).count();
    Check::new("off_curve_rejection", accepted as f64, 0.0, pts.len(), accepted, "u + 1e-3".into())
}

/// 5_2 root counts: 3 below `σ*`, 1 above, near-multiple flag inside the band.
pub fn root_regimes(tol: &Tolerances) -> Check {
    let phi = riley_polynomial(five_two().bridge_word().expect("2-bridge")).expect("two generators");
    let star = sigma_star();
    let mut failures = Vec::new();
    let mut samples = 0;
    let theta_of = |sigma: f64| (sigma / 2.0).acos();
    for d in [-0.5, -0.1, -2e-2, -5e-3, -2e-3, 2e-3, 5e-3, 2e-2, 0.1, 0.5, 1.0] {
        let sigma = star + d;
        let want = if d < 0.0 { 3 } else { 1 };
        for th in [theta_of(sigma), TAU - theta_of(sigma)] {
            samples += 1;
            match su2_solutions(&phi, th, tol) {
                Ok(s) if s.roots.len() == want => {}
                Ok(s) => failures.push(format!("σ*{d:+}: {} roots", s.roots.len())),
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    for d in [-9e-4, -5e-4, -1e-4, 1e-4, 5e-4, 9e-4] {
        samples += 1;
        match su2_solutions(&phi, theta_of(star + d), tol) {
            Ok(s) if s.near_multiple => {}
            _ => failures.push(format!("σ*{d:+}: near-threshold flag not raised")),
        }
    }
    let detail = failures.first().cloned().unwrap_or_else(|| format!("σ* = {star:.7}"));
    Check::new("root_regimes", failures.len() as f64, 0.0, samples, failures.len(), detail)
}

/// `|dT/dθ|` at `θ = π` on every branch, and the dihedral count against
/// `(|Δ_K(−1)| − 1)/2`.
pub fn dihedral_critical(name: &str, p: &Presentation, tol: &Tolerances) -> Check {
    let Some(w) = p.bridge_word() else {
        return Check::new(&format!("dihedral_critical_{name}"), 0.0, 0.0, 0, 0, "skipped: not 2-bridge".into());
    };
    let phi = riley_polynomial(w).expect("two generators");
    let mut worst = 0.0f64;
    let mut failures = 0;
    let roots = su2_solutions(&phi, PI, tol).map(|s| s.values()).unwrap_or_default();
    for &u in &roots {
        let t = ktorsion::analysis::torsion_at(p, PI, u, p.meridian(), tol).map(|x| x.0);
        match (t, torsion_derivative(p, &phi, PI, u, p.meridian(), tol)) {
            (Ok(t), Ok(d)) => worst = worst.max(d.abs() / t.norm().max(1.0)),
            _ => failures += 1,
        }
    }
    let expected = expected_dihedral_count(p).unwrap_or(usize::MAX);
    let cfg = SweepConfig { tol: *tol, ..Default::default() };
    let found = critical_points(p, &cfg).map(|r| r.dihedral_count).unwrap_or(0);
    if roots.len() != expected || found != expected {
        failures += 1;
    }
    let detail = format!("{} dihedral roots, {found} dihedral critical points, expected {expected}", roots.len());
    Check::new(&format!("dihedral_critical_{name}"), worst, 1e-4, roots.len(), failures, detail)
}

pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let tol = &cfg.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    let five = five_two();
    for (name, p) in &cfg.knots {
        if p.bridge_word().is_none() {
            let rank = p.generator_count();
            let fails = p.relators().iter().filter(|r| !fundamental_identity_holds(r, rank)).count();
            checks.push(Check::new(
                &format!("fox_identity_{name}"),
                fails as f64,
                0.0,
                p.relators().len(),
                fails,
                "relators of the presentation; Riley-based checks skipped".into(),
            ));
            continue;
        }
        let pts = if *p == five { five_two_points(tol) } else { sample_points(p, 48, None, tol) };
        let mut c = limit_matches_formula(p, &pts, tol, cfg.perturb);
        c.name = format!("limit_matches_formula_{name}");
        checks.push(c);
        if *p == five {
            checks.push(closed_form(&pts, tol, cfg.perturb));
            checks.push(root_regimes(tol));
        }
        let few: Vec<Su2Point> = pts.iter().step_by(4).copied().collect();
        for mut c in [
            conjugation_invariance(p, &few, &mut rng, tol),
            branch_invariance(p, &few, tol),
            tm_invariance(p, &few, tol),
            off_curve_rejection(p, &few, tol),
            dihedral_critical(name, p, tol),
        ] {
            if !c.name.ends_with(name.as_str()) {
                c.name = format!("{}_{name}", c.name);
            }
            checks.push(c);
        }
    }
    checks.push(denominator_identity(&mut rng, 100));
    checks.push(fox_identity(&mut rng, 1000));
    checks.push(wada_invariance(&mut rng, 12, tol));
    VerifyReport { seed: cfg.seed, checks }
}
