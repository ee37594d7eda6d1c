//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ktorsion::analysis::{critical_points, expected_dihedral_count, torsion_at, torsion_derivative, SweepConfig};
use ktorsion::reps::{build_rep, riley_polynomial, su2_solutions};
use ktorsion::torsion::{compute_torsion, meridian_denominator, torsion_via_formula};
use ktorsion::{reps, Complex64, IntLaurent, LaurentPoly, RileyPoly, Tolerances};
use ktorsion_cli::verify::{
    branch_invariance, conjugation_invariance, denominator_identity, five_two, five_two_closed_form, five_two_points,
    fox_identity, sample_points, sigma_star, tm_invariance, trefoil, wada_invariance,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240607;

type Criterion = fn(&Tolerances) -> Outcome;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rep(p: &ktorsion::Presentation, theta: f64, u: f64, tol: &Tolerances) -> Option<ktorsion::Rep> {
    let s = Complex64::from_polar(1.0, theta);
    build_rep(p, s, Complex64::new(u, 0.0), Complex64::from_polar(1.0, theta / 2.0), tol.relation).ok()
}

/// `u³ − (2σ−3)u² + (σ²−3σ+4)u − (2σ−3)` with `σ = s + 1/s`.
fn criterion_1(_: &Tolerances) -> Outcome {
    let start = Instant::now();
    let w = five_two().bridge_word().expect("2-bridge").clone();
    let got = riley_polynomial(&w).expect("two generators");
    let elapsed = start.elapsed();
    let two_sigma_minus_3 = IntLaurent::from_i64(-1, &[2, -3, 2]);
    let middle = IntLaurent::from_i64(-2, &[1, -3, 6, -3, 1]);
    let want = RileyPoly::from_coeffs(vec![-&two_sigma_minus_3, middle, -&two_sigma_minus_3, IntLaurent::one()]);
    let ok = got.equals_up_to_unit(&want) && elapsed < Duration::from_secs(1);
    outcome(ok, format!("{} in {elapsed:.2?}", got.display_su()))
}

fn criterion_2(tol: &Tolerances) -> Outcome {
    let start = Instant::now();
    let p = five_two();
    let pts = five_two_points(tol);
    let star = sigma_star();
    let mut worst = 0.0f64;
    let mut sign = None;
    let mut failures = 0;
    let (mut three, mut one) = (0, 0);
    for x in &pts {
        if (x.sigma - star).abs() < 1e-3 {
            failures += 1;
        }
        if x.sigma < star {
            three += 1;
        } else {
            one += 1;
        }
        let Some(v) = rep(&p, x.theta, x.u, tol).and_then(|r| torsion_via_formula(&p, &r, p.meridian(), tol).ok())
        else {
            failures += 1;
            continue;
        };
        let cf = five_two_closed_form(x.sigma, x.u);
        let sg = *sign.get_or_insert(if v.re * cf < 0.0 { -1.0 } else { 1.0 });
        worst = worst.max((v - sg * cf).norm() / cf.abs());
    }
    let elapsed = start.elapsed();
    let ok =
        failures == 0 && pts.len() >= 60 && three > 0 && one > 0 && worst <= 1e-6 && elapsed < Duration::from_secs(10);
    outcome(
        ok,
        format!("{} samples ({three} three-root, {one} one-root), max rel error {worst:.1e}, {elapsed:.2?}", pts.len()),
    )
}

fn criterion_3(tol: &Tolerances) -> Outcome {
    let one = Complex64::new(1.0, 0.0);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let mut n = 0;
    let sets = [(five_two(), five_two_points(tol)), (trefoil(), sample_points(&trefoil(), 48, None, tol))];
    for (p, pts) in &sets {
        for x in pts {
            n += 1;
            let Some(t) = rep(p, x.theta, x.u, tol).and_then(|r| compute_torsion(p, &r, p.meridian(), tol).ok()) else {
                failures.push(format!("θ={:.4}: no torsion", x.theta));
                continue;
            };
            let delta: &LaurentPoly = &t.delta_1;
            let scale = delta.max_modulus();
            let (d1, _) = delta.divide_out_root(one, 1);
            let (f, _) = d1.divide_out_root(one, 1);
            let at = |q: &LaurentPoly| q.evaluate(one).map(|z| z.norm()).unwrap_or(f64::NAN);
            let simple = at(delta) <= 1e-9 * scale && at(&d1) <= 1e-9 * scale && at(&f) > 1e-6 * scale;
            if !simple {
                failures.push(format!("θ={:.4}: no simple zero", x.theta));
            }
            match t.limit_value {
                Some(l) => worst = worst.max((l - t.formula_value).norm() / t.formula_value.norm().max(1.0)),
                None => failures.push(format!("θ={:.4}: no limit", x.theta)),
            }
        }
    }
    let ok = failures.is_empty() && worst <= 1e-6;
    let first = failures.first().map(|f| format!(", first failure {f}")).unwrap_or_default();
    outcome(ok, format!("{n} samples, max |limit − formula| {worst:.1e}{first}"))
}

fn criterion_4(_: &Tolerances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let c = denominator_identity(&mut rng, 100);
    let p = five_two();
    // one fixed point checked by hand as well: s = i, σ = 0
    let s = Complex64::new(0.0, 1.0);
    let (x, y) = reps::riley_assignment(s, Complex64::new(-1.3, 0.0));
    let k = s.sqrt().inv();
    let r = ktorsion::Rep::from_images(&p, vec![x.scale(k), y.scale(k)], f64::INFINITY).expect("nonsingular");
    let d = meridian_denominator(&p, &reps::adjoint_images(&r).expect("nonsingular"), 0);
    let c1 = |v: f64| Complex64::new(v, 0.0);
    let hand = d.max_coeff_distance(&LaurentPoly::new(0, vec![c1(-1.0), c1(1.0), c1(-1.0), c1(1.0)]));
    outcome(
        c.passed && c.samples == 100 && hand <= 1e-12,
        format!("{} samples, max coefficient error {:.1e}", c.samples, c.max_error.max(hand)),
    )
}

fn criterion_5(tol: &Tolerances) -> Outcome {
    let phi = riley_polynomial(five_two().bridge_word().expect("2-bridge")).expect("two generators");
    let star = sigma_star();
    let theta = |sigma: f64| (sigma / 2.0).acos();
    let mut failures = Vec::new();
    for d in [-0.5, -0.3, -5e-2, -5e-3, -1.1e-3, 1.1e-3, 5e-3, 5e-2, 0.3, 1.0, 2.5] {
        let want = if d < 0.0 { 3 } else { 1 };
        match su2_solutions(&phi, theta(star + d), tol) {
            Ok(s) if s.roots.len() == want => {}
            Ok(s) => failures.push(format!("σ*{d:+}: {} roots, want {want}", s.roots.len())),
            Err(e) => failures.push(e.to_string()),
        }
    }
    for d in [-9.9e-4, -5e-4, -1e-5, 1e-5, 5e-4, 9.9e-4] {
        match su2_solutions(&phi, theta(star + d), tol) {
            Ok(s) if s.near_multiple => {}
            _ => failures.push(format!("σ*{d:+}: near-threshold flag not raised")),
        }
    }
    let detail = failures.first().cloned().unwrap_or_else(|| format!("σ* = {star:.7}"));
    outcome(failures.is_empty() && (star + 1.48446).abs() < 1e-4, detail)
}

fn criterion_6(tol: &Tolerances) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, p, want) in [("5_2", five_two(), 3), ("3_1", trefoil(), 1)] {
        let phi = riley_polynomial(p.bridge_word().expect("2-bridge")).expect("two generators");
        let roots = su2_solutions(&phi, PI, tol).map(|s| s.values()).unwrap_or_default();
        let mut worst = 0.0f64;
        for &u in &roots {
            match (torsion_at(&p, PI, u, p.meridian(), tol), torsion_derivative(&p, &phi, PI, u, p.meridian(), tol)) {
                (Ok((t, _)), Ok(d)) => worst = worst.max(d.abs() / t.norm().max(1.0)),
                _ => ok = false,
            }
        }
        let expected = expected_dihedral_count(&p).unwrap_or(usize::MAX);
        let cfg = SweepConfig { tol: *tol, ..Default::default() };
        let found = critical_points(&p, &cfg).map(|r| r.dihedral_count).unwrap_or(0);
        ok &= worst <= 1e-4 && roots.len() == want && expected == want && found == want;
        parts.push(format!("{name}: {} branches, max |dT/dθ| {worst:.1e}, dihedral {found}/{expected}", roots.len()));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_7(tol: &Tolerances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = vec![fox_identity(&mut rng, 1000), wada_invariance(&mut rng, 12, tol)];
    for p in [five_two(), trefoil()] {
        let pts: Vec<_> = sample_points(&p, 24, Some(1e-2), tol);
        checks.push(conjugation_invariance(&p, &pts, &mut rng, tol));
        checks.push(branch_invariance(&p, &pts, tol));
        checks.push(tm_invariance(&p, &pts, tol));
    }
    let want = [
        ("fox_identity", 0.0),
        ("wada_invariance", 1e-8),
        ("conjugation_invariance", 1e-8),
        ("branch_invariance", 0.0),
        ("tm_invariance", 1e-12),
    ];
    let ok = checks
        .iter()
        .all(|c| c.passed && want.iter().any(|(n, t)| c.name == *n && c.tolerance <= *t && c.max_error <= *t));
    let detail = checks.iter().map(|c| format!("{} {:.1e}", c.name, c.max_error)).collect::<Vec<_>>().join(", ");
    outcome(ok, detail)
}

fn main() -> ExitCode {
    let tol = Tolerances::default();
    let criteria: [(&str, Criterion); 7] = [
        ("1 riley polynomial of 5_2", criterion_1),
        ("2 closed-form torsion of 5_2", criterion_2),
        ("3 formula and limit agree, simple zero", criterion_3),
        ("4 meridian denominator identity", criterion_4),
        ("5 root-count regimes", criterion_5),
        ("6 dihedral critical points", criterion_6),
        ("7 property suites", criterion_7),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let o = f(&tol);
        if !o.passed {
            failed += 1;
        }
        println!("{} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
