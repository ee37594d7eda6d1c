//! Fixtures shared by the benchmarks.

use ktorsion::{Complex64, Presentation, Rep, Tolerances};

pub fn five_two() -> Presentation {
    ktorsion::catalog::lookup("5_2").expect("5_2 is in the catalog")
}

/// The 5_2 representation at `θ = 2`, smallest SU(2) root.
pub fn five_two_rep(tol: &Tolerances) -> Rep {
    let p = five_two();
    let phi = ktorsion::reps::riley_polynomial(p.bridge_word().expect("2-bridge")).expect("two generators");
    let theta = 2.0;
    let u = ktorsion::reps::su2_solutions(&phi, theta, tol).expect("θ in range").values()[0];
    ktorsion::reps::build_rep(
        &p,
        Complex64::from_polar(1.0, theta),
        Complex64::new(u, 0.0),
        Complex64::from_polar(1.0, theta / 2.0),
        tol.relation,
    )
    .expect("root lies on the curve")
}
