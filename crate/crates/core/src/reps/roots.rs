use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    // value and first derivative
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of `Σ coeffs[i] z^i` (coefficients low to high), with
/// multiplicity, as eigenvalues of the companion matrix followed by one
/// Newton step each.
///
/// Leading and trailing zero coefficients are handled; the zero polynomial
/// and nonzero constants have no roots.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let Some(top) = coeffs.iter().rposition(|c| *c != zero) else {
        return Vec::new();
    };
    let coeffs = &coeffs[..=top];
    let zeros_at_origin = coeffs.iter().position(|c| *c != zero).unwrap();
    let reduced = &coeffs[zeros_at_origin..];
    let degree = reduced.len() - 1;
    let mut roots = vec![zero; zeros_at_origin];
    if degree == 0 {
        return roots;
    }
    let lead = reduced[degree];
    let companion = DMatrix::from_fn(degree, degree, |i, j| {
        if j == degree - 1 {
            -reduced[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            zero
        }
    });
    let eig = match degree {
        1 => vec![-reduced[0] / lead],
        _ => {
            let schur =
                Schur::try_new(companion, f64::EPSILON, 10_000).expect("QR iteration on a companion matrix converges");
            schur.eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
        }
    };
    for z in eig {
        let (p, dp) = horner(reduced, z);
        let polished = if dp.norm() > 0.0 { z - p / dp } else { z };
        // keep the polish only if it does not make things worse
        let keep = horner(reduced, polished).0.norm() <= p.norm();
        roots.push(if keep && polished.is_finite() { polished } else { z });
    }
    roots
}
