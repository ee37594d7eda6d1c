use num_complex::Complex64;
use serde::Serialize;

/// 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mat2 {
    pub a: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub fn new(a00: Complex64, a01: Complex64, a10: Complex64, a11: Complex64) -> Self {
        Self { a: [[a00, a01], [a10, a11]] }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::new(one, zero, zero, one)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let a = &self.a;
        let b = &o.a;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    pub fn det(&self) -> Complex64 {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.a[0][0] + self.a[1][1]
    }

    /// Adjugate over determinant. Negating the matrix negates the result
    /// exactly, which keeps `Ad` bitwise independent of the `√s` branch.
    pub fn inverse(&self) -> Mat2 {
        let d = self.det();
        Mat2::new(self.a[1][1] / d, -self.a[0][1] / d, -self.a[1][0] / d, self.a[0][0] / d)
    }

    pub fn scale(&self, c: Complex64) -> Mat2 {
        Mat2::new(self.a[0][0] * c, self.a[0][1] * c, self.a[1][0] * c, self.a[1][1] * c)
    }

    pub fn conj_transpose(&self) -> Mat2 {
        Mat2::new(self.a[0][0].conj(), self.a[1][0].conj(), self.a[0][1].conj(), self.a[1][1].conj())
    }

    pub fn max_distance(&self, o: &Mat2) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.a[i][j] - o.a[i][j]).norm());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.mul(&self.conj_transpose()).max_distance(&Mat2::identity()) <= tol
    }

    pub fn is_scalar(&self, tol: f64) -> bool {
        let h = self.trace() * 0.5;
        (self.a[0][0] - h).norm() <= tol
            && (self.a[1][1] - h).norm() <= tol
            && self.a[0][1].norm() <= tol
            && self.a[1][0].norm() <= tol
    }

    /// Unit eigenvectors (one per eigenvalue; a single one for a
    /// non-diagonalizable matrix).
    pub fn eigenvectors(&self) -> Vec<[Complex64; 2]> {
        let [[a, b], [c, d]] = self.a;
        let h = (a + d) * 0.5;
        let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
        let mut out: Vec<[Complex64; 2]> = Vec::new();
        for lambda in [h + disc, h - disc] {
            let v1 = [b, lambda - a];
            let v2 = [lambda - d, c];
            let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
            let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
            let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
            if n == 0.0 {
                // scalar block: any vector works, pick a basis vector
                out.push([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
                continue;
            }
            let n = n.sqrt();
            out.push([v[0] / n, v[1] / n]);
        }
        out
    }

    /// Whether `v` is an eigenvector: `|Mv ∧ v| <= tol·|M|` for unit `v`.
    pub fn fixes_line(&self, v: &[Complex64; 2], tol: f64) -> bool {
        let mv0 = self.a[0][0] * v[0] + self.a[0][1] * v[1];
        let mv1 = self.a[1][0] * v[0] + self.a[1][1] * v[1];
        (mv0 * v[1] - mv1 * v[0]).norm() <= tol * self.max_abs().max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_and_eigen() {
        let m = Mat2::new(c(2.0, 1.0), c(1.0, 0.0), c(0.5, -1.0), c(3.0, 0.0));
        assert!(m.mul(&m.inverse()).max_distance(&Mat2::identity()) < 1e-14);
        for v in m.eigenvectors() {
            assert!(m.fixes_line(&v, 1e-12));
        }
        let parabolic = Mat2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        for v in parabolic.eigenvectors() {
            assert!(parabolic.fixes_line(&v, 1e-12));
        }
    }
}
