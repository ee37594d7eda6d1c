//! `SL(2,C)` representations of knot groups, Riley's parametrization of the
//! nonabelian representations of 2-bridge knot groups, and the adjoint
//! representation on `sl(2,C)` in the ordered basis `(E, H, F)`.

mod mat2;
mod riley;
mod roots;

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::presentation::{Presentation, Word};

pub use mat2::Mat2;
pub use riley::{riley_polynomial, su2_solutions, RileyPoly, SolutionRoot, Su2Solutions};
pub use roots::polynomial_roots;

pub type Mat3 = Matrix3<Complex64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error(
        "relator {relator} has residual {residual:.3e} (tolerance {tol:.1e}); (s, u) is off the representation variety"
    )]
    RelatorResidual { relator: usize, residual: f64, tol: f64 },
    #[error("presentation is not of the 2-bridge form <x, y | wx = yw>")]
    NotTwoBridge,
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("sqrt_s^2 differs from s by {0:.3e}")]
    BadSquareRoot(f64),
    #[error("singular image matrix for generator {0}")]
    SingularImage(usize),
    #[error("Riley polynomial needs a word in two generators, found generator index {0}")]
    TooManyGenerators(usize),
    #[error("specialized Riley polynomial is not real (imaginary part {0:.3e})")]
    NotReal(f64),
    #[error("Riley polynomial vanishes identically at this s")]
    ZeroPolynomial,
    #[error("theta must lie in (0, 2π), got {0}")]
    ThetaOutOfRange(f64),
}

/// Riley coordinates of a representation: images are `X/√s`, `Y/√s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RileyParams {
    pub s: Complex64,
    pub u: Complex64,
    pub sqrt_s: Complex64,
}

impl RileyParams {
    /// `|s| = 1`, `u` real and in `[s + 1/s − 2, 0]`.
    pub fn is_su2_point(&self, tol: f64) -> bool {
        let sigma = self.s + self.s.inv();
        (self.s.norm() - 1.0).abs() <= tol
            && self.u.im.abs() <= tol
            && self.u.re <= tol
            && self.u.re >= sigma.re - 2.0 - tol
    }
}

/// Riley's assignment `x ↦ [[s, 1], [0, 1]]`, `y ↦ [[s, 0], [−su, 1]]`.
pub fn riley_assignment(s: Complex64, u: Complex64) -> (Mat2, Mat2) {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    (Mat2::new(s, one, zero, one), Mat2::new(s, zero, -s * u, one))
}

/// A representation given by one `SL(2,C)` image per generator, with every
/// relator mapping to the identity within the construction tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Rep {
    images: Vec<Mat2>,
    params: Option<RileyParams>,
    residual: f64,
}

impl Rep {
    /// Checks every relator of `p` against `tol` and stores the images.
    pub fn from_images(p: &Presentation, images: Vec<Mat2>, tol: f64) -> Result<Self, RepError> {
        if images.len() != p.generator_count() {
            return Err(RepError::ImageCount { expected: p.generator_count(), got: images.len() });
        }
        if let Some(i) = images.iter().position(|m| m.det().norm() < 1e-300) {
            return Err(RepError::SingularImage(i));
        }
        let residual = relator_residuals(p, &images)?.into_iter().enumerate().try_fold(0.0f64, |acc, (i, r)| {
            if r > tol || r.is_nan() {
                Err(RepError::RelatorResidual { relator: i, residual: r, tol })
            } else {
                Ok(acc.max(r))
            }
        })?;
        Ok(Self { images, params: None, residual })
    }

    pub fn images(&self) -> &[Mat2] {
        &self.images
    }

    pub fn params(&self) -> Option<&RileyParams> {
        self.params.as_ref()
    }

    /// Largest relator residual seen at construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn image_of(&self, w: &Word) -> Mat2 {
        w.letters().iter().fold(Mat2::identity(), |acc, l| {
            let m = self.images[l.gen];
            acc.mul(&if l.exp > 0 { m } else { m.inverse() })
        })
    }

    /// `Tr ρ(x_gen)`.
    pub fn trace(&self, gen: usize) -> Complex64 {
        self.images[gen].trace()
    }

    /// `Tr ρ(x_gen²)`.
    pub fn trace_sq(&self, gen: usize) -> Complex64 {
        let m = self.images[gen];
        m.mul(&m).trace()
    }

    pub fn is_special_linear(&self, tol: f64) -> bool {
        self.images.iter().all(|m| (m.det() - 1.0).norm() <= tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.images.iter().all(|m| m.is_unitary(tol))
    }

    /// Whether the images admit no common eigenvector, judged with `tol`.
    pub fn is_irreducible(&self, tol: f64) -> bool {
        let Some(pivot) = self.images.iter().find(|m| !m.is_scalar(tol)) else {
            return false;
        };
        !pivot.eigenvectors().iter().any(|v| self.images.iter().all(|m| m.fixes_line(v, tol)))
    }

    /// `g ρ g⁻¹` on every generator.
    pub fn conjugated(&self, g: &Mat2) -> Self {
        let gi = g.inverse();
        Self { images: self.images.iter().map(|m| g.mul(m).mul(&gi)).collect(), params: None, residual: self.residual }
    }

    /// A matrix `P` with `P ρ P⁻¹` unitary on every generator, or `None` if
    /// no positive definite invariant Hermitian form exists within `tol`.
    pub fn unitarizer(&self, tol: f64) -> Option<Mat2> {
        // invariant forms H = [[a, b], [b̄, d]] solve M* H M = H; unknowns
        // (a, d, Re b, Im b), four real equations per image
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let basis = [
            Mat2::new(one, zero, zero, zero),
            Mat2::new(zero, zero, zero, one),
            Mat2::new(zero, one, one, zero),
            Mat2::new(zero, Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), zero),
        ];
        let mut sys = nalgebra::DMatrix::<f64>::zeros(4 * self.images.len(), 4);
        for (k, m) in self.images.iter().enumerate() {
            for (c, h) in basis.iter().enumerate() {
                let e = m.conj_transpose().mul(h).mul(m).a;
                let h = h.a;
                let row =
                    [e[0][0].re - h[0][0].re, e[1][1].re - h[1][1].re, (e[0][1] - h[0][1]).re, (e[0][1] - h[0][1]).im];
                for (r, v) in row.into_iter().enumerate() {
                    sys[(4 * k + r, c)] = v;
                }
            }
        }
        let svd = sys.svd(false, true);
        let (i, &smallest) = svd.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
        let scale = svd.singular_values.max().max(1.0);
        if smallest > tol * scale {
            return None;
        }
        let v = svd.v_t?.row(i).transpose();
        let (mut a, mut d, mut b) = (v[0], v[1], Complex64::new(v[2], v[3]));
        if a < 0.0 {
            (a, d, b) = (-a, -d, -b);
        }
        let det = a * d - b.norm_sqr();
        if a <= 0.0 || det <= tol * (a * a + d * d) {
            return None;
        }
        // H = P* P with P upper triangular (transposed Cholesky factor)
        let ra = a.sqrt();
        let p = Mat2::new(Complex64::new(ra, 0.0), b / ra, zero, Complex64::new((det / a).sqrt(), 0.0));
        Some(p)
    }

    /// `P ρ P⁻¹` for the [`Rep::unitarizer`] `P`.
    pub fn unitarized(&self, tol: f64) -> Option<Self> {
        let r = self.conjugated(&self.unitarizer(tol)?);
        r.is_unitary(tol.sqrt()).then_some(r)
    }

    /// `ερ` for the sign character `ε(x_i) = (−1)^{α(x_i)}`.
    pub fn sign_twisted(&self, p: &Presentation) -> Self {
        let images = self
            .images
            .iter()
            .zip(p.alpha())
            .map(|(m, a)| if a.rem_euclid(2) == 1 { m.scale(Complex64::new(-1.0, 0.0)) } else { *m })
            .collect();
        let params = self.params.map(|pr| RileyParams { sqrt_s: -pr.sqrt_s, ..pr });
        Self { images, params, residual: self.residual }
    }
}

fn relator_residuals(p: &Presentation, images: &[Mat2]) -> Result<Vec<f64>, RepError> {
    let id = Mat2::identity();
    Ok(p.relators()
        .iter()
        .map(|r| {
            let m = r.letters().iter().fold(Mat2::identity(), |acc, l| {
                let g = images[l.gen];
                acc.mul(&if l.exp > 0 { g } else { g.inverse() })
            });
            m.max_distance(&id)
        })
        .collect())
}

/// `W_{11} + (1 − s) W_{12}` evaluated numerically for the matrices of
/// [`riley_assignment`].
pub fn riley_value(w: &Word, s: Complex64, u: Complex64) -> Complex64 {
    let (x, y) = riley_assignment(s, u);
    let m = w.letters().iter().fold(Mat2::identity(), |acc, l| {
        let g = if l.gen == 0 { x } else { y };
        acc.mul(&if l.exp > 0 { g } else { g.inverse() })
    });
    m.a[0][0] + (Complex64::new(1.0, 0.0) - s) * m.a[0][1]
}

/// Builds `ρ(x) = X/√s`, `ρ(y) = Y/√s` for a 2-bridge presentation.
pub fn build_rep(p: &Presentation, s: Complex64, u: Complex64, sqrt_s: Complex64, tol: f64) -> Result<Rep, RepError> {
    if p.bridge_word().is_none() || p.generator_count() != 2 {
        return Err(RepError::NotTwoBridge);
    }
    let root_err = (sqrt_s * sqrt_s - s).norm();
    if root_err > tol * s.norm().max(1.0) {
        return Err(RepError::BadSquareRoot(root_err));
    }
    let (x, y) = riley_assignment(s, u);
    let inv = sqrt_s.inv();
    let mut rep = Rep::from_images(p, vec![x.scale(inv), y.scale(inv)], tol)?;
    rep.params = Some(RileyParams { s, u, sqrt_s });
    Ok(rep)
}

/// Matrix of `V ↦ g V g⁻¹` on `sl(2)` in the basis `(E, H, F)`; column `k`
/// holds the coordinates of the image of the `k`-th basis vector.
pub fn adjoint_matrix(g: &Mat2) -> Mat3 {
    let gi = g.inverse();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let basis = [Mat2::new(zero, one, zero, zero), Mat2::new(one, zero, zero, -one), Mat2::new(zero, zero, one, zero)];
    let mut out = Mat3::zeros();
    for (k, b) in basis.iter().enumerate() {
        let v = g.mul(b).mul(&gi);
        // coordinates of [[h, e], [f, -h]]
        out[(0, k)] = v.a[0][1];
        out[(1, k)] = v.a[0][0];
        out[(2, k)] = v.a[1][0];
    }
    out
}

/// `Ad∘ρ` on each generator, with inverses precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointImage {
    mats: Vec<Mat3>,
    inverses: Vec<Mat3>,
}

impl AdjointImage {
    pub fn mats(&self) -> &[Mat3] {
        &self.mats
    }

    /// `Ad(ρ(w))`.
    pub fn of_word(&self, w: &Word) -> Mat3 {
        w.letters()
            .iter()
            .fold(Mat3::identity(), |acc, l| acc * if l.exp > 0 { self.mats[l.gen] } else { self.inverses[l.gen] })
    }
}

pub fn adjoint_images(r: &Rep) -> Result<AdjointImage, RepError> {
    let mut mats = Vec::with_capacity(r.images.len());
    let mut inverses = Vec::with_capacity(r.images.len());
    for (i, m) in r.images.iter().enumerate() {
        if m.det().norm() < 1e-300 {
            return Err(RepError::SingularImage(i));
        }
        mats.push(adjoint_matrix(m));
        inverses.push(adjoint_matrix(&m.inverse()));
    }
    Ok(AdjointImage { mats, inverses })
}
