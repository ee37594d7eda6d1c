use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{LaurentError, LaurentPoly};

/// Largest size for which [`LaurentMatrix::determinant`] uses cofactor
/// expansion.
pub const COFACTOR_LIMIT: usize = 6;

/// Square matrix of Laurent polynomials, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrix {
    n: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![LaurentPoly::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> LaurentPoly>(n: usize, mut f: F) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, entries }
    }

    /// Square matrix from rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "LaurentMatrix must be square");
        Self { n, entries: rows.into_iter().flatten().collect() }
    }

    /// Assembles a matrix from a square grid of equally sized square blocks.
    pub fn from_blocks(blocks: &[Vec<LaurentMatrix>]) -> Self {
        let nb = blocks.len();
        if nb == 0 {
            return Self::zeros(0);
        }
        let b = blocks[0][0].n;
        assert!(blocks.iter().all(|r| r.len() == nb && r.iter().all(|m| m.n == b)));
        Self::from_fn(nb * b, |i, j| blocks[i / b][j / b].get(i % b, j % b).clone())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.entries.swap(a * self.n + j, b * self.n + j);
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| {
            (0..self.n).fold(LaurentPoly::zero(), |acc, k| &acc + &(self.get(i, k) * other.get(k, j)))
        })
    }

    /// Entrywise evaluation at `z`.
    pub fn evaluate(&self, z: Complex64) -> Result<DMatrix<Complex64>, LaurentError> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self.get(i, j).evaluate(z)?;
            }
        }
        Ok(out)
    }

    /// Determinant: cofactor expansion up to [`COFACTOR_LIMIT`], otherwise
    /// evaluation at roots of unity followed by interpolation.
    pub fn determinant(&self) -> LaurentPoly {
        if self.n <= COFACTOR_LIMIT {
            self.determinant_cofactor()
        } else {
            self.determinant_interpolation()
        }
    }

    /// Laplace expansion along the first row.
    pub fn determinant_cofactor(&self) -> LaurentPoly {
        let cols: Vec<usize> = (0..self.n).collect();
        self.cofactor(0, &cols)
    }

    fn cofactor(&self, row: usize, cols: &[usize]) -> LaurentPoly {
        match cols.len() {
            0 => LaurentPoly::one(),
            1 => self.get(row, cols[0]).clone(),
            _ => {
                let mut acc = LaurentPoly::zero();
                for (k, &c) in cols.iter().enumerate() {
                    let entry = self.get(row, c);
                    if entry.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = entry * &self.cofactor(row + 1, &rest);
                    acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Exponent window `[lo, lo + span]` that must contain the support of the
    /// determinant, from row-wise degree addition. `None` if a row is zero.
    pub fn determinant_degree_bound(&self) -> Option<(i64, usize)> {
        let mut lo = 0i64;
        let mut span = 0usize;
        for i in 0..self.n {
            let row = (0..self.n).map(|j| self.get(i, j)).filter(|p| !p.is_zero());
            let (mut rlo, mut rhi) = (i64::MAX, i64::MIN);
            for p in row {
                rlo = rlo.min(p.low().unwrap());
                rhi = rhi.max(p.high().unwrap());
            }
            if rlo > rhi {
                return None;
            }
            lo += rlo;
            span += (rhi - rlo) as usize;
        }
        Some((lo, span))
    }

    /// Evaluates at the `span + 1` roots of unity (in parallel) and inverts
    /// the discrete Fourier transform, which solves the interpolation system
    /// exactly for those nodes.
    pub fn determinant_interpolation(&self) -> LaurentPoly {
        if self.n == 0 {
            return LaurentPoly::one();
        }
        let Some((lo, span)) = self.determinant_degree_bound() else {
            return LaurentPoly::zero();
        };
        let count = span + 1;
        let node = |k: usize| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / count as f64);
        let values: Vec<Complex64> = (0..count)
            .into_par_iter()
            .map(|k| {
                let z = node(k);
                let m = self.evaluate(z).expect("nodes lie on the unit circle");
                m.determinant() * z.powi(-(lo as i32))
            })
            .collect();
        let coeffs: Vec<Complex64> = (0..count)
            .map(|i| {
                let s: Complex64 = values.iter().enumerate().map(|(k, v)| v * node((i * k) % count).conj()).sum();
                s / count as f64
            })
            .collect();
        // rounding floor relative to the largest sampled value; a priori
        // bounds such as Hadamard's grow with the entries and can exceed the
        // true coefficients
        let peak = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        let floor = 64.0 * f64::EPSILON * self.n as f64 * peak;
        let coeffs = coeffs
            .into_iter()
            .map(|c: Complex64| if c.norm() <= floor { Complex64::new(0.0, 0.0) } else { c })
            .collect();
        LaurentPoly::new(lo, coeffs)
    }
}

impl Serialize for LaurentMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[LaurentPoly]> = self.entries.chunks(self.n.max(1)).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<LaurentPoly>>::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("matrix must be square"));
        }
        Ok(Self::from_rows(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn simple_determinants() {
        assert_eq!(LaurentMatrix::identity(3).determinant(), LaurentPoly::one());
        let mut d = LaurentMatrix::identity(3);
        d.set(0, 0, LaurentPoly::t());
        d.set(1, 1, LaurentPoly::monomial(c(1.0), -1));
        assert_eq!(d.determinant(), LaurentPoly::one());
        assert_eq!(LaurentMatrix::identity(8).determinant(), LaurentPoly::one());
        assert!(LaurentMatrix::zeros(8).determinant().is_zero());
    }

    #[test]
    fn interpolation_matches_cofactor() {
        let mut seed = 17u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        let m = LaurentMatrix::from_fn(5, |i, _| LaurentPoly::from_real(i as i64 - 2, &[next(), next(), next()]));
        let a = m.determinant_cofactor();
        let b = m.determinant_interpolation();
        assert!(a.max_coeff_distance(&b) <= 1e-10 * a.max_modulus());
    }

    #[test]
    fn json_nested_arrays() {
        let m = LaurentMatrix::identity(2);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with("[[{"));
        let back: LaurentMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
