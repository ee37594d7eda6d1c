//! One-variable Laurent polynomials over `C`, matrices of them, and rational
//! functions formed from them.

mod exact;
mod matrix;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use exact::IntLaurent;
pub use matrix::LaurentMatrix;

/// Default relative threshold for [`LaurentPoly::cleanup`].
pub const DEFAULT_CLEANUP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LaurentError {
    #[error("cannot evaluate a polynomial with negative exponents at 0")]
    EvaluateAtZero,
    #[error("zero denominator")]
    ZeroDenominator,
}

/// `t^offset · Σ coeffs[i] t^i` with complex coefficients.
///
/// After every arithmetic operation the polynomial is cleaned: coefficients
/// whose modulus is at most `DEFAULT_CLEANUP` times the largest modulus are
/// zeroed and the ends trimmed. The zero polynomial has no coefficients and
/// offset 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly {
    offset: i64,
    coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(c, 0)
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), 1)
    }

    pub fn monomial(c: Complex64, exp: i64) -> Self {
        Self::new(exp, vec![c])
    }

    /// Builds `t^offset · Σ coeffs[i] t^i` with default cleanup.
    pub fn new(offset: i64, coeffs: Vec<Complex64>) -> Self {
        Self::raw(offset, coeffs).cleanup(DEFAULT_CLEANUP)
    }

    /// Real-coefficient shorthand.
    pub fn from_real(offset: i64, coeffs: &[f64]) -> Self {
        Self::new(offset, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    fn raw(offset: i64, coeffs: Vec<Complex64>) -> Self {
        Self { offset, coeffs }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent, `None` for zero.
    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.offset)
    }

    /// Highest exponent, `None` for zero.
    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.offset + self.coeffs.len() as i64 - 1)
    }

    /// Coefficient of `t^exp`.
    pub fn coeff(&self, exp: i64) -> Complex64 {
        let i = exp - self.offset;
        if i < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(i as usize).copied().unwrap_or_default()
    }

    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Zeroes coefficients with `|c| <= threshold · max|c|` and trims.
    pub fn cleanup(mut self, threshold: f64) -> Self {
        let cutoff = threshold * self.max_modulus();
        for c in self.coeffs.iter_mut() {
            if c.norm() <= cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        let Some(first) = self.coeffs.iter().position(|c| *c != Complex64::new(0.0, 0.0)) else {
            return Self::zero();
        };
        let last = self.coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)).unwrap();
        self.coeffs.truncate(last + 1);
        self.coeffs.drain(..first);
        self.offset += first as i64;
        self
    }

    /// Multiplies by `t^m`.
    pub fn shift(&self, m: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::raw(self.offset + m, self.coeffs.clone())
    }

    /// Shifts so the lowest exponent is 0.
    pub fn normalize_offset(&self) -> Self {
        Self::raw(0, self.coeffs.clone())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.offset, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation of `t^offset · Σ c_i z^i`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, LaurentError> {
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if z == Complex64::new(0.0, 0.0) {
            return match self.offset {
                o if o < 0 => Err(LaurentError::EvaluateAtZero),
                0 => Ok(self.coeffs[0]),
                _ => Ok(Complex64::new(0.0, 0.0)),
            };
        }
        let body = self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
        Ok(body * z.powi(self.offset as i32))
    }

    /// Formal derivative of order `order`, respecting negative exponents.
    pub fn derivative(&self, order: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..order {
            if p.is_zero() {
                break;
            }
            let coeffs = p.coeffs.iter().enumerate().map(|(i, c)| c * (p.offset + i as i64) as f64).collect();
            p = Self::new(p.offset - 1, coeffs);
        }
        p
    }

    /// Divides the polynomial part `Σ c_i t^i` by `(t − root)` `multiplicity`
    /// times by synthetic division, keeping the `t^offset` factor.
    ///
    /// Returns the final quotient and the modulus of each successive
    /// remainder. The quotient is returned whether or not the remainders are
    /// small; callers judge them.
    pub fn divide_out_root(&self, root: Complex64, multiplicity: usize) -> (Self, Vec<f64>) {
        let mut coeffs = self.coeffs.clone();
        let mut remainders = Vec::with_capacity(multiplicity);
        for _ in 0..multiplicity {
            if coeffs.is_empty() {
                remainders.push(0.0);
                continue;
            }
            // coefficients stored low-to-high; run Horner from the top
            let n = coeffs.len();
            let mut quotient = vec![Complex64::new(0.0, 0.0); n - 1];
            let mut carry = Complex64::new(0.0, 0.0);
            for i in (0..n).rev() {
                let v = coeffs[i] + carry * root;
                if i == 0 {
                    remainders.push(v.norm());
                } else {
                    quotient[i - 1] = v;
                }
                carry = v;
            }
            coeffs = quotient;
        }
        // no cleanup: the quotient is exact given the inputs
        let q = Self::raw(self.offset, coeffs);
        let q = if q.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0)) { Self::zero() } else { q };
        (q, remainders)
    }

    /// Coefficientwise maximum distance to `other`.
    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        let (Some(a_lo), Some(b_lo)) = (self.low(), other.low()) else {
            return self.max_modulus().max(other.max_modulus());
        };
        let lo = a_lo.min(b_lo);
        let hi = self.high().unwrap().max(other.high().unwrap());
        (lo..=hi).map(|e| (self.coeff(e) - other.coeff(e)).norm()).fold(0.0, f64::max)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.offset.min(rhs.offset);
        let hi = self.high().unwrap().max(rhs.high().unwrap());
        let coeffs = (lo..=hi).map(|e| self.coeff(e) + rhs.coeff(e)).collect();
        LaurentPoly::new(lo, coeffs)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::raw(self.offset, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.offset + rhs.offset, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(i, c)| {
                let e = self.offset + i as i64;
                match e {
                    0 => fmt_complex(*c),
                    1 => format!("{}*t", fmt_complex(*c)),
                    _ => format!("{}*t^{e}", fmt_complex(*c)),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    offset: i64,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr { offset: self.offset, coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        if r.coeffs.iter().flatten().any(|v| !v.is_finite()) {
            return Err(D::Error::custom("non-finite coefficient"));
        }
        Ok(Self::new(r.offset, r.coeffs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
    }
}

/// `numerator / denominator`, reduced only by a common power of `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    pub numerator: LaurentPoly,
    pub denominator: LaurentPoly,
}

impl RationalFunction {
    /// Normalizes so both offsets are nonnegative and at least one is zero.
    pub fn new(numerator: LaurentPoly, denominator: LaurentPoly) -> Result<Self, LaurentError> {
        if denominator.is_zero() {
            return Err(LaurentError::ZeroDenominator);
        }
        let shift = match numerator.low() {
            Some(n) => n.min(denominator.offset),
            None => denominator.offset,
        };
        Ok(Self { numerator: numerator.shift(-shift), denominator: denominator.shift(-shift) })
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, LaurentError> {
        let d = self.denominator.evaluate(z)?;
        if d == Complex64::new(0.0, 0.0) {
            return Err(LaurentError::ZeroDenominator);
        }
        Ok(self.numerator.evaluate(z)? / d)
    }
}
