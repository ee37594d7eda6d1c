use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Laurent polynomial with arbitrary-precision integer coefficients.
///
/// Always trimmed: the first and last stored coefficients are nonzero, and
/// zero is the empty vector with offset 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntLaurent {
    offset: i64,
    coeffs: Vec<BigInt>,
}

impl IntLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(c: BigInt, exp: i64) -> Self {
        Self::new(exp, vec![c])
    }

    pub fn new(offset: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { offset, coeffs };
        p.trim();
        p
    }

    pub fn from_i64(offset: i64, coeffs: &[i64]) -> Self {
        Self::new(offset, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        let Some(first) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            *self = Self { offset: 0, coeffs: Vec::new() };
            return;
        };
        let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        self.coeffs.truncate(last + 1);
        self.coeffs.drain(..first);
        self.offset += first as i64;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.offset)
    }

    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.offset + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        let i = exp - self.offset;
        if i < 0 {
            return BigInt::zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_default()
    }

    /// Multiplies by `t^m`.
    pub fn shift(&self, m: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { offset: self.offset + m, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.offset, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let body =
            self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN));
        body * z.powi(self.offset as i32)
    }

    /// Representative of the class `{±t^k · self}` with lowest exponent 0 and
    /// positive lowest coefficient.
    pub fn normalize_unit(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let p = Self { offset: 0, coeffs: self.coeffs.clone() };
        if p.coeffs[0].is_negative() {
            -&p
        } else {
            p
        }
    }

    pub fn equals_up_to_unit(&self, other: &Self) -> bool {
        self.normalize_unit() == other.normalize_unit()
    }

    /// Symmetric about `t^center`: `c_{center+j} = c_{center-j}`. Returns the
    /// center doubled (it may be a half-integer).
    pub fn palindromic_center2(&self) -> Option<i64> {
        let (lo, hi) = (self.low()?, self.high()?);
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i]).then_some(lo + hi)
    }

    pub fn display_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = self.offset + i as i64;
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for IntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("t"))
    }
}

impl Add for &IntLaurent {
    type Output = IntLaurent;
    fn add(self, rhs: &IntLaurent) -> IntLaurent {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.offset.min(rhs.offset);
        let hi = self.high().unwrap().max(rhs.high().unwrap());
        IntLaurent::new(lo, (lo..=hi).map(|e| self.coeff(e) + rhs.coeff(e)).collect())
    }
}

impl Sub for &IntLaurent {
    type Output = IntLaurent;
    fn sub(self, rhs: &IntLaurent) -> IntLaurent {
        self + &(-rhs)
    }
}

impl Neg for &IntLaurent {
    type Output = IntLaurent;
    fn neg(self) -> IntLaurent {
        IntLaurent { offset: self.offset, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &IntLaurent {
    type Output = IntLaurent;
    fn mul(self, rhs: &IntLaurent) -> IntLaurent {
        if self.is_zero() || rhs.is_zero() {
            return IntLaurent::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntLaurent::new(self.offset + rhs.offset, coeffs)
    }
}
