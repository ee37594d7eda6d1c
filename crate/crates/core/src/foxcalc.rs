//! Fox free differential calculus on the integral group ring of a free group.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::laurent::IntLaurent;
use crate::presentation::{Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoxError {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("presentation is not deficiency one")]
    NotDeficiencyOne,
}

/// A finite integer combination of freely reduced words.
///
/// Terms are kept in a `BTreeMap` keyed by word (shortlex order) with no zero
/// coefficients, so structural equality is ring equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingElt {
    terms: BTreeMap<Word, BigInt>,
}

impl GroupRingElt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        Self::term(1, w)
    }

    pub fn term<C: Into<BigInt>>(coeff: C, w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(coeff.into(), w);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, coeff: BigInt, w: Word) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }

    /// Left multiplication by a group element.
    pub fn left_mul_word(&self, w: &Word) -> Self {
        let mut out = Self::zero();
        for (v, c) in &self.terms {
            out.add_term(c.clone(), w.mul(v));
        }
        out
    }

    /// Image under the abelianization `x_i ↦ t^{alpha_i}`.
    pub fn abelianize(&self, alpha: &[i64]) -> IntLaurent {
        let mut acc = IntLaurent::zero();
        for (w, c) in &self.terms {
            let deg: i64 = w.letters().iter().map(|l| alpha[l.gen] * l.exp as i64).sum();
            acc = &acc + &IntLaurent::monomial(c.clone(), deg);
        }
        acc
    }

    pub fn display_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let word = w.display_with(names);
            if mag.is_one() {
                out.push_str(&word);
            } else if w.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                out.push_str(&format!("{mag}*{word}"));
            }
        }
        out
    }

    /// Largest coefficient magnitude, saturating at `u64::MAX`.
    pub fn max_abs_coeff(&self) -> u64 {
        self.terms.values().map(|c| c.abs().to_u64().unwrap_or(u64::MAX)).max().unwrap_or(0)
    }
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with::<&str>(&[]))
    }
}

impl Add for &GroupRingElt {
    type Output = GroupRingElt;
    fn add(self, rhs: &GroupRingElt) -> GroupRingElt {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(c.clone(), w.clone());
        }
        out
    }
}

impl Sub for &GroupRingElt {
    type Output = GroupRingElt;
    fn sub(self, rhs: &GroupRingElt) -> GroupRingElt {
        self + &(-rhs)
    }
}

impl Neg for &GroupRingElt {
    type Output = GroupRingElt;
    fn neg(self) -> GroupRingElt {
        GroupRingElt { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Mul for &GroupRingElt {
    type Output = GroupRingElt;
    fn mul(self, rhs: &GroupRingElt) -> GroupRingElt {
        let mut out = GroupRingElt::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(a * b, u.mul(v));
            }
        }
        out
    }
}

/// `∂r/∂x_j` by a single left-to-right scan: each occurrence of `x_j`
/// contributes `+prefix`, each `x_j⁻¹` contributes `-(prefix·x_j⁻¹)`.
pub fn fox_derivative(r: &Word, j: usize, rank: usize) -> Result<GroupRingElt, FoxError> {
    if j >= rank {
        return Err(FoxError::IndexOutOfRange { index: j, rank });
    }
    if let Some(g) = r.max_generator().filter(|&g| g >= rank) {
        return Err(FoxError::IndexOutOfRange { index: g, rank });
    }
    let letters = r.letters();
    let mut out = GroupRingElt::zero();
    for (i, l) in letters.iter().enumerate() {
        if l.gen != j {
            continue;
        }
        // r is reduced, so its prefixes are too
        if l.exp > 0 {
            out.add_term(BigInt::one(), Word::from_letters(letters[..i].iter().copied()));
        } else {
            out.add_term(-BigInt::one(), Word::from_letters(letters[..=i].iter().copied()));
        }
    }
    Ok(out)
}

/// Checks `Σ_j (∂r/∂x_j)(x_j − 1) = r − 1` over generators `0..rank`.
pub fn fundamental_identity_holds(r: &Word, rank: usize) -> bool {
    let mut lhs = GroupRingElt::zero();
    for j in 0..rank {
        let Ok(d) = fox_derivative(r, j, rank) else {
            return false;
        };
        let xj_minus_one = &GroupRingElt::from_word(Word::generator(j)) - &GroupRingElt::one();
        lhs = &lhs + &(&d * &xj_minus_one);
    }
    let rhs = &GroupRingElt::from_word(r.clone()) - &GroupRingElt::one();
    lhs == rhs
}

/// Classical Alexander polynomial: the minor of the abelianized Fox matrix
/// with the meridian column removed, normalized up to `±t^k`.
pub fn alexander_polynomial(p: &Presentation) -> Result<IntLaurent, FoxError> {
    let k = p.generator_count();
    if k == 0 || p.relators().len() + 1 != k {
        return Err(FoxError::NotDeficiencyOne);
    }
    let cols: Vec<usize> = (0..k).filter(|&j| j != p.meridian()).collect();
    let mut m = Vec::with_capacity(k - 1);
    for r in p.relators() {
        let row = cols
            .iter()
            .map(|&j| Ok(fox_derivative(r, j, k)?.abelianize(p.alpha())))
            .collect::<Result<Vec<_>, FoxError>>()?;
        m.push(row);
    }
    let idx: Vec<usize> = (0..k - 1).collect();
    Ok(int_cofactor(&m, 0, &idx).normalize_unit())
}

fn int_cofactor(m: &[Vec<IntLaurent>], row: usize, cols: &[usize]) -> IntLaurent {
    if cols.is_empty() {
        return IntLaurent::one();
    }
    let mut acc = IntLaurent::zero();
    for (n, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[row][c] * &int_cofactor(m, row + 1, &rest);
        acc = if n % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_word;

    const XY: [&str; 2] = ["x", "y"];

    fn w(text: &str) -> Word {
        parse_word(text, &XY).unwrap()
    }

    fn elt(terms: &[(i64, &str)]) -> GroupRingElt {
        terms.iter().fold(GroupRingElt::zero(), |acc, (c, t)| &acc + &GroupRingElt::term(*c, w(t)))
    }

    #[test]
    fn base_rules() {
        assert_eq!(fox_derivative(&w("x"), 0, 2).unwrap(), GroupRingElt::one());
        assert_eq!(fox_derivative(&w("x^-1"), 0, 2).unwrap(), elt(&[(-1, "x^-1")]));
        assert!(fox_derivative(&w("y"), 0, 2).unwrap().is_zero());
        assert_eq!(fox_derivative(&w("x"), 2, 2), Err(FoxError::IndexOutOfRange { index: 2, rank: 2 }));
    }

    #[test]
    fn trefoil_relator() {
        // hand expansion: +1 (first x) + xy (third letter) - xyxy^-1x^-1 (fifth letter)
        let r = w("x y x y^-1 x^-1 y^-1");
        let d = fox_derivative(&r, 0, 2).unwrap();
        assert_eq!(d, elt(&[(1, ""), (1, "x y"), (-1, "x y x y^-1 x^-1")]));
        assert!(fundamental_identity_holds(&r, 2));
    }

    #[test]
    fn ring_arithmetic() {
        let x = elt(&[(1, "x")]);
        let xi = elt(&[(1, "x^-1")]);
        assert_eq!(&x * &xi, GroupRingElt::one());
        let a = elt(&[(1, "x"), (-1, "y")]);
        assert!((&a * &GroupRingElt::zero()).is_zero());
        let p = elt(&[(1, ""), (1, "x")]);
        let m = elt(&[(1, ""), (-1, "x")]);
        assert_eq!(&p * &m, elt(&[(1, ""), (-1, "x^2")]));
    }

    #[test]
    fn fundamental_identity_trivial_cases() {
        assert!(fundamental_identity_holds(&w("x"), 2));
        assert!(fundamental_identity_holds(&Word::empty(), 2));
    }

    #[test]
    fn display() {
        let e = elt(&[(1, ""), (-2, "x y"), (1, "y^-1")]);
        assert_eq!(e.display_with(&XY), "1 + y^-1 - 2*x y");
        assert_eq!(GroupRingElt::zero().to_string(), "0");
    }

    #[test]
    fn abelianization() {
        let r = w("x y x y^-1 x^-1 y^-1");
        let d = fox_derivative(&r, 1, 2).unwrap();
        // x - xyxy^-1 - 1  ->  t - t^2 - 1
        let a = d.abelianize(&[1, 1]);
        assert_eq!(a, IntLaurent::from_i64(0, &[-1, 1, -1]));
    }

    #[test]
    fn classical_alexander() {
        let trefoil = Presentation::two_bridge(w("x y"));
        assert_eq!(alexander_polynomial(&trefoil).unwrap(), IntLaurent::from_i64(0, &[1, -1, 1]));
        let five_two = Presentation::two_bridge(w("x^-1 y^-1 x y x^-1 y^-1"));
        assert_eq!(alexander_polynomial(&five_two).unwrap(), IntLaurent::from_i64(0, &[2, -3, 2]));
    }
}
