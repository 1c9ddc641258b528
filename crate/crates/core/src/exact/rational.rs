use std::fmt;
use std::ops::Index;

use num::{BigInt, One, Zero};

use super::ExpVec;
use crate::error::{check_dim, Error, Result};

pub use super::scalar::Rational;

pub fn q(n: i64) -> Rational {
    Rational::from(n)
}

/// `n / d`; panics if `d == 0`.
pub fn qr(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `base^exp` for any integer exponent. Negative exponents need `base != 0`.
pub fn rational_pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num::pow::pow(base.clone(), exp as usize)
    } else {
        assert!(!base.is_zero(), "zero raised to a negative power");
        num::pow::pow(base.recip(), exp.unsigned_abs() as usize)
    }
}

/// Canonical text form: `3`, `-3/2`.
pub fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// A vector in Q^d. Used for directions `u`, module parameters and
/// evaluation points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct QVec(Vec<Rational>);

impl QVec {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVec(entries)
    }

    pub fn zeros(d: usize) -> Self {
        QVec(vec![Rational::zero(); d])
    }

    /// Standard basis vector `e_i` (0-based `i`).
    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.0[i] = Rational::one();
        v
    }

    pub fn ones(d: usize) -> Self {
        QVec(vec![Rational::one(); d])
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        QVec(entries.iter().map(|&n| q(n)).collect())
    }

    pub fn from_exp(e: &ExpVec) -> Self {
        QVec(e.iter().map(q).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// The standard bilinear form `(u|v) = u^T v`.
    pub fn pairing(&self, other: &QVec) -> Result<Rational> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.dot(other))
    }

    pub(crate) fn dot(&self, other: &QVec) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// `(u|m)` for an integer vector `m`.
    pub fn dot_exp(&self, m: &ExpVec) -> Rational {
        debug_assert_eq!(self.dim(), m.dim());
        self.0
            .iter()
            .zip(m.iter())
            .filter(|(_, m)| *m != 0)
            .fold(Rational::zero(), |acc, (a, m)| acc + a * q(m))
    }

    pub fn add(&self, other: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), other.dim());
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), other.dim());
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add_exp(&self, m: &ExpVec) -> QVec {
        debug_assert_eq!(self.dim(), m.dim());
        QVec(self.0.iter().zip(m.iter()).map(|(a, m)| a + q(m)).collect())
    }

    pub fn scale(&self, c: &Rational) -> QVec {
        QVec(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> QVec {
        QVec(self.0.iter().map(|a| -a).collect())
    }

    /// `self^m = prod self_i^{m_i}`; entries must be nonzero where `m_i < 0`.
    pub fn power(&self, m: &ExpVec) -> Rational {
        debug_assert_eq!(self.dim(), m.dim());
        self.0
            .iter()
            .zip(m.iter())
            .fold(Rational::one(), |acc, (b, e)| acc * rational_pow(b, e))
    }

    /// Integer vector if every entry is an integer.
    pub fn to_exp(&self) -> Option<ExpVec> {
        self.0
            .iter()
            .map(|c| {
                if c.is_integer() {
                    i64::try_from(c.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(|v| ExpVec::new(&v))
    }

    pub fn has_zero_entry(&self) -> bool {
        self.0.iter().any(Zero::is_zero)
    }

    pub fn max_abs(&self) -> Rational {
        self.0
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl Index<usize> for QVec {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", fmt_rational(c))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        let e1 = QVec::basis(2, 0);
        let e2 = QVec::basis(2, 1);
        assert_eq!(e1.pairing(&e1).unwrap(), q(1));
        assert_eq!(e1.pairing(&e2).unwrap(), q(0));
        let a = QVec::from_ints(&[1, 2]);
        let b = QVec::from_ints(&[3, -1]);
        // 1*3 + 2*(-1)
        assert_eq!(a.pairing(&b).unwrap(), q(1));
    }

    #[test]
    fn pairing_rejects_length_mismatch() {
        let err = QVec::ones(2).pairing(&QVec::ones(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn rational_text_roundtrip() {
        for s in ["0", "7", "-3/2", "10/4"] {
            let c = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&fmt_rational(&c)).unwrap(), c);
        }
        assert_eq!(fmt_rational(&qr(10, -4)), "-5/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(rational_pow(&q(2), -3), qr(1, 8));
        let lam = QVec::from_ints(&[2, 3]);
        assert_eq!(lam.power(&ExpVec::new(&[1, -1])), qr(2, 3));
    }
}
