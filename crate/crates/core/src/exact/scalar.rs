use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

/// Exact rational scalar. Values whose reduced numerator and denominator fit
/// in a machine word are stored inline; larger ones fall back to a bignum
/// fraction. The representation is canonical, so equality and hashing are
/// structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// reduced, denominator positive, numerator never `i64::MIN`
    Small(i64, i64),
    /// only values that do not fit `Small`
    Big(BigRational),
}

fn fits(x: i128) -> bool {
    x > i64::MIN as i128 && x <= i64::MAX as i128
}

impl Rational {
    /// `n / d` from wide integers; `d != 0`.
    fn from_wide(n: i128, d: i128) -> Rational {
        debug_assert!(d != 0);
        if d == 1 && fits(n) {
            return Rational(Repr::Small(n as i64, 1));
        }
        let g = n.unsigned_abs().gcd(&d.unsigned_abs()) as i128;
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if fits(n) && fits(d) {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    /// `n / d`; panics if `d == 0`.
    pub fn new(n: BigInt, d: BigInt) -> Rational {
        Rational::from_big(BigRational::new(n, d))
    }

    pub fn from_integer(n: BigInt) -> Rational {
        Rational::from_big(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// Truncation toward zero.
    pub fn to_integer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, d) => BigInt::from(n / d),
            Repr::Big(r) => r.to_integer(),
        }
    }

    /// `1 / self`; panics on zero.
    pub fn recip(&self) -> Rational {
        match &self.0 {
            Repr::Small(0, _) => panic!("reciprocal of zero"),
            Repr::Small(n, d) => Rational::from_wide(*d as i128, *n as i128),
            Repr::Big(r) => Rational::from_big(r.recip()),
        }
    }

    pub fn floor(&self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational::from_wide(n.div_floor(d) as i128, 1),
            Repr::Big(r) => Rational::from_big(r.floor()),
        }
    }

    pub fn ceil(&self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational::from_wide(n.div_ceil(d) as i128, 1),
            Repr::Big(r) => Rational::from_big(r.ceil()),
        }
    }

    pub fn abs(&self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(n.abs(), *d)),
            Repr::Big(r) => Rational::from_big(r.abs()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(r) => r.is_positive(),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(n1, 1), Repr::Small(n2, 1)) => Rational::from_wide(*n1 as i128 + *n2 as i128, 1),
        (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
            let (n1, d1, n2, d2) = (*n1 as i128, *d1 as i128, *n2 as i128, *d2 as i128);
            if d1 == d2 {
                Rational::from_wide(n1 + n2, d1)
            } else {
                Rational::from_wide(n1 * d2 + n2 * d1, d1 * d2)
            }
        }
        _ => Rational::from_big(a.to_big() + b.to_big()),
    }
}

fn sub(a: &Rational, b: &Rational) -> Rational {
    add(a, &neg(b))
}

fn mul(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
            Rational::from_wide(*n1 as i128 * *n2 as i128, *d1 as i128 * *d2 as i128)
        }
        _ => Rational::from_big(a.to_big() * b.to_big()),
    }
}

fn div(a: &Rational, b: &Rational) -> Rational {
    assert!(!b.is_zero(), "division by zero");
    mul(a, &b.recip())
}

fn neg(a: &Rational) -> Rational {
    match &a.0 {
        Repr::Small(n, d) => Rational(Repr::Small(-n, *d)),
        Repr::Big(r) => Rational::from_big(-r),
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $f:ident, $atr:ident, $amethod:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $f(self, rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(self, &rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $f(&self, rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
        impl $atr<&Rational> for Rational {
            fn $amethod(&mut self, rhs: &Rational) {
                *self = $f(self, rhs);
            }
        }
        impl $atr<Rational> for Rational {
            fn $amethod(&mut self, rhs: Rational) {
                *self = $f(self, &rhs);
            }
        }
    };
}

binop!(Add, add, add, AddAssign, add_assign);
binop!(Sub, sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, mul, MulAssign, mul_assign);
binop!(Div, div, div, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg(&self)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg(self)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_wide(n as i128, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn agrees_with_bignum_fractions() {
        let vals = [(0, 1), (1, 2), (-3, 4), (7, 1), (i64::MAX, 3), (-i64::MAX, 1), (5, i64::MAX)];
        for &(a, b) in &vals {
            for &(c, d) in &vals {
                let (x, y) = (Rational::new(a.into(), b.into()), Rational::new(c.into(), d.into()));
                let (bx, by) = (big(a, b), big(c, d));
                assert_eq!((&x + &y).to_big(), &bx + &by);
                assert_eq!((&x - &y).to_big(), &bx - &by);
                assert_eq!((&x * &y).to_big(), &bx * &by);
                if c != 0 {
                    assert_eq!((&x / &y).to_big(), &bx / &by);
                }
                assert_eq!(x.cmp(&y), bx.cmp(&by));
            }
        }
    }

    #[test]
    fn canonical_after_overflow_and_back() {
        let m = Rational::from(i64::MAX);
        let big = &m * &m;
        assert!(matches!(big.0, Repr::Big(_)));
        let back = &big / &m;
        assert_eq!(back, m);
        assert!(matches!(back.0, Repr::Small(..)));
        assert_eq!(-Rational::from(i64::MIN + 1) - Rational::from(2), Rational::new(BigInt::from(i64::MAX) - 2, 1.into()));
    }

    #[test]
    fn floor_ceil_and_truncation() {
        let x = Rational::new((-7).into(), 2.into());
        assert_eq!(x.floor(), Rational::from(-4));
        assert_eq!(x.ceil(), Rational::from(-3));
        assert_eq!(x.to_integer(), BigInt::from(-3));
        assert_eq!(x.to_string(), "-7/2");
    }
}
