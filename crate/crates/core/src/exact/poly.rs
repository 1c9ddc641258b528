use std::cmp::Ordering;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::{fmt_rational, q, rational_pow, ExpVec, QVec, Rational};
use crate::error::{check_dim, Error, Result};

/// Which exponent vectors a polynomial family admits, and how its monomials
/// are written.
pub trait ExponentDomain: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    /// Monomials are written `x^(..)` rather than as products of `D_i`.
    const LAURENT: bool;
    fn admits(e: &ExpVec) -> bool;
    fn render_monomial(e: &ExpVec) -> String;
}

/// Laurent monomials `x^r`, `r` in Z^d, rendered `x^(1,-2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent;

/// Ordinary monomials in `D1..Dd` (the Cartan generators), rendered
/// `D1^2*D3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordinary;

impl ExponentDomain for Laurent {
    const LAURENT: bool = true;

    fn admits(_: &ExpVec) -> bool {
        true
    }

    fn render_monomial(e: &ExpVec) -> String {
        format!("x^{e}")
    }
}

impl ExponentDomain for Ordinary {
    const LAURENT: bool = false;

    fn admits(e: &ExpVec) -> bool {
        e.is_nonnegative()
    }

    fn render_monomial(e: &ExpVec) -> String {
        let mut parts = Vec::new();
        for (i, k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("D{}", i + 1)),
                _ => parts.push(format!("D{}^{}", i + 1, k)),
            }
        }
        parts.join("*")
    }
}

/// Sparse polynomial with exact rational coefficients. Terms are kept in
/// strictly increasing lexicographic exponent order and zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<K: ExponentDomain> {
    dim: usize,
    terms: Vec<(ExpVec, Rational)>,
    _domain: PhantomData<K>,
}

/// Laurent polynomials: the algebra `A_d`.
pub type LaurentPoly = Poly<Laurent>;
/// Polynomials in the Cartan generators: `U(h)`, also the carrier of the
/// modules `Omega(lambda, a)`.
pub type PolyH = Poly<Ordinary>;

impl<K: ExponentDomain> Poly<K> {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: Vec::new(),
            _domain: PhantomData,
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(ExpVec::zero(dim), c);
        p
    }

    pub fn monomial(e: ExpVec, c: Rational) -> Result<Self> {
        if !K::admits(&e) {
            return Err(Error::InvalidParameter(format!(
                "exponent {e} not allowed here"
            )));
        }
        let mut p = Self::zero(e.dim());
        p.add_term(e, c);
        Ok(p)
    }

    /// The degree-one monomial in variable `i` (0-based).
    pub fn var(dim: usize, i: usize) -> Self {
        Self::monomial(ExpVec::unit(dim, i), Rational::one()).expect("unit exponent is admissible")
    }

    pub fn from_terms<I: IntoIterator<Item = (ExpVec, Rational)>>(dim: usize, terms: I) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            check_dim(dim, e.dim())?;
            if !K::admits(&e) {
                return Err(Error::InvalidParameter(format!(
                    "exponent {e} not allowed here"
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &Rational)> {
        self.terms.iter().map(|(e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &ExpVec) -> Rational {
        match self.terms.binary_search_by(|(k, _)| k.cmp(e)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = &self.terms[0];
                e.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest term in lexicographic order.
    pub fn leading_term(&self) -> Option<(&ExpVec, &Rational)> {
        self.terms.last().map(|(e, c)| (e, c))
    }

    pub(crate) fn add_term(&mut self, e: ExpVec, c: Rational) {
        debug_assert_eq!(e.dim(), self.dim);
        debug_assert!(K::admits(&e));
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|(k, _)| k.cmp(&e)) {
            Ok(i) => {
                self.terms[i].1 += c;
                if self.terms[i].1.is_zero() {
                    self.terms.remove(i);
                }
            }
            Err(i) => self.terms.insert(i, (e, c)),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(self.with_terms(merge(&self.terms, other.terms.iter().cloned())))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(self.with_terms(merge(&self.terms, other.terms.iter().map(|(e, c)| (e.clone(), -c)))))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        // Multiplying by one monomial keeps the order, so few-term factors
        // are handled by repeated merging.
        if small.len() <= 8 {
            let mut acc: Vec<(ExpVec, Rational)> = Vec::new();
            for (e1, c1) in small {
                acc = merge(&acc, big.iter().map(|(e2, c2)| (e1.add(e2), c1 * c2)));
            }
            return Ok(self.with_terms(acc));
        }
        let mut prods: Vec<(ExpVec, Rational)> = Vec::with_capacity(small.len() * big.len());
        for (e1, c1) in small {
            for (e2, c2) in big {
                prods.push((e1.add(e2), c1 * c2));
            }
        }
        prods.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(self.with_terms(collapse_sorted(prods)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        self.with_terms(self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        debug_assert_eq!(self.dim, other.dim);
        if c.is_zero() || other.terms.is_empty() {
            return;
        }
        self.terms = merge(&self.terms, other.terms.iter().map(|(e, a)| (e.clone(), a * c)));
    }

    fn with_terms(&self, terms: Vec<(ExpVec, Rational)>) -> Self {
        Poly {
            dim: self.dim,
            terms,
            _domain: PhantomData,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.dim);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Maximum total degree (`None` for the zero polynomial).
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.iter().map(|(e, _)| e.total_degree()).max()
    }

    /// Minimum total degree (`None` for the zero polynomial).
    pub fn min_total_degree(&self) -> Option<i64> {
        self.terms.iter().map(|(e, _)| e.total_degree()).min()
    }

    /// Every term has total degree `deg`.
    pub fn is_homogeneous_of(&self, deg: i64) -> bool {
        self.terms.iter().all(|(e, _)| e.total_degree() == deg)
    }
}

impl LaurentPoly {
    /// Multiply by the monomial `x^r`.
    pub fn shift_exponents(&self, r: &ExpVec) -> LaurentPoly {
        debug_assert_eq!(r.dim(), self.dim);
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.add(r), c.clone())).collect(),
            _domain: PhantomData,
        }
    }

    /// Lowest and highest exponent of a one-variable Laurent polynomial.
    pub fn degree_span_1d(&self) -> Option<(i64, i64)> {
        if self.dim != 1 || self.is_zero() {
            return None;
        }
        let lo = self.terms[0].0[0];
        let hi = self.terms[self.terms.len() - 1].0[0];
        Some((lo, hi))
    }
}

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

impl PolyH {
    /// `h(D - c)`: substitute `D_i -> D_i - c_i`.
    pub fn shift(&self, c: &QVec) -> Result<PolyH> {
        check_dim(self.dim, c.dim())?;
        let d = self.dim;
        if c.is_zero() {
            return Ok(self.clone());
        }
        // factors[i][k] = [(j, C(k, j) (-c_i)^{k-j})] over the nonzero ones
        let mut factors: Vec<Vec<Vec<(i64, Rational)>>> = vec![Vec::new(); d];
        for (e, _) in &self.terms {
            for (i, k) in e.iter().enumerate() {
                while factors[i].len() as i64 <= k {
                    let k = factors[i].len() as i64;
                    let neg = -&c[i];
                    let row = (0..=k)
                        .map(|j| (j, q(binomial(k, j)) * rational_pow(&neg, k - j)))
                        .filter(|(_, f)| !f.is_zero())
                        .collect();
                    factors[i].push(row);
                }
            }
        }
        let mut terms: Vec<(ExpVec, Rational)> = Vec::new();
        let mut exp = vec![0i64; d];
        for (e, coef) in &self.terms {
            let rows: Vec<&[(i64, Rational)]> = e.iter().enumerate().map(|(i, k)| &factors[i][k as usize][..]).collect();
            let mut pos = vec![0usize; d];
            'outer: loop {
                let mut val = coef.clone();
                for i in 0..d {
                    let (j, f) = &rows[i][pos[i]];
                    exp[i] = *j;
                    if !f.is_one() {
                        val *= f;
                    }
                }
                terms.push((ExpVec::new(&exp), val));
                for i in (0..d).rev() {
                    pos[i] += 1;
                    if pos[i] < rows[i].len() {
                        continue 'outer;
                    }
                    pos[i] = 0;
                }
                break;
            }
        }
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(self.with_terms(collapse_sorted(terms)))
    }

    /// `h(alpha)`.
    pub fn eval(&self, alpha: &QVec) -> Result<Rational> {
        check_dim(self.dim, alpha.dim())?;
        Ok(self
            .terms
            .iter()
            .fold(Rational::zero(), |acc, (e, c)| acc + c * alpha.power(e)))
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. Division by leading terms in lexicographic order.
    pub fn div_exact(&self, divisor: &PolyH) -> Option<PolyH> {
        assert_eq!(self.dim, divisor.dim);
        let (lead_e, lead_c) = divisor.leading_term()?;
        let (lead_e, lead_c) = (lead_e.clone(), lead_c.clone());
        let mut rem = self.clone();
        let mut quo = PolyH::zero(self.dim);
        while let Some((e, c)) = rem.leading_term() {
            if !e.dominates(&lead_e) {
                return None;
            }
            let te = e.sub(&lead_e);
            let tc = c / &lead_c;
            let t = PolyH::monomial(te, tc).expect("nonnegative quotient exponent");
            rem = &rem - &(&t * divisor);
            quo.add_scaled(&t, &Rational::one());
        }
        Some(quo)
    }

    /// Linear form `(u|D) + c`.
    pub fn linear(u: &QVec, c: &Rational) -> PolyH {
        let d = u.dim();
        let mut p = PolyH::constant(d, c.clone());
        for (i, ui) in u.iter().enumerate() {
            p.add_term(ExpVec::unit(d, i), ui.clone());
        }
        p
    }

    /// Terms of total degree `< bound`.
    pub fn truncate_below(&self, bound: i64) -> PolyH {
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.total_degree() < bound)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            _domain: PhantomData,
        }
    }
}

/// Sum a sorted run of terms with repeats, dropping zeros.
fn collapse_sorted(sorted: Vec<(ExpVec, Rational)>) -> Vec<(ExpVec, Rational)> {
    let mut out: Vec<(ExpVec, Rational)> = Vec::with_capacity(sorted.len());
    for (e, c) in sorted {
        match out.last_mut() {
            Some(last) if last.0 == e => last.1 += c,
            _ => {
                if out.last().is_some_and(|l| l.1.is_zero()) {
                    out.pop();
                }
                out.push((e, c));
            }
        }
    }
    if out.last().is_some_and(|l| l.1.is_zero()) {
        out.pop();
    }
    out
}

/// Merge strictly sorted terms with a sorted stream, summing equal exponents.
fn merge(a: &[(ExpVec, Rational)], b: impl Iterator<Item = (ExpVec, Rational)>) -> Vec<(ExpVec, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.size_hint().0);
    let mut left = a.iter().peekable();
    for (e, c) in b {
        while let Some((le, lc)) = left.peek() {
            if *le < e {
                out.push((le.clone(), lc.clone()));
                left.next();
            } else {
                break;
            }
        }
        match left.peek() {
            Some((le, lc)) if le.cmp(&e) == Ordering::Equal => {
                let sum = lc + &c;
                left.next();
                if !sum.is_zero() {
                    out.push((e, sum));
                }
            }
            _ => {
                if !c.is_zero() {
                    out.push((e, c));
                }
            }
        }
    }
    out.extend(left.cloned());
    out
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl<K: ExponentDomain> $tr<&Poly<K>> for &Poly<K> {
            type Output = Poly<K>;
            /// Panics on dimension mismatch; see the `try_*` variants.
            fn $method(self, rhs: &Poly<K>) -> Poly<K> {
                self.$try(rhs).expect("polynomial dimension mismatch")
            }
        }
        impl<K: ExponentDomain> $tr<Poly<K>> for Poly<K> {
            type Output = Poly<K>;
            fn $method(self, rhs: Poly<K>) -> Poly<K> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<K: ExponentDomain> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        self.scale(&-Rational::one())
    }
}

impl<K: ExponentDomain> Neg for Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        -&self
    }
}

impl<K: ExponentDomain> fmt::Display for Poly<K> {
    /// Canonical rendering, terms in lexicographic exponent order:
    /// `9 - 6*D1 + D1^2`, `3*x^(1,-2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", K::render_monomial(e))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), K::render_monomial(e))?;
            }
        }
        Ok(())
    }
}

impl<K: ExponentDomain> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.dim, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qr;

    fn d(i: usize, dim: usize) -> PolyH {
        PolyH::var(dim, i)
    }

    fn c(dim: usize, n: i64) -> PolyH {
        PolyH::constant(dim, q(n))
    }

    /// Schoolbook expansion on dense coefficient arrays, one variable.
    fn schoolbook(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn from_dense(coeffs: &[i64]) -> PolyH {
        PolyH::from_terms(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &n)| (ExpVec::new(&[k as i64]), q(n))),
        )
        .unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let p = &c(1, 1) + &d(0, 1);
        let m = &c(1, 1) - &d(0, 1);
        assert_eq!(&p * &m, &c(1, 1) - &d(0, 1).pow(2));
    }

    #[test]
    fn laurent_exponents_add() {
        let a = LaurentPoly::monomial(ExpVec::new(&[1, 0]), q(1)).unwrap();
        let b = LaurentPoly::monomial(ExpVec::new(&[-1, 2]), q(1)).unwrap();
        let prod = &a * &b;
        assert_eq!(prod, LaurentPoly::monomial(ExpVec::new(&[0, 2]), q(1)).unwrap());
        assert_eq!(prod.to_string(), "x^(0,2)");
    }

    #[test]
    fn shifted_square_matches_schoolbook() {
        let t = &d(0, 1) - &c(1, 3);
        let expected = from_dense(&schoolbook(&[-3, 1], &[-3, 1]));
        assert_eq!(&t * &t, expected);
        assert_eq!(expected.to_string(), "9 - 6*D1 + D1^2");
    }

    #[test]
    fn shift_examples() {
        let c10 = QVec::from_ints(&[1, 0]);
        assert_eq!(d(0, 2).shift(&c10).unwrap(), &d(0, 2) - &c(2, 1));
        // (D1 - 1)^2 expanded by the schoolbook oracle
        let sq = d(0, 1).pow(2).shift(&QVec::from_ints(&[1])).unwrap();
        assert_eq!(sq, from_dense(&schoolbook(&[-1, 1], &[-1, 1])));
        assert_eq!(c(2, 5).shift(&QVec::from_ints(&[7, -2])).unwrap(), c(2, 5));
    }

    #[test]
    fn eval_examples() {
        let alpha = QVec::new(vec![qr(1, 3), q(4)]);
        let gen = &d(0, 2) - &PolyH::constant(2, qr(1, 3));
        assert_eq!(gen.eval(&alpha).unwrap(), q(0));
        assert_eq!((&d(0, 2) * &d(1, 2)).eval(&QVec::from_ints(&[2, 3])).unwrap(), q(6));
        let sq = from_dense(&[9, -6, 1]);
        assert_eq!(sq.eval(&QVec::from_ints(&[3])).unwrap(), q(0));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(d(0, 1).try_mul(&d(0, 2)).is_err());
        assert!(d(0, 1).shift(&QVec::ones(2)).is_err());
        assert!(d(0, 1).eval(&QVec::ones(3)).is_err());
    }

    #[test]
    fn ordinary_rejects_negative_exponents() {
        assert!(PolyH::monomial(ExpVec::new(&[-1]), q(1)).is_err());
    }

    #[test]
    fn exact_division() {
        let a = &d(0, 2) + &d(1, 2);
        let b = &d(0, 2) - &c(2, 2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!((&prod + &c(2, 1)).div_exact(&a).is_none());
    }

    #[test]
    fn rendering() {
        let p = PolyH::from_terms(
            2,
            [
                (ExpVec::new(&[0, 0]), qr(-1, 2)),
                (ExpVec::new(&[1, 1]), q(1)),
                (ExpVec::new(&[3, 0]), q(2)),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "-1/2 + D1*D2 + 2*D1^3");
        let l = LaurentPoly::monomial(ExpVec::new(&[1, -2]), q(3)).unwrap();
        assert_eq!(l.to_string(), "3*x^(1,-2)");
        assert_eq!(PolyH::zero(3).to_string(), "0");
    }
}
