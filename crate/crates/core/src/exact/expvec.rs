use std::fmt;
use std::ops::Index;

use smallvec::SmallVec;

/// An integer exponent vector in Z^d. Ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ExpVec(SmallVec<[i64; 4]>);

impl ExpVec {
    pub fn new(entries: &[i64]) -> Self {
        ExpVec(SmallVec::from_slice(entries))
    }

    pub fn zero(d: usize) -> Self {
        ExpVec(SmallVec::from_elem(0, d))
    }

    /// `e_i` with 0-based `i`.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut e = Self::zero(d);
        e.0[i] = 1;
        e
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `||e|| = sum |e_i|`.
    pub fn norm1(&self) -> i64 {
        self.0.iter().map(|e| e.abs()).sum()
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.dim(), other.dim());
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.dim(), other.dim());
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> ExpVec {
        ExpVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: i64) -> ExpVec {
        ExpVec(self.0.iter().map(|a| a * c).collect())
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &ExpVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn with(&self, i: usize, value: i64) -> ExpVec {
        let mut e = self.clone();
        e.0[i] = value;
        e
    }

    /// Every vector in `{-radius..=radius}^d`, in lexicographic order.
    pub fn window(d: usize, radius: i64) -> Vec<ExpVec> {
        Self::boxed(&vec![-radius; d], &vec![radius; d])
    }

    /// Every vector with `lo_i <= e_i <= hi_i`, in lexicographic order.
    pub fn boxed(lo: &[i64], hi: &[i64]) -> Vec<ExpVec> {
        let mut out = vec![ExpVec(SmallVec::new())];
        for (&l, &h) in lo.iter().zip(hi) {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (l..=h).map(move |x| {
                        let mut v = prefix.0.clone();
                        v.push(x);
                        ExpVec(v)
                    })
                })
                .collect();
        }
        out
    }

    /// Nonnegative vectors of total degree `< bound`.
    pub fn monomials_below(d: usize, bound: i64) -> Vec<ExpVec> {
        if bound <= 0 {
            return Vec::new();
        }
        Self::boxed(&vec![0; d], &vec![bound - 1; d])
            .into_iter()
            .filter(|e| e.total_degree() < bound)
            .collect()
    }
}

impl Index<usize> for ExpVec {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
