//! Operator expressions built from `D(u,r)` and `x^r`, their brackets, and
//! application to module vectors.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exact::{binomial, fmt_rational, q, ExpVec, QVec, Rational};
use crate::module::{AdmissibleModule, ModVec};

/// A generator: `D(u,r) = x^r sum u_i D_i` or the multiplication `x^r`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    D { u: QVec, r: ExpVec },
    X(ExpVec),
}

impl Atom {
    pub fn dim(&self) -> usize {
        match self {
            Atom::D { u, .. } => u.dim(),
            Atom::X(r) => r.dim(),
        }
    }

    pub fn apply(&self, module: &dyn AdmissibleModule, v: &ModVec) -> Result<ModVec> {
        match self {
            Atom::D { u, r } => module.act_d(u, r, v),
            Atom::X(r) => module.act_x(r, v),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::D { u, r } => write!(f, "D({u},{r})"),
            Atom::X(r) => write!(f, "x^{r}"),
        }
    }
}

/// Rational combination of words; a word `[a1, a2, a3]` means `a1 a2 a3`
/// and is applied right to left. The empty word is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct OpExpr {
    dim: usize,
    terms: Vec<(Rational, Vec<Atom>)>,
}

impl fmt::Debug for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpExpr({self})")
    }
}

impl OpExpr {
    pub fn zero(dim: usize) -> Self {
        OpExpr { dim, terms: Vec::new() }
    }

    pub fn identity(dim: usize) -> Self {
        OpExpr {
            dim,
            terms: vec![(Rational::one(), Vec::new())],
        }
    }

    pub fn atom(a: Atom) -> Self {
        OpExpr {
            dim: a.dim(),
            terms: vec![(Rational::one(), vec![a])],
        }
    }

    pub fn d(u: &QVec, r: &ExpVec) -> Result<Self> {
        check_dim(u.dim(), r.dim())?;
        Ok(Self::atom(Atom::D { u: u.clone(), r: r.clone() }))
    }

    pub fn x(r: &ExpVec) -> Self {
        Self::atom(Atom::X(r.clone()))
    }

    /// Product of atoms, leftmost applied last.
    pub fn word(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            check_dim(dim, a.dim())?;
        }
        Ok(OpExpr {
            dim,
            terms: vec![(Rational::one(), atoms)],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Rational, Vec<Atom>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, c: Rational, word: Vec<Atom>) {
        if c.is_zero() {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|(_, w)| *w == word) {
            self.terms[pos].0 += c;
            if self.terms[pos].0.is_zero() {
                self.terms.remove(pos);
            }
        } else {
            self.terms.push((c, word));
        }
    }

    pub fn add(&self, other: &OpExpr) -> Result<OpExpr> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &OpExpr) -> Result<OpExpr> {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn add_scaled(&self, other: &OpExpr, c: &Rational) -> Result<OpExpr> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (k, w) in &other.terms {
            out.push(k * c, w.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> OpExpr {
        let mut out = OpExpr::zero(self.dim);
        for (k, w) in &self.terms {
            out.push(k * c, w.clone());
        }
        out
    }

    /// Product `self * other` (apply `other` first).
    pub fn compose(&self, other: &OpExpr) -> Result<OpExpr> {
        check_dim(self.dim, other.dim)?;
        let mut out = OpExpr::zero(self.dim);
        for (a, wa) in &self.terms {
            for (b, wb) in &other.terms {
                let mut w = wa.clone();
                w.extend(wb.iter().cloned());
                out.push(a * b, w);
            }
        }
        Ok(out)
    }

    /// Apply to a module vector, atom by atom from the right.
    pub fn apply(&self, module: &dyn AdmissibleModule, v: &ModVec) -> Result<ModVec> {
        check_dim(self.dim, module.d())?;
        let mut out = module.zero();
        for (c, word) in &self.terms {
            let mut cur = v.clone();
            for atom in word.iter().rev() {
                cur = atom.apply(module, &cur)?;
            }
            out = out.add_scaled(&cur, c)?;
        }
        Ok(out)
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (c, word)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let body = if word.is_empty() {
                "1".to_string()
            } else {
                word.iter().map(Atom::to_string).collect::<Vec<_>>().join("*")
            };
            if mag.is_one() {
                write!(f, "{body}")?;
            } else if word.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else {
                write!(f, "{}*{body}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

/// `apply_op`: apply an expression to a vector of a module.
pub fn apply_op(expr: &OpExpr, module: &dyn AdmissibleModule, v: &ModVec) -> Result<ModVec> {
    expr.apply(module, v)
}

/// `[D(u,r), D(v,s)] = D(w, r+s)` with `w = (u|s) v - (v|r) u`; zero when `w = 0`.
pub fn bracket_ww(u: &QVec, r: &ExpVec, v: &QVec, s: &ExpVec) -> Result<OpExpr> {
    let d = u.dim();
    for n in [v.dim(), r.dim(), s.dim()] {
        check_dim(d, n)?;
    }
    let w = v.scale(&u.dot_exp(s)).sub(&u.scale(&v.dot_exp(r)));
    if w.is_zero() {
        Ok(OpExpr::zero(d))
    } else {
        OpExpr::d(&w, &r.add(s))
    }
}

/// `[D(u,r), x^m] = (u|m) x^{r+m}`.
pub fn bracket_wa(u: &QVec, r: &ExpVec, m: &ExpVec) -> Result<(Rational, ExpVec)> {
    check_dim(u.dim(), r.dim())?;
    check_dim(u.dim(), m.dim())?;
    Ok((u.dot_exp(m), r.add(m)))
}

/// Element of the extended Witt algebra in normal form:
/// `sum_r D(u_r, r) + sum_r c_r x^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    dim: usize,
    vector_fields: BTreeMap<ExpVec, QVec>,
    functions: BTreeMap<ExpVec, Rational>,
}

impl LieElement {
    pub fn zero(dim: usize) -> Self {
        LieElement {
            dim,
            vector_fields: BTreeMap::new(),
            functions: BTreeMap::new(),
        }
    }

    pub fn d(u: &QVec, r: &ExpVec) -> Result<Self> {
        check_dim(u.dim(), r.dim())?;
        let mut e = Self::zero(u.dim());
        e.add_d(u, r);
        Ok(e)
    }

    pub fn x(r: &ExpVec) -> Self {
        let mut e = Self::zero(r.dim());
        e.add_x(r, &Rational::one());
        e
    }

    fn add_d(&mut self, u: &QVec, r: &ExpVec) {
        let slot = self
            .vector_fields
            .entry(r.clone())
            .or_insert_with(|| QVec::zeros(self.dim));
        *slot = slot.add(u);
        if slot.is_zero() {
            self.vector_fields.remove(r);
        }
    }

    fn add_x(&mut self, r: &ExpVec, c: &Rational) {
        let slot = self.functions.entry(r.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.functions.remove(r);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.vector_fields.is_empty() && self.functions.is_empty()
    }

    pub fn add_scaled(&self, other: &LieElement, c: &Rational) -> Result<LieElement> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for (r, u) in &other.vector_fields {
            out.add_d(&u.scale(c), r);
        }
        for (r, k) in &other.functions {
            out.add_x(r, &(k * c));
        }
        Ok(out)
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        self.add_scaled(other, &Rational::one())
    }

    /// The Lie bracket, extended bilinearly.
    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        check_dim(self.dim, other.dim)?;
        let mut out = LieElement::zero(self.dim);
        for (r, u) in &self.vector_fields {
            for (s, v) in &other.vector_fields {
                let w = v.scale(&u.dot_exp(s)).sub(&u.scale(&v.dot_exp(r)));
                out.add_d(&w, &r.add(s));
            }
            for (m, c) in &other.functions {
                let (k, e) = bracket_wa(u, r, m)?;
                out.add_x(&e, &(k * c));
            }
        }
        for (m, c) in &self.functions {
            for (s, v) in &other.vector_fields {
                let (k, e) = bracket_wa(v, s, m)?;
                out.add_x(&e, &-(k * c));
            }
        }
        Ok(out)
    }

    /// The same element as a sum of single-atom words.
    pub fn to_op(&self) -> OpExpr {
        let mut out = OpExpr::zero(self.dim);
        for (r, u) in &self.vector_fields {
            out.push(Rational::one(), vec![Atom::D { u: u.clone(), r: r.clone() }]);
        }
        for (r, c) in &self.functions {
            out.push(c.clone(), vec![Atom::X(r.clone())]);
        }
        out
    }
}

/// `T(u,r) = x^{-r} D(u,r) - D(u,0)`.
pub fn t_operator(u: &QVec, r: &ExpVec) -> Result<OpExpr> {
    check_dim(u.dim(), r.dim())?;
    let d = u.dim();
    let first = OpExpr::word(
        d,
        vec![Atom::X(r.neg()), Atom::D { u: u.clone(), r: r.clone() }],
    )?;
    // kept as two words even when r = 0
    let mut out = first;
    out.terms.push((-Rational::one(), vec![Atom::D { u: u.clone(), r: ExpVec::zero(d) }]));
    Ok(out)
}

/// `T(u; r, m) = T(u, r+m) - T(u, r) - T(u, m)`.
pub fn t_defect(u: &QVec, r: &ExpVec, m: &ExpVec) -> Result<OpExpr> {
    t_operator(u, &r.add(m))?
        .sub(&t_operator(u, r)?)?
        .sub(&t_operator(u, m)?)
}

/// `z_d = sum_i T(e_i, e_i)`.
pub fn z_d(d: usize) -> Result<OpExpr> {
    let mut out = OpExpr::zero(d);
    for i in 0..d {
        out = out.add(&t_operator(&QVec::basis(d, i), &ExpVec::unit(d, i))?)?;
    }
    Ok(out)
}

/// `sum_{s=0}^{m} (-1)^s C(m,s) D(e_i, alpha - s gamma) D(e_j, beta + s gamma)`
/// with 0-based `i, j` and `m >= 1`.
pub fn differentiator(
    i: usize,
    j: usize,
    alpha: &ExpVec,
    beta: &ExpVec,
    gamma: &ExpVec,
    m: i64,
) -> Result<OpExpr> {
    let d = alpha.dim();
    check_dim(d, beta.dim())?;
    check_dim(d, gamma.dim())?;
    if i >= d || j >= d {
        return Err(Error::OutOfRange(format!("generator index out of range for d = {d}")));
    }
    if m < 1 {
        return Err(Error::InvalidParameter(format!("order must be at least 1, got {m}")));
    }
    let mut out = OpExpr::zero(d);
    for s in 0..=m {
        let sign = if s % 2 == 0 { 1 } else { -1 };
        let c = q(sign * binomial(m, s));
        let word = vec![
            Atom::D { u: QVec::basis(d, i), r: alpha.sub(&gamma.scale(s)) },
            Atom::D { u: QVec::basis(d, j), r: beta.add(&gamma.scale(s)) },
        ];
        out.push(c, word);
    }
    Ok(out)
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &OpExpr, b: &OpExpr) -> Result<OpExpr> {
    a.compose(b)?.sub(&b.compose(a)?)
}
