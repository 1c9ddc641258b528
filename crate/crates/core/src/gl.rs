//! Finite-dimensional `gl_d`-modules given by action matrices of the
//! elementary matrices `E_ij`.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::exact::{binomial, fmt_rational, parse_rational, q, ExpVec, QVec, Rational};
use crate::linalg::QMatrix;

/// A strictly increasing subset of `{0..d-1}`; labels the basis vector
/// `e_{s_1} ^ ... ^ e_{s_k}` of an exterior power.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Wedge(Vec<usize>);

impl Wedge {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "wedge indices must be strictly increasing: {indices:?}"
            )));
        }
        Ok(Wedge(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All k-subsets of `{0..d-1}` in lexicographic order.
    pub fn all(d: usize, k: usize) -> Vec<Wedge> {
        fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Wedge>) {
            if cur.len() == k {
                out.push(Wedge(cur.clone()));
                return;
            }
            for i in start..d {
                cur.push(i);
                rec(i + 1, d, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if k <= d {
            rec(0, d, k, &mut Vec::new(), &mut out);
        }
        out
    }

    /// `e_j ^ self = sign * e_{S u {j}}`, or `None` when `j` is already in S.
    pub fn wedge_left(&self, j: usize) -> Option<(i64, Wedge)> {
        match self.0.binary_search(&j) {
            Ok(_) => None,
            Err(pos) => {
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                let mut v = self.0.clone();
                v.insert(pos, j);
                Some((sign, Wedge(v)))
            }
        }
    }

    /// Replace the factor `e_j` (in position) by `e_i`, re-sorting with sign.
    /// `None` if `j` is absent or `i` already present (and `i != j`).
    fn substitute(&self, j: usize, i: usize) -> Option<(i64, Wedge)> {
        let pos = self.0.iter().position(|&s| s == j)?;
        if i == j {
            return Some((1, self.clone()));
        }
        if self.0.contains(&i) {
            return None;
        }
        let mut v = self.0.clone();
        v[pos] = i;
        // count transpositions needed to sort
        let mut sign = 1;
        let mut p = pos;
        while p > 0 && v[p - 1] > v[p] {
            v.swap(p - 1, p);
            p -= 1;
            sign = -sign;
        }
        while p + 1 < v.len() && v[p] > v[p + 1] {
            v.swap(p, p + 1);
            p += 1;
            sign = -sign;
        }
        Some((sign, Wedge(v)))
    }

    pub fn label(&self) -> String {
        if self.0.is_empty() {
            "1".to_string()
        } else {
            self.0
                .iter()
                .map(|i| format!("e{}", i + 1))
                .collect::<Vec<_>>()
                .join("^")
        }
    }
}

/// How a module was built; only used for descriptions and for recognizing
/// exterior powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlKind {
    Exterior(usize),
    OneDim,
    Tensor,
    Custom,
    Zero,
}

/// A finite-dimensional `gl_d`-module.
#[derive(Clone, PartialEq)]
pub struct GlModule {
    d: usize,
    dim: usize,
    labels: Vec<String>,
    // action[i * d + j] is the matrix of E_ij
    action: Vec<QMatrix>,
    b: Option<Rational>,
    kind: GlKind,
}

impl fmt::Debug for GlModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GlModule({})", self.describe())
    }
}

impl GlModule {
    /// Validate user-supplied action matrices against the `gl_d` relations
    /// and, when given, the identity scalar.
    pub fn from_matrices(
        d: usize,
        dim: usize,
        labels: Option<Vec<String>>,
        action: Vec<QMatrix>,
        b: Option<Rational>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        check_dim(d * d, action.len())?;
        for m in &action {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidParameter(format!(
                    "action matrix has shape {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let labels = labels.unwrap_or_else(|| (0..dim).map(|i| format!("v{}", i + 1)).collect());
        check_dim(dim, labels.len())?;
        let module = GlModule {
            d,
            dim,
            labels,
            action,
            b: None,
            kind: GlKind::Custom,
        };
        module.check_relations().map_err(Error::InvalidParameter)?;
        let computed = module.identity_scalar();
        let b = match (b, computed) {
            (Some(b), Some(c)) if b == c => Some(b),
            (Some(b), _) => {
                return Err(Error::InvalidParameter(format!(
                    "identity matrix does not act as {}",
                    fmt_rational(&b)
                )))
            }
            (None, c) => c,
        };
        Ok(GlModule { b, ..module })
    }

    /// `k`-th exterior power of the natural module; the identity acts by `k`.
    pub fn exterior_power(d: usize, k: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        if k > d {
            return Err(Error::OutOfRange(format!("exterior degree {k} exceeds d = {d}")));
        }
        let basis = Wedge::all(d, k);
        let dim = basis.len();
        let mut action = vec![QMatrix::zeros(dim, dim); d * d];
        for (col, s) in basis.iter().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    // E_ij e_j = e_i, Leibniz rule over the factors
                    if let Some((sign, t)) = s.substitute(j, i) {
                        let row = basis.binary_search(&t).expect("wedge basis is sorted");
                        action[i * d + j].add_at(row, col, &q(sign));
                    }
                }
            }
        }
        Ok(GlModule {
            d,
            dim,
            labels: basis.iter().map(Wedge::label).collect(),
            action,
            b: Some(q(k as i64)),
            kind: GlKind::Exterior(k),
        })
    }

    pub fn natural(d: usize) -> Result<Self> {
        Self::exterior_power(d, 1)
    }

    /// One-dimensional module on which the identity acts by `b`; `E_ii` act
    /// by `b/d` and off-diagonal `E_ij` by zero. `b = 0` is the trivial module.
    pub fn one_dim(d: usize, b: Rational) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        let c = &b / q(d as i64);
        let mut action = vec![QMatrix::zeros(1, 1); d * d];
        for i in 0..d {
            action[i * d + i] = QMatrix::scalar(1, &c);
        }
        Ok(GlModule {
            d,
            dim: 1,
            labels: vec!["1".into()],
            action,
            b: Some(b),
            kind: GlKind::OneDim,
        })
    }

    pub fn trivial(d: usize) -> Result<Self> {
        Self::one_dim(d, Rational::zero())
    }

    /// The zero module; target of the last map in the exterior chain.
    pub fn zero_module(d: usize) -> Self {
        GlModule {
            d,
            dim: 0,
            labels: Vec::new(),
            action: vec![QMatrix::zeros(0, 0); d * d],
            b: Some(Rational::zero()),
            kind: GlKind::Zero,
        }
    }

    /// `V1 (x) V2` with the Leibniz action; basis index `i * dim2 + j`.
    pub fn tensor(a: &GlModule, b: &GlModule) -> Result<Self> {
        check_dim(a.d, b.d)?;
        let d = a.d;
        let ia = QMatrix::identity(a.dim);
        let ib = QMatrix::identity(b.dim);
        let action = (0..d * d)
            .map(|k| a.action[k].kron(&ib).add(&ia.kron(&b.action[k])))
            .collect();
        let mut labels = Vec::with_capacity(a.dim * b.dim);
        for la in &a.labels {
            for lb in &b.labels {
                labels.push(format!("({la})(x)({lb})"));
            }
        }
        let bsum = match (&a.b, &b.b) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        Ok(GlModule {
            d,
            dim: a.dim * b.dim,
            labels,
            action,
            b: bsum,
            kind: GlKind::Tensor,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self) -> &GlKind {
        &self.kind
    }

    /// Declared identity scalar `b`.
    pub fn b(&self) -> Option<&Rational> {
        self.b.as_ref()
    }

    /// Matrix of `E_ij` (0-based indices).
    pub fn e(&self, i: usize, j: usize) -> &QMatrix {
        &self.action[i * self.d + j]
    }

    /// Action of a general matrix `X = sum X_ij E_ij`, given as a `d x d`
    /// matrix.
    pub fn matrix_action(&self, x: &QMatrix) -> QMatrix {
        let mut out = QMatrix::zeros(self.dim, self.dim);
        for i in 0..self.d {
            for j in 0..self.d {
                let c = x.get(i, j);
                if !c.is_zero() {
                    out = out.add(&self.e(i, j).scale(c));
                }
            }
        }
        out
    }

    /// Action of the rank-one matrix `r u^T`.
    pub fn rank_one(&self, r: &ExpVec, u: &QVec) -> QMatrix {
        let mut out = QMatrix::zeros(self.dim, self.dim);
        for i in 0..self.d {
            if r[i] == 0 {
                continue;
            }
            for j in 0..self.d {
                if u[j].is_zero() {
                    continue;
                }
                out = out.add(&self.e(i, j).scale(&(q(r[i]) * &u[j])));
            }
        }
        out
    }

    pub fn act(&self, i: usize, j: usize, v: &[Rational]) -> Vec<Rational> {
        self.e(i, j).mul_vec(v)
    }

    /// Every `E_ij` acts as zero.
    pub fn is_zero_action(&self) -> bool {
        self.action.iter().all(QMatrix::is_zero)
    }

    /// Scalar by which `sum_i E_ii` acts, if it acts by a scalar.
    pub fn identity_scalar(&self) -> Option<Rational> {
        if self.dim == 0 {
            return Some(Rational::zero());
        }
        let mut id = QMatrix::zeros(self.dim, self.dim);
        for i in 0..self.d {
            id = id.add(self.e(i, i));
        }
        let c = id.get(0, 0).clone();
        id.is_scalar(&c).then_some(c)
    }

    /// `[E_ij, E_kl] = delta_jk E_il - delta_li E_kj`, exactly on the whole
    /// basis. Returns a witness on failure.
    pub fn check_relations(&self) -> std::result::Result<(), String> {
        let d = self.d;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let lhs = self.e(i, j).commutator(self.e(k, l));
                        let mut rhs = QMatrix::zeros(self.dim, self.dim);
                        if j == k {
                            rhs = rhs.add(self.e(i, l));
                        }
                        if l == i {
                            rhs = rhs.sub(self.e(k, j));
                        }
                        if lhs != rhs {
                            return Err(format!(
                                "[E{}{}, E{}{}] relation fails",
                                i + 1,
                                j + 1,
                                k + 1,
                                l + 1
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            GlKind::Exterior(k) => format!("wedge^{k}(Q^{})", self.d),
            GlKind::OneDim => format!(
                "one-dim(b={})",
                fmt_rational(self.b.as_ref().expect("one-dim module has b"))
            ),
            GlKind::Tensor => format!("tensor(dim={})", self.dim),
            GlKind::Custom => format!("custom(dim={})", self.dim),
            GlKind::Zero => "zero".into(),
        }
    }

    /// Joint eigenspace decomposition of the `E_ii` with eigenvalues in
    /// `lambda + Z^d`.
    pub fn weight_decompose(&self, lambda: &QVec) -> Result<WeightDecomposition> {
        check_dim(self.d, lambda.dim())?;
        let n = self.dim;
        // Each part: (mu so far, basis of the joint eigenspace as columns)
        let mut parts: Vec<(Vec<i64>, Vec<Vec<Rational>>)> = vec![(
            Vec::new(),
            (0..n)
                .map(|k| {
                    let mut v = vec![Rational::zero(); n];
                    v[k] = Rational::one();
                    v
                })
                .collect(),
        )];
        for i in 0..self.d {
            let a = self.e(i, i);
            let bound = a.norm_inf();
            let lo = (-&bound - &lambda[i]).ceil().to_integer();
            let hi = (&bound - &lambda[i]).floor().to_integer();
            let lo = i64::try_from(lo).map_err(|_| Error::NotDiagonalizable("eigenvalue bound too large".into()))?;
            let hi = i64::try_from(hi).map_err(|_| Error::NotDiagonalizable("eigenvalue bound too large".into()))?;
            let mut next = Vec::new();
            for (mu, basis) in parts {
                if basis.is_empty() {
                    continue;
                }
                let b = QMatrix::from_columns(n, &basis);
                let ab = a.mul(&b);
                let mut found = 0;
                for m in lo..=hi {
                    let ev = &lambda[i] + q(m);
                    let shifted = ab.sub(&b.scale(&ev));
                    let kernel = shifted.nullspace();
                    if kernel.is_empty() {
                        continue;
                    }
                    found += kernel.len();
                    let vectors: Vec<Vec<Rational>> = kernel.iter().map(|y| b.mul_vec(y)).collect();
                    let mut mu2 = mu.clone();
                    mu2.push(m);
                    next.push((mu2, vectors));
                }
                if found != basis.len() {
                    return Err(Error::NotDiagonalizable(format!(
                        "E_{}{} is not diagonalizable with eigenvalues in {} + Z",
                        i + 1,
                        i + 1,
                        fmt_rational(&lambda[i])
                    )));
                }
            }
            parts = next;
        }
        let mut spaces = BTreeMap::new();
        let mut columns = Vec::new();
        let mut weights = Vec::new();
        for (mu, basis) in parts {
            let mu = ExpVec::new(&mu);
            for v in &basis {
                columns.push(v.clone());
                weights.push(mu.clone());
            }
            spaces.insert(mu, basis);
        }
        let change = QMatrix::from_columns(n, &columns);
        let inverse = change
            .inverse()
            .ok_or_else(|| Error::NotDiagonalizable("weight vectors do not span".into()))?;
        Ok(WeightDecomposition {
            lambda: lambda.clone(),
            spaces,
            weights,
            change,
            inverse,
        })
    }
}

/// `V = sum_mu V_{lambda + mu}` with an explicit weight basis.
#[derive(Clone, Debug)]
pub struct WeightDecomposition {
    pub lambda: QVec,
    /// mu -> basis of the weight space (vectors in module coordinates)
    pub spaces: BTreeMap<ExpVec, Vec<Vec<Rational>>>,
    /// weight of each column of `change`
    pub weights: Vec<ExpVec>,
    /// columns form a weight basis
    pub change: QMatrix,
    pub inverse: QMatrix,
}

impl WeightDecomposition {
    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(Vec::len).sum()
    }

    /// Split `v` into weight components: `(mu, component)` pairs, zero
    /// components dropped.
    pub fn components(&self, v: &[Rational]) -> Vec<(ExpVec, Vec<Rational>)> {
        let coords = self.inverse.mul_vec(v);
        let n = v.len();
        let mut by_weight: BTreeMap<ExpVec, Vec<Rational>> = BTreeMap::new();
        for (c, (col, mu)) in coords.iter().zip(self.weights.iter().enumerate()) {
            if c.is_zero() {
                continue;
            }
            let acc = by_weight
                .entry(mu.clone())
                .or_insert_with(|| vec![Rational::zero(); n]);
            for (k, x) in self.change.column(col).iter().enumerate() {
                acc[k] += c * x;
            }
        }
        by_weight.into_iter().collect()
    }
}

/// `(r u^T) v = (u|v) r` on the natural module.
pub fn rank_one_act(r: &QVec, u: &QVec, v: &QVec) -> Result<QVec> {
    check_dim(r.dim(), u.dim())?;
    let c = u.pairing(v)?;
    Ok(r.scale(&c))
}

/// `dim wedge^k = C(d, k)`.
pub fn wedge_dim(d: usize, k: usize) -> usize {
    binomial(d as i64, k as i64) as usize
}

/// Serializable description of a `gl_d`-module.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GlSpec {
    Exterior { k: usize },
    Trivial,
    OneDim { b: String },
    Tensor { left: Box<GlSpec>, right: Box<GlSpec> },
    Matrices {
        dim: usize,
        #[serde(default)]
        b: Option<String>,
        /// entries: `[i, j, row, col, "value"]`, `i, j` 1-based, row/col 0-based
        entries: Vec<(usize, usize, usize, usize, String)>,
    },
}

impl GlSpec {
    pub fn build(&self, d: usize) -> Result<GlModule> {
        match self {
            GlSpec::Exterior { k } => GlModule::exterior_power(d, *k),
            GlSpec::Trivial => GlModule::trivial(d),
            GlSpec::OneDim { b } => GlModule::one_dim(d, parse_rational(b)?),
            GlSpec::Tensor { left, right } => GlModule::tensor(&left.build(d)?, &right.build(d)?),
            GlSpec::Matrices { dim, b, entries } => {
                let mut action = vec![QMatrix::zeros(*dim, *dim); d * d];
                for (i, j, row, col, val) in entries {
                    if *i == 0 || *j == 0 || *i > d || *j > d || row >= dim || col >= dim {
                        return Err(Error::OutOfRange(format!(
                            "matrix entry ({i},{j},{row},{col}) out of range"
                        )));
                    }
                    action[(i - 1) * d + (j - 1)].set(*row, *col, parse_rational(val)?);
                }
                let b = b.as_deref().map(parse_rational).transpose()?;
                GlModule::from_matrices(d, *dim, None, action, b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qr;

    /// Independent Leibniz expansion: apply E_ij to each factor of a wedge of
    /// standard vectors and antisymmetrize by sorting with sign.
    fn leibniz(d: usize, i: usize, j: usize, s: &[usize]) -> BTreeMap<Vec<usize>, i64> {
        let mut out = BTreeMap::new();
        for p in 0..s.len() {
            if s[p] != j {
                continue;
            }
            let mut v = s.to_vec();
            v[p] = i;
            // bubble sort counting swaps; repeated index kills the term
            let mut sign = 1;
            for a in 0..v.len() {
                for b in 0..v.len() - 1 - a {
                    if v[b] > v[b + 1] {
                        v.swap(b, b + 1);
                        sign = -sign;
                    }
                }
            }
            if v.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            *out.entry(v).or_insert(0) += sign;
        }
        let _ = d;
        out.retain(|_, c| *c != 0);
        out
    }

    #[test]
    fn exterior_examples() {
        let triv = GlModule::exterior_power(3, 0).unwrap();
        assert_eq!((triv.dim(), triv.b().cloned()), (1, Some(q(0))));
        let w2 = GlModule::exterior_power(3, 2).unwrap();
        assert_eq!(w2.dim(), 3);
        // E_12 (e2 ^ e3) = e1 ^ e3
        let basis = Wedge::all(3, 2);
        let col = basis.iter().position(|w| w.indices() == [1, 2]).unwrap();
        let row = basis.iter().position(|w| w.indices() == [0, 2]).unwrap();
        assert_eq!(w2.e(0, 1).get(row, col), &q(1));
        let top = GlModule::exterior_power(2, 2).unwrap();
        assert_eq!(top.dim(), 1);
        assert_eq!(top.e(0, 0).get(0, 0), &q(1));
        assert_eq!(top.b(), Some(&q(2)));
        assert!(GlModule::exterior_power(2, 3).is_err());
    }

    #[test]
    fn exterior_matches_leibniz_oracle() {
        for d in 1..=4 {
            for k in 0..=d {
                let m = GlModule::exterior_power(d, k).unwrap();
                let basis = Wedge::all(d, k);
                for i in 0..d {
                    for j in 0..d {
                        for (col, s) in basis.iter().enumerate() {
                            let expect = leibniz(d, i, j, s.indices());
                            for (row, t) in basis.iter().enumerate() {
                                let want = expect.get(t.indices()).copied().unwrap_or(0);
                                assert_eq!(m.e(i, j).get(row, col), &q(want));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn relations_hold_for_builtins() {
        for d in 1..=3 {
            for k in 0..=d {
                let m = GlModule::exterior_power(d, k).unwrap();
                m.check_relations().unwrap();
                assert_eq!(m.dim(), wedge_dim(d, k));
                assert_eq!(m.identity_scalar(), Some(q(k as i64)));
            }
            GlModule::one_dim(d, qr(7, 3)).unwrap().check_relations().unwrap();
        }
        let t = GlModule::tensor(
            &GlModule::natural(3).unwrap(),
            &GlModule::exterior_power(3, 2).unwrap(),
        )
        .unwrap();
        t.check_relations().unwrap();
        assert_eq!(t.b(), Some(&q(3)));
        assert_eq!(t.identity_scalar(), Some(q(3)));
    }

    #[test]
    fn alternating_binomial_sum_vanishes() {
        for d in 1..=6usize {
            let s: i64 = (0..=d)
                .map(|k| if k % 2 == 0 { 1 } else { -1 } * wedge_dim(d, k) as i64)
                .sum();
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn tensor_examples() {
        let triv = GlModule::trivial(2).unwrap();
        let nat = GlModule::natural(2).unwrap();
        let t = GlModule::tensor(&triv, &nat).unwrap();
        assert_eq!(t.dim(), 2);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(t.e(i, j), nat.e(i, j));
            }
        }
        let nn = GlModule::tensor(&nat, &nat).unwrap();
        assert_eq!((nn.dim(), nn.b().cloned()), (4, Some(q(2))));
    }

    #[test]
    fn rank_one_examples() {
        let e1 = QVec::basis(2, 0);
        let e2 = QVec::basis(2, 1);
        assert_eq!(rank_one_act(&e1, &e1, &e1).unwrap(), e1);
        assert!(rank_one_act(&e2, &e1, &e2).unwrap().is_zero());
        let r = QVec::ones(2);
        assert_eq!(rank_one_act(&r, &e1, &e1).unwrap(), r);
    }

    #[test]
    fn rank_one_matrix_matches_natural_action() {
        let nat = GlModule::natural(3).unwrap();
        let r = ExpVec::new(&[1, -2, 0]);
        let u = QVec::new(vec![q(2), qr(1, 2), q(-1)]);
        let m = nat.rank_one(&r, &u);
        for l in 0..3 {
            let v = QVec::basis(3, l);
            let got = m.mul_vec(v.entries());
            let want = rank_one_act(&QVec::from_exp(&r), &u, &v).unwrap();
            assert_eq!(got, want.entries());
        }
    }

    #[test]
    fn weight_examples() {
        let nat = GlModule::natural(2).unwrap();
        let wd = nat.weight_decompose(&QVec::basis(2, 0)).unwrap();
        assert_eq!(wd.spaces.len(), 2);
        assert_eq!(wd.spaces[&ExpVec::new(&[0, 0])], vec![vec![q(1), q(0)]]);
        assert_eq!(wd.spaces[&ExpVec::new(&[-1, 1])], vec![vec![q(0), q(1)]]);

        let w2 = GlModule::exterior_power(3, 2).unwrap();
        let wd = w2.weight_decompose(&QVec::from_ints(&[1, 1, 0])).unwrap();
        assert_eq!(wd.total_dim(), 3);
        assert_eq!(wd.spaces[&ExpVec::zero(3)], vec![vec![q(1), q(0), q(0)]]);

        let triv = GlModule::trivial(2).unwrap();
        let wd = triv.weight_decompose(&QVec::zeros(2)).unwrap();
        assert_eq!(wd.spaces.keys().collect::<Vec<_>>(), vec![&ExpVec::zero(2)]);
    }

    #[test]
    fn weight_decomposition_of_a_non_standard_basis() {
        // natural module in the basis f1 = e1 + e2, f2 = e2
        let p = QMatrix::from_rows(vec![vec![q(1), q(0)], vec![q(1), q(1)]]);
        let pinv = p.inverse().unwrap();
        let nat = GlModule::natural(2).unwrap();
        let action = (0..4)
            .map(|k| pinv.mul(&nat.e(k / 2, k % 2).mul(&p)))
            .collect();
        let m = GlModule::from_matrices(2, 2, None, action, Some(q(1))).unwrap();
        let wd = m.weight_decompose(&QVec::zeros(2)).unwrap();
        assert_eq!(wd.total_dim(), 2);
        let comps = wd.components(&[q(1), q(0)]);
        assert_eq!(comps.len(), 2);
    }

    #[test]
    fn nilpotent_is_not_diagonalizable() {
        let n = QMatrix::from_rows(vec![vec![q(0), q(1)], vec![q(0), q(0)]]);
        let m = GlModule::from_matrices(1, 2, None, vec![n], None).unwrap();
        assert!(matches!(
            m.weight_decompose(&QVec::zeros(1)),
            Err(Error::NotDiagonalizable(_))
        ));
    }

    #[test]
    fn invalid_matrices_rejected() {
        // E_11 = 1, E_22 = 0, E_12 = 1 breaks [E11, E12] = E12 in dim 1
        let one = QMatrix::scalar(1, &q(1));
        let zero = QMatrix::zeros(1, 1);
        let action = vec![one.clone(), one, zero.clone(), zero];
        assert!(GlModule::from_matrices(2, 1, None, action, None).is_err());
    }
}
