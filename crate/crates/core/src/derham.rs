//! The chain `F(P, wedge^k) -> F(P, wedge^{k+1})`, images of its maps as
//! U(h)-submodules of free modules, and their ranks and fibers.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, fmt_rational, qr, ExpVec, PolyH, QVec, Rational};
use crate::gl::Wedge;
use crate::linalg::{sparse, QMatrix, RowSpace, SparseRow};
use crate::module::{basis_vector, ModuleMap, ModuleRef, PiMap};

/// A U(h)-submodule of the free module of rank `ambient`, given by
/// generators with polynomial entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmodulePresentation {
    dim: usize,
    ambient: usize,
    labels: Vec<String>,
    generators: Vec<Vec<PolyH>>,
}

impl SubmodulePresentation {
    pub fn new(dim: usize, ambient: usize, generators: Vec<Vec<PolyH>>) -> Result<Self> {
        for g in &generators {
            if g.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: g.len(),
                });
            }
            if let Some(p) = g.iter().find(|p| p.dim() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        let generators: Vec<_> = generators
            .into_iter()
            .filter(|g| g.iter().any(|p| !p.is_zero()))
            .collect();
        let labels = (0..ambient).map(|i| format!("b{}", i + 1)).collect();
        Ok(SubmodulePresentation {
            dim,
            ambient,
            labels,
            generators,
        })
    }

    /// The whole free module, generated by its standard basis.
    pub fn free(dim: usize, ambient: usize) -> Self {
        let generators = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { PolyH::one(dim) } else { PolyH::zero(dim) })
                    .collect()
            })
            .collect();
        SubmodulePresentation::new(dim, ambient, generators).expect("well formed")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[Vec<PolyH>] {
        &self.generators
    }

    fn max_degree(&self) -> i64 {
        self.generators
            .iter()
            .flatten()
            .filter_map(PolyH::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Generators rewritten in the variables `D - alpha`.
    fn centered_at(&self, alpha: &QVec) -> Result<Vec<Vec<PolyH>>> {
        let back = alpha.neg();
        self.generators
            .iter()
            .map(|g| g.iter().map(|p| p.shift(&back)).collect())
            .collect()
    }
}

impl fmt::Display for SubmodulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "submodule of U(h)^{} with {} generators", self.ambient, self.generators.len())?;
        for g in &self.generators {
            let parts: Vec<String> = g.iter().map(|p| p.to_string()).collect();
            writeln!(f, "  ({})", parts.join(", "))?;
        }
        Ok(())
    }
}

/// Image of `pi_{k-1}`: generated by `pi(w_m (x) e_S)` over the free basis
/// `w_m` of `P` and the `(k-1)`-subsets `S`. Needs `1 <= k <= d + 1`; the
/// case `k = d + 1` is the zero submodule.
pub fn image_submodule(p: &ModuleRef, k: usize) -> Result<SubmodulePresentation> {
    let d = p.d();
    if k == 0 || k > d + 1 {
        return Err(Error::OutOfRange(format!("degree {k} outside 1..={}", d + 1)));
    }
    let rank = p
        .free_rank()
        .ok_or_else(|| Error::Unsupported(format!("{} has no free U(h)-basis", p.describe())))?;
    let pi = PiMap::new(p.clone(), k - 1)?;
    let target = pi.target();
    let ambient = target.free_rank().expect("tensor of a free module");
    let mut generators = Vec::new();
    for s in 0..Wedge::all(d, k - 1).len() {
        for m in 0..rank {
            let img = pi.image_of(basis_vector(&**p, m)?, s)?;
            generators.push(target.free_coordinates(&img)?);
        }
    }
    let labels = (0..ambient).map(|i| target.basis_label(i)).collect();
    SubmodulePresentation::new(d, ambient, generators)?.with_labels(labels)
}

/// Rank over the fraction field of U(h), by fraction-free elimination.
#[allow(clippy::needless_range_loop)]
pub fn generic_rank(s: &SubmodulePresentation) -> Result<usize> {
    let mut m: Vec<Vec<PolyH>> = s.generators.clone();
    let rows = m.len();
    let cols = s.ambient;
    let mut prev = PolyH::one(s.dim);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in rank + 1..rows {
            let factor = m[i][col].clone();
            for j in col + 1..cols {
                let num = &(&pivot * &m[i][j]) - &(&factor * &m[rank][j]);
                m[i][j] = num.div_exact(&prev).ok_or_else(|| {
                    Error::Unsupported("fraction-free elimination produced a remainder".into())
                })?;
            }
            m[i][col] = PolyH::zero(s.dim);
        }
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Ok(rank)
}

/// Rank of the generator matrix evaluated at `point`.
pub fn rank_at(s: &SubmodulePresentation, point: &QVec) -> Result<usize> {
    let rows = s
        .generators
        .iter()
        .map(|g| g.iter().map(|p| p.eval(point)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(QMatrix::from_rows(rows).rank())
}

/// A random point with small rational coordinates.
pub fn random_point(d: usize, rng: &mut ChaCha8Rng) -> QVec {
    QVec::new(
        (0..d)
            .map(|_| qr(rng.gen_range(-97..=97), rng.gen_range(1..=13)))
            .collect(),
    )
}

/// Generic rank plus its cross-check at random points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub point_ranks: Vec<usize>,
}

impl RankReport {
    pub fn agrees(&self) -> bool {
        self.point_ranks.iter().all(|&r| r == self.rank)
    }
}

pub fn rank_with_crosscheck(s: &SubmodulePresentation, rng: &mut ChaCha8Rng, points: usize) -> Result<RankReport> {
    let rank = generic_rank(s)?;
    let point_ranks = (0..points)
        .map(|_| rank_at(s, &random_point(s.dim, rng)))
        .collect::<Result<_>>()?;
    Ok(RankReport { rank, point_ranks })
}

/// Result of a truncated fiber computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberDim {
    /// certified value, when two consecutive truncations agreed
    pub value: Option<usize>,
    /// truncation degree at which the value was certified (or the last tried)
    pub bound: i64,
    /// quotient dimensions for each truncation degree tried
    pub history: Vec<usize>,
}

/// `dim S / I_alpha S`, computed in `F / m^K F` for growing `K` after moving
/// `alpha` to the origin: the image of `S` modulo the image of `m S`.
/// Certified once two consecutive degrees give the same value.
pub fn fiber_dim(s: &SubmodulePresentation, alpha: &QVec, max_bound: i64) -> Result<FiberDim> {
    crate::error::check_dim(s.dim, alpha.dim())?;
    let gens = s.centered_at(alpha)?;
    let start = s.max_degree() + 1;
    let mut history = Vec::new();
    let mut last: Option<usize> = None;
    for k in start..=max_bound.max(start + 1) {
        let q = truncated_quotient(s.dim, &gens, k);
        history.push(q);
        if last == Some(q) {
            return Ok(FiberDim {
                value: Some(q),
                bound: k,
                history,
            });
        }
        last = Some(q);
    }
    Ok(FiberDim {
        value: None,
        bound: max_bound.max(start + 1),
        history,
    })
}

fn truncated_quotient(d: usize, gens: &[Vec<PolyH>], k: i64) -> usize {
    let monos = ExpVec::monomials_below(d, k);
    let index: BTreeMap<&ExpVec, usize> = monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let width = monos.len();
    let row_of = |mono: &ExpVec, g: &[PolyH]| -> SparseRow {
        let mut row = SparseRow::new();
        for (a, p) in g.iter().enumerate() {
            for (e, c) in p.terms() {
                let e = e.add(mono);
                if e.total_degree() < k {
                    row.insert(a * width + index[&e], c.clone());
                }
            }
        }
        row
    };
    let mut space = RowSpace::new();
    for mono in monos.iter().filter(|m| !m.is_zero()) {
        for g in gens {
            space.insert(row_of(mono, g));
        }
    }
    let lower = space.rank();
    let zero = ExpVec::zero(d);
    for g in gens {
        space.insert(row_of(&zero, g));
    }
    space.rank() - lower
}

/// `dim_Q` of the span of the generators when all are homogeneous of degree
/// one; the fiber at the origin in that case. `None` otherwise.
pub fn graded_fiber_at_origin(s: &SubmodulePresentation) -> Option<usize> {
    if !s
        .generators
        .iter()
        .flatten()
        .all(|p| p.is_zero() || p.is_homogeneous_of(1))
    {
        return None;
    }
    let d = s.dim;
    let mut space = RowSpace::new();
    for g in &s.generators {
        let mut row = vec![Rational::zero(); s.ambient * d];
        for (a, p) in g.iter().enumerate() {
            for i in 0..d {
                row[a * d + i] = p.coeff(&ExpVec::unit(d, i));
            }
        }
        space.insert(sparse(&row));
    }
    Some(space.rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Free,
    NotFree,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Free => "free",
            Verdict::NotFree => "not_free",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Evidence behind a freeness verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub verdict: Verdict,
    pub rank: usize,
    pub generators: usize,
    /// `(point, certified fiber)` pairs that were computed
    pub fibers: Vec<(String, Option<usize>)>,
}

/// Free when the generators are independent over U(h) (they are then a
/// basis); not free when some certified fiber differs from the rank;
/// otherwise inconclusive.
pub fn freeness_check(s: &SubmodulePresentation, points: &[QVec], max_bound: i64) -> Result<FreenessReport> {
    let rank = generic_rank(s)?;
    let generators = s.generators.len();
    let mut fibers = Vec::new();
    let mut verdict = if rank == generators {
        Verdict::Free
    } else {
        Verdict::Inconclusive
    };
    for point in points {
        let f = fiber_dim(s, point, max_bound)?;
        fibers.push((point.to_string(), f.value));
        if let Some(v) = f.value {
            if v != rank {
                verdict = Verdict::NotFree;
            }
        }
    }
    Ok(FreenessReport {
        verdict,
        rank,
        generators,
        fibers,
    })
}

/// Rank, fibers and freeness of the image of `pi_{i-1}` for a module with a
/// free basis of rank `r`, next to the closed-form predictions
/// `r C(d-1, i-1)` and `r C(d, i-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageReport {
    pub d: usize,
    pub r: usize,
    pub i: usize,
    pub rank: usize,
    pub rank_at_points: Vec<usize>,
    pub fiber0: Option<usize>,
    pub fiber0_graded: Option<usize>,
    pub fiber_generic: Option<usize>,
    pub generic_point: String,
    pub binom_expected_rank: usize,
    pub binom_expected_fiber0: usize,
    pub verdict: Verdict,
}

impl ImageReport {
    /// Every computed number matches the closed forms, and the verdict is
    /// free exactly for `i = 1`.
    pub fn matches_prediction(&self) -> bool {
        let verdict_ok = if self.i == 1 {
            self.verdict == Verdict::Free
        } else {
            self.verdict == Verdict::NotFree
        };
        self.rank == self.binom_expected_rank
            && self.rank_at_points.iter().all(|&x| x == self.rank)
            && self.fiber0 == Some(self.binom_expected_fiber0)
            && self.fiber0_graded == Some(self.binom_expected_fiber0)
            && self.fiber_generic == Some(self.rank)
            && verdict_ok
    }
}

pub const DEFAULT_FIBER_BOUND: i64 = 6;

pub fn image_report(p: &ModuleRef, i: usize, rng: &mut ChaCha8Rng) -> Result<ImageReport> {
    let d = p.d();
    if i == 0 || i > d {
        return Err(Error::OutOfRange(format!("i = {i} outside 1..={d}")));
    }
    let r = p
        .free_rank()
        .ok_or_else(|| Error::Unsupported(format!("{} has no free U(h)-basis", p.describe())))?;
    let s = image_submodule(p, i)?;
    let ranks = rank_with_crosscheck(&s, rng, 3)?;
    let origin = QVec::zeros(d);
    let generic = random_point(d, rng);
    let freeness = freeness_check(&s, &[origin.clone(), generic.clone()], DEFAULT_FIBER_BOUND)?;
    let fiber0 = freeness.fibers[0].1;
    let fiber_generic = freeness.fibers[1].1;
    Ok(ImageReport {
        d,
        r,
        i,
        rank: ranks.rank,
        rank_at_points: ranks.point_ranks,
        fiber0,
        fiber0_graded: graded_fiber_at_origin(&s),
        fiber_generic,
        generic_point: generic.to_string(),
        binom_expected_rank: r * binomial(d as i64 - 1, i as i64 - 1) as usize,
        binom_expected_fiber0: r * binomial(d as i64, i as i64 - 1) as usize,
        verdict: freeness.verdict,
    })
}

/// Rank of the image of `pi_i` for `i` in `1..=d+1`, the last one zero.
pub fn image_rank(p: &ModuleRef, i: usize) -> Result<usize> {
    generic_rank(&image_submodule(p, i)?)
}

/// Short rendering of a rational point for reports.
pub fn point_label(p: &QVec) -> String {
    let parts: Vec<String> = p.iter().map(fmt_rational).collect();
    format!("({})", parts.join(","))
}
