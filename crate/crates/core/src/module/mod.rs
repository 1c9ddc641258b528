//! Admissible modules over the extended Witt algebra: a common interface
//! and the concrete families.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::exact::{ExpVec, LaurentPoly, PolyH, QVec, Rational};

mod adalpha;
mod fixture;
mod maps;
mod omega;
mod one_var;
mod spec;
mod tensor;
mod twist;
mod weyl;

pub use adalpha::AdAlpha;
pub use fixture::SignFlip;
pub use maps::{IteratedTensorIso, ModuleMap, PhiIso, PiMap};
pub use omega::Omega;
pub use one_var::OneVarExample;
pub use spec::{ModuleSpec, Scalar};
pub use tensor::{LlzTensor, Tensor};
pub use twist::Twist;
pub use weyl::WeylQuotient;

/// A vector of some module. The variant is fixed by the module that
/// produced it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ModVec {
    /// Polynomial in `t_1..t_d` (written with `D_i`).
    Poly(PolyH),
    /// Finite combination of Laurent monomials.
    Laurent(LaurentPoly),
    /// U(h)-coordinates in a free basis.
    Free(Vec<PolyH>),
    /// `sum_b z_b (x) v_b` over a basis `v_b` of a gl_d-module.
    Tensor(Vec<ModVec>),
}

impl fmt::Debug for ModVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ModVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModVec::Poly(p) => write!(f, "{p}"),
            ModVec::Laurent(p) => write!(f, "{p}"),
            ModVec::Free(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", parts.join("; "))
            }
            ModVec::Tensor(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "<{}>", parts.join(" | "))
            }
        }
    }
}

fn mismatch(a: &ModVec, b: &ModVec) -> Error {
    Error::ForeignVector(format!("cannot combine {a} with {b}"))
}

impl ModVec {
    pub fn is_zero(&self) -> bool {
        match self {
            ModVec::Poly(p) => p.is_zero(),
            ModVec::Laurent(p) => p.is_zero(),
            ModVec::Free(cs) => cs.iter().all(PolyH::is_zero),
            ModVec::Tensor(cs) => cs.iter().all(ModVec::is_zero),
        }
    }

    pub fn scale(&self, c: &Rational) -> ModVec {
        match self {
            ModVec::Poly(p) => ModVec::Poly(p.scale(c)),
            ModVec::Laurent(p) => ModVec::Laurent(p.scale(c)),
            ModVec::Free(cs) => ModVec::Free(cs.iter().map(|p| p.scale(c)).collect()),
            ModVec::Tensor(cs) => ModVec::Tensor(cs.iter().map(|p| p.scale(c)).collect()),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &ModVec, c: &Rational) -> Result<ModVec> {
        Ok(match (self, other) {
            (ModVec::Poly(a), ModVec::Poly(b)) => {
                check_dim(a.dim(), b.dim())?;
                let mut a = a.clone();
                a.add_scaled(b, c);
                ModVec::Poly(a)
            }
            (ModVec::Laurent(a), ModVec::Laurent(b)) => {
                check_dim(a.dim(), b.dim())?;
                let mut a = a.clone();
                a.add_scaled(b, c);
                ModVec::Laurent(a)
            }
            (ModVec::Free(a), ModVec::Free(b)) if a.len() == b.len() => ModVec::Free(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| {
                        check_dim(x.dim(), y.dim())?;
                        let mut x = x.clone();
                        x.add_scaled(y, c);
                        Ok(x)
                    })
                    .collect::<Result<_>>()?,
            ),
            (ModVec::Tensor(a), ModVec::Tensor(b)) if a.len() == b.len() => ModVec::Tensor(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.add_scaled(y, c))
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(mismatch(self, other)),
        })
    }

    pub fn add(&self, other: &ModVec) -> Result<ModVec> {
        self.add_scaled(other, &Rational::from_integer(1.into()))
    }

    pub fn sub(&self, other: &ModVec) -> Result<ModVec> {
        self.add_scaled(other, &Rational::from_integer((-1).into()))
    }

    /// Components of a tensor vector.
    pub fn tensor_components(&self) -> Result<&[ModVec]> {
        match self {
            ModVec::Tensor(cs) => Ok(cs),
            other => Err(Error::ForeignVector(format!("expected a tensor vector, got {other}"))),
        }
    }

    /// Total number of stored terms; a rough size measure.
    pub fn size(&self) -> usize {
        match self {
            ModVec::Poly(p) => p.num_terms(),
            ModVec::Laurent(p) => p.num_terms(),
            ModVec::Free(cs) => cs.iter().map(PolyH::num_terms).sum(),
            ModVec::Tensor(cs) => cs.iter().map(ModVec::size).sum(),
        }
    }
}

/// A module over `W_d` extended by `A_d`, acted on by `D(u,r)` and `x^r`.
///
/// A module with a free U(h)-basis `w_1..w_R` exposes coordinates: `v` is
/// `sum_m h_m(D) w_m` where `D_i` acts as `D(e_i, 0)`.
pub trait AdmissibleModule: fmt::Debug + Send + Sync {
    fn d(&self) -> usize;

    fn describe(&self) -> String;

    fn zero(&self) -> ModVec;

    /// `D(u,r) v`.
    fn act_d(&self, u: &QVec, r: &ExpVec, v: &ModVec) -> Result<ModVec>;

    /// `x^r v`.
    fn act_x(&self, r: &ExpVec, v: &ModVec) -> Result<ModVec>;

    /// True when the action comes from the Weyl algebra, i.e.
    /// `D(u,r) = x^r (u|D)`.
    fn is_weyl_module(&self) -> bool;

    fn free_rank(&self) -> Option<usize> {
        None
    }

    fn free_coordinates(&self, _v: &ModVec) -> Result<Vec<PolyH>> {
        Err(Error::Unsupported(format!("{} has no free U(h)-basis", self.describe())))
    }

    fn vector_from_coordinates(&self, _coords: &[PolyH]) -> Result<ModVec> {
        Err(Error::Unsupported(format!("{} has no free U(h)-basis", self.describe())))
    }

    /// Short label of the `m`-th free basis vector.
    fn basis_label(&self, m: usize) -> String {
        format!("w{}", m + 1)
    }

    /// A small random vector for property checks.
    fn sample_vector(&self, rng: &mut ChaCha8Rng) -> ModVec;

    /// `alpha` for a weight module whose weights lie in `alpha + Z^d`.
    fn weight_support(&self) -> Option<QVec> {
        None
    }
}

pub type ModuleRef = Arc<dyn AdmissibleModule>;

/// `D_i v`, the Cartan generator acting as `D(e_i, 0)`.
pub fn act_cartan(m: &dyn AdmissibleModule, i: usize, v: &ModVec) -> Result<ModVec> {
    let d = m.d();
    m.act_d(&QVec::basis(d, i), &ExpVec::zero(d), v)
}

/// The `m`-th free basis vector.
pub fn basis_vector(module: &dyn AdmissibleModule, m: usize) -> Result<ModVec> {
    let rank = module
        .free_rank()
        .ok_or_else(|| Error::Unsupported(format!("{} has no free U(h)-basis", module.describe())))?;
    if m >= rank {
        return Err(Error::OutOfRange(format!("basis index {m} >= rank {rank}")));
    }
    let d = module.d();
    let coords: Vec<PolyH> = (0..rank)
        .map(|k| if k == m { PolyH::one(d) } else { PolyH::zero(d) })
        .collect();
    module.vector_from_coordinates(&coords)
}

/// Evaluate free coordinates at a point: the image of `v` in the fiber.
pub fn fiber_coordinates(module: &dyn AdmissibleModule, v: &ModVec, alpha: &QVec) -> Result<Vec<Rational>> {
    module
        .free_coordinates(v)?
        .iter()
        .map(|h| h.eval(alpha))
        .collect()
}

pub(crate) fn small_int(rng: &mut ChaCha8Rng) -> i64 {
    let c = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        c
    } else {
        -c
    }
}

/// Random polynomial in `D_1..D_d` with a few terms of degree at most `deg`.
pub(crate) fn sample_poly(d: usize, rng: &mut ChaCha8Rng, terms: usize, deg: i64) -> PolyH {
    let mut p = PolyH::zero(d);
    for _ in 0..terms {
        let mut e = vec![0i64; d];
        let mut left = rng.gen_range(0..=deg);
        while left > 0 {
            e[rng.gen_range(0..d)] += 1;
            left -= 1;
        }
        p.add_term(ExpVec::new(&e), crate::exact::q(small_int(rng)));
    }
    if p.is_zero() {
        PolyH::one(d)
    } else {
        p
    }
}

/// Random Laurent polynomial with exponents in `[-radius, radius]^d`.
pub(crate) fn sample_laurent(d: usize, rng: &mut ChaCha8Rng, terms: usize, radius: i64) -> LaurentPoly {
    let mut p = LaurentPoly::zero(d);
    for _ in 0..terms {
        let e: Vec<i64> = (0..d).map(|_| rng.gen_range(-radius..=radius)).collect();
        p.add_term(ExpVec::new(&e), crate::exact::q(small_int(rng)));
    }
    if p.is_zero() {
        LaurentPoly::one(d)
    } else {
        p
    }
}

pub(crate) fn expect_poly(v: &ModVec) -> Result<&PolyH> {
    match v {
        ModVec::Poly(p) => Ok(p),
        other => Err(Error::ForeignVector(format!("expected a polynomial, got {other}"))),
    }
}

pub(crate) fn expect_laurent(v: &ModVec) -> Result<&LaurentPoly> {
    match v {
        ModVec::Laurent(p) => Ok(p),
        other => Err(Error::ForeignVector(format!("expected a Laurent polynomial, got {other}"))),
    }
}

pub(crate) fn expect_free(v: &ModVec, len: usize) -> Result<&[PolyH]> {
    match v {
        ModVec::Free(cs) if cs.len() == len => Ok(cs),
        other => Err(Error::ForeignVector(format!(
            "expected {len} free coordinates, got {other}"
        ))),
    }
}

pub(crate) fn expect_tensor(v: &ModVec, len: usize) -> Result<&[ModVec]> {
    match v {
        ModVec::Tensor(cs) if cs.len() == len => Ok(cs),
        other => Err(Error::ForeignVector(format!(
            "expected {len} tensor components, got {other}"
        ))),
    }
}
