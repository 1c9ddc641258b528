use rand_chacha::ChaCha8Rng;

use super::{AdmissibleModule, ModVec, ModuleRef};
use crate::error::Result;
use crate::exact::{ExpVec, PolyH, QVec};

/// Deliberately broken module for harness self-tests: `D(u,r)` acts with
/// the opposite sign whenever `r != 0`.
#[derive(Clone, Debug)]
pub struct SignFlip {
    p: ModuleRef,
}

impl SignFlip {
    pub fn new(p: ModuleRef) -> Self {
        SignFlip { p }
    }
}

impl AdmissibleModule for SignFlip {
    fn d(&self) -> usize {
        self.p.d()
    }

    fn describe(&self) -> String {
        format!("SignFlip({})", self.p.describe())
    }

    fn zero(&self) -> ModVec {
        self.p.zero()
    }

    fn act_d(&self, u: &QVec, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        let w = self.p.act_d(u, r, v)?;
        Ok(if r.is_zero() { w } else { w.scale(&crate::exact::q(-1)) })
    }

    fn act_x(&self, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        self.p.act_x(r, v)
    }

    fn is_weyl_module(&self) -> bool {
        false
    }

    fn free_rank(&self) -> Option<usize> {
        self.p.free_rank()
    }

    fn free_coordinates(&self, v: &ModVec) -> Result<Vec<PolyH>> {
        self.p.free_coordinates(v)
    }

    fn vector_from_coordinates(&self, coords: &[PolyH]) -> Result<ModVec> {
        self.p.vector_from_coordinates(coords)
    }

    fn sample_vector(&self, rng: &mut ChaCha8Rng) -> ModVec {
        self.p.sample_vector(rng)
    }
}
