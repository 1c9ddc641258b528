use std::fmt;
use std::sync::Arc;

use num::Zero;

use super::tensor::pure_tensor;
use super::{act_cartan, expect_tensor, AdmissibleModule, LlzTensor, ModVec, ModuleRef, Tensor, Twist};
use crate::error::{Error, Result};
use crate::exact::{ExpVec, QVec, Rational};
use crate::gl::{GlModule, Wedge};

/// A linear map between two modules, applied to vectors.
pub trait ModuleMap: fmt::Debug + Send + Sync {
    fn source(&self) -> &dyn AdmissibleModule;
    fn target(&self) -> &dyn AdmissibleModule;
    fn apply(&self, v: &ModVec) -> Result<ModVec>;
    fn describe(&self) -> String;
}

/// `p (x) v_mu -> x^{-mu} p (x) v_mu` from `F(P, V)` to the LLZ module on
/// `P` twisted by `lambda`, where `v_mu` has weight `lambda + mu`.
#[derive(Debug)]
pub struct PhiIso {
    source: Tensor,
    target: LlzTensor,
    /// per basis vector e_b: its weight components (mu, vector)
    split: Vec<Vec<(ExpVec, Vec<Rational>)>>,
}

impl PhiIso {
    pub fn new(p: ModuleRef, v: GlModule, lambda: QVec) -> Result<Self> {
        let wd = v.weight_decompose(&lambda)?;
        let n = v.dim();
        let split = (0..n)
            .map(|b| {
                let mut e = vec![Rational::zero(); n];
                e[b] = Rational::from_integer(1.into());
                wd.components(&e)
            })
            .collect();
        let twisted: ModuleRef = Arc::new(Twist::new(p.clone(), lambda)?);
        Ok(PhiIso {
            source: Tensor::new(p, v.clone())?,
            target: LlzTensor::new(twisted, v)?,
            split,
        })
    }

    pub fn source_module(&self) -> &Tensor {
        &self.source
    }

    pub fn target_module(&self) -> &LlzTensor {
        &self.target
    }

    fn transport(&self, v: &ModVec, sign: i64) -> Result<ModVec> {
        let p = self.source.inner();
        let comps = expect_tensor(v, self.split.len())?;
        let mut out = vec![p.zero(); self.split.len()];
        for (b, z) in comps.iter().enumerate() {
            if z.is_zero() {
                continue;
            }
            for (mu, vec) in &self.split[b] {
                let moved = p.act_x(&mu.scale(-sign), z)?;
                for (c, k) in vec.iter().enumerate() {
                    if !k.is_zero() {
                        out[c] = out[c].add_scaled(&moved, k)?;
                    }
                }
            }
        }
        Ok(ModVec::Tensor(out))
    }

    /// The inverse map `p (x) v_mu -> x^{mu} p (x) v_mu`.
    pub fn apply_inverse(&self, v: &ModVec) -> Result<ModVec> {
        self.transport(v, -1)
    }
}

impl ModuleMap for PhiIso {
    fn source(&self) -> &dyn AdmissibleModule {
        &self.source
    }

    fn target(&self) -> &dyn AdmissibleModule {
        &self.target
    }

    fn apply(&self, v: &ModVec) -> Result<ModVec> {
        self.transport(v, 1)
    }

    fn describe(&self) -> String {
        format!("Phi: {} -> {}", self.source.describe(), self.target.describe())
    }
}

/// `(z (x) y1) (x) y2 -> z (x) (y1 (x) y2)`.
#[derive(Debug)]
pub struct IteratedTensorIso {
    source: Tensor,
    target: Tensor,
    dim1: usize,
    dim2: usize,
}

impl IteratedTensorIso {
    pub fn new(p: ModuleRef, v1: GlModule, v2: GlModule) -> Result<Self> {
        let inner: ModuleRef = Arc::new(Tensor::new(p.clone(), v1.clone())?);
        Ok(IteratedTensorIso {
            source: Tensor::new(inner, v2.clone())?,
            target: Tensor::new(p, GlModule::tensor(&v1, &v2)?)?,
            dim1: v1.dim(),
            dim2: v2.dim(),
        })
    }
}

impl ModuleMap for IteratedTensorIso {
    fn source(&self) -> &dyn AdmissibleModule {
        &self.source
    }

    fn target(&self) -> &dyn AdmissibleModule {
        &self.target
    }

    fn apply(&self, v: &ModVec) -> Result<ModVec> {
        let outer = expect_tensor(v, self.dim2)?;
        let p = self.target.inner();
        let mut out = vec![p.zero(); self.dim1 * self.dim2];
        for (b2, y) in outer.iter().enumerate() {
            let inner = expect_tensor(y, self.dim1)?;
            for (b1, z) in inner.iter().enumerate() {
                out[b1 * self.dim2 + b2] = z.clone();
            }
        }
        Ok(ModVec::Tensor(out))
    }

    fn describe(&self) -> String {
        format!("{} -> {}", self.source.describe(), self.target.describe())
    }
}

/// `y (x) v -> sum_j D_j y (x) e_j ^ v` from `F(P, wedge^k)` to
/// `F(P, wedge^{k+1})`; the target is zero when `k = d`.
#[derive(Debug)]
pub struct PiMap {
    source: Tensor,
    target: Tensor,
    k: usize,
    /// for each source basis wedge: (j, sign, target index)
    moves: Vec<Vec<(usize, i64, usize)>>,
}

impl PiMap {
    pub fn new(p: ModuleRef, k: usize) -> Result<Self> {
        let d = p.d();
        if k > d {
            return Err(Error::OutOfRange(format!("exterior degree {k} exceeds d = {d}")));
        }
        let src_gl = GlModule::exterior_power(d, k)?;
        let tgt_gl = if k == d {
            GlModule::zero_module(d)
        } else {
            GlModule::exterior_power(d, k + 1)?
        };
        let src_basis = Wedge::all(d, k);
        let tgt_basis = Wedge::all(d, k + 1);
        let moves = src_basis
            .iter()
            .map(|s| {
                (0..d)
                    .filter_map(|j| {
                        s.wedge_left(j).map(|(sign, t)| {
                            let idx = tgt_basis.binary_search(&t).expect("sorted wedge basis");
                            (j, sign, idx)
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(PiMap {
            source: Tensor::new(p.clone(), src_gl)?,
            target: Tensor::new(p, tgt_gl)?,
            k,
            moves,
        })
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn source_module(&self) -> &Tensor {
        &self.source
    }

    pub fn target_module(&self) -> &Tensor {
        &self.target
    }
}

impl ModuleMap for PiMap {
    fn source(&self) -> &dyn AdmissibleModule {
        &self.source
    }

    fn target(&self) -> &dyn AdmissibleModule {
        &self.target
    }

    fn apply(&self, v: &ModVec) -> Result<ModVec> {
        let comps = expect_tensor(v, self.moves.len())?;
        let p = self.source.inner();
        let n = self.target.gl().dim();
        let mut out = vec![p.zero(); n];
        for (s, z) in comps.iter().enumerate() {
            if z.is_zero() {
                continue;
            }
            for &(j, sign, t) in &self.moves[s] {
                let dz = act_cartan(&**p, j, z)?;
                out[t] = out[t].add_scaled(&dz, &Rational::from_integer(sign.into()))?;
            }
        }
        Ok(ModVec::Tensor(out))
    }

    fn describe(&self) -> String {
        format!("pi_{}: {} -> {}", self.k, self.source.describe(), self.target.describe())
    }
}

impl PiMap {
    /// `pi(w (x) e_S)` for a source basis wedge `S`.
    pub fn image_of(&self, z: ModVec, s: usize) -> Result<ModVec> {
        let n = self.source.gl().dim();
        self.apply(&pure_tensor(&**self.source.inner(), n, z, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly_h, q};
    use crate::module::Omega;

    fn omega(l: &[i64]) -> ModuleRef {
        Arc::new(Omega::new(QVec::from_ints(l), q(1)).unwrap())
    }

    #[test]
    fn pi_zero_on_rank_one() {
        let pi = PiMap::new(omega(&[2, 3]), 0).unwrap();
        let one = ModVec::Poly(parse_poly_h(2, "1").unwrap());
        let got = pi.image_of(one, 0).unwrap();
        let want = ModVec::Tensor(vec![
            ModVec::Poly(parse_poly_h(2, "D1").unwrap()),
            ModVec::Poly(parse_poly_h(2, "D2").unwrap()),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn pi_top_degree_is_zero() {
        let pi = PiMap::new(omega(&[2, 3]), 2).unwrap();
        let one = ModVec::Poly(parse_poly_h(2, "1").unwrap());
        let got = pi.image_of(one, 0).unwrap();
        assert_eq!(got, ModVec::Tensor(vec![]));
        assert!(PiMap::new(omega(&[2, 3]), 3).is_err());
    }

    #[test]
    fn phi_moves_by_weight() {
        let p = omega(&[2, 3]);
        let phi = PhiIso::new(p, GlModule::natural(2).unwrap(), QVec::basis(2, 0)).unwrap();
        let z = ModVec::Poly(parse_poly_h(2, "D1").unwrap());
        // e1 has weight lambda, untouched
        let v1 = phi.source_module().pure(z.clone(), 0);
        assert_eq!(phi.apply(&v1).unwrap(), v1);
        // e2 has mu = e2 - e1, so it gets x^{e1 - e2}
        let v2 = phi.source_module().pure(z.clone(), 1);
        let moved = phi.source_module().inner().act_x(&ExpVec::new(&[1, -1]), &z).unwrap();
        assert_eq!(phi.apply(&v2).unwrap(), phi.source_module().pure(moved, 1));
        assert_eq!(phi.apply_inverse(&phi.apply(&v2).unwrap()).unwrap(), v2);
    }

    #[test]
    fn iterated_tensor_reindexes() {
        let p = omega(&[2, 3]);
        let v1 = GlModule::natural(2).unwrap();
        let v2 = GlModule::exterior_power(2, 2).unwrap();
        let iso = IteratedTensorIso::new(p, v1, v2).unwrap();
        let z = ModVec::Poly(parse_poly_h(2, "D2").unwrap());
        let zero = ModVec::Poly(parse_poly_h(2, "0").unwrap());
        let src = ModVec::Tensor(vec![ModVec::Tensor(vec![zero.clone(), z.clone()])]);
        assert_eq!(iso.apply(&src).unwrap(), ModVec::Tensor(vec![zero, z]));
    }
}
