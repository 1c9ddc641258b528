use rand_chacha::ChaCha8Rng;

use super::{AdmissibleModule, ModVec, ModuleRef};
use crate::error::{check_dim, Error, Result};
use crate::exact::{ExpVec, PolyH, QVec};

/// `P` with `D_j` replaced by `D_j - lambda_j`, so
/// `D(u,r) . v = D(u,r) v - (u|lambda) x^r v`. Only defined for Weyl-algebra
/// modules.
#[derive(Clone, Debug)]
pub struct Twist {
    p: ModuleRef,
    lambda: QVec,
}

impl Twist {
    pub fn new(p: ModuleRef, lambda: QVec) -> Result<Self> {
        check_dim(p.d(), lambda.dim())?;
        if !p.is_weyl_module() {
            return Err(Error::InvalidParameter(format!(
                "twisting needs a Weyl-algebra module, {} is not one",
                p.describe()
            )));
        }
        Ok(Twist { p, lambda })
    }

    pub fn inner(&self) -> &ModuleRef {
        &self.p
    }

    pub fn lambda(&self) -> &QVec {
        &self.lambda
    }
}

impl AdmissibleModule for Twist {
    fn d(&self) -> usize {
        self.p.d()
    }

    fn describe(&self) -> String {
        format!("Twist({}, lambda={})", self.p.describe(), self.lambda)
    }

    fn zero(&self) -> ModVec {
        self.p.zero()
    }

    fn act_d(&self, u: &QVec, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        let base = self.p.act_d(u, r, v)?;
        let c = u.pairing(&self.lambda)?;
        if num::Zero::is_zero(&c) {
            return Ok(base);
        }
        base.add_scaled(&self.p.act_x(r, v)?, &-c)
    }

    fn act_x(&self, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        self.p.act_x(r, v)
    }

    fn is_weyl_module(&self) -> bool {
        true
    }

    fn free_rank(&self) -> Option<usize> {
        self.p.free_rank()
    }

    // h(D_old) = h(D_new + lambda)
    fn free_coordinates(&self, v: &ModVec) -> Result<Vec<PolyH>> {
        let minus = self.lambda.neg();
        self.p
            .free_coordinates(v)?
            .iter()
            .map(|h| h.shift(&minus))
            .collect()
    }

    fn vector_from_coordinates(&self, coords: &[PolyH]) -> Result<ModVec> {
        let shifted = coords
            .iter()
            .map(|h| h.shift(&self.lambda))
            .collect::<Result<Vec<_>>>()?;
        self.p.vector_from_coordinates(&shifted)
    }

    fn basis_label(&self, m: usize) -> String {
        self.p.basis_label(m)
    }

    fn sample_vector(&self, rng: &mut ChaCha8Rng) -> ModVec {
        self.p.sample_vector(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly_h, q};
    use crate::module::{act_cartan, Omega};
    use std::sync::Arc;

    #[test]
    fn cartan_is_shifted() {
        let p: ModuleRef = Arc::new(Omega::new(QVec::from_ints(&[2, 3]), q(1)).unwrap());
        let t = Twist::new(p.clone(), QVec::basis(2, 0)).unwrap();
        let f = ModVec::Poly(parse_poly_h(2, "D1 + D2").unwrap());
        let got = act_cartan(&t, 0, &f).unwrap();
        let want = act_cartan(&*p, 0, &f).unwrap().sub(&f).unwrap();
        assert_eq!(got, want);
        let r = ExpVec::new(&[1, -1]);
        assert_eq!(t.act_x(&r, &f).unwrap(), p.act_x(&r, &f).unwrap());
    }

    #[test]
    fn zero_twist_is_identity() {
        let p: ModuleRef = Arc::new(Omega::new(QVec::from_ints(&[2]), q(1)).unwrap());
        let t = Twist::new(p.clone(), QVec::zeros(1)).unwrap();
        let f = ModVec::Poly(parse_poly_h(1, "1 + D1^2").unwrap());
        let u = QVec::from_ints(&[3]);
        let r = ExpVec::new(&[2]);
        assert_eq!(t.act_d(&u, &r, &f).unwrap(), p.act_d(&u, &r, &f).unwrap());
    }

    #[test]
    fn coordinates_follow_the_new_cartan() {
        let p: ModuleRef = Arc::new(Omega::new(QVec::from_ints(&[2, 3]), q(1)).unwrap());
        let t = Twist::new(p, QVec::from_ints(&[1, -2])).unwrap();
        // D1 in the twisted action applied to the generator
        let one = ModVec::Poly(PolyH::one(2));
        let v = act_cartan(&t, 0, &one).unwrap();
        assert_eq!(t.free_coordinates(&v).unwrap(), vec![PolyH::var(2, 0)]);
        assert_eq!(t.vector_from_coordinates(&[PolyH::var(2, 0)]).unwrap(), v);
    }

    #[test]
    fn rejects_non_weyl_modules() {
        let p: ModuleRef = Arc::new(Omega::new(QVec::from_ints(&[2]), q(0)).unwrap());
        assert!(Twist::new(p, QVec::zeros(1)).is_err());
    }
}
