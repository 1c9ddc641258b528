use num::Zero;
use rand_chacha::ChaCha8Rng;

use super::{expect_poly, sample_poly, AdmissibleModule, ModVec};
use crate::error::{check_dim, Error, Result};
use crate::exact::{q, ExpVec, PolyH, QVec, Rational};

/// `Omega(lambda, a)`: polynomials `f(t)` with
/// `D(u,r) f = lambda^r (u|t - a r) f(t - r)` and `x^r f = lambda^r f(t - r)`.
/// Free of rank one over U(h), which acts by multiplication with `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Omega {
    lambda: QVec,
    a: Rational,
}

impl Omega {
    pub fn new(lambda: QVec, a: Rational) -> Result<Self> {
        if lambda.dim() == 0 {
            return Err(Error::InvalidParameter("lambda must have at least one entry".into()));
        }
        if lambda.has_zero_entry() {
            return Err(Error::InvalidParameter(format!(
                "lambda must have nonzero entries, got {lambda}"
            )));
        }
        Ok(Omega { lambda, a })
    }

    pub fn lambda(&self) -> &QVec {
        &self.lambda
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    fn check(&self, p: &PolyH) -> Result<()> {
        check_dim(self.lambda.dim(), p.dim())
    }
}

impl AdmissibleModule for Omega {
    fn d(&self) -> usize {
        self.lambda.dim()
    }

    fn describe(&self) -> String {
        format!("Omega(lambda={}, a={})", self.lambda, crate::exact::fmt_rational(&self.a))
    }

    fn zero(&self) -> ModVec {
        ModVec::Poly(PolyH::zero(self.d()))
    }

    fn act_d(&self, u: &QVec, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        let f = expect_poly(v)?;
        self.check(f)?;
        check_dim(self.d(), u.dim())?;
        check_dim(self.d(), r.dim())?;
        let shifted = f.shift(&QVec::from_exp(r))?;
        let c = -(&self.a * u.dot_exp(r));
        let lin = PolyH::linear(u, &c);
        let scale = self.lambda.power(r);
        Ok(ModVec::Poly((&lin * &shifted).scale(&scale)))
    }

    fn act_x(&self, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        let f = expect_poly(v)?;
        self.check(f)?;
        check_dim(self.d(), r.dim())?;
        let shifted = f.shift(&QVec::from_exp(r))?;
        Ok(ModVec::Poly(shifted.scale(&self.lambda.power(r))))
    }

    fn is_weyl_module(&self) -> bool {
        self.a == q(1)
    }

    fn free_rank(&self) -> Option<usize> {
        Some(1)
    }

    fn free_coordinates(&self, v: &ModVec) -> Result<Vec<PolyH>> {
        let f = expect_poly(v)?;
        self.check(f)?;
        Ok(vec![f.clone()])
    }

    fn vector_from_coordinates(&self, coords: &[PolyH]) -> Result<ModVec> {
        check_dim(1, coords.len())?;
        self.check(&coords[0])?;
        Ok(ModVec::Poly(coords[0].clone()))
    }

    fn basis_label(&self, _m: usize) -> String {
        "1".into()
    }

    fn sample_vector(&self, rng: &mut ChaCha8Rng) -> ModVec {
        ModVec::Poly(sample_poly(self.d(), rng, 2, 2))
    }
}

impl Omega {
    /// `T(u,r)` acts on this module as the scalar `(1-a)(u|r)`.
    pub fn t_scalar(&self, u: &QVec, r: &ExpVec) -> Rational {
        let s = (q(1) - &self.a) * u.dot_exp(r);
        if s.is_zero() {
            Rational::zero()
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly_h, qr};

    fn poly(d: usize, s: &str) -> ModVec {
        ModVec::Poly(parse_poly_h(d, s).unwrap())
    }

    #[test]
    fn action_examples() {
        let m = Omega::new(QVec::from_ints(&[2]), q(1)).unwrap();
        let one = poly(1, "1");
        // 2^3 (t - 3)
        let got = m.act_d(&QVec::from_ints(&[1]), &ExpVec::new(&[3]), &one).unwrap();
        assert_eq!(got, poly(1, "-24 + 8*D1"));

        let m0 = Omega::new(QVec::from_ints(&[2]), q(0)).unwrap();
        let got = m0.act_d(&QVec::from_ints(&[1]), &ExpVec::new(&[1]), &poly(1, "D1")).unwrap();
        assert_eq!(got, poly(1, "-2*D1 + 2*D1^2"));

        let m2 = Omega::new(QVec::from_ints(&[2, 3]), qr(1, 2)).unwrap();
        let f = poly(2, "1 + D1*D2");
        let u = QVec::from_ints(&[1, -1]);
        let got = m2.act_d(&u, &ExpVec::zero(2), &f).unwrap();
        assert_eq!(got, poly(2, "D1 - D2 + D1^2*D2 - D1*D2^2"));
    }

    #[test]
    fn multiplication_is_associative() {
        let m = Omega::new(QVec::from_ints(&[2, -3]), q(2)).unwrap();
        let f = poly(2, "1 + D1 - D2^2");
        let r = ExpVec::new(&[1, -1]);
        let s = ExpVec::new(&[-2, 2]);
        let lhs = m.act_x(&r, &m.act_x(&s, &f).unwrap()).unwrap();
        let rhs = m.act_x(&r.add(&s), &f).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(m.act_x(&ExpVec::zero(2), &f).unwrap(), f);
    }

    #[test]
    fn zero_lambda_rejected() {
        assert!(Omega::new(QVec::from_ints(&[0, 2]), q(1)).is_err());
    }

    #[test]
    fn weyl_only_for_a_one() {
        assert!(Omega::new(QVec::from_ints(&[2]), q(1)).unwrap().is_weyl_module());
        assert!(!Omega::new(QVec::from_ints(&[2]), q(0)).unwrap().is_weyl_module());
    }
}
