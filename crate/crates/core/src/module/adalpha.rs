use rand_chacha::ChaCha8Rng;

use super::{expect_laurent, sample_laurent, AdmissibleModule, ModVec};
use crate::error::{check_dim, Result};
use crate::exact::{fmt_rational, q, ExpVec, LaurentPoly, QVec, Rational};

/// `A_d(alpha, a)`: basis `x^n`, `D(u,r) x^n = (u|n + alpha - a r) x^{n+r}`,
/// `x^r x^n = x^{n+r}`. A weight module with weights in `alpha + Z^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdAlpha {
    alpha: QVec,
    a: Rational,
}

impl AdAlpha {
    pub fn new(alpha: QVec, a: Rational) -> Result<Self> {
        if alpha.dim() == 0 {
            return Err(crate::Error::InvalidParameter("alpha must have at least one entry".into()));
        }
        Ok(AdAlpha { alpha, a })
    }

    pub fn alpha(&self) -> &QVec {
        &self.alpha
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Coefficient and exponent of `D(u,r) x^n`.
    pub fn coefficient(&self, u: &QVec, r: &ExpVec, n: &ExpVec) -> (Rational, ExpVec) {
        let w = self.alpha.add_exp(n).sub(&QVec::from_exp(r).scale(&self.a));
        (u.dot(&w), n.add(r))
    }
}

impl AdmissibleModule for AdAlpha {
    fn d(&self) -> usize {
        self.alpha.dim()
    }

    fn describe(&self) -> String {
        format!("A(alpha={}, a={})", self.alpha, fmt_rational(&self.a))
    }

    fn zero(&self) -> ModVec {
        ModVec::Laurent(LaurentPoly::zero(self.d()))
    }

    fn act_d(&self, u: &QVec, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        let f = expect_laurent(v)?;
        check_dim(self.d(), f.dim())?;
        check_dim(self.d(), u.dim())?;
        check_dim(self.d(), r.dim())?;
        let mut out = LaurentPoly::zero(self.d());
        for (n, c) in f.terms() {
            let (k, e) = self.coefficient(u, r, n);
            out.add_term(e, k * c);
        }
        Ok(ModVec::Laurent(out))
    }

    fn act_x(&self, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        let f = expect_laurent(v)?;
        check_dim(self.d(), f.dim())?;
        check_dim(self.d(), r.dim())?;
        Ok(ModVec::Laurent(f.shift_exponents(r)))
    }

    fn is_weyl_module(&self) -> bool {
        self.a == q(0)
    }

    fn sample_vector(&self, rng: &mut ChaCha8Rng) -> ModVec {
        ModVec::Laurent(sample_laurent(self.d(), rng, 3, 2))
    }

    fn weight_support(&self) -> Option<QVec> {
        Some(self.alpha.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qr;

    #[test]
    fn coefficient_examples() {
        let m = AdAlpha::new(QVec::new(vec![qr(1, 2)]), q(2)).unwrap();
        let (c, e) = m.coefficient(&QVec::from_ints(&[1]), &ExpVec::new(&[1]), &ExpVec::new(&[0]));
        assert_eq!((c, e), (qr(-3, 2), ExpVec::new(&[1])));

        let m = AdAlpha::new(QVec::zeros(2), q(0)).unwrap();
        let (c, e) = m.coefficient(&QVec::basis(2, 0), &ExpVec::new(&[0, 1]), &ExpVec::new(&[1, 0]));
        assert_eq!((c, e), (q(1), ExpVec::new(&[1, 1])));

        // u orthogonal to n + alpha - a r
        let (c, _) = m.coefficient(&QVec::basis(2, 1), &ExpVec::new(&[0, 0]), &ExpVec::new(&[4, 0]));
        assert_eq!(c, q(0));
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let m = AdAlpha::new(QVec::zeros(1), q(0)).unwrap();
        let v = ModVec::Laurent(LaurentPoly::one(1));
        let got = m.act_d(&QVec::from_ints(&[1]), &ExpVec::new(&[2]), &v).unwrap();
        assert!(got.is_zero());
    }
}
