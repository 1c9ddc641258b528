use rand_chacha::ChaCha8Rng;

use super::{expect_laurent, sample_laurent, AdmissibleModule, ModVec};
use crate::error::{check_dim, Error, Result};
use crate::exact::{q, ExpVec, LaurentPoly, QVec, Rational};
use crate::linalg::{sparse, RowSpace};

/// Laurent polynomials in one variable with `D x^l = x^l (l + g(x))`, where
/// `g` has lowest degree `-m < 0` and highest degree `n > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneVarExample {
    g: LaurentPoly,
    m: i64,
    n: i64,
}

impl OneVarExample {
    pub fn new(g: LaurentPoly) -> Result<Self> {
        check_dim(1, g.dim())?;
        let (lo, hi) = g
            .degree_span_1d()
            .ok_or_else(|| Error::InvalidParameter("g must be nonzero".into()))?;
        if lo >= 0 || hi <= 0 {
            return Err(Error::InvalidParameter(format!(
                "g must have a negative lowest and a positive highest degree, got {g}"
            )));
        }
        Ok(OneVarExample { g, m: -lo, n: hi })
    }

    pub fn g(&self) -> &LaurentPoly {
        &self.g
    }

    /// `m + n`, the rank claimed for this module.
    pub fn expected_rank(&self) -> usize {
        (self.m + self.n) as usize
    }

    fn cartan(&self, f: &LaurentPoly) -> LaurentPoly {
        let mut out = &self.g * f;
        for (e, c) in f.terms() {
            out.add_term(e.clone(), q(e[0]) * c);
        }
        out
    }

    /// Dimension of the cokernel of `D - alpha` restricted to
    /// `span{x^l : |l| <= radius}` inside `span{x^k : -radius-m <= k <= radius+n}`.
    pub fn truncated_fiber_dim(&self, alpha: &Rational, radius: i64) -> usize {
        let lo = -radius - self.m;
        let hi = radius + self.n;
        let width = (hi - lo + 1) as usize;
        let mut space = RowSpace::new();
        for l in -radius..=radius {
            let x = LaurentPoly::monomial(ExpVec::new(&[l]), q(1)).expect("laurent monomial");
            let mut img = self.cartan(&x);
            img.add_term(ExpVec::new(&[l]), -alpha.clone());
            let mut row = vec![Rational::from_integer(0.into()); width];
            for (e, c) in img.terms() {
                row[(e[0] - lo) as usize] = c.clone();
            }
            space.insert(sparse(&row));
        }
        width - space.rank()
    }
}

impl AdmissibleModule for OneVarExample {
    fn d(&self) -> usize {
        1
    }

    fn describe(&self) -> String {
        format!("OneVarExample(g={})", self.g)
    }

    fn zero(&self) -> ModVec {
        ModVec::Laurent(LaurentPoly::zero(1))
    }

    fn act_d(&self, u: &QVec, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        check_dim(1, u.dim())?;
        check_dim(1, r.dim())?;
        let f = expect_laurent(v)?;
        Ok(ModVec::Laurent(self.cartan(f).scale(&u[0]).shift_exponents(r)))
    }

    fn act_x(&self, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        check_dim(1, r.dim())?;
        Ok(ModVec::Laurent(expect_laurent(v)?.shift_exponents(r)))
    }

    fn is_weyl_module(&self) -> bool {
        true
    }

    fn sample_vector(&self, rng: &mut ChaCha8Rng) -> ModVec {
        ModVec::Laurent(sample_laurent(1, rng, 2, 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_laurent, qr};

    fn g(s: &str) -> OneVarExample {
        OneVarExample::new(parse_laurent(1, s).unwrap()).unwrap()
    }

    #[test]
    fn cartan_on_constant() {
        let m = g("x^(-1) + x^(1)");
        let one = ModVec::Laurent(LaurentPoly::one(1));
        let got = m.act_d(&QVec::from_ints(&[1]), &ExpVec::zero(1), &one).unwrap();
        assert_eq!(got, ModVec::Laurent(parse_laurent(1, "x^(-1) + x^(1)").unwrap()));
        let x3 = ModVec::Laurent(parse_laurent(1, "x^(3)").unwrap());
        assert_eq!(
            m.act_x(&ExpVec::new(&[1]), &x3).unwrap(),
            ModVec::Laurent(parse_laurent(1, "x^(4)").unwrap())
        );
    }

    #[test]
    fn fiber_dims_match_degree_span() {
        let m = g("x^(-1) + x^(1)");
        let n = g("x^(-2) + x^(3)");
        for alpha in [q(0), q(1), qr(-5, 2), q(7)] {
            for radius in [2, 3] {
                assert_eq!(m.truncated_fiber_dim(&alpha, radius), 2);
                assert_eq!(n.truncated_fiber_dim(&alpha, radius), 5);
            }
        }
    }

    #[test]
    fn needs_both_sides() {
        assert!(OneVarExample::new(parse_laurent(1, "x^(1)").unwrap()).is_err());
        assert!(OneVarExample::new(parse_laurent(1, "x^(-1) + 2").unwrap()).is_err());
    }
}
