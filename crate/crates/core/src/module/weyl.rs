use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{expect_free, sample_poly, AdmissibleModule, ModVec};
use crate::error::{check_dim, Error, Result};
use crate::exact::{ExpVec, PolyH, QVec, Rational};

/// Quotient of the Weyl algebra by the left ideal generated by
/// `f_i = 1 + sum_{j=1}^{n_i} a_ij(D) x_i^j`, one `f_i` per variable.
///
/// Vectors are `sum_r h_r(D) x^r v0` over `0 <= r_i < n_i`, coefficients on
/// the left. Each `a_ij` may only involve `D_i` and the top coefficient
/// `a_{i n_i}` must be a nonzero constant.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylQuotient {
    /// normal forms of `x_i^k x_i^c v0`, keyed by `(i, c, k)`
    cache: NormalForms,
    d: usize,
    /// coeffs[i][j] = a_{i, j+1}
    coeffs: Vec<Vec<PolyH>>,
    /// coeffs with D_i -> D_i + 1, used by x_i^{-1}
    raised: Vec<Vec<PolyH>>,
    top_inv: Vec<Rational>,
    /// mixed-radix strides of the basis index
    strides: Vec<usize>,
    rank: usize,
}

impl WeylQuotient {
    pub fn new(coeffs: Vec<Vec<PolyH>>) -> Result<Self> {
        let d = coeffs.len();
        if d == 0 {
            return Err(Error::InvalidParameter("need at least one relation".into()));
        }
        let mut top_inv = Vec::with_capacity(d);
        let mut raised = Vec::with_capacity(d);
        for (i, row) in coeffs.iter().enumerate() {
            let top = row.last().ok_or_else(|| {
                Error::InvalidParameter(format!("relation {} has no x-terms", i + 1))
            })?;
            let c = top.as_constant().filter(|c| !c.is_zero()).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "top coefficient of relation {} must be a nonzero constant, got {top}",
                    i + 1
                ))
            })?;
            top_inv.push(c.recip());
            for a in row {
                check_dim(d, a.dim())?;
                if a.terms().any(|(e, _)| e.iter().enumerate().any(|(k, x)| k != i && x != 0)) {
                    return Err(Error::InvalidParameter(format!(
                        "coefficient {a} of relation {} involves D_k with k != {}",
                        i + 1,
                        i + 1
                    )));
                }
            }
            let up = QVec::basis(d, i).neg();
            raised.push(row.iter().map(|a| a.shift(&up)).collect::<Result<Vec<_>>>()?);
        }
        let mut strides = vec![0; d];
        let mut rank = 1;
        for i in (0..d).rev() {
            strides[i] = rank;
            rank *= coeffs[i].len();
        }
        Ok(WeylQuotient {
            cache: NormalForms::default(),
            d,
            coeffs,
            raised,
            top_inv,
            strides,
            rank,
        })
    }

    /// `f_i = 1 + x_i^{k}` for every `i`.
    pub fn binomial_relations(d: usize, k: usize) -> Result<Self> {
        let mut coeffs = Vec::new();
        for _ in 0..d {
            let mut row = vec![PolyH::zero(d); k];
            row[k - 1] = PolyH::one(d);
            coeffs.push(row);
        }
        Self::new(coeffs)
    }

    /// `n_i`, the x_i-degree of the i-th relation.
    pub fn degrees(&self) -> Vec<usize> {
        self.coeffs.iter().map(Vec::len).collect()
    }

    pub fn coefficients(&self) -> &[Vec<PolyH>] {
        &self.coeffs
    }

    /// Exponent of the basis monomial with index `idx`.
    pub fn basis_exponent(&self, idx: usize) -> ExpVec {
        let e: Vec<i64> = (0..self.d)
            .map(|i| ((idx / self.strides[i]) % self.coeffs[i].len()) as i64)
            .collect();
        ExpVec::new(&e)
    }

    fn index_of(&self, e: &[i64]) -> usize {
        e.iter().zip(&self.strides).map(|(&x, s)| x as usize * s).sum()
    }

    /// `x_i` applied to a normal form.
    fn mul_x(&self, i: usize, v: &[PolyH]) -> Result<Vec<PolyH>> {
        let d = self.d;
        let n = self.coeffs[i].len() as i64;
        let down = QVec::basis(d, i);
        let mut out = vec![PolyH::zero(d); self.rank];
        for (idx, h) in v.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            // x_i h(D) = h(D - e_i) x_i
            let h = h.shift(&down)?;
            let mut e = self.basis_exponent(idx).entries().to_vec();
            if e[i] + 1 < n {
                e[i] += 1;
                out[self.index_of(&e)].add_scaled(&h, &Rational::one());
            } else {
                // x_i^{n} v0 = -a_n^{-1} (v0 + sum_{j<n} a_j x_i^j v0)
                let c = -&self.top_inv[i];
                e[i] = 0;
                out[self.index_of(&e)].add_scaled(&h, &c);
                for j in 1..n {
                    let a = &self.coeffs[i][(j - 1) as usize];
                    if a.is_zero() {
                        continue;
                    }
                    e[i] = j;
                    out[self.index_of(&e)].add_scaled(&(&h * a), &c);
                }
            }
        }
        Ok(out)
    }

    /// `x_i^{-1}` applied to a normal form.
    fn mul_x_inv(&self, i: usize, v: &[PolyH]) -> Result<Vec<PolyH>> {
        let d = self.d;
        let n = self.coeffs[i].len() as i64;
        let up = QVec::basis(d, i).neg();
        let minus_one = -Rational::one();
        let mut out = vec![PolyH::zero(d); self.rank];
        for (idx, h) in v.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            // x_i^{-1} h(D) = h(D + e_i) x_i^{-1}
            let h = h.shift(&up)?;
            let mut e = self.basis_exponent(idx).entries().to_vec();
            if e[i] > 0 {
                e[i] -= 1;
                out[self.index_of(&e)].add_scaled(&h, &Rational::one());
            } else {
                // x_i^{-1} v0 = -sum_{j=1}^{n} a_j(D + e_i) x_i^{j-1} v0
                for j in 1..=n {
                    let a = &self.raised[i][(j - 1) as usize];
                    if a.is_zero() {
                        continue;
                    }
                    e[i] = j - 1;
                    out[self.index_of(&e)].add_scaled(&(&h * a), &minus_one);
                }
            }
        }
        Ok(out)
    }

    /// `x_i^k x_i^c v0 = sum_t g_t(D_i) x_i^t v0` as `[g_0, .., g_{n_i - 1}]`.
    /// The relations in other variables are not involved, since each `a_ij`
    /// only contains `D_i`.
    fn power_normal_form(&self, i: usize, c: usize, k: i64) -> Result<Vec<PolyH>> {
        let key = (i, c, k);
        if let Some(nf) = self.cache.0.lock().expect("cache lock").get(&key) {
            return Ok(nf.clone());
        }
        let mut e = vec![0i64; self.d];
        e[i] = c as i64;
        let mut cur = vec![PolyH::zero(self.d); self.rank];
        cur[self.index_of(&e)] = PolyH::one(self.d);
        for _ in 0..k.abs() {
            cur = if k > 0 {
                self.mul_x(i, &cur)?
            } else {
                self.mul_x_inv(i, &cur)?
            };
        }
        let nf: Vec<PolyH> = (0..self.coeffs[i].len())
            .map(|t| {
                e[i] = t as i64;
                cur[self.index_of(&e)].clone()
            })
            .collect();
        self.cache.0.lock().expect("cache lock").insert(key, nf.clone());
        Ok(nf)
    }

    /// `x^r sum_b h_b(D) x^b v0`, one variable at a time:
    /// `x_i^k h(D) x^b v0 = h(D - k e_i) sum_t g_t(D_i) x^{b with b_i = t} v0`.
    fn mul_monomial(&self, r: &ExpVec, v: &[PolyH]) -> Result<Vec<PolyH>> {
        let mut cur = v.to_vec();
        for (i, k) in r.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let shift = QVec::basis(self.d, i).scale(&Rational::from(k));
            let mut out = vec![PolyH::zero(self.d); self.rank];
            for (b, h) in cur.iter().enumerate() {
                if h.is_zero() {
                    continue;
                }
                let h = h.shift(&shift)?;
                let mut e = self.basis_exponent(b).entries().to_vec();
                let nf = self.power_normal_form(i, e[i] as usize, k)?;
                for (t, g) in nf.iter().enumerate() {
                    if !g.is_zero() {
                        e[i] = t as i64;
                        out[self.index_of(&e)].add_scaled(&(&h * g), &Rational::one());
                    }
                }
            }
            cur = out;
        }
        Ok(cur)
    }
}

/// Memo table shared by clones of a quotient; it never affects equality.
#[derive(Default)]
struct NormalForms(Mutex<HashMap<(usize, usize, i64), Vec<PolyH>>>);

impl Clone for NormalForms {
    fn clone(&self) -> Self {
        NormalForms::default()
    }
}

impl PartialEq for NormalForms {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Debug for NormalForms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("NormalForms")
    }
}

impl AdmissibleModule for WeylQuotient {
    fn d(&self) -> usize {
        self.d
    }

    fn describe(&self) -> String {
        let rels: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let terms: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(j, a)| format!("({a})*x{}^{}", i + 1, j + 1))
                    .collect();
                format!("1 + {}", terms.join(" + "))
            })
            .collect();
        format!("WeylQuotient[{}]", rels.join(", "))
    }

    fn zero(&self) -> ModVec {
        ModVec::Free(vec![PolyH::zero(self.d); self.rank])
    }

    fn act_d(&self, u: &QVec, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        check_dim(self.d, u.dim())?;
        check_dim(self.d, r.dim())?;
        let v = expect_free(v, self.rank)?;
        let lin = PolyH::linear(u, &Rational::zero());
        let hv: Vec<PolyH> = v.iter().map(|h| &lin * h).collect();
        Ok(ModVec::Free(self.mul_monomial(r, &hv)?))
    }

    fn act_x(&self, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        check_dim(self.d, r.dim())?;
        let v = expect_free(v, self.rank)?;
        Ok(ModVec::Free(self.mul_monomial(r, v)?))
    }

    fn is_weyl_module(&self) -> bool {
        true
    }

    fn free_rank(&self) -> Option<usize> {
        Some(self.rank)
    }

    fn free_coordinates(&self, v: &ModVec) -> Result<Vec<PolyH>> {
        Ok(expect_free(v, self.rank)?.to_vec())
    }

    fn vector_from_coordinates(&self, coords: &[PolyH]) -> Result<ModVec> {
        check_dim(self.rank, coords.len())?;
        for c in coords {
            check_dim(self.d, c.dim())?;
        }
        Ok(ModVec::Free(coords.to_vec()))
    }

    fn basis_label(&self, m: usize) -> String {
        format!("x^{}v0", self.basis_exponent(m))
    }

    fn sample_vector(&self, rng: &mut ChaCha8Rng) -> ModVec {
        let mut coords = vec![PolyH::zero(self.d); self.rank];
        let picks = rng.gen_range(1..=2);
        for _ in 0..picks {
            let idx = rng.gen_range(0..self.rank);
            coords[idx] = sample_poly(self.d, rng, 2, 1);
        }
        ModVec::Free(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly_h, q};

    fn one_var(coeffs: &[&str]) -> WeylQuotient {
        WeylQuotient::new(vec![coeffs.iter().map(|s| parse_poly_h(1, s).unwrap()).collect()]).unwrap()
    }

    fn free(d: usize, cs: &[&str]) -> ModVec {
        ModVec::Free(cs.iter().map(|s| parse_poly_h(d, s).unwrap()).collect())
    }

    #[test]
    fn reduction_examples() {
        let x = ExpVec::new(&[1]);
        let xinv = ExpVec::new(&[-1]);
        // f = 1 + x
        let m = one_var(&["1"]);
        let v0 = free(1, &["1"]);
        assert_eq!(m.act_x(&x, &v0).unwrap(), free(1, &["-1"]));
        assert_eq!(m.act_x(&xinv, &v0).unwrap(), free(1, &["-1"]));

        // f = 1 + D x + x^2: x (x v0) = -v0 - D x v0
        let m = one_var(&["D1", "1"]);
        let xv0 = free(1, &["0", "1"]);
        assert_eq!(m.act_x(&x, &xv0).unwrap(), free(1, &["-1", "-D1"]));
    }

    #[test]
    fn inverse_round_trips() {
        let m = one_var(&["D1 + 2", "-D1^2", "3"]);
        let v = free(1, &["D1", "1 - D1", "2"]);
        for k in [-3i64, -1, 1, 2] {
            let r = ExpVec::new(&[k]);
            let back = m.act_x(&r.neg(), &m.act_x(&r, &v).unwrap()).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn relation_annihilates_generator() {
        // f v0 = v0 + a_1 x v0 + a_2 x^2 v0 = 0
        let m = one_var(&["D1 - 1", "1/2"]);
        let v0 = free(1, &["1", "0"]);
        let x1 = m.act_x(&ExpVec::new(&[1]), &v0).unwrap();
        let x2 = m.act_x(&ExpVec::new(&[2]), &v0).unwrap();
        let a1 = parse_poly_h(1, "D1 - 1").unwrap();
        let ModVec::Free(x1c) = &x1 else { unreachable!() };
        let ModVec::Free(x2c) = &x2 else { unreachable!() };
        let mut total = [PolyH::one(1), PolyH::zero(1)];
        for k in 0..2 {
            total[k] = &total[k] + &(&a1 * &x1c[k]);
            total[k] = &total[k] + &x2c[k].scale(&crate::exact::qr(1, 2));
        }
        assert!(total.iter().all(PolyH::is_zero));
    }

    #[test]
    fn rank_is_product_of_degrees() {
        let d = 2;
        let m = WeylQuotient::new(vec![
            vec![PolyH::zero(d), PolyH::one(d)],
            vec![PolyH::zero(d), PolyH::zero(d), PolyH::constant(d, q(5))],
        ])
        .unwrap();
        assert_eq!(m.free_rank(), Some(6));
        assert_eq!(m.basis_exponent(5), ExpVec::new(&[1, 2]));
    }

    #[test]
    fn malformed_relations_rejected() {
        assert!(WeylQuotient::new(vec![vec![parse_poly_h(1, "D1").unwrap()]]).is_err());
        assert!(WeylQuotient::new(vec![vec![PolyH::zero(1)]]).is_err());
        let d = 2;
        let cross = vec![
            vec![parse_poly_h(d, "D2").unwrap(), PolyH::one(d)],
            vec![PolyH::one(d)],
        ];
        assert!(WeylQuotient::new(cross).is_err());
    }

    #[test]
    fn x_moves_commute() {
        let d = 2;
        let m = WeylQuotient::new(vec![
            vec![parse_poly_h(d, "D1").unwrap(), PolyH::one(d)],
            vec![PolyH::zero(d), PolyH::one(d)],
        ])
        .unwrap();
        let v = free(d, &["D1*D2", "1", "D2", "0"]);
        let a = m.act_x(&ExpVec::unit(2, 0), &m.act_x(&ExpVec::unit(2, 1), &v).unwrap()).unwrap();
        let b = m.act_x(&ExpVec::unit(2, 1), &m.act_x(&ExpVec::unit(2, 0), &v).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
