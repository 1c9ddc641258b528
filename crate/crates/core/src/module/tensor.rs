use num::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{expect_tensor, AdmissibleModule, ModVec, ModuleRef};
use crate::error::{check_dim, Result};
use crate::exact::{q, ExpVec, PolyH, QVec};
use crate::gl::GlModule;

/// `F(P, V) = P (x) V` with
/// `D(u,r)(z (x) y) = D(u,r)z (x) y + x^r z (x) (r u^T) y` and
/// `x^r (z (x) y) = x^r z (x) y`.
#[derive(Clone, Debug)]
pub struct Tensor {
    p: ModuleRef,
    v: GlModule,
}

impl Tensor {
    pub fn new(p: ModuleRef, v: GlModule) -> Result<Self> {
        check_dim(p.d(), v.d())?;
        Ok(Tensor { p, v })
    }

    pub fn inner(&self) -> &ModuleRef {
        &self.p
    }

    pub fn gl(&self) -> &GlModule {
        &self.v
    }

    /// `z (x) e_b`.
    pub fn pure(&self, z: ModVec, b: usize) -> ModVec {
        pure_tensor(&*self.p, self.v.dim(), z, b)
    }
}

pub(crate) fn pure_tensor(p: &dyn AdmissibleModule, n: usize, z: ModVec, b: usize) -> ModVec {
    let mut comps = vec![p.zero(); n];
    comps[b] = z;
    ModVec::Tensor(comps)
}

fn map_components(
    comps: &[ModVec],
    f: impl Fn(&ModVec) -> Result<ModVec>,
) -> Result<ModVec> {
    Ok(ModVec::Tensor(comps.iter().map(f).collect::<Result<_>>()?))
}

fn sample_components(p: &dyn AdmissibleModule, n: usize, rng: &mut ChaCha8Rng) -> ModVec {
    let mut comps = vec![p.zero(); n];
    if n == 0 {
        return ModVec::Tensor(comps);
    }
    let picks = if n == 1 { 1 } else { rng.gen_range(1..=2) };
    for _ in 0..picks {
        let b = rng.gen_range(0..n);
        comps[b] = p.sample_vector(rng);
    }
    ModVec::Tensor(comps)
}

fn tensor_free_coordinates(p: &dyn AdmissibleModule, n: usize, v: &ModVec) -> Result<Vec<PolyH>> {
    let comps = expect_tensor(v, n)?;
    let mut out = Vec::new();
    for z in comps {
        out.extend(p.free_coordinates(z)?);
    }
    Ok(out)
}

fn tensor_from_free(p: &dyn AdmissibleModule, n: usize, coords: &[PolyH]) -> Result<ModVec> {
    let rank = p
        .free_rank()
        .ok_or_else(|| crate::Error::Unsupported(format!("{} has no free U(h)-basis", p.describe())))?;
    check_dim(rank * n, coords.len())?;
    let comps = coords
        .chunks(rank.max(1))
        .take(n)
        .map(|c| p.vector_from_coordinates(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModVec::Tensor(comps))
}

impl AdmissibleModule for Tensor {
    fn d(&self) -> usize {
        self.p.d()
    }

    fn describe(&self) -> String {
        format!("F({}, {})", self.p.describe(), self.v.describe())
    }

    fn zero(&self) -> ModVec {
        ModVec::Tensor(vec![self.p.zero(); self.v.dim()])
    }

    fn act_d(&self, u: &QVec, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        let comps = expect_tensor(v, self.v.dim())?;
        let mut out = comps
            .iter()
            .map(|z| self.p.act_d(u, r, z))
            .collect::<Result<Vec<_>>>()?;
        if !r.is_zero() {
            let m = self.v.rank_one(r, u);
            for (c, z) in comps.iter().enumerate() {
                if z.is_zero() || (0..m.rows()).all(|b| m.get(b, c).is_zero()) {
                    continue;
                }
                let xz = self.p.act_x(r, z)?;
                for (b, slot) in out.iter_mut().enumerate() {
                    let k = m.get(b, c);
                    if !k.is_zero() {
                        *slot = slot.add_scaled(&xz, k)?;
                    }
                }
            }
        }
        Ok(ModVec::Tensor(out))
    }

    fn act_x(&self, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        map_components(expect_tensor(v, self.v.dim())?, |z| self.p.act_x(r, z))
    }

    fn is_weyl_module(&self) -> bool {
        self.p.is_weyl_module() && self.v.is_zero_action()
    }

    fn free_rank(&self) -> Option<usize> {
        self.p.free_rank().map(|r| r * self.v.dim())
    }

    fn free_coordinates(&self, v: &ModVec) -> Result<Vec<PolyH>> {
        tensor_free_coordinates(&*self.p, self.v.dim(), v)
    }

    fn vector_from_coordinates(&self, coords: &[PolyH]) -> Result<ModVec> {
        tensor_from_free(&*self.p, self.v.dim(), coords)
    }

    fn basis_label(&self, m: usize) -> String {
        let rank = self.p.free_rank().unwrap_or(1).max(1);
        format!("{}(x){}", self.p.basis_label(m % rank), self.v.labels()[m / rank])
    }

    fn sample_vector(&self, rng: &mut ChaCha8Rng) -> ModVec {
        sample_components(&*self.p, self.v.dim(), rng)
    }
}

/// `P (x) V` with the action
/// `(x^{r-e_j} D_j)(z (x) y) = (x^{r-e_j} D_j z) (x) y + sum_i r_i (x^{r-e_i} z) (x) E_ij y`,
/// so that `D(u,s) = sum_j u_j x^{s} D_j` with `r = s + e_j`.
#[derive(Clone, Debug)]
pub struct LlzTensor {
    p: ModuleRef,
    v: GlModule,
}

impl LlzTensor {
    pub fn new(p: ModuleRef, v: GlModule) -> Result<Self> {
        check_dim(p.d(), v.d())?;
        Ok(LlzTensor { p, v })
    }

    pub fn inner(&self) -> &ModuleRef {
        &self.p
    }

    pub fn gl(&self) -> &GlModule {
        &self.v
    }

    /// `(x^{r-e_j} D_j) v` for 0-based `j`.
    pub fn act_generator(&self, j: usize, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        let d = self.d();
        check_dim(d, r.dim())?;
        let comps = expect_tensor(v, self.v.dim())?;
        let s = r.sub(&ExpVec::unit(d, j));
        let ej = QVec::basis(d, j);
        let mut out = comps
            .iter()
            .map(|z| self.p.act_d(&ej, &s, z))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..d {
            if r[i] == 0 {
                continue;
            }
            let e = self.v.e(i, j);
            if e.is_zero() {
                continue;
            }
            let shift = r.sub(&ExpVec::unit(d, i));
            for (c, z) in comps.iter().enumerate() {
                if z.is_zero() {
                    continue;
                }
                let mut xz = None;
                for (b, slot) in out.iter_mut().enumerate() {
                    let k = e.get(b, c);
                    if k.is_zero() {
                        continue;
                    }
                    if xz.is_none() {
                        xz = Some(self.p.act_x(&shift, z)?);
                    }
                    let coef = q(r[i]) * k;
                    *slot = slot.add_scaled(xz.as_ref().expect("computed above"), &coef)?;
                }
            }
        }
        Ok(ModVec::Tensor(out))
    }
}

impl AdmissibleModule for LlzTensor {
    fn d(&self) -> usize {
        self.p.d()
    }

    fn describe(&self) -> String {
        format!("LLZ({}, {})", self.p.describe(), self.v.describe())
    }

    fn zero(&self) -> ModVec {
        ModVec::Tensor(vec![self.p.zero(); self.v.dim()])
    }

    fn act_d(&self, u: &QVec, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        let d = self.d();
        check_dim(d, u.dim())?;
        let mut out = self.zero();
        for j in 0..d {
            if u[j].is_zero() {
                continue;
            }
            let part = self.act_generator(j, &r.add(&ExpVec::unit(d, j)), v)?;
            out = out.add_scaled(&part, &u[j])?;
        }
        Ok(out)
    }

    fn act_x(&self, r: &ExpVec, v: &ModVec) -> Result<ModVec> {
        map_components(expect_tensor(v, self.v.dim())?, |z| self.p.act_x(r, z))
    }

    fn is_weyl_module(&self) -> bool {
        self.p.is_weyl_module() && self.v.is_zero_action()
    }

    fn free_rank(&self) -> Option<usize> {
        self.p.free_rank().map(|r| r * self.v.dim())
    }

    fn free_coordinates(&self, v: &ModVec) -> Result<Vec<PolyH>> {
        tensor_free_coordinates(&*self.p, self.v.dim(), v)
    }

    fn vector_from_coordinates(&self, coords: &[PolyH]) -> Result<ModVec> {
        tensor_from_free(&*self.p, self.v.dim(), coords)
    }

    fn sample_vector(&self, rng: &mut ChaCha8Rng) -> ModVec {
        sample_components(&*self.p, self.v.dim(), rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly_h;
    use crate::module::Omega;
    use std::sync::Arc;

    #[test]
    fn omega_natural_example() {
        let p: ModuleRef = Arc::new(Omega::new(QVec::from_ints(&[1, 1]), q(0)).unwrap());
        let f = Tensor::new(p, GlModule::natural(2).unwrap()).unwrap();
        let one = ModVec::Poly(PolyH::one(2));
        let v = f.pure(one, 0);
        let got = f.act_d(&QVec::basis(2, 0), &ExpVec::new(&[1, 0]), &v).unwrap();
        let want = f.pure(ModVec::Poly(parse_poly_h(2, "1 + D1").unwrap()), 0);
        assert_eq!(got, want);
    }

    #[test]
    fn trivial_v_reproduces_p() {
        let p = Omega::new(QVec::from_ints(&[2, 3]), q(2)).unwrap();
        let f = Tensor::new(Arc::new(p.clone()), GlModule::trivial(2).unwrap()).unwrap();
        let z = ModVec::Poly(parse_poly_h(2, "D1 - D2^2").unwrap());
        let u = QVec::from_ints(&[1, 1]);
        let r = ExpVec::new(&[1, -2]);
        let got = f.act_d(&u, &r, &f.pure(z.clone(), 0)).unwrap();
        assert_eq!(got, f.pure(p.act_d(&u, &r, &z).unwrap(), 0));
    }

    #[test]
    fn llz_at_unit_exponent_matches_tensor() {
        // at r = e_j both formulas agree
        let p: ModuleRef = Arc::new(Omega::new(QVec::from_ints(&[2, 3]), q(1)).unwrap());
        let v = GlModule::natural(2).unwrap();
        let f = Tensor::new(p.clone(), v.clone()).unwrap();
        let l = LlzTensor::new(p, v).unwrap();
        let z = ModVec::Poly(parse_poly_h(2, "1 + D2").unwrap());
        for j in 0..2 {
            for b in 0..2 {
                let x = f.pure(z.clone(), b);
                let ej = ExpVec::unit(2, j);
                let a = l.act_generator(j, &ej, &x).unwrap();
                let t = f.act_d(&QVec::basis(2, j), &ExpVec::zero(2), &x).unwrap();
                // x^{0} D_j plus sum_i (e_j)_i x^{e_j - e_i} E_ij = D_j (x) 1 + 1 (x) E_jj
                let e = l.gl().e(j, j);
                let mut want = t;
                for c in 0..2 {
                    let k = e.get(c, b);
                    if !k.is_zero() {
                        want = want.add_scaled(&f.pure(z.clone(), c), k).unwrap();
                    }
                }
                assert_eq!(a, want);
            }
        }
    }

    #[test]
    fn free_coordinates_round_trip() {
        let p: ModuleRef = Arc::new(Omega::new(QVec::from_ints(&[2, 3]), q(1)).unwrap());
        let f = Tensor::new(p, GlModule::exterior_power(2, 1).unwrap()).unwrap();
        let v = f.pure(ModVec::Poly(parse_poly_h(2, "D1*D2").unwrap()), 1);
        let c = f.free_coordinates(&v).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(f.vector_from_coordinates(&c).unwrap(), v);
    }
}
