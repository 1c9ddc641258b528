//! Fibers `P / I_alpha P` of modules with a free U(h)-basis and the weight
//! module assembled from them.

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::exact::{q, rational_pow, ExpVec, PolyH, QVec, Rational};
use crate::gl::GlModule;
use crate::linalg::{sparse, QMatrix, RowSpace};
use crate::module::{basis_vector, AdAlpha, AdmissibleModule, ModVec, ModuleRef, Omega, Tensor, WeylQuotient};

/// `P / I_alpha P` for a module with a free basis: the images of the basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberSpace {
    pub alpha: String,
    pub dim: usize,
    pub labels: Vec<String>,
}

pub fn fiber(p: &dyn AdmissibleModule, alpha: &QVec) -> Result<FiberSpace> {
    check_dim(p.d(), alpha.dim())?;
    let dim = p.free_rank().ok_or_else(|| {
        Error::Unsupported(format!("fibers need a free U(h)-basis; {} has none", p.describe()))
    })?;
    Ok(FiberSpace {
        alpha: alpha.to_string(),
        dim,
        labels: (0..dim).map(|m| p.basis_label(m)).collect(),
    })
}

/// Fiber dimension of a weight module with weights in `support + Z^d`:
/// one where `point - support` is integral, zero elsewhere.
pub fn weight_fiber_dim(p: &dyn AdmissibleModule, point: &QVec) -> Result<usize> {
    check_dim(p.d(), point.dim())?;
    let support = p
        .weight_support()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a weight module", p.describe())))?;
    Ok(usize::from(point.sub(&support).to_exp().is_some()))
}

/// The weight module built from the fibers of `P` at `n + alpha`.
/// Transition matrices are computed from the free coordinates of
/// `D(u,r) w_m` and `x^r w_m`, evaluated at `n + r + alpha`. The images of
/// the basis do not depend on `n`, so they are cached per operator.
#[derive(Debug)]
pub struct Weighting {
    p: ModuleRef,
    alpha: QVec,
    rank: usize,
    basis: Vec<ModVec>,
    cache: std::sync::Mutex<TransitionCache>,
}

/// Transition matrices keyed by direction (`None` for `x^r`) and exponent.
type TransitionCache = BTreeMap<(Option<QVec>, ExpVec), Vec<Vec<PolyH>>>;

impl Weighting {
    pub fn new(p: ModuleRef, alpha: QVec) -> Result<Self> {
        check_dim(p.d(), alpha.dim())?;
        let rank = fiber(&*p, &alpha)?.dim;
        let basis = (0..rank).map(|m| basis_vector(&*p, m)).collect::<Result<_>>()?;
        Ok(Weighting {
            p,
            alpha,
            rank,
            basis,
            cache: std::sync::Mutex::new(BTreeMap::new()),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn module(&self) -> &ModuleRef {
        &self.p
    }

    /// Columns: free coordinates of the operator applied to each basis vector.
    fn images(&self, u: Option<&QVec>, r: &ExpVec) -> Result<Vec<Vec<PolyH>>> {
        let key = (u.cloned(), r.clone());
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let cols = self
            .basis
            .iter()
            .map(|w| {
                let img = match u {
                    Some(u) => self.p.act_d(u, r, w)?,
                    None => self.p.act_x(r, w)?,
                };
                self.p.free_coordinates(&img)
            })
            .collect::<Result<Vec<_>>>()?;
        self.cache.lock().expect("cache lock").insert(key, cols.clone());
        Ok(cols)
    }

    fn evaluate(&self, cols: &[Vec<PolyH>], point: &QVec) -> Result<QMatrix> {
        let mut m = QMatrix::zeros(self.rank, self.rank);
        for (c, col) in cols.iter().enumerate() {
            for (row, h) in col.iter().enumerate() {
                m.set(row, c, h.eval(point)?);
            }
        }
        Ok(m)
    }

    /// Matrix of `D(u,r)` from piece `n` to piece `n + r`.
    pub fn transition_d(&self, u: &QVec, r: &ExpVec, n: &ExpVec) -> Result<QMatrix> {
        let cols = self.images(Some(u), r)?;
        self.evaluate(&cols, &self.alpha.add_exp(&n.add(r)))
    }

    /// Matrix of `x^r` from piece `n` to piece `n + r`.
    pub fn transition_x(&self, r: &ExpVec, n: &ExpVec) -> Result<QMatrix> {
        let cols = self.images(None, r)?;
        self.evaluate(&cols, &self.alpha.add_exp(&n.add(r)))
    }

    /// `D(u,0)` acts on piece `n` by `(u|n + alpha)`.
    pub fn weight_property_holds(&self, u: &QVec, n: &ExpVec) -> Result<bool> {
        let m = self.transition_d(u, &ExpVec::zero(self.p.d()), n)?;
        Ok(m.is_scalar(&u.dot(&self.alpha.add_exp(n))))
    }

    /// Piece dimensions over a window, for dumps.
    pub fn dimensions(&self, window: &[ExpVec]) -> BTreeMap<String, usize> {
        window.iter().map(|n| (n.to_string(), self.rank)).collect()
    }
}

/// Outcome of a comparison over many sampled operators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub checked: usize,
    pub mismatches: usize,
    pub witness: Option<String>,
}

impl Comparison {
    pub fn new() -> Self {
        Comparison {
            checked: 0,
            mismatches: 0,
            witness: None,
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.mismatches += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.checked > 0
    }
}

impl Default for Comparison {
    fn default() -> Self {
        Self::new()
    }
}

/// Directions used by the window checks: the `e_i` and `(1,...,1)`.
pub fn directions(d: usize) -> Vec<QVec> {
    let mut out: Vec<QVec> = (0..d).map(|i| QVec::basis(d, i)).collect();
    if d > 1 {
        out.push(QVec::ones(d));
    }
    out
}

/// Compare the weight module of `Omega(lambda, a)` (at `alpha = 0`) with
/// `A_d(0, a-1)` through `b_n -> lambda^{-n} x^n`, on `|n_i|, |r_i| <= radius`.
pub fn check_omega_weighting(lambda: &QVec, a: &Rational, radius: i64) -> Result<Comparison> {
    let d = lambda.dim();
    let omega: ModuleRef = std::sync::Arc::new(Omega::new(lambda.clone(), a.clone())?);
    let w = Weighting::new(omega, QVec::zeros(d))?;
    let target = AdAlpha::new(QVec::zeros(d), a - q(1))?;
    let window = ExpVec::window(d, radius);
    let psi = |n: &ExpVec, c: &Rational| -> LaurentTerm {
        let scale = lambda_power_inv(lambda, n);
        LaurentTerm(n.clone(), c * scale)
    };
    let mut cmp = Comparison::new();
    for u in directions(d) {
        for r in &window {
            for n in &window {
                // route through the weighting: D b_n = c b_{n+r}
                let c = w.transition_d(&u, r, n)?.get(0, 0).clone();
                let lhs = psi(&n.add(r), &c);
                // route through A_d(0, a-1): D psi(b_n)
                let (k, e) = target.coefficient(&u, r, n);
                let rhs = LaurentTerm(e, k * lambda_power_inv(lambda, n));
                cmp.record(lhs.same(&rhs), || {
                    format!("u={u} r={r} n={n}: weighting gives {lhs:?}, A_d gives {rhs:?}")
                });
            }
        }
    }
    for r in &window {
        for n in &window {
            let c = w.transition_x(r, n)?.get(0, 0).clone();
            let lhs = psi(&n.add(r), &c);
            let rhs = LaurentTerm(n.add(r), lambda_power_inv(lambda, n));
            cmp.record(lhs.same(&rhs), || format!("x^{r} on n={n}: {lhs:?} vs {rhs:?}"));
        }
    }
    Ok(cmp)
}

#[derive(Debug)]
struct LaurentTerm(ExpVec, Rational);

impl LaurentTerm {
    fn same(&self, other: &LaurentTerm) -> bool {
        (self.1.is_zero() && other.1.is_zero()) || (self.0 == other.0 && self.1 == other.1)
    }
}

fn lambda_power_inv(lambda: &QVec, n: &ExpVec) -> Rational {
    n.iter()
        .zip(lambda.iter())
        .fold(q(1), |acc, (k, l)| acc * rational_pow(l, -k))
}

/// Weighting of `F(P, V)` against `F(weighting of P, V)`: the transition
/// matrices must agree under `(y (x) v) (x) x^n -> (y (x) x^n) (x) v`.
pub fn check_weighting_tensor(
    p: ModuleRef,
    v: GlModule,
    alpha: &QVec,
    radius: i64,
) -> Result<Comparison> {
    let d = p.d();
    let wp = Weighting::new(p.clone(), alpha.clone())?;
    let ft: ModuleRef = std::sync::Arc::new(Tensor::new(p, v.clone())?);
    let wf = Weighting::new(ft, alpha.clone())?;
    let id_v = QMatrix::identity(v.dim());
    let window = ExpVec::window(d, radius);
    let mut cmp = Comparison::new();
    for u in directions(d) {
        for r in &window {
            let ru = v.rank_one(r, &u);
            for n in &window {
                let lhs = wf.transition_d(&u, r, n)?;
                let rhs = id_v
                    .kron(&wp.transition_d(&u, r, n)?)
                    .add(&ru.kron(&wp.transition_x(r, n)?));
                cmp.record(lhs == rhs, || format!("D(u={u}, r={r}) at n={n}"));
            }
        }
    }
    for r in &window {
        for n in &window {
            let lhs = wf.transition_x(r, n)?;
            let rhs = id_v.kron(&wp.transition_x(r, n)?);
            cmp.record(lhs == rhs, || format!("x^{r} at n={n}"));
        }
    }
    Ok(cmp)
}

/// Fiber of a Weyl quotient computed three ways on the box
/// `[-radius, radius + n_i]`:
/// from the relations alone (modulo `D - alpha` the algebra becomes the
/// Laurent polynomials and `x^m f_i` becomes
/// `x^m + sum_j a_ij(alpha - m) x^{m + j e_i}`), from the images of
/// `x^m v0` under the normal form evaluated at `alpha`, and whether every
/// relation maps to zero there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylFiberCheck {
    pub from_relations: usize,
    pub from_normal_forms: usize,
    pub relations_vanish: bool,
}

pub fn weyl_fiber_check(w: &WeylQuotient, alpha: &QVec, radius: i64) -> Result<WeylFiberCheck> {
    let d = w.d();
    check_dim(d, alpha.dim())?;
    let degrees: Vec<i64> = w.degrees().iter().map(|&n| n as i64).collect();
    let lo = vec![-radius; d];
    let hi: Vec<i64> = degrees.iter().map(|n| radius + n).collect();
    let cells = ExpVec::boxed(&lo, &hi);
    let index: BTreeMap<&ExpVec, usize> = cells.iter().enumerate().map(|(i, e)| (e, i)).collect();

    let v0 = basis_vector(w, 0)?;
    let images = cells
        .iter()
        .map(|m| crate::module::fiber_coordinates(w, &w.act_x(m, &v0)?, alpha))
        .collect::<Result<Vec<_>>>()?;
    let mut image_space = RowSpace::new();
    for img in &images {
        image_space.insert(sparse(img));
    }

    let rank = w.free_rank().expect("Weyl quotients are free");
    let mut relations = RowSpace::new();
    let mut relations_vanish = true;
    for i in 0..d {
        for m in cells.iter().filter(|m| m[i] <= radius) {
            let mut row = vec![Rational::zero(); cells.len()];
            row[index[m]] = q(1);
            let point = alpha.sub(&QVec::from_exp(m));
            for (j, a) in w.coefficients()[i].iter().enumerate() {
                let target = m.add(&ExpVec::unit(d, i).scale(j as i64 + 1));
                row[index[&target]] += a.eval(&point)?;
            }
            let mut mapped = vec![Rational::zero(); rank];
            for (k, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (slot, x) in mapped.iter_mut().zip(&images[k]) {
                    *slot += c * x;
                }
            }
            relations_vanish &= mapped.iter().all(Zero::is_zero);
            relations.insert(sparse(&row));
        }
    }
    Ok(WeylFiberCheck {
        from_relations: cells.len() - relations.rank(),
        from_normal_forms: image_space.rank(),
        relations_vanish,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_poly_h, qr};
    use std::sync::Arc;

    fn omega(l: &[i64], a: i64) -> ModuleRef {
        Arc::new(Omega::new(QVec::from_ints(l), q(a)).unwrap())
    }

    #[test]
    fn fiber_dims() {
        assert_eq!(fiber(&*omega(&[2, 3], 1), &QVec::zeros(2)).unwrap().dim, 1);
        let w = WeylQuotient::binomial_relations(1, 2).unwrap();
        assert_eq!(fiber(&w, &QVec::zeros(1)).unwrap().dim, 2);
        let t = Tensor::new(omega(&[2, 3], 1), GlModule::natural(2).unwrap()).unwrap();
        assert_eq!(fiber(&t, &QVec::from_ints(&[1, 1])).unwrap().dim, 2);
        let a = AdAlpha::new(QVec::zeros(2), q(0)).unwrap();
        assert!(matches!(fiber(&a, &QVec::zeros(2)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn weight_modules_off_the_lattice_vanish() {
        let a = AdAlpha::new(QVec::new(vec![qr(1, 2)]), q(0)).unwrap();
        assert_eq!(weight_fiber_dim(&a, &QVec::zeros(1)).unwrap(), 0);
        assert_eq!(weight_fiber_dim(&a, &QVec::new(vec![qr(-3, 2)])).unwrap(), 1);
    }

    #[test]
    fn omega_transition_coefficient() {
        let l = QVec::from_ints(&[2, 3]);
        let w = Weighting::new(omega(&[2, 3], 2), QVec::zeros(2)).unwrap();
        let u = QVec::from_ints(&[1, 1]);
        let r = ExpVec::new(&[1, -1]);
        let n = ExpVec::new(&[2, 0]);
        // lambda^r (u | n + r - a r)
        let want = l.power(&r) * u.dot_exp(&n.add(&r).sub(&r.scale(2)));
        assert_eq!(w.transition_d(&u, &r, &n).unwrap().get(0, 0), &want);
        assert!(w.weight_property_holds(&u, &n).unwrap());
    }

    #[test]
    fn example_identifications() {
        assert!(check_omega_weighting(&QVec::from_ints(&[2]), &q(1), 3).unwrap().passed());
        assert!(check_omega_weighting(&QVec::from_ints(&[1]), &q(1), 3).unwrap().passed());
        assert!(check_omega_weighting(&QVec::from_ints(&[2, 3]), &q(0), 2).unwrap().passed());
    }

    #[test]
    fn weighting_commutes_with_tensoring() {
        let nat = GlModule::natural(1).unwrap();
        assert!(check_weighting_tensor(omega(&[2], 1), nat, &QVec::zeros(1), 3).unwrap().passed());
        let w: ModuleRef = Arc::new(WeylQuotient::binomial_relations(2, 1).unwrap());
        let cmp = check_weighting_tensor(w, GlModule::natural(2).unwrap(), &QVec::new(vec![qr(1, 3), q(0)]), 2).unwrap();
        assert!(cmp.passed(), "{cmp:?}");
    }

    #[test]
    fn weyl_fibers_agree() {
        let w = WeylQuotient::new(vec![
            vec![parse_poly_h(2, "D1").unwrap(), PolyH::one(2)],
            vec![PolyH::zero(2), PolyH::zero(2), PolyH::constant(2, q(-2))],
        ])
        .unwrap();
        for alpha in [QVec::zeros(2), QVec::new(vec![qr(1, 2), q(-3)])] {
            let c = weyl_fiber_check(&w, &alpha, 1).unwrap();
            assert_eq!((c.from_relations, c.from_normal_forms, c.relations_vanish), (6, 6, true));
        }
    }
}
