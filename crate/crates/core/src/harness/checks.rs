//! Individual property checks. Each returns a report; exact equality
//! throughout.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::CheckReport;
use crate::derham::{image_rank, image_report};
use crate::error::Result;
use crate::exact::{q, ExpVec, QVec, Rational};
use crate::gl::GlModule;
use crate::module::{
    AdmissibleModule, IteratedTensorIso, ModVec, ModuleMap, ModuleRef, OneVarExample, PhiIso, PiMap, Tensor,
    WeylQuotient,
};
use crate::ops::{commutator, differentiator, t_defect, t_operator, z_d, OpExpr};
use crate::weighting::{check_omega_weighting, check_weighting_tensor, directions, weyl_fiber_check};

pub fn random_exp(d: usize, radius: i64, rng: &mut ChaCha8Rng) -> ExpVec {
    let e: Vec<i64> = (0..d).map(|_| rng.gen_range(-radius..=radius)).collect();
    ExpVec::new(&e)
}

pub fn random_direction(d: usize, rng: &mut ChaCha8Rng) -> QVec {
    directions(d).choose(rng).expect("at least one direction").clone()
}

/// Admissibility and the bracket relations on every pair `(r, s)` of the
/// window. Each window exponent gets a direction drawn from the `e_i` and
/// `(1,...,1)`; two sampled vectors are tested.
pub fn check_axioms(m: &dyn AdmissibleModule, radius: i64, rng: &mut ChaCha8Rng, report: CheckReport) -> Result<CheckReport> {
    let mut report = report;
    let d = m.d();
    let window = ExpVec::window(d, radius);
    let dirs: Vec<QVec> = window.iter().map(|_| random_direction(d, rng)).collect();
    for _ in 0..2 {
        let v = m.sample_vector(rng);
        report.record(m.act_x(&ExpVec::zero(d), &v)? == v, || format!("x^0 v != v for v = {v}"));
        let dv: Vec<ModVec> = window
            .iter()
            .zip(&dirs)
            .map(|(r, u)| m.act_d(u, r, &v))
            .collect::<Result<_>>()?;
        let xv: Vec<ModVec> = window.iter().map(|r| m.act_x(r, &v)).collect::<Result<_>>()?;
        // x^t v and D(e_i, t) v for every sum t = r + s
        let mut sums: BTreeMap<ExpVec, (ModVec, Vec<ModVec>)> = BTreeMap::new();
        for r in &window {
            for s in &window {
                let t = r.add(s);
                if let std::collections::btree_map::Entry::Vacant(slot) = sums.entry(t) {
                    let t = slot.key();
                    let x = m.act_x(t, &v)?;
                    let ds = (0..d).map(|i| m.act_d(&QVec::basis(d, i), t, &v)).collect::<Result<_>>()?;
                    slot.insert((x, ds));
                }
            }
        }
        for (a, r) in window.iter().enumerate() {
            let u = &dirs[a];
            for (b, s) in window.iter().enumerate() {
                let w = &dirs[b];
                let (x_rs, d_rs) = &sums[&r.add(s)];
                // x^r x^s v = x^{r+s} v
                let lhs = m.act_x(r, &xv[b])?;
                report.record(&lhs == x_rs, || format!("x^{r} x^{s} v != x^{{r+s}} v for v = {v}"));
                // [D(u,r), D(w,s)] = D((u|s) w - (w|r) u, r + s), antisymmetric so once per pair
                if a < b {
                    let lhs = m.act_d(u, r, &dv[b])?.sub(&m.act_d(w, s, &dv[a])?)?;
                    let z = w.scale(&u.dot_exp(s)).sub(&u.scale(&w.dot_exp(r)));
                    let mut rhs = m.zero();
                    for (zi, di) in z.iter().zip(d_rs) {
                        if !zi.is_zero() {
                            rhs = rhs.add_scaled(di, zi)?;
                        }
                    }
                    report.record(lhs == rhs, || {
                        format!("[D({u},{r}), D({w},{s})] on v = {v}: commutator {lhs}, bracket {rhs}")
                    });
                }
                // [D(u,r), x^s] = (u|s) x^{r+s}
                let lhs = m.act_d(u, r, &xv[b])?.sub(&m.act_x(s, &dv[a])?)?;
                let rhs = x_rs.scale(&u.dot_exp(s));
                report.record(lhs == rhs, || {
                    format!("[D({u},{r}), x^{s}] on v = {v}: commutator {lhs}, expected {rhs}")
                });
            }
        }
    }
    Ok(report)
}

/// `f(X v) = X f(v)` for sampled generators and vectors.
pub fn check_intertwining(
    map: &dyn ModuleMap,
    samples: usize,
    radius: i64,
    include_x: bool,
    rng: &mut ChaCha8Rng,
    report: CheckReport,
) -> Result<CheckReport> {
    let mut report = report;
    let src = map.source();
    let tgt = map.target();
    let d = src.d();
    while report.samples < samples {
        let v = src.sample_vector(rng);
        let u = random_direction(d, rng);
        let r = random_exp(d, radius, rng);
        let lhs = map.apply(&src.act_d(&u, &r, &v)?)?;
        let rhs = tgt.act_d(&u, &r, &map.apply(&v)?)?;
        report.record(lhs == rhs, || {
            format!("D({u},{r}) on {v}: map after action {lhs}, action after map {rhs}")
        });
        if include_x {
            let lhs = map.apply(&src.act_x(&r, &v)?)?;
            let rhs = tgt.act_x(&r, &map.apply(&v)?)?;
            report.record(lhs == rhs, || format!("x^{r} on {v}: {lhs} vs {rhs}"));
        }
    }
    Ok(report)
}

pub fn check_phi(p: ModuleRef, v: GlModule, lambda: QVec, samples: usize, rng: &mut ChaCha8Rng, report: CheckReport) -> Result<CheckReport> {
    let phi = match PhiIso::new(p, v, lambda) {
        Ok(phi) => phi,
        Err(crate::Error::NotDiagonalizable(why)) => {
            return Ok(report.inconclusive(format!("weight decomposition unavailable: {why}")))
        }
        Err(e) => return Err(e),
    };
    let mut report = check_intertwining(&phi, samples, 2, true, rng, report)?;
    for _ in 0..10 {
        let z = phi.source().sample_vector(rng);
        let back = phi.apply_inverse(&phi.apply(&z)?)?;
        report.record(back == z, || format!("inverse does not undo the map on {z}"));
    }
    Ok(report)
}

pub fn check_iterated(p: ModuleRef, v1: GlModule, v2: GlModule, samples: usize, rng: &mut ChaCha8Rng, report: CheckReport) -> Result<CheckReport> {
    let iso = IteratedTensorIso::new(p, v1, v2)?;
    check_intertwining(&iso, samples, 2, true, rng, report)
}

/// Consecutive maps compose to zero, and each map commutes with `D(u,r)`.
pub fn check_chain(p: ModuleRef, samples: usize, rng: &mut ChaCha8Rng, report: CheckReport) -> Result<CheckReport> {
    let d = p.d();
    let maps = (0..=d).map(|k| PiMap::new(p.clone(), k)).collect::<Result<Vec<_>>>()?;
    let mut report = report;
    for k in 1..=d {
        for _ in 0..samples.div_ceil(d).max(5) {
            let v = maps[k - 1].source().sample_vector(rng);
            let w = maps[k].apply(&maps[k - 1].apply(&v)?)?;
            report.record(w.is_zero(), || format!("pi_{k} pi_{} v = {w} for v = {v}", k - 1));
        }
    }
    let per_map = samples.div_ceil(d + 1).max(5);
    for pi in &maps {
        let start = report.samples;
        report = check_intertwining(pi, start + per_map, 2, false, rng, report)?;
    }
    Ok(report)
}

/// Expected failure: for a module whose action does not come from the
/// Weyl algebra the chain maps need not commute with `D(u,r)`. Passes when a
/// mismatch is found.
pub fn check_chain_needs_weyl_module(p: ModuleRef, samples: usize, rng: &mut ChaCha8Rng, report: CheckReport) -> Result<CheckReport> {
    let pi = PiMap::new(p.clone(), 0)?;
    let probe = check_intertwining(&pi, samples, 2, false, rng, CheckReport::new("probe", "", 0))?;
    let mut report = report;
    report.samples = probe.samples;
    Ok(match probe.witness {
        Some(w) => report.with_data(serde_json::json!({ "counterexample": w })),
        None => report.fail(format!("no mismatch found for {}", p.describe())),
    })
}

/// `(1 (x) E_ji)` on a tensor vector.
fn gl_part(t: &Tensor, i: usize, j: usize, v: &ModVec) -> Result<ModVec> {
    let e = t.gl().e(j, i);
    let comps = v.tensor_components()?;
    let mut out = vec![t.inner().zero(); comps.len()];
    for (c, z) in comps.iter().enumerate() {
        for (b, slot) in out.iter_mut().enumerate() {
            let k = e.get(b, c);
            if !k.is_zero() {
                *slot = slot.add_scaled(z, k)?;
            }
        }
    }
    Ok(ModVec::Tensor(out))
}

/// On `F(P, V)` with `P` a Weyl-algebra module: `T(e_i, e_j)` acts as
/// `1 (x) E_ji`, the defects vanish and `z_d` is the identity scalar.
pub fn check_t_structure(p: ModuleRef, v: GlModule, samples: usize, rng: &mut ChaCha8Rng, report: CheckReport) -> Result<CheckReport> {
    let d = p.d();
    let b = v
        .identity_scalar()
        .ok_or_else(|| crate::Error::InvalidParameter("identity does not act by a scalar".into()))?;
    let t = Tensor::new(p, v)?;
    let zd = z_d(d)?;
    let mut report = report;
    let per = samples.max(100);
    for _ in 0..per {
        let x = t.sample_vector(rng);
        let i = rng.gen_range(0..d);
        let j = rng.gen_range(0..d);
        let lhs = t_operator(&QVec::basis(d, i), &ExpVec::unit(d, j))?.apply(&t, &x)?;
        let rhs = gl_part(&t, i, j, &x)?;
        report.record(lhs == rhs, || format!("T(e{}, e{}) on {x}: {lhs}, expected {rhs}", i + 1, j + 1));

        let u = random_direction(d, rng);
        let r = random_exp(d, 2, rng);
        let m = random_exp(d, 2, rng);
        let w = t_defect(&u, &r, &m)?.apply(&t, &x)?;
        report.record(w.is_zero(), || format!("T({u}; {r}, {m}) on {x} = {w}"));

        let lhs = zd.apply(&t, &x)?;
        report.record(lhs == x.scale(&b), || format!("z_d on {x} = {lhs}"));
    }
    Ok(report)
}

/// `[T(v,s), T(u,r)] = (u|s) T(v,s) - (v|r) T(u,r) + T((v|r) u - (u|s) v, r + s)`
/// and `[D(w,0), T(u,r)] = [x^m, T(u,r)] = 0` on sampled vectors.
pub fn check_t_relations(m: &dyn AdmissibleModule, samples: usize, rng: &mut ChaCha8Rng, report: CheckReport) -> Result<CheckReport> {
    let d = m.d();
    let mut report = report;
    for _ in 0..samples {
        let x = m.sample_vector(rng);
        let (u, v) = (random_direction(d, rng), random_direction(d, rng));
        let (r, s) = (random_exp(d, 2, rng), random_exp(d, 2, rng));
        let tu = t_operator(&u, &r)?;
        let tv = t_operator(&v, &s)?;
        let lhs = commutator(&tv, &tu)?.apply(m, &x)?;
        let us = u.dot_exp(&s);
        let vr = v.dot_exp(&r);
        let w = u.scale(&vr).sub(&v.scale(&us));
        let rhs = tv
            .scale(&us)
            .sub(&tu.scale(&vr))?
            .add(&t_operator(&w, &r.add(&s))?)?
            .apply(m, &x)?;
        report.record(lhs == rhs, || format!("T bracket, u={u} r={r} v={v} s={s}, x={x}: {lhs} vs {rhs}"));

        let wdir = random_direction(d, rng);
        let c1 = commutator(&OpExpr::d(&wdir, &ExpVec::zero(d))?, &tu)?.apply(m, &x)?;
        report.record(c1.is_zero(), || format!("[D({wdir},0), T({u},{r})] x = {c1}"));
        let c2 = commutator(&OpExpr::x(&s), &tu)?.apply(m, &x)?;
        report.record(c2.is_zero(), || format!("[x^{s}, T({u},{r})] x = {c2}"));
    }
    Ok(report)
}

/// Differentiators of order `order` kill every basis vector `x^n (x) e_b`
/// (or `x^n` when `v` is `None`) with `n` in the window, for sampled
/// exponents `alpha, beta, gamma` and all `i, j`.
pub fn check_differentiator(
    m: &dyn AdmissibleModule,
    order: i64,
    basis: &[ModVec],
    operators: usize,
    rng: &mut ChaCha8Rng,
    report: CheckReport,
) -> Result<CheckReport> {
    let d = m.d();
    let mut report = report;
    for _ in 0..operators {
        let a = random_exp(d, 2, rng);
        let b = random_exp(d, 2, rng);
        let mut g = random_exp(d, 2, rng);
        if g.is_zero() {
            g = ExpVec::unit(d, 0);
        }
        for i in 0..d {
            for j in 0..d {
                let op = differentiator(i, j, &a, &b, &g, order)?;
                for x in basis {
                    let w = op.apply(m, x)?;
                    report.record(w.is_zero(), || format!("order {order}, i={} j={} on {x}: {w}", i + 1, j + 1));
                }
            }
        }
    }
    Ok(report)
}

/// Pure Laurent monomials `x^n` with `n` in the window, as vectors of `m`
/// (wrapped in `(x) e_b` for tensors when `tensor_dim` is given).
pub fn laurent_basis(d: usize, radius: i64, tensor_dim: Option<usize>) -> Vec<ModVec> {
    let mut out = Vec::new();
    for n in ExpVec::window(d, radius) {
        let mono = ModVec::Laurent(crate::exact::LaurentPoly::monomial(n, q(1)).expect("monomial"));
        match tensor_dim {
            None => out.push(mono),
            Some(k) => {
                for b in 0..k {
                    let mut comps = vec![ModVec::Laurent(crate::exact::LaurentPoly::zero(d)); k];
                    comps[b] = mono.clone();
                    out.push(ModVec::Tensor(comps));
                }
            }
        }
    }
    out
}

/// Lowest order fails: `m = 1` leaves `x^1` nonzero in `A_1(0, 0)`.
pub fn check_differentiator_control(report: CheckReport) -> Result<CheckReport> {
    let a = crate::module::AdAlpha::new(QVec::zeros(1), q(0))?;
    let x1 = ModVec::Laurent(crate::exact::LaurentPoly::monomial(ExpVec::new(&[1]), q(1))?);
    let z = ExpVec::zero(1);
    let w = differentiator(0, 0, &z, &z, &ExpVec::unit(1, 0), 1)?.apply(&a, &x1)?;
    let mut report = report;
    report.samples = 1;
    Ok(if w.is_zero() {
        report.fail("order one unexpectedly annihilates x^1")
    } else {
        report.with_data(serde_json::json!({ "image": w.to_string() }))
    })
}

/// Fibers of a Weyl quotient at the given points: the product of the
/// degrees, computed from relations and from normal forms.
pub fn check_weyl_fibers(w: &WeylQuotient, points: &[QVec], report: CheckReport) -> Result<CheckReport> {
    let expected: usize = w.degrees().iter().product();
    let mut report = report;
    let mut rows = Vec::new();
    for p in points {
        let c = weyl_fiber_check(w, p, 1)?;
        report.record(
            c.from_relations == expected && c.from_normal_forms == expected && c.relations_vanish,
            || format!("at {p}: {c:?}, expected {expected}"),
        );
        rows.push(serde_json::json!({ "point": p.to_string(), "from_relations": c.from_relations, "from_normal_forms": c.from_normal_forms }));
    }
    Ok(report.with_data(serde_json::json!({ "expected": expected, "fibers": rows })))
}

pub fn check_one_var(m: &OneVarExample, points: &[Rational], report: CheckReport) -> Result<CheckReport> {
    let expected = m.expected_rank();
    let mut report = report;
    let mut dims = Vec::new();
    for p in points {
        for radius in [2, 3] {
            let got = m.truncated_fiber_dim(p, radius);
            dims.push(got);
            report.record(got == expected, || {
                format!("fiber at {} (radius {radius}) is {got}, expected {expected}", crate::exact::fmt_rational(p))
            });
        }
    }
    Ok(report.with_data(serde_json::json!({ "rank": expected, "fiber_dims": dims })))
}

/// Rank and fiber rows for `i = 1..d`, plus rank additivity.
pub fn check_image_grid(p: ModuleRef, rng: &mut ChaCha8Rng, report: CheckReport) -> Result<CheckReport> {
    let d = p.d();
    let r = p.free_rank().unwrap_or(0);
    let mut report = report;
    let mut rows = Vec::new();
    let mut ranks = Vec::new();
    for i in 1..=d {
        let row = image_report(&p, i, rng)?;
        report.record(row.matches_prediction(), || format!("row {row:?}"));
        ranks.push(row.rank);
        rows.push(serde_json::to_value(&row).expect("row serializes"));
    }
    ranks.push(image_rank(&p, d + 1)?);
    for i in 1..=d {
        let want = r * crate::exact::binomial(d as i64, i as i64) as usize;
        let got = ranks[i - 1] + ranks[i];
        report.record(got == want, || format!("rank({i}) + rank({}) = {got}, expected {want}", i + 1));
    }
    Ok(report.with_data(serde_json::Value::Array(rows)))
}

pub fn check_weighting_omega(lambda: QVec, a: Rational, radius: i64, report: CheckReport) -> Result<CheckReport> {
    let cmp = check_omega_weighting(&lambda, &a, radius)?;
    Ok(from_comparison(report, cmp))
}

pub fn check_weighting_of_tensor(p: ModuleRef, v: GlModule, alpha: QVec, radius: i64, report: CheckReport) -> Result<CheckReport> {
    // weight property on the way
    let w = crate::weighting::Weighting::new(Arc::new(Tensor::new(p.clone(), v.clone())?), alpha.clone())?;
    let mut report = report;
    for n in ExpVec::window(p.d(), 1) {
        for u in directions(p.d()) {
            report.record(w.weight_property_holds(&u, &n)?, || format!("D({u},0) not scalar on piece {n}"));
        }
    }
    let cmp = check_weighting_tensor(p, v, &alpha, radius)?;
    Ok(from_comparison(report, cmp))
}

fn from_comparison(mut report: CheckReport, cmp: crate::weighting::Comparison) -> CheckReport {
    report.samples += cmp.checked;
    if cmp.mismatches > 0 {
        let w = cmp.witness.unwrap_or_default();
        report.fail(format!("{} mismatches; first: {w}", cmp.mismatches))
    } else if cmp.checked == 0 {
        report.inconclusive("nothing compared")
    } else {
        report
    }
}
