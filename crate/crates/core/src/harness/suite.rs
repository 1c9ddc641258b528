//! The acceptance grid: which checks run for each criterion.

use std::sync::Arc;

use super::checks::*;
use super::{CheckReport, Config, Job, ANCHORS};
use crate::error::{Error, Result};
use crate::exact::{parse_laurent, q, qr, QVec, Rational};
use crate::gl::{GlModule, GlSpec};
use crate::module::{
    LlzTensor, ModuleRef, ModuleSpec, OneVarExample, Tensor, Twist, WeylQuotient,
};

/// Criteria run by the report. Determinism is a property of two whole runs
/// and is checked by the callers.
pub const CRITERIA: &[u8] = &[1, 2, 3, 4, 5, 6, 7, 8];

const OMEGA_LAMBDA: [i64; 3] = [2, 3, 5];

fn omega(d: usize, a: i64) -> ModuleSpec {
    ModuleSpec::omega(&OMEGA_LAMBDA[..d], a)
}

/// `f_i = 1 + x_i`, `1 + x_i^2` and `1 + D_i x_i + x_i^2`.
fn weyl_rows() -> [(&'static str, &'static [&'static str]); 3] {
    [("1+x", &["1"]), ("1+x^2", &["0", "1"]), ("1+Dx+x^2", &["D", "1"])]
}

fn weyl(d: usize) -> ModuleSpec {
    ModuleSpec::weyl_uniform(d, &["1"])
}

/// Rank `r` quotient: `f_1 = 1 + x_1^r`, the others `1 + x_i`.
fn weyl_rank(d: usize, r: usize) -> Result<WeylQuotient> {
    let mut f: Vec<Vec<String>> = (1..=d).map(|_| vec!["1".to_string()]).collect();
    f[0] = (1..=r).map(|j| if j == r { "1".into() } else { "0".into() }).collect();
    match (ModuleSpec::Weyl { f }).weyl_quotient()? {
        Some(w) => Ok(w),
        None => Err(Error::InvalidParameter("not a Weyl quotient".into())),
    }
}

fn generic_alpha(d: usize) -> QVec {
    QVec::new([qr(1, 2), qr(-1, 3), qr(2, 5), qr(3, 7)][..d].to_vec())
}

fn ext(k: usize) -> GlSpec {
    GlSpec::Exterior { k }
}

fn job(
    out: &mut Vec<Job>,
    name: String,
    anchor: &'static str,
    criterion: u8,
    f: impl Fn(&mut rand_chacha::ChaCha8Rng, CheckReport) -> Result<CheckReport> + Send + Sync + 'static,
) {
    assert!(ANCHORS.contains(&anchor), "unknown anchor {anchor}");
    let n = name.clone();
    out.push(Job::new(name, move |rng| {
        CheckReport::from_result(n.clone(), anchor, criterion, f(rng, CheckReport::new(n.clone(), anchor, criterion)))
    }));
}

/// Jobs of one criterion under the given configuration.
pub fn criterion_checks(c: u8, cfg: &Config) -> Result<Vec<Job>> {
    let mut out = Vec::new();
    match c {
        1 => axioms(cfg, &mut out),
        2 => twisted_tensor(cfg, &mut out),
        3 => isomorphisms(cfg, &mut out),
        4 => image_grid(cfg, &mut out),
        5 => chain(cfg, &mut out),
        6 => t_structure(cfg, &mut out),
        7 => differentiators(&mut out),
        8 => fibers(&mut out),
        _ => return Err(Error::InvalidParameter(format!("unknown criterion {c}"))),
    }
    Ok(out)
}

fn axiom_job(out: &mut Vec<Job>, name: String, window: i64, build: impl Fn() -> Result<ModuleRef> + Send + Sync + 'static) {
    job(out, name, "admissibility-and-module-axioms", 1, move |rng, rep| {
        let m = build()?;
        check_axioms(&*m, window, rng, rep)
    });
}

fn axioms(cfg: &Config, out: &mut Vec<Job>) {
    let w = cfg.window;
    for &d in &cfg.dims {
        for a in 0..=2 {
            let s = omega(d, a);
            axiom_job(out, format!("axioms/d{d}/omega-a{a}"), w, move || s.build());
        }
        for a in 0..=2 {
            for (tag, alpha) in [("0", QVec::zeros(d)), ("generic", generic_alpha(d))] {
                let s = ModuleSpec::adalpha(&alpha, &q(a));
                axiom_job(out, format!("axioms/d{d}/adalpha-{tag}-a{a}"), w, move || s.build());
            }
        }
        for (tag, row) in weyl_rows() {
            let s = ModuleSpec::weyl_uniform(d, row);
            axiom_job(out, format!("axioms/d{d}/weyl-{tag}"), w, move || s.build());
        }
        for k in 0..=d {
            let s = ModuleSpec::tensor(omega(d, 1), ext(k));
            axiom_job(out, format!("axioms/d{d}/tensor-omega-ext{k}"), w, move || s.build());
            let s = ModuleSpec::tensor(weyl(d), ext(k));
            axiom_job(out, format!("axioms/d{d}/tensor-weyl-ext{k}"), w, move || s.build());
        }
        let s = ModuleSpec::tensor(omega(d, 2), ext(1));
        axiom_job(out, format!("axioms/d{d}/tensor-omega-a2-ext1"), w, move || s.build());
        let s = ModuleSpec::Twist { p: Box::new(weyl(d)), lambda: generic_alpha(d).iter().map(Into::into).collect() };
        axiom_job(out, format!("axioms/d{d}/twist-weyl"), w, move || s.build());
        for k in (1..=d).filter(|&k| k == 1 || k == d) {
            axiom_job(out, format!("axioms/d{d}/llz-omega-ext{k}"), w, move || {
                let p: ModuleRef = Arc::new(Twist::new(omega(d, 1).build()?, generic_alpha(d))?);
                Ok(Arc::new(LlzTensor::new(p, GlModule::exterior_power(d, k)?)?) as ModuleRef)
            });
        }
        if d == 1 {
            for g in ["x^(-1) + x^(1)", "x^(-2) + x^(3)"] {
                let s = ModuleSpec::LaurentExample { g: g.into() };
                axiom_job(out, format!("axioms/d1/laurent-example {g}"), w, move || s.build());
            }
        }
    }
}

/// Modules `P` of the isomorphism grid: `Omega(lambda, 1)` and the
/// quotient by `1 + x_i`.
fn iso_modules(d: usize) -> [(&'static str, ModuleSpec); 2] {
    [("omega", omega(d, 1)), ("weyl", weyl(d))]
}

fn twisted_tensor(cfg: &Config, out: &mut Vec<Job>) {
    let samples = cfg.samples.max(100);
    for d in [2, 3] {
        for (tag, p) in iso_modules(d) {
            for k in [1, 2] {
                for (ltag, lambda) in [("0", QVec::zeros(d)), ("e1", QVec::basis(d, 0))] {
                    let p = p.clone();
                    job(out, format!("twisted-tensor/d{d}/{tag}/ext{k}/lambda-{ltag}"), "twisted-tensor-isomorphism", 2, move |rng, rep| {
                        check_phi(p.build()?, GlModule::exterior_power(d, k)?, lambda.clone(), samples, rng, rep)
                    });
                }
            }
        }
    }
}

fn isomorphisms(cfg: &Config, out: &mut Vec<Job>) {
    let samples = cfg.samples.max(100);
    let radius = cfg.weighting_window;
    for d in [2, 3] {
        for (tag, p) in iso_modules(d) {
            for (k1, k2) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                let p = p.clone();
                job(out, format!("iterated-tensor/d{d}/{tag}/ext{k1}-ext{k2}"), "iterated-tensor-isomorphism", 3, move |rng, rep| {
                    check_iterated(p.build()?, GlModule::exterior_power(d, k1)?, GlModule::exterior_power(d, k2)?, samples, rng, rep)
                });
            }
            for k in [1, 2] {
                for (atag, alpha) in [("0", QVec::zeros(d)), ("generic", generic_alpha(d))] {
                    let p = p.clone();
                    job(out, format!("weighting-tensor/d{d}/{tag}/ext{k}/alpha-{atag}"), "weighting-of-tensor-modules", 3, move |_, rep| {
                        check_weighting_of_tensor(p.build()?, GlModule::exterior_power(d, k)?, alpha.clone(), radius.min(2), rep)
                    });
                }
            }
        }
    }
    for d in 1..=3 {
        for a in 0..=2 {
            let lambda = QVec::from_ints(&OMEGA_LAMBDA[..d]);
            job(out, format!("weighting-omega/d{d}/a{a}"), "weighting-of-omega", 3, move |_, rep| {
                check_weighting_omega(lambda.clone(), q(a), radius, rep)
            });
        }
    }
}

fn image_grid(cfg: &Config, out: &mut Vec<Job>) {
    let mut grid = vec![(2, 1), (2, 2), (3, 1), (3, 2)];
    if cfg.include_d4 {
        grid.push((4, 1));
    }
    for (d, r) in grid {
        job(out, format!("image-rank/d{d}/r{r}"), "image-rank-and-fiber-formulas", 4, move |rng, rep| {
            let p: ModuleRef = Arc::new(weyl_rank(d, r)?);
            check_image_grid(p, rng, rep)
        });
    }
}

fn chain(cfg: &Config, out: &mut Vec<Job>) {
    let samples = cfg.samples;
    for d in 1..=3 {
        for r in [1, 2] {
            job(out, format!("exterior-chain/d{d}/weyl-r{r}"), "exterior-chain", 5, move |rng, rep| {
                check_chain(Arc::new(weyl_rank(d, r)?), samples, rng, rep)
            });
        }
        let s = omega(d, 1);
        job(out, format!("exterior-chain/d{d}/omega-a1"), "exterior-chain", 5, move |rng, rep| {
            check_chain(s.build()?, samples, rng, rep)
        });
    }
    let s = omega(2, 0);
    job(out, "exterior-chain/d2/omega-a0-needs-weyl-module".into(), "exterior-chain", 5, move |rng, rep| {
        check_chain_needs_weyl_module(s.build()?, samples, rng, rep)
    });
}

fn t_structure(cfg: &Config, out: &mut Vec<Job>) {
    let samples = cfg.samples.max(100);
    for d in [2, 3] {
        for (tag, p) in iso_modules(d) {
            for k in 0..=d {
                let p = p.clone();
                job(out, format!("t-operator/d{d}/{tag}/ext{k}"), "t-operator-structure", 6, move |rng, rep| {
                    check_t_structure(p.build()?, GlModule::exterior_power(d, k)?, samples, rng, rep)
                });
            }
            let p = p.clone();
            job(out, format!("t-operator/d{d}/{tag}/ext1/relations"), "t-operator-structure", 6, move |rng, rep| {
                let t = Tensor::new(p.build()?, GlModule::exterior_power(d, 1)?)?;
                check_t_relations(&t, samples.min(40), rng, rep)
            });
        }
        for a in [0, 2] {
            let s = omega(d, a);
            job(out, format!("t-operator/d{d}/omega-a{a}/relations"), "t-operator-structure", 6, move |rng, rep| {
                check_t_relations(&*s.build()?, samples.min(40), rng, rep)
            });
        }
    }
}

fn differentiators(out: &mut Vec<Job>) {
    for (tag, alpha) in [("0", QVec::zeros(2)), ("generic", generic_alpha(2))] {
        let a = alpha.clone();
        job(out, format!("differentiator/order2/adalpha-{tag}"), "differentiator-annihilation", 7, move |rng, rep| {
            let m = crate::module::AdAlpha::new(a.clone(), q(0))?;
            check_differentiator(&m, 2, &laurent_basis(2, 2, None), 4, rng, rep)
        });
        job(out, format!("differentiator/order3/tensor-adalpha-{tag}-ext1"), "differentiator-annihilation", 7, move |rng, rep| {
            let p: ModuleRef = Arc::new(crate::module::AdAlpha::new(alpha.clone(), q(0))?);
            let t = Tensor::new(p, GlModule::exterior_power(2, 1)?)?;
            check_differentiator(&t, 3, &laurent_basis(2, 2, Some(2)), 2, rng, rep)
        });
    }
    job(out, "differentiator/order1-control".into(), "differentiator-annihilation", 7, |_, rep| {
        check_differentiator_control(rep)
    });
}

fn fibers(out: &mut Vec<Job>) {
    for d in 1..=3 {
        for (tag, row) in weyl_rows() {
            let s = ModuleSpec::weyl_uniform(d, row);
            job(out, format!("weyl-fibers/d{d}/{tag}"), "weyl-quotient-fibers", 8, move |_, rep| {
                let w = s.weyl_quotient()?.ok_or_else(|| Error::InvalidParameter("not a Weyl quotient".into()))?;
                check_weyl_fibers(&w, &fiber_points(d), rep)
            });
        }
    }
    for g in ["x^(-1) + x^(1)", "x^(-2) + x^(3)"] {
        job(out, format!("one-variable/{g}"), "one-variable-rank", 8, move |_, rep| {
            let m = OneVarExample::new(parse_laurent(1, g)?)?;
            check_one_var(&m, &[q(0), qr(1, 2), q(1), q(-3), qr(2, 5)], rep)
        });
    }
}

fn fiber_points(d: usize) -> Vec<QVec> {
    let base: [Rational; 5] = [q(0), qr(1, 2), q(1), q(-2), qr(3, 7)];
    base.iter()
        .enumerate()
        .map(|(k, b)| QVec::new((0..d).map(|i| if i % 2 == 0 { b.clone() } else { b + qr(k as i64, 3) }).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn job_names_are_unique() {
        let cfg = Config { include_d4: true, ..Config::default() };
        let mut names: Vec<String> = CRITERIA
            .iter()
            .flat_map(|&c| criterion_checks(c, &cfg).unwrap())
            .map(|j| j.name)
            .collect();
        let total = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), total);
    }

    #[test]
    fn unknown_criterion_is_rejected() {
        assert!(criterion_checks(9, &Config::default()).is_err());
    }
}
