//! Property checks over module instances, deterministic sampling, and the
//! JSON report bundle.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod checks;
pub mod suite;

pub use suite::{criterion_checks, CRITERIA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// Outcome of one check. Failures carry a witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub anchor: String,
    pub criterion: u8,
    pub status: Status,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, anchor: &str, criterion: u8) -> Self {
        CheckReport {
            name: name.into(),
            anchor: anchor.to_string(),
            criterion,
            status: Status::Pass,
            samples: 0,
            witness: None,
            data: None,
        }
    }

    /// Count one comparison; the first failure becomes the witness.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok && self.status != Status::Fail {
            self.status = Status::Fail;
            self.witness = Some(witness());
        }
    }

    pub fn fail(mut self, witness: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.witness = Some(witness.into());
        self
    }

    pub fn inconclusive(mut self, why: impl Into<String>) -> Self {
        if self.status == Status::Pass {
            self.status = Status::Inconclusive;
            self.witness = Some(why.into());
        }
        self
    }

    pub fn with_data(mut self, data: serde_json::Value) -> Self {
        self.data = Some(data);
        self
    }

    /// Errors raised while checking count as failures.
    pub fn from_result(name: impl Into<String>, anchor: &str, criterion: u8, r: Result<CheckReport>) -> Self {
        match r {
            Ok(rep) => rep,
            Err(e) => CheckReport::new(name, anchor, criterion).fail(format!("error: {e}")),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Anchors naming the property each check exercises.
pub const ANCHORS: &[&str] = &[
    "admissibility-and-module-axioms",
    "twisted-tensor-isomorphism",
    "iterated-tensor-isomorphism",
    "weighting-of-tensor-modules",
    "weighting-of-omega",
    "image-rank-and-fiber-formulas",
    "exterior-chain",
    "t-operator-structure",
    "differentiator-annihilation",
    "weyl-quotient-fibers",
    "one-variable-rank",
];

/// Settings of a report run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    /// dimensions for the axiom suite
    pub dims: Vec<usize>,
    /// exponent radius of the axiom window
    pub window: i64,
    /// sampled (operator, vector) pairs per isomorphism instance
    pub samples: usize,
    /// radius for the weighting checks
    pub weighting_window: i64,
    /// criteria to run; empty means all
    pub criteria: Vec<u8>,
    /// add d = 4 instances to the rank grid
    pub include_d4: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 2024,
            dims: vec![1, 2, 3],
            window: 2,
            samples: 120,
            weighting_window: 3,
            criteria: Vec::new(),
            include_d4: false,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.iter().any(|&d| d == 0 || d > 4) {
            return Err(Error::InvalidParameter("dims must lie in 1..=4".into()));
        }
        if self.window < 0 || self.weighting_window < 0 {
            return Err(Error::InvalidParameter("windows must be nonnegative".into()));
        }
        if let Some(c) = self.criteria.iter().find(|c| !CRITERIA.contains(c)) {
            return Err(Error::InvalidParameter(format!("unknown criterion {c}")));
        }
        Ok(())
    }

    pub fn wants(&self, criterion: u8) -> bool {
        self.criteria.is_empty() || self.criteria.contains(&criterion)
    }
}

/// Independent generator per job, so results do not depend on scheduling.
pub fn job_rng(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// A named unit of work producing one report.
pub struct Job {
    pub name: String,
    pub run: Box<dyn Fn(&mut ChaCha8Rng) -> CheckReport + Send + Sync>,
}

impl Job {
    pub fn new(name: impl Into<String>, run: impl Fn(&mut ChaCha8Rng) -> CheckReport + Send + Sync + 'static) -> Self {
        Job {
            name: name.into(),
            run: Box::new(run),
        }
    }
}

/// Run jobs on the worker pool and order the reports by name.
pub fn run_jobs(jobs: Vec<Job>, seed: u64) -> Vec<CheckReport> {
    let mut reports: Vec<CheckReport> = jobs
        .par_iter()
        .map(|job| {
            let mut rng = job_rng(seed, &job.name);
            let mut rep = (job.run)(&mut rng);
            rep.name = job.name.clone();
            rep
        })
        .collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    reports
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    /// criterion -> all its checks passed
    pub criteria: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bundle {
    pub seed: u64,
    pub config: Config,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
}

impl Bundle {
    pub fn new(config: Config, checks: Vec<CheckReport>) -> Self {
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let mut criteria = BTreeMap::new();
        for c in &checks {
            let e = criteria.entry(c.criterion.to_string()).or_insert(true);
            *e &= c.passed();
        }
        let summary = Summary {
            total: checks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            inconclusive: count(Status::Inconclusive),
            criteria,
        };
        Bundle {
            seed: config.seed,
            config,
            checks,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.inconclusive == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }
}

/// Run every requested criterion.
pub fn run_report(config: &Config) -> Result<Bundle> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &c in CRITERIA {
        if config.wants(c) {
            jobs.extend(criterion_checks(c, config)?);
        }
    }
    Ok(Bundle::new(config.clone(), run_jobs(jobs, config.seed)))
}
