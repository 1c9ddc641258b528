use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wittkit::derham::image_report;
use wittkit::exact::{parse_rational, QVec};
use wittkit::gl::{GlModule, GlSpec};
use wittkit::harness::checks::{check_axioms, check_iterated, check_phi, check_weighting_of_tensor, check_weighting_omega};
use wittkit::harness::{job_rng, run_report, CheckReport, Config, Status};
use wittkit::module::{AdmissibleModule, ModuleRef, ModuleSpec};
use wittkit::weighting::weyl_fiber_check;
use wittkit::Error;

#[derive(Parser)]
#[command(name = "wittkit", version, about = "Exact checks for modules over Witt and Weyl algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// sampling seed, recorded in every report
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// also write the JSON output to this file
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Admissibility and module axioms of a module spec over an exponent window
    VerifyAxioms {
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        window: i64,
    },
    /// Ranks, fibers and freeness of the images of the exterior chain
    Derham {
        spec: PathBuf,
        /// inclusive range `a..b` of i; `a > b` gives an empty table
        #[arg(long)]
        range: Option<String>,
    },
    /// One isomorphism check
    Iso {
        which: IsoKind,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// module spec, inline JSON or a file
        #[arg(long)]
        module: Option<String>,
        /// gl_d-module spec, inline JSON or a file
        #[arg(long)]
        gl: Option<String>,
        /// second gl_d-module for iterated-tensor
        #[arg(long)]
        gl2: Option<String>,
        /// comma separated rationals; the twist vector or the lambda of weighting-omega
        #[arg(long)]
        lambda: Option<String>,
        /// weighting base point for weighting-tensor
        #[arg(long)]
        alpha: Option<String>,
        /// parameter a of weighting-omega
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value_t = 120)]
        samples: usize,
        #[arg(long)]
        window: Option<i64>,
    },
    /// Relation degrees, rank and fiber dimensions of a Weyl quotient
    WeylInfo {
        spec: PathBuf,
        /// fiber points as comma separated rationals, repeatable
        #[arg(long = "point")]
        points: Vec<String>,
    },
    /// The full acceptance suite
    Report {
        #[arg(long)]
        config: Option<PathBuf>,
        /// restrict the axiom suite to this dimension
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        window: Option<i64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum IsoKind {
    /// tensor module against the twisted tensor action
    Twist,
    /// iterated tensor module against the tensor with V1 (x) V2
    IteratedTensor,
    /// weighting of a tensor module against the tensor of the weighting
    WeightingTensor,
    /// weighting of Omega(lambda, a) against A(0, a - 1)
    WeightingOmega,
}

/// Failure modes mapped to exit codes.
enum CliError {
    Usage(String),
    Run(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidParameter(_) | Error::OutOfRange(_) | Error::DimensionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Run(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

const DEFAULT_SEED: u64 = 2024;
const OMEGA_LAMBDA: [i64; 4] = [2, 3, 5, 7];

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Inline JSON when it starts with `{`, otherwise a file name.
fn inline_or_file(s: &str) -> CliResult<String> {
    if s.trim_start().starts_with('{') {
        Ok(s.to_string())
    } else {
        read(Path::new(s))
    }
}

fn module_spec(text: &str) -> CliResult<(ModuleSpec, ModuleRef)> {
    let spec = ModuleSpec::from_json(text)?;
    let module = spec.build()?;
    Ok((spec, module))
}

fn gl_spec(arg: Option<&str>, default: GlSpec, d: usize) -> CliResult<GlModule> {
    let spec = match arg {
        Some(s) => serde_json::from_str(&inline_or_file(s)?).map_err(|e| CliError::Usage(format!("gl spec: {e}")))?,
        None => default,
    };
    Ok(spec.build(d)?)
}

fn qvec(s: &str) -> CliResult<QVec> {
    let entries = s.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>, _>>()?;
    Ok(QVec::new(entries))
}

fn check_dim(what: &str, v: &QVec, d: usize) -> CliResult<()> {
    if v.dim() == d {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} has {} entries, expected {d}", v.dim())))
    }
}

fn status_code(reports: &[CheckReport]) -> u8 {
    u8::from(reports.iter().any(|r| r.status == Status::Fail))
}

fn verify_axioms(spec: &Path, window: i64, seed: u64) -> CliResult<(Value, u8)> {
    if window < 0 {
        return Err(CliError::Usage("window must be nonnegative".into()));
    }
    let (spec, module) = module_spec(&read(spec)?)?;
    let name = format!("axioms/{}", module.describe());
    let mut rng = job_rng(seed, &name);
    let anchor = "admissibility-and-module-axioms";
    let rep = CheckReport::from_result(
        name.clone(),
        anchor,
        1,
        check_axioms(&*module, window, &mut rng, CheckReport::new(name.clone(), anchor, 1)),
    );
    let code = status_code(std::slice::from_ref(&rep));
    Ok((json!({ "seed": seed, "window": window, "module": spec, "checks": [rep] }), code))
}

fn parse_range(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("range {s:?} is not of the form a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn derham(spec: &Path, range: Option<&str>, seed: u64) -> CliResult<(Value, u8)> {
    let (spec, module) = module_spec(&read(spec)?)?;
    let d = module.d();
    let (lo, hi) = match range {
        Some(r) => parse_range(r)?,
        None => (1, d),
    };
    if lo <= hi && (lo == 0 || hi > d) {
        return Err(CliError::Usage(format!("range {lo}..{hi} outside 1..{d}")));
    }
    let mut rng = job_rng(seed, "derham");
    let rows = (lo..=hi).map(|i| image_report(&module, i, &mut rng)).collect::<Result<Vec<_>, _>>()?;
    let table = serde_json::to_value(&rows).expect("image reports serialize");
    Ok((json!({ "seed": seed, "module": spec, "table": table }), 0))
}

#[allow(clippy::too_many_arguments)]
fn iso(
    which: IsoKind,
    d: usize,
    module: Option<&str>,
    gl: Option<&str>,
    gl2: Option<&str>,
    lambda: Option<&str>,
    alpha: Option<&str>,
    a: &str,
    samples: usize,
    window: Option<i64>,
    seed: u64,
) -> CliResult<(Value, u8)> {
    if d == 0 || d > OMEGA_LAMBDA.len() {
        return Err(CliError::Usage(format!("d must lie in 1..={}", OMEGA_LAMBDA.len())));
    }
    let p = || -> CliResult<ModuleRef> {
        let text = match module {
            Some(s) => inline_or_file(s)?,
            None => ModuleSpec::omega(&OMEGA_LAMBDA[..d], 1).to_json(),
        };
        let (_, m) = module_spec(&text)?;
        if m.d() != d {
            return Err(CliError::Usage(format!("module has d = {}, expected {d}", m.d())));
        }
        Ok(m)
    };
    let (name, anchor) = match which {
        IsoKind::Twist => ("iso/twist", "twisted-tensor-isomorphism"),
        IsoKind::IteratedTensor => ("iso/iterated-tensor", "iterated-tensor-isomorphism"),
        IsoKind::WeightingTensor => ("iso/weighting-tensor", "weighting-of-tensor-modules"),
        IsoKind::WeightingOmega => ("iso/weighting-omega", "weighting-of-omega"),
    };
    let rep = CheckReport::new(name, anchor, if matches!(which, IsoKind::Twist) { 2 } else { 3 });
    let mut rng = job_rng(seed, name);
    let result = match which {
        IsoKind::Twist => {
            let lambda = match lambda {
                Some(s) => qvec(s)?,
                None => QVec::basis(d, 0),
            };
            check_dim("lambda", &lambda, d)?;
            check_phi(p()?, gl_spec(gl, GlSpec::Exterior { k: 1 }, d)?, lambda, samples, &mut rng, rep.clone())
        }
        IsoKind::IteratedTensor => {
            let v1 = gl_spec(gl, GlSpec::Exterior { k: 1 }, d)?;
            let v2 = gl_spec(gl2, GlSpec::Exterior { k: d.min(2) }, d)?;
            check_iterated(p()?, v1, v2, samples, &mut rng, rep.clone())
        }
        IsoKind::WeightingTensor => {
            let alpha = match alpha {
                Some(s) => qvec(s)?,
                None => QVec::zeros(d),
            };
            check_dim("alpha", &alpha, d)?;
            let v = gl_spec(gl, GlSpec::Exterior { k: 1 }, d)?;
            check_weighting_of_tensor(p()?, v, alpha, window.unwrap_or(2), rep.clone())
        }
        IsoKind::WeightingOmega => {
            let lambda = match lambda {
                Some(s) => qvec(s)?,
                None => QVec::from_ints(&OMEGA_LAMBDA[..d]),
            };
            if lambda.has_zero_entry() {
                return Err(CliError::Usage(format!("lambda must have nonzero entries, got {lambda}")));
            }
            check_weighting_omega(lambda, parse_rational(a)?, window.unwrap_or(3), rep.clone())
        }
    };
    let rep = CheckReport::from_result(rep.name.clone(), anchor, rep.criterion, result);
    let code = status_code(std::slice::from_ref(&rep));
    Ok((json!({ "seed": seed, "checks": [rep] }), code))
}

fn weyl_info(spec: &Path, points: &[String]) -> CliResult<(Value, u8)> {
    let spec = ModuleSpec::from_json(&read(spec)?)?;
    let w = spec
        .weyl_quotient()?
        .ok_or_else(|| CliError::Usage("weyl-info needs a spec of type \"weyl\"".into()))?;
    let d = w.d();
    let points = if points.is_empty() {
        vec![QVec::zeros(d)]
    } else {
        points.iter().map(|s| qvec(s)).collect::<CliResult<Vec<_>>>()?
    };
    let mut fibers = Vec::new();
    for p in &points {
        check_dim("point", p, d)?;
        let f = weyl_fiber_check(&w, p, 1)?;
        fibers.push(json!({ "point": p.to_string(), "fiber": f }));
    }
    let degrees = w.degrees();
    Ok((
        json!({
            "module": spec,
            "d": d,
            "degrees": degrees,
            "rank": degrees.iter().product::<usize>(),
            "fibers": fibers,
        }),
        0,
    ))
}

fn report(config: Option<&Path>, d: Option<usize>, window: Option<i64>, seed: Option<u64>) -> CliResult<(Value, u8)> {
    let mut cfg = match config {
        Some(path) => Config::from_json(&read(path)?)?,
        None => Config::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(d) = d {
        cfg.dims = vec![d];
    }
    if let Some(w) = window {
        cfg.window = w;
    }
    cfg.validate()?;
    let bundle = run_report(&cfg)?;
    for c in bundle.checks.iter().filter(|c| c.status != Status::Pass) {
        eprintln!("{:?} {}: {}", c.status, c.name, c.witness.as_deref().unwrap_or(""));
    }
    let s = &bundle.summary;
    eprintln!("{} checks: {} passed, {} failed, {} inconclusive", s.total, s.passed, s.failed, s.inconclusive);
    let code = u8::from(s.failed > 0);
    Ok((serde_json::to_value(&bundle).expect("bundle serializes"), code))
}

fn run(cli: Cli) -> CliResult<u8> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let (out, code) = match &cli.command {
        Command::VerifyAxioms { spec, window } => verify_axioms(spec, *window, seed)?,
        Command::Derham { spec, range } => derham(spec, range.as_deref(), seed)?,
        Command::Iso { which, d, module, gl, gl2, lambda, alpha, a, samples, window } => iso(
            *which,
            *d,
            module.as_deref(),
            gl.as_deref(),
            gl2.as_deref(),
            lambda.as_deref(),
            alpha.as_deref(),
            a,
            *samples,
            *window,
            seed,
        )?,
        Command::WeylInfo { spec, points } => weyl_info(spec, points)?,
        Command::Report { config, d, window } => report(config.as_deref(), *d, *window, cli.seed)?,
    };
    let text = serde_json::to_string_pretty(&out).expect("output serializes");
    match &cli.json_out {
        Some(path) => {
            fs::write(path, format!("{text}\n")).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))?
        }
        None => println!("{text}"),
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
