//! Batch front end: reads a [`RunConfig`], runs the jobs on a worker pool
//! and writes JSON-lines and CSV reports in job order.
//!
//! Exit status: 0 when no certified violation was produced (with
//! `--expect-violations`: when at least one was), 1 otherwise, 2 for an
//! invalid config or input, 3 when a grid exceeds the cost cap, 4 for I/O
//! failures.

pub mod config;
mod output;

pub use config::{Command, RunConfig, SchemaError};
pub use output::{read_reports, read_summary, SummaryRow};

use crate::error::Error;
use crate::inequalities::{
    constant_profile, corollary_constant, empirical_min_constant, trace_proof_chain, verify_bayart, verify_blei,
    verify_classic_bh, verify_corollary, verify_harris, verify_helson, verify_main_theorem, ConstantSource, Effort,
    HarrisVariant, InequalityReport, MArray, ScanRecord, TraceReport,
};
use crate::multiindex::{lemmas, MultiIndex};
use crate::poly::{
    derive_seed, random_analytic, random_polynomial, AnalyticEnsembleSpec, AnyPolynomial, EnsembleSpec,
    HomogeneousPolynomial, Support,
};
use config::{InequalityKind, Job, ScanSupport, Source};
use output::OutputDir;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATIONS: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_COST_CAP: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "BH_LAB_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub enum HarnessError {
    Config(String),
    CostCap(String),
    Io(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Config(_) => EXIT_CONFIG,
            HarnessError::CostCap(_) => EXIT_COST_CAP,
            HarnessError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for HarnessError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HarnessError::Config(s) => write!(f, "{s}"),
            HarnessError::CostCap(s) => write!(f, "cost cap exceeded: {s}"),
            HarnessError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

impl From<Error> for HarnessError {
    fn from(e: Error) -> Self {
        match e {
            Error::CostCap { points, cap } => {
                HarnessError::CostCap(format!("{points} grid points requested, cost_cap is {cap}"))
            }
            other => HarnessError::Config(other.to_string()),
        }
    }
}

impl From<SchemaError> for HarnessError {
    fn from(e: SchemaError) -> Self {
        HarnessError::Config(e.to_string())
    }
}

/// Exit status for a finished run.
pub fn exit_status(violations: usize, expect_violations: bool) -> u8 {
    if (violations > 0) == expect_violations {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub command: Command,
    pub config: PathBuf,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub expect_violations: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    pub records: usize,
    pub violations: usize,
    pub verdicts: BTreeMap<String, usize>,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn exit_code(&self, expect_violations: bool) -> u8 {
        exit_status(self.violations, expect_violations)
    }
}

/// Reads the config, applies command-line overrides, and runs it.
pub fn run(opts: &RunOptions) -> Result<RunSummary, HarnessError> {
    let text = std::fs::read_to_string(&opts.config)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", opts.config.display())))?;
    let mut config = RunConfig::from_json(&text)?;
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    config.validate_for(opts.command)?;
    let base = opts.config.parent().map(Path::to_path_buf).unwrap_or_default();
    let out = match (&opts.out, &config.out) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) => config::resolve(&base, o),
        (None, None) => PathBuf::from("bh-lab-out"),
    };
    run_config(opts.command, &config, &base, &out)
}

/// Runs an already parsed config; relative paths resolve against `base`.
pub fn run_config(command: Command, config: &RunConfig, base: &Path, out: &Path) -> Result<RunSummary, HarnessError> {
    let mut dir = OutputDir::create(out.to_path_buf())?;
    let effort = config.effective_effort();
    let mut summary = RunSummary::default();
    match command {
        Command::Verify => {
            let reports = run_verify(config, base, &effort)?;
            for r in &reports {
                *summary.verdicts.entry(r.verdict.as_str().to_string()).or_default() += 1;
            }
            summary.violations = reports.iter().filter(|r| r.is_violation()).count();
            summary.records = reports.len();
            write_reports(&mut dir, &reports)?;
        }
        Command::Trace => {
            let traces = run_trace(config, base, &effort)?;
            summary.records = traces.len();
            summary.violations = traces.iter().filter(|t| t.report.first_failure.is_some()).count();
            summary
                .verdicts
                .insert("chain_holds".into(), summary.records - summary.violations);
            summary.verdicts.insert("chain_fails".into(), summary.violations);
            let rows: Vec<TraceRow> = traces
                .iter()
                .flat_map(|t| {
                    t.report.stages.iter().map(move |s| TraceRow {
                        job: t.job,
                        instance: t.instance,
                        seed: t.seed,
                        stage: s.index,
                        name: s.name.clone(),
                        value: s.value,
                        error: s.error,
                        holds: s.holds,
                    })
                })
                .collect();
            dir.jsonl("trace.jsonl", &traces)?;
            dir.csv("trace.csv", &rows)?;
        }
        Command::Scan => {
            let records = run_scan(config, &effort)?;
            summary.records = records.len();
            dir.jsonl("scan.jsonl", &records)?;
            dir.csv("scan.csv", &records)?;
        }
        Command::Constants => {
            let (header, rows) = constant_table(config.constants.as_ref().expect("validated"))?;
            summary.records = rows.len();
            dir.csv_records("constants.csv", &header, &rows)?;
        }
        Command::Blei => {
            let reports = run_blei(config)?;
            for r in &reports {
                *summary.verdicts.entry(r.verdict.as_str().to_string()).or_default() += 1;
            }
            summary.violations = reports.iter().filter(|r| r.is_violation()).count();
            summary.records = reports.len();
            write_reports(&mut dir, &reports)?;
        }
        Command::Lemmas => {
            let checks = lemmas::run_all();
            summary.records = checks.len();
            summary.violations = checks.iter().filter(|c| !c.passed()).count();
            dir.jsonl("lemmas.jsonl", &checks)?;
        }
    }
    summary.files = dir.written;
    Ok(summary)
}

fn write_reports(dir: &mut OutputDir, reports: &[InequalityReport]) -> Result<(), HarnessError> {
    let rows: Vec<SummaryRow> = reports.iter().map(SummaryRow::from).collect();
    dir.jsonl("reports.jsonl", reports)?;
    dir.csv("summary.csv", &rows)
}

struct Instance<'a> {
    job_index: usize,
    instance: usize,
    job: &'a Job,
    poly: AnyPolynomial,
    seed: u64,
}

fn expand<'a>(config: &'a RunConfig, base: &Path) -> Result<Vec<Instance<'a>>, HarnessError> {
    let mut out = Vec::new();
    for (job_index, job) in config.jobs.iter().enumerate() {
        let job_seed = |s: &Option<u64>| s.unwrap_or_else(|| derive_seed(config.seed, job_index as u64));
        match &job.source {
            Source::Ensemble {
                kind,
                support,
                n,
                m,
                seed,
            } => {
                let base_seed = job_seed(seed);
                for t in 0..job.count {
                    let seed = derive_seed(base_seed, t as u64);
                    let spec = EnsembleSpec {
                        kind: *kind,
                        support: support.clone(),
                        seed,
                        n: *n,
                        m: *m,
                    };
                    let poly = AnyPolynomial::Homogeneous(random_polynomial(&spec)?);
                    out.push(Instance {
                        job_index,
                        instance: t,
                        job,
                        poly,
                        seed,
                    });
                }
            }
            Source::AnalyticEnsemble {
                kind,
                n,
                max_degree,
                max_terms,
                seed,
            } => {
                let base_seed = job_seed(seed);
                for t in 0..job.count {
                    let seed = derive_seed(base_seed, t as u64);
                    let spec = AnalyticEnsembleSpec {
                        kind: *kind,
                        n: *n,
                        max_degree: *max_degree,
                        seed,
                        max_terms: *max_terms,
                    };
                    out.push(Instance {
                        job_index,
                        instance: t,
                        job,
                        poly: AnyPolynomial::Analytic(random_analytic(&spec)?),
                        seed,
                    });
                }
            }
            Source::File { path } => {
                let path = config::resolve(base, path);
                let text =
                    std::fs::read_to_string(&path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
                out.push(Instance {
                    job_index,
                    instance: 0,
                    job,
                    poly: AnyPolynomial::from_json(&text)?,
                    seed: config.seed,
                });
            }
            Source::Inline { polynomial } => out.push(Instance {
                job_index,
                instance: 0,
                job,
                poly: AnyPolynomial::from_document(polynomial)?,
                seed: config.seed,
            }),
        }
    }
    Ok(out)
}

fn homogeneous<'a>(inst: &'a Instance, what: &str) -> Result<&'a HomogeneousPolynomial, HarnessError> {
    match &inst.poly {
        AnyPolynomial::Homogeneous(p) => Ok(p),
        AnyPolynomial::Analytic(_) => Err(HarnessError::Config(format!(
            "job {}: {what} needs a homogeneous polynomial (set \"m\")",
            inst.job_index
        ))),
    }
}

fn verify_one(inst: &Instance, effort: &Effort) -> Result<InequalityReport, HarnessError> {
    let job = inst.job;
    let mut report = match job.inequality {
        InequalityKind::MainTheorem => {
            let p = homogeneous(inst, "main_theorem")?;
            let lambda: Option<BTreeSet<MultiIndex>> = job.lambda.as_ref().map(|l| l.iter().cloned().collect());
            verify_main_theorem(p, lambda.as_ref(), effort)?
        }
        InequalityKind::Helson => verify_helson(&inst.poly.as_analytic(), effort)?,
        InequalityKind::Bayart => verify_bayart(homogeneous(inst, "bayart")?, effort)?,
        InequalityKind::ClassicBh => {
            let source = job
                .constant
                .map_or(ConstantSource::PaperConstantTimesSqrt2m, ConstantSource::User);
            verify_classic_bh(homogeneous(inst, "classic_bh")?, source, effort)?
        }
        InequalityKind::Harris => verify_harris(
            homogeneous(inst, "harris")?,
            job.slot.unwrap_or(1),
            job.harris_variant.unwrap_or(HarrisVariant::PlusVariant),
            effort,
        )?,
        InequalityKind::Corollary => {
            let max_vars = job
                .max_vars
                .ok_or_else(|| HarnessError::Config(format!("job {}: corollary needs max_vars", inst.job_index)))?;
            verify_corollary(homogeneous(inst, "corollary")?, max_vars, effort)?
        }
    };
    report.seed = inst.seed;
    if let Some(label) = &job.label {
        report.name = format!("{label}/{}", report.name);
    }
    Ok(report)
}

fn run_verify(config: &RunConfig, base: &Path, effort: &Effort) -> Result<Vec<InequalityReport>, HarnessError> {
    let instances = expand(config, base)?;
    instances.par_iter().map(|inst| verify_one(inst, effort)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub job: usize,
    pub instance: usize,
    pub seed: u64,
    pub report: TraceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TraceRow {
    job: usize,
    instance: usize,
    seed: u64,
    stage: usize,
    name: String,
    value: f64,
    error: f64,
    holds: bool,
}

fn run_trace(config: &RunConfig, base: &Path, effort: &Effort) -> Result<Vec<TraceRecord>, HarnessError> {
    let instances = expand(config, base)?;
    instances
        .par_iter()
        .map(|inst| {
            let p = homogeneous(inst, "trace")?;
            let variant = inst.job.harris_variant.unwrap_or(HarrisVariant::PlusVariant);
            Ok(TraceRecord {
                job: inst.job_index,
                instance: inst.instance,
                seed: inst.seed,
                report: trace_proof_chain(p, variant, effort)?,
            })
        })
        .collect()
}

fn run_scan(config: &RunConfig, effort: &Effort) -> Result<Vec<ScanRecord>, HarnessError> {
    let scan = config.scan.as_ref().expect("validated");
    let mut out = Vec::new();
    for &m in &scan.m_values {
        let support = match &scan.support {
            ScanSupport::Full => Support::Full,
            ScanSupport::Lambda { max_vars } => Support::Lambda { max_vars: *max_vars },
            ScanSupport::SingleMonomial => {
                let mut e = vec![0; scan.n];
                *e.first_mut()
                    .ok_or_else(|| HarnessError::Config("scan needs N ≥ 1".into()))? = m;
                Support::Explicit(vec![MultiIndex::new(e)])
            }
        };
        let spec = EnsembleSpec {
            kind: scan.kind,
            support,
            seed: derive_seed(config.seed, m as u64),
            n: scan.n,
            m,
        };
        out.push(empirical_min_constant(&spec, scan.trials, effort)?);
    }
    Ok(out)
}

fn constant_table(c: &config::ConstantsConfig) -> Result<(Vec<String>, Vec<Vec<String>>), HarnessError> {
    let mut header: Vec<String> = [
        "m",
        "paper_constant",
        "degenerate",
        "harris_plus_constant",
        "harris_as_printed",
        "sqrt_m_over_e",
        "ratio_to_asymptote",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for big in &c.max_vars {
        header.push(format!("lagrange_form_M{big}"));
        header.push(format!("simplified_form_M{big}"));
    }
    let mut rows = Vec::new();
    for &m in &c.m_values {
        let p = constant_profile(m)?;
        let mut row = vec![
            m.to_string(),
            p.paper_constant.to_string(),
            p.degenerate.to_string(),
            p.harris_variant_constant.to_string(),
            p.harris_as_printed.to_string(),
            p.asymptote.to_string(),
            p.ratio_to_asymptote.to_string(),
        ];
        for &big in &c.max_vars {
            let cc = corollary_constant(m, big)?;
            row.push(cc.lagrange_form.to_string());
            row.push(cc.simplified_form.to_string());
        }
        rows.push(row);
    }
    Ok((header, rows))
}

fn run_blei(config: &RunConfig) -> Result<Vec<InequalityReport>, HarnessError> {
    let blei = config.blei.as_ref().expect("validated");
    let tol = config.effective_effort().tol;
    let mut jobs = Vec::new();
    for (c, case) in blei.cases.iter().enumerate() {
        let case_seed = derive_seed(config.seed, c as u64);
        for t in 0..case.trials {
            jobs.push((case, derive_seed(case_seed, t as u64)));
        }
    }
    let nested: Vec<Vec<InequalityReport>> = jobs
        .par_iter()
        .map(|(case, seed)| {
            let b = MArray::random(case.m, case.n, blei.kind, *seed)?;
            blei.variants
                .iter()
                .map(|v| {
                    let mut r = verify_blei(&b, *v, tol)?;
                    r.seed = *seed;
                    Ok(r)
                })
                .collect::<Result<Vec<_>, HarnessError>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// Configures the global worker pool from [`THREADS_ENV`], once.
pub fn init_thread_pool() -> Result<(), HarnessError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| HarnessError::Config(format!("{THREADS_ENV}={value} is not a positive integer")))?;
    // a pool that already exists keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}
