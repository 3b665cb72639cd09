//! Run configuration (JSON, schema version 1).

use crate::inequalities::{BleiExponent, Effort, HarrisVariant};
use crate::multiindex::MultiIndex;
use crate::poly::{CoefficientKind, PolyDocument, Support};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Verify,
    Trace,
    Scan,
    Constants,
    Blei,
    Lemmas,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Trace => "trace",
            Command::Scan => "scan",
            Command::Constants => "constants",
            Command::Blei => "blei",
            Command::Lemmas => "lemmas",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seed: u64,
    /// When present it must match the command given on the command line.
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub effort: Effort,
    /// Overrides `effort.tol`.
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Output directory, relative to the config file; `--out` wins.
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub jobs: Vec<Job>,
    #[serde(default)]
    pub scan: Option<ScanConfig>,
    #[serde(default)]
    pub constants: Option<ConstantsConfig>,
    #[serde(default)]
    pub blei: Option<BleiConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    MainTheorem,
    Helson,
    Bayart,
    ClassicBh,
    Harris,
    Corollary,
}

/// One verification (or trace) job, possibly over several instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default = "default_inequality")]
    pub inequality: InequalityKind,
    pub source: Source,
    /// Number of instances drawn from an ensemble source.
    #[serde(default = "one")]
    pub count: usize,
    /// Index set for the main theorem.
    #[serde(default)]
    pub lambda: Option<Vec<MultiIndex>>,
    /// Variable bound `M` for the corollary.
    #[serde(default)]
    pub max_vars: Option<usize>,
    #[serde(default)]
    pub harris_variant: Option<HarrisVariant>,
    /// Slot of `y` in the Harris check.
    #[serde(default)]
    pub slot: Option<usize>,
    /// User constant for the classic inequality.
    #[serde(default)]
    pub constant: Option<f64>,
}

fn default_inequality() -> InequalityKind {
    InequalityKind::MainTheorem
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    /// Random homogeneous polynomials.
    Ensemble {
        kind: CoefficientKind,
        #[serde(default = "full_support")]
        support: Support,
        #[serde(rename = "N")]
        n: usize,
        m: u32,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Random analytic polynomials of total degree at most `max_degree`.
    AnalyticEnsemble {
        kind: CoefficientKind,
        #[serde(rename = "N")]
        n: usize,
        max_degree: u32,
        #[serde(default)]
        max_terms: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// A polynomial JSON file, relative to the config file.
    File {
        path: PathBuf,
    },
    Inline {
        polynomial: PolyDocument,
    },
}

fn full_support() -> Support {
    Support::Full
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanSupport {
    Full,
    /// Only `z₁^m`.
    SingleMonomial,
    Lambda {
        max_vars: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub kind: CoefficientKind,
    pub support: ScanSupport,
    #[serde(rename = "N")]
    pub n: usize,
    pub m_values: Vec<u32>,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub m_values: Vec<u32>,
    /// Values of `M` for the corollary columns.
    #[serde(default, rename = "M_values")]
    pub max_vars: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BleiCase {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BleiConfig {
    #[serde(default = "gaussian")]
    pub kind: CoefficientKind,
    pub cases: Vec<BleiCase>,
    #[serde(default = "standard_only")]
    pub variants: Vec<BleiExponent>,
}

fn gaussian() -> CoefficientKind {
    CoefficientKind::ComplexGaussian
}

fn standard_only() -> Vec<BleiExponent> {
    vec![BleiExponent::Standard]
}

/// Why a config was rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config schema error: {}", self.0)
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| SchemaError(e.to_string()))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(SchemaError(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        Ok(config)
    }

    /// Checks that the sections needed by `command` are present.
    pub fn validate_for(&self, command: Command) -> Result<(), SchemaError> {
        if let Some(c) = self.command {
            if c != command {
                return Err(SchemaError(format!(
                    "config is for command `{}`, invoked as `{}`",
                    c.as_str(),
                    command.as_str()
                )));
            }
        }
        let missing = |what: &str| Err(SchemaError(format!("command `{}` needs `{what}`", command.as_str())));
        match command {
            Command::Verify | Command::Trace if self.jobs.is_empty() => missing("jobs"),
            Command::Scan if self.scan.is_none() => missing("scan"),
            Command::Constants if self.constants.is_none() => missing("constants"),
            Command::Blei if self.blei.is_none() => missing("blei"),
            _ => Ok(()),
        }
    }

    pub fn effective_effort(&self) -> Effort {
        let mut e = self.effort;
        e.seed = self.seed;
        if let Some(t) = self.tolerance {
            e.tol = t;
        }
        e
    }
}

pub fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}
