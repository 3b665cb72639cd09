//! Norm-like quantities and the certainty bookkeeping attached to them.
//!
//! Coefficient norms are exact finite sums. Sup-norms on the polydisc are
//! bracketed: a phase search gives a sound lower bound and a Bernstein
//! certified grid gives a sound upper bound. Torus integrals come from the
//! periodic rectangle rule (with an empirical discretization error) or from
//! Monte Carlo (with a standard error).

mod grid;
mod sup;
mod torus;

pub use sup::{
    certified_sup, certified_sup_pinned, sup_norm_lower, sup_norm_upper, sup_norm_upper_capped, sup_norm_upper_with,
    sup_search, Certification, SearchOptions, SearchResult, UpperOptions,
};
pub use torus::{torus_l1_grid, torus_l1_grid_pinned, torus_l1_mc, torus_l2_grid, DEFAULT_COST_CAP};

use crate::poly::Polynomial;
use crate::summation::Neumaier;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    Exact,
    LowerBound,
    UpperBound,
    Stochastic,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffortRecord {
    pub restarts: u64,
    pub grid: u64,
    pub samples: u64,
}

/// A numeric value tagged with how much it can be trusted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    /// Standard error; nonzero only for stochastic estimates.
    pub stderr: f64,
    /// Empirical discretization error of a grid quadrature, 0 otherwise.
    #[serde(default)]
    pub error: f64,
    pub method: String,
    pub effort: EffortRecord,
}

/// Safety margin, in standard errors, applied to stochastic estimates.
pub const STDERR_MARGIN: f64 = 3.0;

impl NormEstimate {
    pub fn exact(value: f64, method: &str) -> Self {
        NormEstimate {
            value,
            kind: EstimateKind::Exact,
            stderr: 0.0,
            error: 0.0,
            method: method.to_string(),
            effort: EffortRecord::default(),
        }
    }

    pub fn with_kind(value: f64, kind: EstimateKind, method: &str, effort: EffortRecord) -> Self {
        NormEstimate {
            value,
            kind,
            stderr: 0.0,
            error: 0.0,
            method: method.to_string(),
            effort,
        }
    }

    /// A value the true quantity provably does not exceed.
    pub fn certified_upper(&self) -> Option<f64> {
        match self.kind {
            EstimateKind::Exact => Some(self.value + self.error),
            EstimateKind::UpperBound => Some(self.value),
            _ => None,
        }
    }

    /// A value the true quantity provably is not below.
    pub fn certified_lower(&self) -> Option<f64> {
        match self.kind {
            EstimateKind::Exact => Some((self.value - self.error).max(0.0)),
            EstimateKind::LowerBound => Some(self.value),
            _ => None,
        }
    }

    /// Point value shifted toward the pessimistic side by the estimate's
    /// uncertainty (`sign = +1` for an upper reading, `-1` for a lower one).
    pub fn cautious(&self, sign: f64) -> f64 {
        self.value + sign * (STDERR_MARGIN * self.stderr + self.error)
    }
}

fn scaled_p_norm(values: impl Iterator<Item = f64> + Clone, p: f64) -> f64 {
    let max = values.clone().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    let acc: Neumaier = values.map(|v| (v / max).powf(p)).collect();
    max * acc.value().powf(1.0 / p)
}

/// `(Σ (|c_α| / √(α+1))^p)^{1/p}`, or the plain `ℓ^p` norm of the
/// coefficients when `weighted` is false.
pub fn weighted_coeff_norm(poly: &impl Polynomial, p: f64, weighted: bool) -> NormEstimate {
    assert!(p > 0.0, "exponent must be positive");
    let values = poly.terms().iter().map(move |(alpha, c)| {
        if weighted {
            c.norm() / (alpha.divisor_weight().expect("weight fits") as f64).sqrt()
        } else {
            c.norm()
        }
    });
    let label = if weighted { "weighted_coeff_norm" } else { "coeff_norm" };
    NormEstimate::exact(scaled_p_norm(values, p), label)
}

/// The exponent `2m/(m+1)`.
pub fn bh_exponent(m: u32) -> f64 {
    2.0 * m as f64 / (m as f64 + 1.0)
}

/// `(Σ |c_α|² / d(p^α))^{1/2}`.
pub fn helson_lhs(f: &impl Polynomial) -> NormEstimate {
    let values = f
        .terms()
        .iter()
        .map(|(alpha, c)| c.norm() / (alpha.divisor_weight().expect("weight fits") as f64).sqrt());
    NormEstimate::exact(scaled_p_norm(values, 2.0), "helson_lhs")
}

/// Euclidean norm of the coefficient vector.
pub fn l2_coeff_norm(poly: &impl Polynomial) -> NormEstimate {
    let values = poly.terms().values().map(|c| c.norm());
    NormEstimate::exact(scaled_p_norm(values, 2.0), "l2_coeff_norm")
}
