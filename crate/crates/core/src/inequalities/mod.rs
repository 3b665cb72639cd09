//! Numerical checks of the inequalities around the weighted
//! Bohnenblust–Hille theorem.
//!
//! Every verifier returns an [`InequalityReport`] whose verdict is derived
//! only from what the attached estimates actually guarantee: a lower bound
//! on the right-hand side can certify satisfaction, an upper bound can
//! certify a violation, and point estimates (stochastic or one-sided on the
//! wrong side) can only ever produce `satisfied-not-certified`.

mod blei;
mod constants;
mod scan;
mod trace;
mod verify;

pub use blei::{blei_factors, blei_sides, verify_blei, BleiExponent, MArray};
pub use constants::{
    constant_profile, corollary_constant, harris_factor, paper_constant, ConstantProfile, CorollaryConstant,
    HarrisVariant, PaperConstant,
};
pub use scan::{empirical_min_constant, ScanRecord};
pub use trace::{trace_proof_chain, StepKind, TraceReport, TraceStage};
pub use verify::{
    verify_bayart, verify_classic_bh, verify_corollary, verify_harris, verify_helson, verify_main_theorem,
    ConstantSource,
};

use crate::norms::{NormEstimate, SearchOptions, DEFAULT_COST_CAP};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How hard the estimators work, and the seed they use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Effort {
    /// Starts for every phase search.
    pub restarts: usize,
    pub seed: u64,
    /// Torus grid size per variable; chosen from the dimension when absent.
    pub grid: Option<usize>,
    /// Monte Carlo samples, used when no affordable grid exists.
    pub mc_samples: usize,
    /// Target relative slack of certified sup-norm upper bounds.
    pub upper_slack: f64,
    /// Maximum number of grid evaluations in one estimate.
    pub cost_cap: u64,
    /// Relative tolerance for rounding in verdict comparisons.
    pub tol: f64,
}

impl Default for Effort {
    fn default() -> Self {
        Effort {
            restarts: 32,
            seed: 0,
            grid: None,
            mc_samples: 200_000,
            upper_slack: 1e-4,
            cost_cap: DEFAULT_COST_CAP,
            tol: 1e-10,
        }
    }
}

impl Effort {
    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            restarts: self.restarts,
            seed: self.seed,
            ..SearchOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Certified: LHS upper bound ≤ constant · RHS lower bound.
    Verified,
    /// Holds for the point estimates, but they do not certify it.
    SatisfiedNotCertified,
    /// Certified violation: LHS lower bound > constant · RHS upper bound.
    ViolatedEstimates,
    /// The constant or the RHS is zero.
    Degenerate,
    /// Neither certified nor satisfied by the point estimates.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::SatisfiedNotCertified => "satisfied-not-certified",
            Verdict::ViolatedEstimates => "violated-estimates",
            Verdict::Degenerate => "degenerate",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Outcome of checking `lhs ≤ constant · rhs` on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    /// Bound on distinct variables per monomial, when one applies.
    #[serde(rename = "M")]
    pub max_vars: Option<usize>,
    pub lhs: NormEstimate,
    /// Opposite-side bound on the LHS, when one was computed.
    pub lhs_alt: Option<NormEstimate>,
    pub rhs_base: NormEstimate,
    /// Opposite-side bound on the RHS base, when one was computed.
    pub rhs_alt: Option<NormEstimate>,
    pub constant: f64,
    /// `lhs / (constant · rhs_base)`; absent when the denominator is 0.
    pub ratio: Option<f64>,
    pub verdict: Verdict,
    pub detail: String,
    pub seed: u64,
    /// Named side values (alternative constants, intermediate bounds).
    #[serde(default)]
    pub extras: BTreeMap<String, f64>,
}

impl InequalityReport {
    /// `lhs / rhs_base`, the constant the instance would need.
    pub fn needed_constant(&self) -> Option<f64> {
        (self.rhs_base.value > 0.0).then(|| self.lhs.value / self.rhs_base.value)
    }

    pub fn is_violation(&self) -> bool {
        self.verdict == Verdict::ViolatedEstimates
    }
}

fn tightest(estimates: &[&NormEstimate], f: impl Fn(&NormEstimate) -> Option<f64>, upper: bool) -> Option<f64> {
    estimates
        .iter()
        .filter_map(|e| f(e))
        .reduce(|a, b| if upper { a.min(b) } else { a.max(b) })
}

/// Verdict for `lhs ≤ constant · rhs`.
///
/// The first estimate of each slice is the primary point estimate; further
/// entries only contribute certified bounds.
pub fn judge(lhs: &[&NormEstimate], rhs: &[&NormEstimate], constant: f64, tol: f64) -> Verdict {
    let (lhs_point, rhs_point) = (lhs[0], rhs[0]);
    if constant == 0.0 || rhs_point.value == 0.0 {
        return Verdict::Degenerate;
    }
    let lhs_up = tightest(lhs, NormEstimate::certified_upper, true);
    let lhs_lo = tightest(lhs, NormEstimate::certified_lower, false);
    let rhs_up = tightest(rhs, NormEstimate::certified_upper, true);
    let rhs_lo = tightest(rhs, NormEstimate::certified_lower, false);
    if let (Some(l), Some(r)) = (lhs_up, rhs_lo) {
        if l <= constant * r * (1.0 + tol) {
            return Verdict::Verified;
        }
    }
    if let (Some(l), Some(r)) = (lhs_lo, rhs_up) {
        if l > constant * r * (1.0 + tol) {
            return Verdict::ViolatedEstimates;
        }
    }
    if lhs_point.cautious(1.0) <= constant * rhs_point.cautious(-1.0) * (1.0 + tol) {
        Verdict::SatisfiedNotCertified
    } else {
        Verdict::Inconclusive
    }
}

pub(crate) struct ReportParts {
    pub name: String,
    pub m: u32,
    pub n: usize,
    pub max_vars: Option<usize>,
    pub lhs: NormEstimate,
    pub lhs_alt: Option<NormEstimate>,
    pub rhs_base: NormEstimate,
    pub rhs_alt: Option<NormEstimate>,
    pub constant: f64,
    pub seed: u64,
    pub tol: f64,
    pub notes: Vec<String>,
    pub extras: BTreeMap<String, f64>,
}

impl ReportParts {
    pub fn finish(self) -> InequalityReport {
        let lhs: Vec<&NormEstimate> = std::iter::once(&self.lhs).chain(self.lhs_alt.as_ref()).collect();
        let rhs: Vec<&NormEstimate> = std::iter::once(&self.rhs_base).chain(self.rhs_alt.as_ref()).collect();
        let verdict = judge(&lhs, &rhs, self.constant, self.tol);
        let denominator = self.constant * self.rhs_base.value;
        let ratio = (denominator != 0.0).then(|| self.lhs.value / denominator);

        let mut notes = Vec::new();
        if verdict == Verdict::Degenerate {
            let why = if self.constant == 0.0 {
                "constant is 0"
            } else {
                "rhs is 0"
            };
            let lhs_state = if self.lhs.value == 0.0 {
                "lhs is 0, holds trivially"
            } else {
                "lhs is positive"
            };
            notes.push(format!("{why}; {lhs_state}"));
        }
        notes.extend(self.notes);
        InequalityReport {
            name: self.name,
            m: self.m,
            n: self.n,
            max_vars: self.max_vars,
            lhs: self.lhs,
            lhs_alt: self.lhs_alt,
            rhs_base: self.rhs_base,
            rhs_alt: self.rhs_alt,
            constant: self.constant,
            ratio,
            verdict,
            detail: notes.join("; "),
            seed: self.seed,
            extras: self.extras,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{EffortRecord, EstimateKind};
    use proptest::prelude::*;

    fn est(value: f64, kind: EstimateKind) -> NormEstimate {
        NormEstimate::with_kind(value, kind, "synthetic", EffortRecord::default())
    }

    #[test]
    fn verdict_strings_match_serde() {
        for v in [
            Verdict::Verified,
            Verdict::SatisfiedNotCertified,
            Verdict::ViolatedEstimates,
            Verdict::Degenerate,
            Verdict::Inconclusive,
        ] {
            assert_eq!(serde_json::to_value(v).unwrap(), v.as_str());
        }
    }

    #[test]
    fn wrong_sided_bounds_never_certify() {
        let exact = est(1.0, EstimateKind::Exact);
        // an upper bound on the RHS cannot verify
        let r = est(10.0, EstimateKind::UpperBound);
        assert_eq!(judge(&[&exact], &[&r], 1.0, 0.0), Verdict::SatisfiedNotCertified);
        // a lower bound on the RHS cannot prove a violation
        let r = est(0.1, EstimateKind::LowerBound);
        assert_eq!(judge(&[&exact], &[&r], 1.0, 0.0), Verdict::Inconclusive);
        // a lower bound on the LHS cannot verify
        let l = est(0.1, EstimateKind::LowerBound);
        let r = est(1.0, EstimateKind::Exact);
        assert_eq!(judge(&[&l], &[&r], 1.0, 0.0), Verdict::SatisfiedNotCertified);
        // stochastic RHS can never certify anything
        let mut s = est(0.1, EstimateKind::Stochastic);
        s.stderr = 0.01;
        assert_eq!(judge(&[&exact], &[&s], 1.0, 0.0), Verdict::Inconclusive);
    }

    #[test]
    fn degenerate_cases() {
        let z = est(0.0, EstimateKind::Exact);
        let one = est(1.0, EstimateKind::Exact);
        assert_eq!(judge(&[&z], &[&z], 1.0, 0.0), Verdict::Degenerate);
        assert_eq!(judge(&[&one], &[&one], 0.0, 0.0), Verdict::Degenerate);
    }

    fn kind_strategy() -> impl Strategy<Value = EstimateKind> {
        prop_oneof![
            Just(EstimateKind::Exact),
            Just(EstimateKind::LowerBound),
            Just(EstimateKind::UpperBound),
            Just(EstimateKind::Stochastic),
        ]
    }

    /// An estimate of `truth` that honours its kind's promise.
    fn honest(truth: f64, kind: EstimateKind, slack: f64, noise: f64) -> NormEstimate {
        let mut e = match kind {
            EstimateKind::Exact => {
                let mut e = est(truth + noise * slack, kind);
                e.error = slack;
                e
            }
            EstimateKind::LowerBound => est(truth * (1.0 - slack), kind),
            EstimateKind::UpperBound => est(truth * (1.0 + slack), kind),
            EstimateKind::Stochastic => est(truth * (1.0 + noise), kind),
        };
        if kind == EstimateKind::Stochastic {
            e.stderr = slack;
        }
        e
    }

    proptest! {
        #[test]
        fn certified_verdicts_are_sound(
            l in 0.0f64..10.0,
            r in 0.01f64..10.0,
            c in 0.01f64..5.0,
            kinds in proptest::collection::vec(kind_strategy(), 4),
            slacks in proptest::collection::vec(0.0f64..0.5, 4),
            noise in proptest::collection::vec(-1.0f64..1.0, 4),
        ) {
            let l1 = honest(l, kinds[0], slacks[0], noise[0]);
            let l2 = honest(l, kinds[1], slacks[1], noise[1]);
            let r1 = honest(r, kinds[2], slacks[2], noise[2]);
            let r2 = honest(r, kinds[3], slacks[3], noise[3]);
            if r1.value == 0.0 {
                return Ok(());
            }
            match judge(&[&l1, &l2], &[&r1, &r2], c, 0.0) {
                Verdict::Verified => prop_assert!(l <= c * r * (1.0 + 1e-12)),
                Verdict::ViolatedEstimates => prop_assert!(l > c * r * (1.0 - 1e-12)),
                _ => {}
            }
        }
    }
}
