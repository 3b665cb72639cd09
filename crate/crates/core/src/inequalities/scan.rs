use super::Effort;
use crate::error::Result;
use crate::norms::{bh_exponent, sup_norm_lower, weighted_coeff_norm};
use crate::poly::{derive_seed, random_polynomial, EnsembleSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest observed `weighted LHS / sup` over an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub max_ratio: f64,
    /// Trial index of the maximizing instance.
    pub argmax: usize,
    /// Seed of the maximizing instance.
    pub argmax_seed: u64,
    pub seed: u64,
}

/// Draws `trials` instances (instance `t` uses `derive_seed(spec.seed, t)`)
/// and records the maximum of weighted LHS over the sup-norm lower bound.
///
/// The lower bound makes every ratio an overestimate of the true one.
/// Zero instances are skipped.
pub fn empirical_min_constant(spec: &EnsembleSpec, trials: usize, effort: &Effort) -> Result<ScanRecord> {
    let ratios: Vec<(usize, u64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(spec.seed, t as u64);
            let p = random_polynomial(&EnsembleSpec { seed, ..spec.clone() })?;
            let lhs = weighted_coeff_norm(&p, bh_exponent(spec.m), true).value;
            let sup = sup_norm_lower(&p, &effort.search_options()).value;
            Ok((t, seed, if sup > 0.0 { lhs / sup } else { f64::NAN }))
        })
        .collect::<Result<_>>()?;
    let mut best = (0, derive_seed(spec.seed, 0), 0.0);
    for (t, seed, r) in ratios {
        if r > best.2 {
            best = (t, seed, r);
        }
    }
    Ok(ScanRecord {
        m: spec.m,
        n: spec.n,
        trials,
        max_ratio: best.2,
        argmax: best.0,
        argmax_seed: best.1,
        seed: spec.seed,
    })
}
