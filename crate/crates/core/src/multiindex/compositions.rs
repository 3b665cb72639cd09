use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Real and integer bounds on `α + 1` over `Λ_{N,M}` at degree `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionBound {
    pub m: u32,
    pub max_vars: u32,
    /// `(m/M + 1)^M`
    pub real_bound: f64,
    /// Brute-force maximum of `∏ (α_r + 1)` over compositions of `m` into at
    /// most `M` parts.
    pub integer_max: u128,
    /// A maximizing set of nonzero parts, sorted descending.
    pub argmax: Vec<u32>,
}

#[derive(Debug, Clone, Copy)]
pub struct CompositionCap {
    pub max_m: u32,
    pub max_vars: u32,
}

impl Default for CompositionCap {
    fn default() -> Self {
        CompositionCap { max_m: 40, max_vars: 6 }
    }
}

pub fn divisor_weight_bound(m: u32, max_vars: u32) -> Result<CompositionBound> {
    divisor_weight_bound_with_cap(m, max_vars, CompositionCap::default())
}

pub fn divisor_weight_bound_with_cap(m: u32, max_vars: u32, cap: CompositionCap) -> Result<CompositionBound> {
    if m < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: m });
    }
    if max_vars < 1 {
        return Err(Error::InvalidArgument("max_vars must be at least 1".into()));
    }
    if m > cap.max_m {
        return Err(Error::SizeCap {
            what: "degree m",
            value: m as u64,
            cap: cap.max_m as u64,
        });
    }
    if max_vars > cap.max_vars {
        return Err(Error::SizeCap {
            what: "variable count M",
            value: max_vars as u64,
            cap: cap.max_vars as u64,
        });
    }

    // The product is symmetric in the parts, so partitions (parts in
    // nonincreasing order) cover every composition.
    let mut best = (0u128, Vec::new());
    let mut parts = Vec::with_capacity(max_vars as usize);
    search(m, m, max_vars, &mut parts, &mut best);

    let real_bound = (m as f64 / max_vars as f64 + 1.0).powi(max_vars as i32);
    Ok(CompositionBound {
        m,
        max_vars,
        real_bound,
        integer_max: best.0,
        argmax: best.1,
    })
}

fn search(remaining: u32, largest: u32, slots: u32, parts: &mut Vec<u32>, best: &mut (u128, Vec<u32>)) {
    if remaining == 0 {
        let value: u128 = parts.iter().map(|&p| p as u128 + 1).product();
        if value > best.0 {
            *best = (value, parts.clone());
        }
        return;
    }
    if slots == 0 {
        return;
    }
    for part in (1..=largest.min(remaining)).rev() {
        parts.push(part);
        search(remaining - part, part, slots - 1, parts, best);
        parts.pop();
    }
}
