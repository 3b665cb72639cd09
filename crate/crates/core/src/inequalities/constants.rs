use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::E;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaperConstant {
    pub value: f64,
    /// Set for `m = 2`, where the factor `(1 − 1/(m−1))^{m−1}` vanishes.
    pub degenerate: bool,
}

fn check_degree(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: m });
    }
    Ok(())
}

/// `m^{(m−1)/2m} · (1 − 1/(m−1))^{m−1}`, evaluated in log space.
pub fn paper_constant(m: u32) -> Result<PaperConstant> {
    check_degree(m)?;
    if m == 2 {
        return Ok(PaperConstant {
            value: 0.0,
            degenerate: true,
        });
    }
    let mf = m as f64;
    let k = mf - 1.0;
    let log = k / (2.0 * mf) * mf.ln() + k * (-1.0 / k).ln_1p();
    Ok(PaperConstant {
        value: log.exp(),
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarrisVariant {
    /// `(1 − 1/(m−1))^{m−1}`
    AsPrinted,
    /// `(1 + 1/(m−1))^{m−1}`
    PlusVariant,
}

impl HarrisVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            HarrisVariant::AsPrinted => "as_printed",
            HarrisVariant::PlusVariant => "plus_variant",
        }
    }
}

pub fn harris_factor(m: u32, variant: HarrisVariant) -> Result<f64> {
    check_degree(m)?;
    let k = (m - 1) as f64;
    Ok(match variant {
        HarrisVariant::AsPrinted if m == 2 => 0.0,
        HarrisVariant::AsPrinted => (k * (-1.0 / k).ln_1p()).exp(),
        HarrisVariant::PlusVariant => (k * (1.0 / k).ln_1p()).exp(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryConstant {
    /// `(m/M + 1)^{M/2} · paper_constant(m)`
    pub lagrange_form: f64,
    /// `2^{M/2} · m^{(M+1)/2}`
    pub simplified_form: f64,
}

pub fn corollary_constant(m: u32, max_vars: u32) -> Result<CorollaryConstant> {
    check_degree(m)?;
    if max_vars == 0 {
        return Err(Error::InvalidArgument("variable bound M must be at least 1".into()));
    }
    let (mf, big) = (m as f64, max_vars as f64);
    Ok(CorollaryConstant {
        lagrange_form: (mf / big + 1.0).powf(big / 2.0) * paper_constant(m)?.value,
        simplified_form: 2f64.powf(big / 2.0) * mf.powf((big + 1.0) / 2.0),
    })
}

/// All constants attached to one degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantProfile {
    pub m: u32,
    pub paper_constant: f64,
    pub degenerate: bool,
    /// Harris factor, plus variant.
    pub harris_variant_constant: f64,
    pub harris_as_printed: f64,
    /// `√2^m · paper_constant(m)`, the unweighted constant it implies.
    pub classic_bh_reference: f64,
    /// `√m / e`
    pub asymptote: f64,
    pub ratio_to_asymptote: f64,
}

pub fn constant_profile(m: u32) -> Result<ConstantProfile> {
    let pc = paper_constant(m)?;
    let asymptote = (m as f64).sqrt() / E;
    Ok(ConstantProfile {
        m,
        paper_constant: pc.value,
        degenerate: pc.degenerate,
        harris_variant_constant: harris_factor(m, HarrisVariant::PlusVariant)?,
        harris_as_printed: harris_factor(m, HarrisVariant::AsPrinted)?,
        classic_bh_reference: 2f64.powf(m as f64 / 2.0) * pc.value,
        asymptote,
        ratio_to_asymptote: pc.value / asymptote,
    })
}
