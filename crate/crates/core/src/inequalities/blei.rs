//! The one-versus-rest mixed-norm inequality over `M(m,N)`.

use super::{InequalityReport, ReportParts};
use crate::error::{Error, Result};
use crate::multiindex::{enumerate_m, insert_at_extended, m_rank, IndexTuple};
use crate::norms::{bh_exponent, NormEstimate};
use crate::poly::CoefficientKind;
use crate::summation::Neumaier;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A complex array indexed by all of `M(m,N)`, stored in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct MArray {
    m: usize,
    n: usize,
    values: Vec<Complex64>,
}

fn full_len(m: usize, n: usize) -> Result<usize> {
    n.checked_pow(m as u32).ok_or(Error::Overflow("N^m"))
}

impl MArray {
    pub fn from_values(m: usize, n: usize, values: Vec<Complex64>) -> Result<Self> {
        let expected = full_len(m, n)?;
        if values.len() != expected {
            return Err(Error::IncompleteArray {
                expected,
                got: values.len(),
            });
        }
        Ok(MArray { m, n, values })
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(&IndexTuple) -> Complex64) -> Result<Self> {
        full_len(m, n)?;
        let values = enumerate_m(m, n).map(|i| f(&i)).collect();
        Ok(MArray { m, n, values })
    }

    pub fn random(m: usize, n: usize, kind: CoefficientKind, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(m, n, |_| kind.draw(&mut rng))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: &IndexTuple) -> Complex64 {
        self.values[m_rank(i, self.n)]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BleiExponent {
    /// Outer exponent `2/(m−1)`.
    #[serde(rename = "printed_2_over_m_minus_1")]
    Printed,
    /// Outer exponent `2/(m+1)`.
    #[serde(rename = "standard_2_over_m_plus_1")]
    Standard,
}

impl BleiExponent {
    pub fn as_str(self) -> &'static str {
        match self {
            BleiExponent::Printed => "printed_2_over_m_minus_1",
            BleiExponent::Standard => "standard_2_over_m_plus_1",
        }
    }

    fn value(self, m: usize) -> f64 {
        let m = m as f64;
        match self {
            BleiExponent::Printed => 2.0 / (m - 1.0),
            BleiExponent::Standard => 2.0 / (m + 1.0),
        }
    }
}

/// `Σ_j (Σ_{i ∈ M(m−1,N)} |b_{(i,_k j)}|²)^{1/2}` for `k = 1..=m`.
pub fn blei_factors(b: &MArray) -> Vec<f64> {
    let (m, n) = (b.m, b.n);
    (1..=m)
        .map(|k| {
            let outer: Neumaier = (1..=n)
                .map(|j| {
                    let inner: Neumaier = enumerate_m(m - 1, n)
                        .map(|i| b.get(&insert_at_extended(&i, k, j).expect("k ≤ m")).norm_sqr())
                        .collect();
                    inner.value().sqrt()
                })
                .collect();
            outer.value()
        })
        .collect()
}

/// Both sides by direct summation: `(Σ |b_i|^{2m/(m+1)}, ∏_k factor_k^e)`.
pub fn blei_sides(b: &MArray, exponent: BleiExponent) -> Result<(f64, f64)> {
    if b.m < 2 {
        return Err(Error::DegreeTooSmall {
            min: 2,
            got: b.m as u32,
        });
    }
    let p = bh_exponent(b.m as u32);
    let lhs: Neumaier = b.values.iter().map(|v| v.norm().powf(p)).collect();
    let e = exponent.value(b.m);
    let rhs = blei_factors(b).iter().map(|f| f.powf(e)).product();
    Ok((lhs.value(), rhs))
}

pub fn verify_blei(b: &MArray, exponent: BleiExponent, tol: f64) -> Result<InequalityReport> {
    let (lhs, rhs) = blei_sides(b, exponent)?;
    Ok(ReportParts {
        name: format!("blei[{}]", exponent.as_str()),
        m: b.m as u32,
        n: b.n,
        max_vars: None,
        lhs: NormEstimate::exact(lhs, "direct_sum"),
        lhs_alt: None,
        rhs_base: NormEstimate::exact(rhs, "direct_product"),
        rhs_alt: None,
        constant: 1.0,
        seed: 0,
        tol,
        notes: Vec::new(),
        extras: BTreeMap::new(),
    }
    .finish())
}
