//! Seeded random polynomial ensembles.
//!
//! All draws use `ChaCha8Rng::seed_from_u64(seed)` from `rand_chacha`, a
//! portable stream cipher generator, so a spec reproduces the same
//! coefficients bit for bit on every platform. Coefficients are drawn in
//! the support's enumeration order:
//!
//! * `steinhaus`: `e^{2πiu}` with `u` uniform on `[0, 1)`;
//! * `rademacher`: `±1` with equal probability;
//! * `complex_gaussian`: `(x + iy)/√2` with `x, y` standard normal.

use super::{AnalyticPolynomial, HomogeneousPolynomial};
use crate::error::{Error, Result};
use crate::multiindex::{enumerate_alphas, enumerate_lambda, MultiIndex};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientKind {
    Steinhaus,
    Rademacher,
    ComplexGaussian,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// Every `α` with `|α| = m`.
    Full,
    /// `Λ_{N,M}`: at most `max_vars` distinct variables per monomial.
    Lambda {
        max_vars: usize,
    },
    Explicit(Vec<MultiIndex>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: CoefficientKind,
    pub support: Support,
    pub seed: u64,
    pub n: usize,
    pub m: u32,
}

impl Support {
    pub fn indices(&self, n: usize, m: u32) -> Result<Vec<MultiIndex>> {
        let list: Vec<MultiIndex> = match self {
            Support::Full => enumerate_alphas(m as usize, n).collect(),
            Support::Lambda { max_vars } => enumerate_lambda(m as usize, n, *max_vars).collect(),
            Support::Explicit(list) => {
                for a in list {
                    if a.dimension() != n {
                        return Err(Error::DimensionMismatch {
                            expected: n,
                            got: a.dimension(),
                        });
                    }
                    if a.degree() != m {
                        return Err(Error::DegreeMismatch {
                            alpha: a.exponents().to_vec(),
                            expected: m,
                            got: a.degree(),
                        });
                    }
                }
                list.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect()
            }
        };
        if list.is_empty() {
            return Err(Error::EmptySupport);
        }
        Ok(list)
    }
}

impl CoefficientKind {
    pub fn draw(self, rng: &mut impl Rng) -> Complex64 {
        match self {
            CoefficientKind::Steinhaus => {
                let u: f64 = rng.random();
                Complex64::from_polar(1.0, TAU * u)
            }
            CoefficientKind::Rademacher => {
                if rng.random::<bool>() {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-1.0, 0.0)
                }
            }
            CoefficientKind::ComplexGaussian => {
                let x: f64 = rng.sample(StandardNormal);
                let y: f64 = rng.sample(StandardNormal);
                Complex64::new(x * FRAC_1_SQRT_2, y * FRAC_1_SQRT_2)
            }
        }
    }
}

pub fn random_polynomial(spec: &EnsembleSpec) -> Result<HomogeneousPolynomial> {
    if spec.n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let support = spec.support.indices(spec.n, spec.m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let terms: Vec<_> = support
        .into_iter()
        .map(|alpha| (alpha, spec.kind.draw(&mut rng)))
        .collect();
    HomogeneousPolynomial::from_terms(spec.n, spec.m, terms)
}

/// Random analytic (non-homogeneous) polynomial over `|α| ≤ max_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyticEnsembleSpec {
    pub kind: CoefficientKind,
    pub n: usize,
    pub max_degree: u32,
    pub seed: u64,
    /// Keep only this many randomly chosen monomials, if set.
    #[serde(default)]
    pub max_terms: Option<usize>,
}

pub fn random_analytic(spec: &AnalyticEnsembleSpec) -> Result<AnalyticPolynomial> {
    if spec.n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let mut support: Vec<MultiIndex> = (0..=spec.max_degree as usize)
        .flat_map(|d| enumerate_alphas(d, spec.n))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    if let Some(k) = spec.max_terms {
        if k == 0 {
            return Err(Error::EmptySupport);
        }
        support.shuffle(&mut rng);
        support.truncate(k);
        support.sort();
    }
    let terms: Vec<_> = support
        .into_iter()
        .map(|alpha| (alpha, spec.kind.draw(&mut rng)))
        .collect();
    AnalyticPolynomial::from_terms(spec.n, terms)
}

/// Seed for the `index`-th instance of a batch (SplitMix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
