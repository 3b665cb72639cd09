//! Sup-norm of a polynomial over the closed polydisc.
//!
//! By the maximum modulus principle the supremum is attained on the torus,
//! so both estimators work with phase vectors `θ ∈ [0, 2π)^N`.
//!
//! Lower bound: multistart coordinate-wise phase ascent. With all other
//! phases fixed, `P` restricted to `θ_r` is a one-variable trigonometric
//! polynomial `Σ_k q_k e^{ikθ_r}` whose modulus is maximized by a dense scan
//! followed by golden-section refinement.
//!
//! Upper bound: maximum over a uniform phase grid, inflated by a Bernstein
//! correction. Along any segment the restriction of `P` is an exponential
//! sum of type at most `σ = Σ_r deg_r · |δθ_r|`, so
//!
//! * first order: `sup|P| ≤ G / (1 − σ)`,
//! * second order: at the maximizer the gradient of `Re(e^{-iφ}P)` vanishes
//!   and its second derivative along the segment is at most `σ² sup|P|`,
//!   giving `sup|P| ≤ G / (1 − σ²/2)`,
//!
//! where `G` is the grid maximum and `σ ≤ Σ_r deg_r · π/K` for the nearest
//! grid point.

use super::grid::{active_dims, grid_points, scan};
use super::{EffortRecord, EstimateKind, NormEstimate};
use crate::error::{Error, Result};
use crate::poly::{HomogeneousPolynomial, Polynomial};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Stop once a full sweep improves `|P|` by at most this much.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restarts: 32,
            seed: 0,
            tol: 1e-10,
            max_sweeps: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub value: f64,
    pub theta: Vec<f64>,
    /// Index of the start that produced the maximum (0 is `θ = 0`).
    pub start: usize,
}

struct DenseTerms {
    alphas: Vec<Vec<u32>>,
    coefs: Vec<Complex64>,
    degrees: Vec<u32>,
}

impl DenseTerms {
    fn new(poly: &impl Polynomial) -> Self {
        DenseTerms {
            alphas: poly.terms().keys().map(|a| a.exponents().to_vec()).collect(),
            coefs: poly.terms().values().copied().collect(),
            degrees: poly.degrees(),
        }
    }

    /// Coefficients `q_k` of `P` as a polynomial in `z_r`, others fixed.
    fn slice_coefficients(&self, r: usize, z: &[Complex64]) -> Vec<Complex64> {
        let powers: Vec<Vec<Complex64>> = z
            .iter()
            .zip(&self.degrees)
            .map(|(&zs, &d)| {
                let mut row = vec![Complex64::new(1.0, 0.0); d as usize + 1];
                for k in 1..row.len() {
                    row[k] = row[k - 1] * zs;
                }
                row
            })
            .collect();
        let mut q = vec![Complex64::default(); self.degrees[r] as usize + 1];
        for (alpha, &c) in self.alphas.iter().zip(&self.coefs) {
            let mut v = c;
            for (s, &a) in alpha.iter().enumerate() {
                if s != r && a != 0 {
                    v *= powers[s][a as usize];
                }
            }
            q[alpha[r] as usize] += v;
        }
        q
    }
}

fn horner_abs(q: &[Complex64], phi: f64) -> f64 {
    let w = Complex64::from_polar(1.0, phi);
    q.iter().rev().fold(Complex64::default(), |acc, &c| acc * w + c).norm()
}

/// Global maximum of `|Σ_k q_k e^{ikφ}|` over `φ`.
fn maximize_phase(q: &[Complex64], current: f64) -> (f64, f64) {
    let d = q.len() - 1;
    let mut best = (current, horner_abs(q, current));
    if d == 1 {
        if q[1] != Complex64::default() {
            let phi = (q[0].arg() - q[1].arg()).rem_euclid(TAU);
            let v = horner_abs(q, phi);
            if v > best.1 {
                best = (phi, v);
            }
        }
        return best;
    }
    let samples = (16 * (d + 1)).max(64);
    let h = TAU / samples as f64;
    let mut scan_best = (0.0, -1.0);
    for s in 0..samples {
        let phi = s as f64 * h;
        let v = horner_abs(q, phi);
        if v > scan_best.1 {
            scan_best = (phi, v);
        }
    }
    // golden-section refinement on the bracket around the best sample
    let (mut a, mut b) = (scan_best.0 - h, scan_best.0 + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (horner_abs(q, x1), horner_abs(q, x2));
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = horner_abs(q, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = horner_abs(q, x1);
        }
    }
    for (phi, v) in [scan_best, (x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (phi.rem_euclid(TAU), v);
        }
    }
    best
}

fn ascend(terms: &DenseTerms, theta: &mut [f64], opts: &SearchOptions) -> f64 {
    let n = theta.len();
    let mut z: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    let mut current = horner_abs(&terms.slice_coefficients(0, &z), theta[0]);
    for _ in 0..opts.max_sweeps {
        let before = current;
        for r in 0..n {
            if terms.degrees[r] == 0 {
                continue;
            }
            let q = terms.slice_coefficients(r, &z);
            let (phi, v) = maximize_phase(&q, theta[r]);
            if v > current {
                theta[r] = phi;
                z[r] = Complex64::from_polar(1.0, phi);
                current = v;
            }
        }
        if current - before <= opts.tol {
            break;
        }
    }
    current
}

/// Multistart phase ascent; returns the best point found.
pub fn sup_search<P: Polynomial>(poly: &P, opts: &SearchOptions) -> SearchResult {
    let n = poly.dimension();
    if poly.is_zero() || n == 0 {
        let value = poly
            .evaluate(&vec![Complex64::new(1.0, 0.0); n])
            .map(|v| v.norm())
            .unwrap_or(0.0);
        return SearchResult {
            value,
            theta: vec![0.0; n],
            start: 0,
        };
    }
    let terms = DenseTerms::new(poly);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<f64>> = (0..opts.restarts.max(1))
        .map(|s| {
            if s == 0 {
                vec![0.0; n]
            } else {
                (0..n).map(|_| TAU * rng.random::<f64>()).collect()
            }
        })
        .collect();

    let results: Vec<(usize, Vec<f64>)> = starts
        .into_par_iter()
        .enumerate()
        .map(|(s, mut theta)| {
            ascend(&terms, &mut theta, opts);
            (s, theta)
        })
        .collect();

    let mut best: Option<SearchResult> = None;
    for (s, theta) in results {
        let z: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let value = poly.evaluate(&z).expect("dimension matches").norm();
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(SearchResult { value, theta, start: s });
        }
    }
    best.expect("at least one start")
}

/// Sound lower bound on `sup_{D^N} |P|` (true sup ≥ value).
pub fn sup_norm_lower<P: Polynomial>(poly: &P, opts: &SearchOptions) -> NormEstimate {
    let effort = EffortRecord {
        restarts: opts.restarts.max(1) as u64,
        ..Default::default()
    };
    if poly.is_zero() {
        let mut e = NormEstimate::exact(0.0, "phase_search");
        e.effort = effort;
        return e;
    }
    let r = sup_search(poly, opts);
    NormEstimate::with_kind(r.value, EstimateKind::LowerBound, "phase_search", effort)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    FirstOrder,
    SecondOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperOptions {
    pub certification: Certification,
    /// Maximum number of grid points.
    pub cost_cap: u64,
}

impl Default for UpperOptions {
    fn default() -> Self {
        UpperOptions {
            certification: Certification::SecondOrder,
            cost_cap: super::DEFAULT_COST_CAP,
        }
    }
}

/// Rounding allowance for a grid evaluation of `P`.
fn rounding_slop(poly: &impl Polynomial) -> f64 {
    let l1: f64 = poly.terms().values().map(|c| c.norm()).sum();
    let depth = (poly.len() + poly.degrees().iter().sum::<u32>() as usize + 4) as f64;
    8.0 * f64::EPSILON * depth * l1
}

fn check_cost(k: usize, dims: usize, cap: u64) -> Result<u128> {
    let points = grid_points(k, dims);
    if points > cap as u128 {
        return Err(Error::CostCap { points, cap });
    }
    Ok(points)
}

/// Certified upper bound over the full `K^N` grid with the first-order
/// correction `m·N·h/2`, `h = 2π/K`.
pub fn sup_norm_upper(poly: &HomogeneousPolynomial, k: usize) -> Result<NormEstimate> {
    sup_norm_upper_capped(poly, k, super::DEFAULT_COST_CAP)
}

pub fn sup_norm_upper_capped(poly: &HomogeneousPolynomial, k: usize, cost_cap: u64) -> Result<NormEstimate> {
    let n = poly.dimension();
    let correction = poly.degree() as f64 * n as f64 * PI / k as f64;
    if correction >= 1.0 {
        return Err(Error::GridTooCoarse { correction });
    }
    let effort = EffortRecord {
        grid: k as u64,
        ..Default::default()
    };
    if poly.is_zero() {
        let mut e = NormEstimate::exact(0.0, "bernstein_grid_first_order");
        e.effort = effort;
        return Ok(e);
    }
    let degrees = poly.degrees();
    check_cost(k, active_dims(&degrees, &[]).len(), cost_cap)?;
    let stats = scan(poly.terms(), &degrees, k, &[]);
    let value = (stats.max_abs + rounding_slop(poly)) / (1.0 - correction);
    Ok(NormEstimate::with_kind(
        value,
        EstimateKind::UpperBound,
        "bernstein_grid_first_order",
        effort,
    ))
}

/// Certified upper bound on a grid of `k` points per active variable.
///
/// `pinned` variables are held at phase 0. That is only valid when the
/// polynomial is homogeneous in a group of variables containing each pinned
/// one (a common phase rotation of the group then leaves `|P|` unchanged);
/// the caller is responsible for that.
pub fn sup_norm_upper_with<P: Polynomial>(
    poly: &P,
    k: usize,
    pinned: &[usize],
    opts: &UpperOptions,
) -> Result<NormEstimate> {
    let degrees = poly.degrees();
    let active = active_dims(&degrees, pinned);
    let sigma: f64 = active.iter().map(|&r| degrees[r] as f64).sum::<f64>() * PI / k as f64;
    let (denominator, label) = match opts.certification {
        Certification::FirstOrder => (1.0 - sigma, "bernstein_grid_first_order"),
        Certification::SecondOrder => (1.0 - 0.5 * sigma * sigma, "bernstein_grid_second_order"),
    };
    if denominator <= 0.0 {
        return Err(Error::GridTooCoarse {
            correction: 1.0 - denominator,
        });
    }
    let effort = EffortRecord {
        grid: k as u64,
        ..Default::default()
    };
    if poly.is_zero() {
        let mut e = NormEstimate::exact(0.0, label);
        e.effort = effort;
        return Ok(e);
    }
    check_cost(k, active.len(), opts.cost_cap)?;
    let stats = scan(poly.terms(), &degrees, k, pinned);
    let value = (stats.max_abs + rounding_slop(poly)) / denominator;
    Ok(NormEstimate::with_kind(value, EstimateKind::UpperBound, label, effort))
}

/// Smallest grid whose second-order correction factor is at most
/// `1/(1 − slack)`, with the given variables pinned.
pub fn certified_sup_pinned<P: Polynomial>(
    poly: &P,
    pinned: &[usize],
    slack: f64,
    cost_cap: u64,
) -> Result<NormEstimate> {
    if !(slack > 0.0 && slack < 1.0) {
        return Err(Error::InvalidArgument(format!("slack {slack} must lie in (0, 1)")));
    }
    let degrees = poly.degrees();
    let active = active_dims(&degrees, pinned);
    let budget: f64 = active.iter().map(|&r| degrees[r] as f64).sum();
    let k = ((budget * PI / (2.0 * slack).sqrt()).ceil() as usize).max(4);
    let opts = UpperOptions {
        certification: Certification::SecondOrder,
        cost_cap,
    };
    sup_norm_upper_with(poly, k, pinned, &opts)
}

/// Certified upper bound for a homogeneous polynomial, pinning its
/// highest-degree variable.
pub fn certified_sup(poly: &HomogeneousPolynomial, slack: f64, cost_cap: u64) -> Result<NormEstimate> {
    let degrees = poly.degrees();
    let pin = degrees
        .iter()
        .enumerate()
        .max_by_key(|(r, d)| (**d, std::cmp::Reverse(*r)))
        .map(|(r, _)| r);
    let pinned: Vec<usize> = pin.filter(|_| poly.degree() > 0).into_iter().collect();
    certified_sup_pinned(poly, &pinned, slack, cost_cap)
}
