//! Integrals over the torus `T^N` against normalized Haar measure.

use super::grid::{active_dims, grid_points, scan};
use super::{EffortRecord, EstimateKind, NormEstimate};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Default limit on grid evaluations.
pub const DEFAULT_COST_CAP: u64 = 100_000_000;

/// Rectangle-rule average of `|f|` over the `K^N` phase grid.
///
/// The attached `error` is `|I_K − I_{K/2}|`, the change against the
/// half-resolution sub-grid (which shares every other node); it is zero
/// when `K` is odd or `f` is constant on the torus.
pub fn torus_l1_grid(f: &impl Polynomial, k: usize, cost_cap: u64) -> Result<NormEstimate> {
    torus_l1_grid_pinned(f, k, &[], cost_cap)
}

/// [`torus_l1_grid`] with some variables held at phase 0.
///
/// Only valid when `|f|` is invariant under a common rotation of a group of
/// variables containing each pinned one, e.g. a single pinned variable of a
/// homogeneous polynomial. The integral over the remaining variables then
/// equals the full one.
pub fn torus_l1_grid_pinned(f: &impl Polynomial, k: usize, pinned: &[usize], cost_cap: u64) -> Result<NormEstimate> {
    if k == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    let degrees = f.degrees();
    let dims = active_dims(&degrees, pinned).len();
    let points = grid_points(k, dims);
    if points > cost_cap as u128 {
        return Err(Error::CostCap { points, cap: cost_cap });
    }
    let effort = EffortRecord {
        grid: k as u64,
        ..Default::default()
    };
    if f.is_zero() {
        let mut e = NormEstimate::exact(0.0, "torus_l1_grid");
        e.effort = effort;
        return Ok(e);
    }
    let stats = scan(f.terms(), &degrees, k, pinned);
    let value = stats.sum_abs.value() / stats.points as f64;
    let error = if dims > 0 && k.is_multiple_of(2) {
        (value - stats.sum_abs_half.value() / stats.half_points as f64).abs()
    } else {
        0.0
    };
    let mut e = NormEstimate::exact(value, "torus_l1_grid");
    e.error = error;
    e.effort = effort;
    Ok(e)
}

/// Rectangle-rule `(∫ |f|²)^{1/2}`; exact for trigonometric polynomials when
/// `K` exceeds twice the largest per-variable degree.
pub fn torus_l2_grid(f: &impl Polynomial, k: usize, cost_cap: u64) -> Result<NormEstimate> {
    let degrees = f.degrees();
    let points = grid_points(k, active_dims(&degrees, &[]).len());
    if points > cost_cap as u128 {
        return Err(Error::CostCap { points, cap: cost_cap });
    }
    let stats = scan(f.terms(), &degrees, k, &[]);
    let mut e = NormEstimate::exact((stats.sum_sq.value() / stats.points as f64).sqrt(), "torus_l2_grid");
    e.effort.grid = k as u64;
    Ok(e)
}

const MC_CHUNK: usize = 4096;

/// Welford accumulator with Chan's pairwise merge.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Moments) {
        if o.count == 0.0 {
            return;
        }
        let n = self.count + o.count;
        let d = o.mean - self.mean;
        self.mean += d * o.count / n;
        self.m2 += o.m2 + d * d * self.count * o.count / n;
        self.count = n;
    }
}

/// Monte Carlo mean of `|f|` at i.i.d. uniform phase vectors.
///
/// Samples are drawn in fixed chunks; chunk `c` uses
/// `ChaCha8Rng::seed_from_u64(seed)` on stream `c`, so the result does not
/// depend on thread scheduling.
pub fn torus_l1_mc(f: &impl Polynomial, samples: usize, seed: u64) -> Result<NormEstimate> {
    if samples < 2 {
        return Err(Error::InvalidArgument("Monte Carlo needs at least 2 samples".into()));
    }
    let n = f.dimension();
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut z = vec![Complex64::default(); n];
            let mut mom = Moments::default();
            for _ in 0..len {
                for zr in z.iter_mut() {
                    *zr = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
                }
                mom.push(f.evaluate(&z).expect("dimension matches").norm());
            }
            mom
        })
        .collect();
    let mut total = Moments::default();
    for p in &parts {
        total.merge(p);
    }
    let var = (total.m2 / (total.count - 1.0)).max(0.0);
    let mut e = NormEstimate::with_kind(
        total.mean,
        EstimateKind::Stochastic,
        "torus_l1_mc",
        EffortRecord {
            samples: samples as u64,
            ..Default::default()
        },
    );
    e.stderr = (var / total.count).sqrt();
    Ok(e)
}
