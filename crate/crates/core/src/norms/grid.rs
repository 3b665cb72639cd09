//! Evaluation of a sparse polynomial on the uniform phase grid
//! `θ_r ∈ {2πg/K : g = 0..K-1}`.
//!
//! On the grid every monomial is a K-th root of unity, `z^α = ω^{Σ α_r g_r}`,
//! so the outer coordinates reduce to integer phase sums and the innermost
//! coordinate is handled as a one-variable polynomial evaluated at all K
//! roots. Variables with zero degree are skipped and `pinned` variables are
//! held at phase 0.

use crate::multiindex::MultiIndex;
use crate::summation::Neumaier;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// Aggregates of `|P|` over the grid.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct GridStats {
    pub max_abs: f64,
    pub sum_abs: Neumaier,
    pub sum_sq: Neumaier,
    /// `Σ |P|` over the sub-grid of even indices (the K/2 grid).
    pub sum_abs_half: Neumaier,
    pub points: u64,
    pub half_points: u64,
}

impl GridStats {
    fn merge(&mut self, o: &GridStats) {
        self.max_abs = self.max_abs.max(o.max_abs);
        self.sum_abs.merge(&o.sum_abs);
        self.sum_sq.merge(&o.sum_sq);
        self.sum_abs_half.merge(&o.sum_abs_half);
        self.points += o.points;
        self.half_points += o.half_points;
    }
}

/// Variables that actually vary on the grid.
pub(crate) fn active_dims(degrees: &[u32], pinned: &[usize]) -> Vec<usize> {
    (0..degrees.len())
        .filter(|r| degrees[*r] > 0 && !pinned.contains(r))
        .collect()
}

/// Number of grid points, `K^D`.
pub(crate) fn grid_points(k: usize, dims: usize) -> u128 {
    (k as u128).checked_pow(dims as u32).unwrap_or(u128::MAX)
}

const CHUNK: usize = 64;

pub(crate) fn scan(terms: &BTreeMap<MultiIndex, Complex64>, degrees: &[u32], k: usize, pinned: &[usize]) -> GridStats {
    assert!(k >= 1);
    let active = active_dims(degrees, pinned);
    let roots: Vec<Complex64> = (0..k)
        .map(|t| Complex64::from_polar(1.0, TAU * t as f64 / k as f64))
        .collect();

    if active.is_empty() {
        // every active variable is constant on the grid; all phases are 0
        let a = crate::summation::complex_sum(terms.values().copied()).norm();
        let mut s = GridStats {
            max_abs: a,
            points: 1,
            half_points: 1,
            ..Default::default()
        };
        s.sum_abs.add(a);
        s.sum_sq.add(a * a);
        s.sum_abs_half.add(a);
        return s;
    }

    let inner = *active.last().expect("nonempty");
    let outer = &active[..active.len() - 1];
    let inner_deg = degrees[inner] as usize;

    // per-term exponent on each outer dim and on the inner dim
    let term_list: Vec<(Vec<u64>, usize, Complex64)> = terms
        .iter()
        .map(|(alpha, &c)| {
            let e = alpha.exponents();
            (outer.iter().map(|&r| e[r] as u64).collect(), e[inner] as usize, c)
        })
        .collect();

    let outer_count = (k as u64).pow(outer.len() as u32);
    let chunks = outer_count.div_ceil(CHUNK as u64);
    let k64 = k as u64;

    let partials: Vec<GridStats> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut stats = GridStats::default();
            let mut g = vec![0u64; outer.len()];
            let mut q = vec![Complex64::default(); inner_deg + 1];
            let start = chunk * CHUNK as u64;
            let end = (start + CHUNK as u64).min(outer_count);
            for flat in start..end {
                let mut rem = flat;
                for slot in g.iter_mut().rev() {
                    *slot = rem % k64;
                    rem /= k64;
                }
                let outer_even = g.iter().all(|x| x % 2 == 0);
                q.iter_mut().for_each(|x| *x = Complex64::default());
                for (exps, e_in, c) in &term_list {
                    let phase = exps.iter().zip(&g).map(|(a, x)| a * x).sum::<u64>() % k64;
                    q[*e_in] += c * roots[phase as usize];
                }
                for gi in 0..k {
                    let mut v = Complex64::default();
                    for (e, qe) in q.iter().enumerate() {
                        if *qe != Complex64::default() {
                            v += qe * roots[(e * gi) % k];
                        }
                    }
                    let a = v.norm();
                    stats.max_abs = stats.max_abs.max(a);
                    stats.sum_abs.add(a);
                    stats.sum_sq.add(a * a);
                    stats.points += 1;
                    if outer_even && gi % 2 == 0 {
                        stats.sum_abs_half.add(a);
                        stats.half_points += 1;
                    }
                }
            }
            stats
        })
        .collect();

    let mut total = GridStats::default();
    for p in &partials {
        total.merge(p);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{random_polynomial, CoefficientKind, EnsembleSpec, Polynomial, Support};

    #[test]
    fn matches_direct_evaluation() {
        let p = random_polynomial(&EnsembleSpec {
            kind: CoefficientKind::ComplexGaussian,
            support: Support::Full,
            seed: 3,
            n: 3,
            m: 3,
        })
        .unwrap();
        let k = 6;
        let stats = scan(p.terms(), &p.degrees(), k, &[]);
        let mut max: f64 = 0.0;
        let mut sum = 0.0;
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let z: Vec<_> = [a, b, c]
                        .iter()
                        .map(|&g| Complex64::from_polar(1.0, TAU * g as f64 / k as f64))
                        .collect();
                    let v = p.evaluate(&z).unwrap().norm();
                    max = max.max(v);
                    sum += v;
                }
            }
        }
        assert_eq!(stats.points, 216);
        assert_eq!(stats.half_points, 27);
        assert!((stats.max_abs - max).abs() < 1e-12);
        assert!((stats.sum_abs.value() - sum).abs() < 1e-10);
    }

    #[test]
    fn pinned_and_constant_dims_are_skipped() {
        let p = crate::poly::HomogeneousPolynomial::monomial(MultiIndex::new(vec![2, 0, 1]), Complex64::new(0.0, 2.0));
        let s = scan(p.terms(), &p.degrees(), 8, &[0]);
        assert_eq!(s.points, 8);
        assert!((s.max_abs - 2.0).abs() < 1e-15);
        let s = scan(p.terms(), &p.degrees(), 8, &[0, 2]);
        assert_eq!(s.points, 1);
        assert_eq!(s.max_abs, 2.0);
    }
}
