//! Exhaustive checks of the combinatorial facts the weighted estimate rests
//! on. Each check walks a finite range completely and counts failures.

use super::primes::{factor_exponents, prime_power_product};
use super::{
    class_cardinality, divisor_weight_bound, enumerate_alphas, enumerate_j, enumerate_m, insert_at, tuple_to_alpha,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl LemmaCheck {
    fn new(name: &str) -> Self {
        LemmaCheck {
            name: name.to_string(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

/// `Σ_{i ∈ J(m,N)} card[i] = N^m`.
pub fn partition_identity(m_max: usize, n_max: usize) -> LemmaCheck {
    let mut check = LemmaCheck::new("partition_identity");
    for m in 0..=m_max {
        for n in 1..=n_max {
            let total: Option<u128> = enumerate_j(m, n).map(|i| class_cardinality(&i).ok()).sum();
            let expected = (n as u128).pow(m as u32);
            check.record(total == Some(expected), || {
                format!("m={m} N={n}: {total:?} != {expected}")
            });
        }
    }
    check
}

/// `tuple_to_alpha` and `alpha_to_tuple` invert each other.
pub fn bijection(m_max: usize, n_max: usize) -> LemmaCheck {
    let mut check = LemmaCheck::new("bijection");
    for m in 0..=m_max {
        for n in 1..=n_max {
            for i in enumerate_j(m, n) {
                let alpha = tuple_to_alpha(&i, n).expect("canonical tuples are in range");
                let back = alpha.to_tuple();
                check.record(back == i, || format!("J({m},{n}) {i} -> {alpha} -> {back}"));
            }
            for alpha in enumerate_alphas(m, n) {
                let ok = tuple_to_alpha(&alpha.to_tuple(), n).ok().as_ref() == Some(&alpha);
                check.record(ok, || format!("alpha {alpha} does not round-trip"));
            }
        }
    }
    check
}

/// `card[(i,_k j)] ≤ m · card[i]` for `i ∈ M(m−1,N)`, `1 ≤ k ≤ m−1`.
pub fn insertion_growth(m_max: usize, n_max: usize) -> LemmaCheck {
    let mut check = LemmaCheck::new("insertion_growth");
    for_each_insertion(m_max, n_max, |m, i, ins| {
        let before = class_cardinality(i).expect("small");
        let after = class_cardinality(ins).expect("small");
        check.record(after <= m as u128 * before, || {
            format!("card{ins} = {after} > {m} * card{i} = {}", m as u128 * before)
        });
    });
    check
}

/// `d(p_i) ≤ d(p_{(i,_k j)})`.
pub fn divisor_monotonicity(m_max: usize, n_max: usize) -> LemmaCheck {
    let mut check = LemmaCheck::new("divisor_monotonicity");
    for_each_insertion(m_max, n_max, |_, i, ins| {
        let n = n_max;
        let before = tuple_to_alpha(i, n).unwrap().divisor_weight().unwrap();
        let after = tuple_to_alpha(ins, n).unwrap().divisor_weight().unwrap();
        check.record(before <= after, || format!("d(p{i}) = {before} > d(p{ins}) = {after}"));
    });
    check
}

fn for_each_insertion(m_max: usize, n_max: usize, mut f: impl FnMut(usize, &super::IndexTuple, &super::IndexTuple)) {
    for m in 2..=m_max {
        for n in 1..=n_max {
            for i in enumerate_m(m - 1, n) {
                for k in 1..m {
                    for j in 1..=n {
                        let ins = insert_at(&i, k, j).expect("k within 1..m-1");
                        f(m, &i, &ins);
                    }
                }
            }
        }
    }
}

/// `∏ (α_r + 1)` equals the divisor count of `p^α` for every `p^α ≤ limit`.
///
/// Every positive integer is `p^α` for exactly one finitely supported `α`,
/// so this walks `1..=limit`, factors each integer, and compares against a
/// divisor-count sieve.
pub fn divisor_cross_check(limit: u64) -> LemmaCheck {
    let mut check = LemmaCheck::new("divisor_cross_check");
    let counts = divisor_count_sieve(limit as usize);
    // factoring is independent per n; failures are recorded in order
    let outcomes: Vec<Option<String>> = (1..=limit)
        .into_par_iter()
        .map(|n| {
            let direct = counts[n as usize] as u128;
            let Some(alpha) = factor_exponents(n) else {
                return Some(format!("n={n}: prime factor outside table"));
            };
            let weight = alpha.divisor_weight().ok();
            let ok = prime_power_product(&alpha) == Some(n as u128) && weight == Some(direct);
            (!ok).then(|| format!("n={n}: alpha={alpha} weight={weight:?} direct={direct}"))
        })
        .collect();
    for o in outcomes {
        check.record(o.is_none(), || o.unwrap_or_default());
    }
    check
}

fn divisor_count_sieve(limit: usize) -> Vec<u32> {
    let mut d = vec![0u32; limit + 1];
    for k in 1..=limit {
        let mut q = k;
        while q <= limit {
            d[q] += 1;
            q += k;
        }
    }
    d
}

/// `α + 1 ≤ 2^m` for every `|α| = m`, the comparison behind deriving the
/// unweighted inequality from the weighted one.
pub fn hypercontractive_comparison(m_max: usize, n_max: usize) -> LemmaCheck {
    let mut check = LemmaCheck::new("hypercontractive_comparison");
    for m in 0..=m_max {
        for n in 1..=n_max {
            for alpha in enumerate_alphas(m, n) {
                let w = alpha.divisor_weight().unwrap();
                let ok = (w as f64).sqrt() <= 2f64.sqrt().powi(m as i32) && w <= 1u128 << m;
                check.record(ok, || format!("alpha={alpha}: weight {w} > 2^{m}"));
            }
        }
    }
    check
}

/// Brute-force integer maximum of `∏(α_r+1)` never exceeds `(m/M+1)^M`.
pub fn composition_bound(m_max: u32, vars_max: u32) -> LemmaCheck {
    let mut check = LemmaCheck::new("composition_bound");
    for m in 1..=m_max {
        for v in 1..=vars_max {
            match divisor_weight_bound(m, v) {
                Ok(b) => check.record(b.integer_max as f64 <= b.real_bound, || {
                    format!("m={m} M={v}: {} > {}", b.integer_max, b.real_bound)
                }),
                Err(e) => check.record(false, || format!("m={m} M={v}: {e}")),
            }
        }
    }
    check
}

/// The full default suite, in a fixed order.
pub fn run_all() -> Vec<LemmaCheck> {
    vec![
        partition_identity(6, 5),
        bijection(6, 5),
        insertion_growth(5, 4),
        divisor_monotonicity(5, 4),
        divisor_cross_check(1_000_000),
        hypercontractive_comparison(12, 6),
        composition_bound(40, 6),
    ]
}
