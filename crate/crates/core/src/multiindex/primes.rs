//! Small prime utilities for the `p^α` encoding of multi-indices.

use super::MultiIndex;
use std::sync::OnceLock;

const TABLE_LIMIT: usize = 1 << 20;

fn table() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TABLE_LIMIT as u64))
}

/// Primes strictly below `limit`, by the sieve of Eratosthenes.
pub fn primes_below(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for p in 2..limit {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut q = p * p;
        while q < limit {
            composite[q] = true;
            q += p;
        }
    }
    out
}

/// The `k`-th prime, 1-based (`nth_prime(1) == Some(2)`). `None` past the
/// built-in table.
pub fn nth_prime(k: usize) -> Option<u64> {
    k.checked_sub(1).and_then(|i| table().get(i).copied())
}

/// `p₁^α₁ ⋯ p_N^α_N`, or `None` if it does not fit in a `u128`.
pub fn prime_power_product(alpha: &MultiIndex) -> Option<u128> {
    let mut acc = 1u128;
    for (r, &a) in alpha.exponents().iter().enumerate() {
        if a == 0 {
            continue;
        }
        let p = nth_prime(r + 1)? as u128;
        for _ in 0..a {
            acc = acc.checked_mul(p)?;
        }
    }
    Some(acc)
}

/// Exponent vector of `n` over the first primes (inverse of
/// [`prime_power_product`]); `n ≥ 1`. `None` when a prime factor lies past
/// the built-in table.
pub fn factor_exponents(mut n: u64) -> Option<MultiIndex> {
    let mut exps = Vec::new();
    for &p in table() {
        if n == 1 {
            break;
        }
        if p * p > n {
            // n itself is prime
            let idx = table().binary_search(&n).ok()?;
            exps.resize(idx + 1, 0);
            exps[idx] += 1;
            break;
        }
        let mut a = 0;
        while n.is_multiple_of(p) {
            n /= p;
            a += 1;
        }
        exps.push(a);
    }
    while exps.last() == Some(&0) {
        exps.pop();
    }
    Some(MultiIndex::new(exps))
}

/// Number of divisors of `n` by trial division up to `√n`.
pub fn divisor_count(n: u64) -> u64 {
    let mut count = 0;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            count += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    count
}
