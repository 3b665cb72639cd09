//! Index sets and their combinatorics.
//!
//! Two parallel views of the monomials of an m-homogeneous polynomial in N
//! variables are used throughout:
//!
//! * exponent vectors `α ∈ N₀^N` with `|α| = m` ([`MultiIndex`]), and
//! * index tuples `i = (i₁, …, i_m)` with entries in `1..=N`
//!   ([`IndexTuple`]); the set of all of them is `M(m,N)` and the
//!   nondecreasing ones form `J(m,N)`.
//!
//! Variables are numbered from 1 in every public interface that takes or
//! returns a variable index (tuple entries, insertion values). Exponent
//! vectors are plain slices, so position `r - 1` holds the exponent of
//! variable `r`.

mod compositions;
pub mod lemmas;
pub mod primes;

pub use compositions::{divisor_weight_bound, divisor_weight_bound_with_cap, CompositionBound, CompositionCap};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Exponent vector of a monomial `z^α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `α` with a single 1 at variable `var` (1-based).
    pub fn unit(n: usize, var: usize) -> Self {
        let mut e = vec![0; n];
        e[var - 1] = 1;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `∏ (α_r + 1)`, the number of divisors of `p₁^α₁ ⋯ p_N^α_N`.
    pub fn divisor_weight(&self) -> Result<u128> {
        self.0.iter().try_fold(1u128, |acc, &a| {
            acc.checked_mul(a as u128 + 1).ok_or(Error::Overflow("divisor weight"))
        })
    }

    /// Number of variables that actually occur in `z^α`.
    pub fn var_count(&self) -> usize {
        self.0.iter().filter(|&&a| a != 0).count()
    }

    /// Multinomial `|α|! / ∏ α_r!`, the size of the permutation class of the
    /// related index tuple.
    pub fn multinomial(&self) -> Result<u128> {
        let mut total = 0u64;
        let mut acc = 1u128;
        for &a in &self.0 {
            total += a as u64;
            acc = acc
                .checked_mul(binomial(total, a as u64)?)
                .ok_or(Error::Overflow("class cardinality"))?;
        }
        Ok(acc)
    }

    /// The canonical (nondecreasing) index tuple with multiplicities `α`.
    pub fn to_tuple(&self) -> IndexTuple {
        let mut entries = Vec::with_capacity(self.degree() as usize);
        for (r, &a) in self.0.iter().enumerate() {
            entries.extend(std::iter::repeat_n(r + 1, a as usize));
        }
        IndexTuple(entries)
    }

    pub(crate) fn sub_unit(&self, var: usize) -> Option<MultiIndex> {
        let mut e = self.0.clone();
        e[var - 1] = e[var - 1].checked_sub(1)?;
        Some(MultiIndex(e))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Element of `M(m,N)`; entries are 1-based variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    pub fn new(entries: Vec<usize>) -> Self {
        IndexTuple(entries)
    }

    pub fn checked(entries: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e == 0 || e > n) {
            return Err(Error::VariableOutOfRange { index: bad, n });
        }
        Ok(IndexTuple(entries))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether the tuple lies in `J(m,N)`.
    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Nondecreasing representative of the permutation class.
    pub fn canonical(&self) -> IndexTuple {
        let mut e = self.0.clone();
        e.sort_unstable();
        IndexTuple(e)
    }

    pub fn to_alpha(&self, n: usize) -> Result<MultiIndex> {
        tuple_to_alpha(self, n)
    }

    pub fn class_cardinality(&self) -> Result<u128> {
        class_cardinality(self)
    }

    /// `p_{i₁} ⋯ p_{i_m}` over the primes 2, 3, 5, …; `None` on overflow.
    pub fn prime_product(&self) -> Option<u128> {
        self.0
            .iter()
            .try_fold(1u128, |acc, &i| acc.checked_mul(primes::nth_prime(i)? as u128))
    }

    pub fn remove_at(&self, k: usize) -> IndexTuple {
        let mut e = self.0.clone();
        e.remove(k - 1);
        IndexTuple(e)
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> Result<u128> {
    let k = k.min(n - k);
    let mut r = 1u128;
    for i in 0..k {
        // r * (n - i) is divisible by (i + 1) at every step
        r = r
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial coefficient"))?
            / (i as u128 + 1);
    }
    Ok(r)
}

/// Lazy lexicographic enumeration of `J(m,N)`.
#[derive(Debug, Clone)]
pub struct CanonicalTuples {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for CanonicalTuples {
    type Item = IndexTuple;

    fn next(&mut self) -> Option<IndexTuple> {
        let cur = self.current.take()?;
        let out = IndexTuple(cur.clone());
        let mut next = cur;
        if let Some(p) = next.iter().rposition(|&e| e < self.n) {
            let v = next[p] + 1;
            for e in &mut next[p..] {
                *e = v;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// All nondecreasing tuples of length `m` over `1..=n`, in lexicographic
/// order. `m = 0` yields the single empty tuple.
pub fn enumerate_j(m: usize, n: usize) -> CanonicalTuples {
    CanonicalTuples {
        n,
        current: (n >= 1 || m == 0).then(|| vec![1; m]),
    }
}

/// Lazy lexicographic enumeration of `M(m,N)`.
#[derive(Debug, Clone)]
pub struct AllTuples {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for AllTuples {
    type Item = IndexTuple;

    fn next(&mut self) -> Option<IndexTuple> {
        let cur = self.current.take()?;
        let out = IndexTuple(cur.clone());
        let mut next = cur;
        if let Some(p) = next.iter().rposition(|&e| e < self.n) {
            next[p] += 1;
            for e in &mut next[p + 1..] {
                *e = 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// All `N^m` tuples of length `m` over `1..=n`, in lexicographic order.
pub fn enumerate_m(m: usize, n: usize) -> AllTuples {
    AllTuples {
        n,
        current: (n >= 1 || m == 0).then(|| vec![1; m]),
    }
}

/// Position of `i` in the lexicographic order of `M(m,N)`.
pub fn m_rank(i: &IndexTuple, n: usize) -> usize {
    i.0.iter().fold(0, |acc, &e| acc * n + (e - 1))
}

/// `α_r = #{j : i_j = r}`.
pub fn tuple_to_alpha(i: &IndexTuple, n: usize) -> Result<MultiIndex> {
    let mut alpha = vec![0u32; n];
    for &e in &i.0 {
        if e == 0 || e > n {
            return Err(Error::VariableOutOfRange { index: e, n });
        }
        alpha[e - 1] += 1;
    }
    Ok(MultiIndex(alpha))
}

pub fn alpha_to_tuple(alpha: &MultiIndex) -> IndexTuple {
    alpha.to_tuple()
}

/// Size of the permutation class `[i]`: the multinomial `m! / ∏ α_r!`.
pub fn class_cardinality(i: &IndexTuple) -> Result<u128> {
    let n = i.0.iter().copied().max().unwrap_or(1);
    tuple_to_alpha(i, n)?.multinomial()
}

/// `(i,_k j)`: put `j` in position `k` and shift the tail right.
///
/// `k` is restricted to `1..=m-1` where `m - 1 = i.len()`, i.e. it cannot
/// append. Use [`insert_at_extended`] for `k = m`.
pub fn insert_at(i: &IndexTuple, k: usize, j: usize) -> Result<IndexTuple> {
    let max = i.len();
    if k == 0 || k > max {
        return Err(Error::PositionOutOfRange { k, max });
    }
    Ok(insert_unchecked(i, k, j))
}

/// Like [`insert_at`] but also accepts `k = m` (append). Not part of the
/// insertion operator as used in the one-vs-rest decomposition for
/// `k ≤ m - 1`; needed for the full product over `k = 1..=m`.
pub fn insert_at_extended(i: &IndexTuple, k: usize, j: usize) -> Result<IndexTuple> {
    let max = i.len() + 1;
    if k == 0 || k > max {
        return Err(Error::PositionOutOfRange { k, max });
    }
    Ok(insert_unchecked(i, k, j))
}

fn insert_unchecked(i: &IndexTuple, k: usize, j: usize) -> IndexTuple {
    let mut e = Vec::with_capacity(i.len() + 1);
    e.extend_from_slice(&i.0[..k - 1]);
    e.push(j);
    e.extend_from_slice(&i.0[k - 1..]);
    IndexTuple(e)
}

pub fn divisor_weight(alpha: &MultiIndex) -> Result<u128> {
    alpha.divisor_weight()
}

pub fn var_count(alpha: &MultiIndex) -> usize {
    alpha.var_count()
}

/// All `α` with `|α| = m` in `n` variables, ordered like their canonical
/// tuples in `J(m,N)` (descending lexicographic on `α`).
pub fn enumerate_alphas(m: usize, n: usize) -> impl Iterator<Item = MultiIndex> {
    enumerate_j(m, n).map(move |i| tuple_to_alpha(&i, n).expect("entries in range"))
}

/// `Λ_{N,M}`: degree-`m` multi-indices using at most `max_vars` variables.
pub fn enumerate_lambda(m: usize, n: usize, max_vars: usize) -> impl Iterator<Item = MultiIndex> {
    enumerate_alphas(m, n).filter(move |a| a.var_count() <= max_vars)
}

/// Number of elements of `J(m,N)`, `C(N+m-1, m)`.
pub fn count_j(m: usize, n: usize) -> Result<u128> {
    if n == 0 {
        return Ok((m == 0) as u128);
    }
    binomial((n + m - 1) as u64, m as u64)
}
