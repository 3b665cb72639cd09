//! Sparse complex polynomials in `N` variables.
//!
//! [`HomogeneousPolynomial`] keeps every monomial at a single degree `m`;
//! [`AnalyticPolynomial`] allows mixed degrees (used for the torus `H¹`
//! comparison, where constant and higher terms coexist). Both store a
//! `BTreeMap` keyed by exponent vector, so iteration is lexicographic in
//! `α` and never contains a zero coefficient.

pub mod ensemble;
pub mod json;
mod polarization;

pub use ensemble::{
    derive_seed, random_analytic, random_polynomial, AnalyticEnsembleSpec, CoefficientKind, EnsembleSpec, Support,
};
pub use json::{AnyPolynomial, PolyDocument, TermDocument};
pub use polarization::{mixed_form, mixed_polarization, polarized_slice, symmetric_coefficient, SymmetricFormView};

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::summation::ComplexNeumaier;
use num_complex::Complex64;
use std::collections::{BTreeMap, BTreeSet};

/// Read access shared by both polynomial kinds.
pub trait Polynomial: Sync {
    fn dimension(&self) -> usize;
    fn terms(&self) -> &BTreeMap<MultiIndex, Complex64>;

    fn len(&self) -> usize {
        self.terms().len()
    }

    fn is_empty(&self) -> bool {
        self.terms().is_empty()
    }

    fn is_zero(&self) -> bool {
        self.terms().is_empty()
    }

    fn coefficient(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms().get(alpha).copied().unwrap_or_default()
    }

    /// Largest exponent of each variable over the support.
    fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.dimension()];
        for alpha in self.terms().keys() {
            for (d, &a) in deg.iter_mut().zip(alpha.exponents()) {
                *d = (*d).max(a);
            }
        }
        deg
    }

    /// `Σ c_α z^α` with compensated summation.
    fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: z.len(),
            });
        }
        Ok(eval_terms(self.terms(), &self.degrees(), z))
    }
}

pub(crate) fn eval_terms(terms: &BTreeMap<MultiIndex, Complex64>, degrees: &[u32], z: &[Complex64]) -> Complex64 {
    let powers = power_table(z, degrees);
    let mut acc = ComplexNeumaier::new();
    for (alpha, &c) in terms {
        let mut v = c;
        for (r, &a) in alpha.exponents().iter().enumerate() {
            if a != 0 {
                v *= powers[r][a as usize];
            }
        }
        acc.add(v);
    }
    acc.value()
}

fn power_table(z: &[Complex64], degrees: &[u32]) -> Vec<Vec<Complex64>> {
    z.iter()
        .zip(degrees)
        .map(|(&zr, &d)| {
            let mut row = Vec::with_capacity(d as usize + 1);
            let mut p = Complex64::new(1.0, 0.0);
            row.push(p);
            for _ in 0..d {
                p *= zr;
                row.push(p);
            }
            row
        })
        .collect()
}

fn check_dimension(alpha: &MultiIndex, n: usize) -> Result<()> {
    if alpha.dimension() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: alpha.dimension(),
        });
    }
    Ok(())
}

/// `P(z) = Σ_{|α| = m} c_α z^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPolynomial {
    n: usize,
    m: u32,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl HomogeneousPolynomial {
    pub fn zero(n: usize, m: u32) -> Self {
        HomogeneousPolynomial {
            n,
            m,
            terms: BTreeMap::new(),
        }
    }

    /// Builds from `(α, c)` pairs; repeated exponents are summed and zero
    /// results dropped.
    pub fn from_terms(n: usize, m: u32, terms: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Result<Self> {
        let mut p = Self::zero(n, m);
        for (alpha, c) in terms {
            p.add_term(alpha, c)?;
        }
        Ok(p)
    }

    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Self {
        let n = alpha.dimension();
        let m = alpha.degree();
        let mut p = Self::zero(n, m);
        if c != Complex64::default() {
            p.terms.insert(alpha, c);
        }
        p
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) -> Result<()> {
        check_dimension(&alpha, self.n)?;
        if alpha.degree() != self.m {
            return Err(Error::DegreeMismatch {
                expected: self.m,
                got: alpha.degree(),
                alpha: alpha.exponents().to_vec(),
            });
        }
        let slot = self.terms.entry(alpha).or_default();
        *slot += c;
        if *slot == Complex64::default() {
            self.terms.retain(|_, v| *v != Complex64::default());
        }
        Ok(())
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.n, self.m, self.terms.iter().map(|(a, &v)| (a.clone(), v * c))).expect("same shape")
    }

    /// Drops every coefficient whose exponent is not in `support`.
    pub fn restrict_support(&self, support: &BTreeSet<MultiIndex>) -> Self {
        self.filter_support(|a| support.contains(a))
    }

    pub fn filter_support(&self, keep: impl Fn(&MultiIndex) -> bool) -> Self {
        HomogeneousPolynomial {
            n: self.n,
            m: self.m,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, &c)| (a.clone(), c))
                .collect(),
        }
    }

    pub fn to_analytic(&self) -> AnalyticPolynomial {
        AnalyticPolynomial {
            n: self.n,
            terms: self.terms.clone(),
        }
    }
}

impl Polynomial for HomogeneousPolynomial {
    fn dimension(&self) -> usize {
        self.n
    }

    fn terms(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.terms
    }
}

/// `f(w) = Σ_α c_α w^α` with no degree restriction.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticPolynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl AnalyticPolynomial {
    pub fn zero(n: usize) -> Self {
        AnalyticPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (alpha, c) in terms {
            p.add_term(alpha, c)?;
        }
        Ok(p)
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::from_terms(n, [(MultiIndex::zeros(n), c)]).expect("shape")
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) -> Result<()> {
        check_dimension(&alpha, self.n)?;
        let slot = self.terms.entry(alpha).or_default();
        *slot += c;
        if *slot == Complex64::default() {
            self.terms.retain(|_, v| *v != Complex64::default());
        }
        Ok(())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|a| a.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(a, &v)| (a.clone(), v * c))).expect("same shape")
    }
}

impl Polynomial for AnalyticPolynomial {
    fn dimension(&self) -> usize {
        self.n
    }

    fn terms(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn alpha(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn evaluate_examples() {
        let p = HomogeneousPolynomial::monomial(alpha(&[3, 0]), c(1.0, 0.0));
        assert_eq!(p.evaluate(&[c(0.5, 0.0), c(7.0, -3.0)]).unwrap(), c(0.125, 0.0));

        let p = HomogeneousPolynomial::monomial(alpha(&[1, 1]), c(1.0, 0.0));
        let v = p.evaluate(&[c(0.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);

        let p = HomogeneousPolynomial::from_terms(2, 2, [(alpha(&[2, 0]), c(2.0, 0.0)), (alpha(&[0, 2]), c(3.0, 0.0))])
            .unwrap();
        assert_eq!(p.evaluate(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), c(5.0, 0.0));
    }

    #[test]
    fn evaluate_rejects_wrong_length() {
        let p = HomogeneousPolynomial::monomial(alpha(&[1, 1]), c(1.0, 0.0));
        assert_eq!(
            p.evaluate(&[c(1.0, 0.0)]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn homogeneity_is_enforced() {
        let mut p = HomogeneousPolynomial::zero(2, 2);
        assert!(matches!(
            p.add_term(alpha(&[1, 0]), c(1.0, 0.0)),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(matches!(
            p.add_term(alpha(&[1, 0, 1]), c(1.0, 0.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cancelling_terms_leave_no_zero() {
        let p = HomogeneousPolynomial::from_terms(
            2,
            1,
            [
                (alpha(&[1, 0]), c(1.0, 0.0)),
                (alpha(&[0, 1]), c(2.0, 0.0)),
                (alpha(&[1, 0]), c(-1.0, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&alpha(&[1, 0])), c(0.0, 0.0));
    }

    #[test]
    fn restrict_support_examples() {
        let p = HomogeneousPolynomial::from_terms(2, 2, [(alpha(&[2, 0]), c(1.0, 0.0)), (alpha(&[0, 2]), c(1.0, 0.0))])
            .unwrap();
        let all: BTreeSet<_> = crate::multiindex::enumerate_alphas(2, 2).collect();
        assert_eq!(p.restrict_support(&all), p);
        let only: BTreeSet<_> = [alpha(&[2, 0])].into_iter().collect();
        assert_eq!(
            p.restrict_support(&only),
            HomogeneousPolynomial::monomial(alpha(&[2, 0]), c(1.0, 0.0))
        );
        assert!(p.restrict_support(&BTreeSet::new()).is_zero());
    }

    #[test]
    fn analytic_mixed_degrees() {
        let f =
            AnalyticPolynomial::from_terms(2, [(alpha(&[0, 0]), c(1.0, 0.0)), (alpha(&[2, 1]), c(0.0, 2.0))]).unwrap();
        assert_eq!(f.total_degree(), 3);
        assert_eq!(f.degrees(), vec![2, 1]);
        let v = f.evaluate(&[c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(v, c(1.0, 8.0));
    }
}
