//! The symmetric `m`-linear form of a homogeneous polynomial and the
//! one-slot-fixed objects built from it.
//!
//! For `P(z) = Σ c_α z^α` the form `L` has matrix `a_i = L(e_{i₁}, …, e_{i_m})`
//! with `c_α = card[i] · a_i` whenever `α` and `i` are related.

use super::{HomogeneousPolynomial, Polynomial};
use crate::error::{Error, Result};
use crate::multiindex::{insert_at, tuple_to_alpha, IndexTuple, MultiIndex};
use num_complex::Complex64;

/// `a(i) = c_α / card[i]`; zero when `α` is not in the support.
pub fn symmetric_coefficient(p: &HomogeneousPolynomial, i: &IndexTuple) -> Result<Complex64> {
    if i.len() != p.degree() as usize {
        return Err(Error::InvalidArgument(format!(
            "tuple {i} has length {}, polynomial degree is {}",
            i.len(),
            p.degree()
        )));
    }
    let alpha = tuple_to_alpha(i, p.dimension())?;
    let c = p.coefficient(&alpha);
    if c == Complex64::default() {
        return Ok(c);
    }
    let card = alpha.multinomial()?;
    Ok(c / card as f64)
}

/// Borrowed accessor for the symmetric coefficient array of `P`.
#[derive(Debug, Clone, Copy)]
pub struct SymmetricFormView<'a> {
    poly: &'a HomogeneousPolynomial,
}

impl<'a> SymmetricFormView<'a> {
    pub fn new(poly: &'a HomogeneousPolynomial) -> Self {
        SymmetricFormView { poly }
    }

    pub fn poly(&self) -> &'a HomogeneousPolynomial {
        self.poly
    }

    pub fn a(&self, i: &IndexTuple) -> Result<Complex64> {
        symmetric_coefficient(self.poly, i)
    }
}

fn check_slot(p: &HomogeneousPolynomial, k: usize) -> Result<()> {
    let m = p.degree();
    if m < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: m });
    }
    if k == 0 || k > m as usize - 1 {
        return Err(Error::PositionOutOfRange { k, max: m as usize - 1 });
    }
    Ok(())
}

/// The `(m−1)`-homogeneous polynomial `Σ_{i ∈ J(m−1,N)} card[i] a_{(i,_k j)} w^i`.
///
/// By symmetry of `a` the result does not depend on `k`; `k` is still
/// validated against `1..=m−1`.
pub fn polarized_slice(p: &HomogeneousPolynomial, k: usize, j: usize) -> Result<HomogeneousPolynomial> {
    check_slot(p, k)?;
    let n = p.dimension();
    if j == 0 || j > n {
        return Err(Error::VariableOutOfRange { index: j, n });
    }
    let mut out = HomogeneousPolynomial::zero(n, p.degree() - 1);
    for alpha in p.terms().keys() {
        let Some(beta) = alpha.sub_unit(j) else {
            continue;
        };
        let i = beta.to_tuple();
        let card = i.class_cardinality()?;
        let a = symmetric_coefficient(p, &insert_at(&i, k, j)?)?;
        out.add_term(beta, a * card as f64)?;
    }
    Ok(out)
}

/// `L(z, …, z, y, z, …, z)` with `y` in slot `k`:
/// `Σ_j Σ_{i ∈ M(m−1,N)} a_{(i,_k j)} z_{i₁}⋯z_{i_{m−1}} y_j`.
///
/// Evaluated through the closed form `(1/m) Σ_j y_j ∂_j P(z)`.
pub fn mixed_polarization(p: &HomogeneousPolynomial, k: usize, z: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    check_slot(p, k)?;
    let n = p.dimension();
    for v in [z, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let form = mixed_form(p)?;
    let zy: Vec<Complex64> = z.iter().chain(y).copied().collect();
    form.evaluate(&zy)
}

/// The polynomial `F(z, y) = L(z, …, z, y)` in `2N` variables (`z` first,
/// then `y`). Homogeneous of degree `m−1` in `z` and `1` in `y`.
pub fn mixed_form(p: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial> {
    let m = p.degree();
    if m < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: m });
    }
    let n = p.dimension();
    let mut out = HomogeneousPolynomial::zero(2 * n, m);
    for (alpha, &c) in p.terms() {
        for (r, &a) in alpha.exponents().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut e = Vec::with_capacity(2 * n);
            e.extend_from_slice(alpha.exponents());
            e[r] -= 1;
            e.extend(std::iter::repeat_n(0, n));
            e[n + r] = 1;
            out.add_term(MultiIndex::new(e), c * (a as f64 / m as f64))?;
        }
    }
    Ok(out)
}

/// Brute-force `Σ_{i ∈ M(m−1,N)} a_{(i,_k j)} z^i y_j`, summing the full
/// tuple set. Kept for cross-checking the closed form.
#[cfg(test)]
pub(crate) fn mixed_polarization_brute(
    p: &HomogeneousPolynomial,
    k: usize,
    z: &[Complex64],
    y: &[Complex64],
) -> Result<Complex64> {
    check_slot(p, k)?;
    let n = p.dimension();
    let mut acc = crate::summation::ComplexNeumaier::new();
    for j in 1..=n {
        for i in crate::multiindex::enumerate_m(p.degree() as usize - 1, n) {
            let a = symmetric_coefficient(p, &insert_at(&i, k, j)?)?;
            if a == Complex64::default() {
                continue;
            }
            let zi: Complex64 = i.entries().iter().map(|&r| z[r - 1]).product();
            acc.add(a * zi * y[j - 1]);
        }
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::enumerate_m;
    use crate::poly::{random_polynomial, CoefficientKind, EnsembleSpec, Support};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mono(e: &[u32], coef: f64) -> HomogeneousPolynomial {
        HomogeneousPolynomial::monomial(MultiIndex::new(e.to_vec()), c(coef, 0.0))
    }

    fn t(v: &[usize]) -> IndexTuple {
        IndexTuple::new(v.to_vec())
    }

    #[test]
    fn symmetric_coefficient_examples() {
        assert_eq!(
            symmetric_coefficient(&mono(&[1, 1], 1.0), &t(&[1, 2])).unwrap(),
            c(0.5, 0.0)
        );
        assert_eq!(
            symmetric_coefficient(&mono(&[1, 1], 1.0), &t(&[2, 1])).unwrap(),
            c(0.5, 0.0)
        );
        assert_eq!(
            symmetric_coefficient(&mono(&[2, 0], 1.0), &t(&[1, 1])).unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            symmetric_coefficient(&mono(&[1, 1, 1], 6.0), &t(&[2, 1, 3])).unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            symmetric_coefficient(&mono(&[2, 0], 1.0), &t(&[2, 2])).unwrap(),
            c(0.0, 0.0)
        );
    }

    #[test]
    fn slice_examples() {
        let s = polarized_slice(&mono(&[2], 1.0), 1, 1).unwrap();
        assert_eq!(s, mono(&[1], 1.0));

        let s = polarized_slice(&mono(&[1, 1], 1.0), 1, 1).unwrap();
        assert_eq!(s, mono(&[0, 1], 0.5));

        let s = polarized_slice(&mono(&[3, 0], 1.0), 1, 2).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.degree(), 2);
    }

    #[test]
    fn slice_rejects_bad_arguments() {
        assert!(matches!(
            polarized_slice(&mono(&[1, 0], 1.0), 1, 1),
            Err(Error::DegreeTooSmall { .. })
        ));
        assert!(matches!(
            polarized_slice(&mono(&[2, 1], 1.0), 3, 1),
            Err(Error::PositionOutOfRange { k: 3, max: 2 })
        ));
        assert!(matches!(
            polarized_slice(&mono(&[2, 1], 1.0), 1, 3),
            Err(Error::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn mixed_polarization_examples() {
        let (tv, sv) = (c(0.3, 0.4), c(-0.5, 0.1));
        let v = mixed_polarization(&mono(&[2, 0], 1.0), 1, &[tv, c(9.0, 0.0)], &[sv, c(2.0, 0.0)]).unwrap();
        assert!((v - tv * sv).norm() < 1e-15);

        let one = c(1.0, 0.0);
        let v = mixed_polarization(&mono(&[1, 1], 1.0), 1, &[one, one], &[one, -one]).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn mixed_form_on_diagonal_is_p() {
        let p = mono(&[3], 1.0);
        let f = mixed_form(&p).unwrap();
        assert_eq!(f, mono(&[2, 1], 1.0));
    }

    fn random_instance(n: usize, m: u32, seed: u64) -> HomogeneousPolynomial {
        random_polynomial(&EnsembleSpec {
            kind: CoefficientKind::ComplexGaussian,
            support: Support::Full,
            seed,
            n,
            m,
        })
        .unwrap()
    }

    fn point(n: usize, seed: u64, scale: f64) -> Vec<Complex64> {
        (0..n)
            .map(|r| {
                let t = (seed as f64 * 0.731 + r as f64 * 1.913).sin() * 3.0;
                Complex64::from_polar(scale * (0.4 + 0.6 * (r as f64 * 0.37 + seed as f64).cos().abs()), t)
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn reconstruction(n in 1usize..4, m in 1u32..5, seed in any::<u64>()) {
            let p = random_instance(n, m, seed);
            for i in enumerate_m(m as usize, n) {
                let alpha = tuple_to_alpha(&i, n).unwrap();
                let card = i.class_cardinality().unwrap() as f64;
                let back = symmetric_coefficient(&p, &i).unwrap() * card;
                let want = p.coefficient(&alpha);
                prop_assert!((back - want).norm() <= 1e-14 * want.norm().max(1e-300));
            }
        }

        #[test]
        fn diagonal_matches_evaluate(n in 1usize..4, m in 2u32..5, seed in any::<u64>()) {
            let p = random_instance(n, m, seed);
            let z = point(n, seed, 1.0);
            let direct = p.evaluate(&z).unwrap();
            for k in 1..m as usize {
                let mixed = mixed_polarization(&p, k, &z, &z).unwrap();
                prop_assert!((mixed - direct).norm() <= 1e-12 * direct.norm().max(1e-12));
            }
        }

        #[test]
        fn slices_independent_of_k(n in 1usize..4, m in 2u32..6, seed in any::<u64>()) {
            let p = random_instance(n, m, seed);
            for j in 1..=n {
                let first = polarized_slice(&p, 1, j).unwrap();
                for k in 2..m as usize {
                    prop_assert_eq!(&polarized_slice(&p, k, j).unwrap(), &first);
                }
            }
        }

        #[test]
        fn slices_reproduce_mixed_polarization(n in 1usize..4, m in 2u32..5, seed in any::<u64>()) {
            let p = random_instance(n, m, seed);
            let z = point(n, seed, 0.9);
            let y = point(n, seed.wrapping_add(7), 0.8);
            for k in 1..m as usize {
                let mut via_slices = Complex64::default();
                for j in 1..=n {
                    via_slices += y[j - 1] * polarized_slice(&p, k, j).unwrap().evaluate(&z).unwrap();
                }
                let closed = mixed_polarization(&p, k, &z, &y).unwrap();
                let brute = mixed_polarization_brute(&p, k, &z, &y).unwrap();
                let scale = brute.norm().max(1e-12);
                prop_assert!((via_slices - brute).norm() <= 1e-12 * scale);
                prop_assert!((closed - brute).norm() <= 1e-12 * scale);
            }
        }
    }
}
