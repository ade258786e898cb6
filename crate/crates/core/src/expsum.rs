// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exact algebra of exponential sums on the half line.
//!
//! Every age profile that appears in the model (equilibrium densities,
//! eigenfunctions and the second-order center-manifold profiles) has the form
//!
//! ```text
//! f(a) = sum_j c_j exp(-r_j a),   Re r_j > 0,
//! ```
//!
//! with complex coefficients and rates. The set is closed under addition,
//! scaling, multiplication and conjugation, and both integral functionals used
//! by the model are available in closed form:
//!
//! * `integral(f) = sum_j c_j / r_j`;
//! * `beta_integral(f, tau) = sum_j c_j exp(tau - r_j) / r_j`, the integral of
//!   `f` against the step kernel that is `0` on `[0, 1)` and `exp(tau)` beyond.
//!
//! The β-weighted form always evaluates `exp(tau - r)` as one exponential, so
//! the large kernel height never appears on its own.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Cx, Scalar};

/// Rates closer than this (absolute) are merged into one term.
pub const RATE_MERGE_TOL: f64 = 1e-12;

/// One term `coeff * exp(-rate * a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct Term<T: Scalar = f64> {
    pub coeff: Cx<T>,
    pub rate: Cx<T>,
}

/// A finite exponential sum kept in canonical form.
///
/// Canonical form means: no two rates within [`RATE_MERGE_TOL`] of each
/// other, no exactly-zero coefficients, and terms sorted by the real and then
/// imaginary part of their rate. Two sums are equal exactly when their
/// canonical term lists are equal.
///
/// Deserialization goes through [`ExpSum::from_terms`], so stored sums are
/// re-validated and re-canonicalized on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExpSumTerms<T>", bound(deserialize = ""))]
pub struct ExpSum<T: Scalar = f64> {
    terms: Vec<Term<T>>,
}

#[derive(Deserialize)]
#[serde(bound(deserialize = ""))]
struct ExpSumTerms<T: Scalar> {
    terms: Vec<Term<T>>,
}

impl<T: Scalar> TryFrom<ExpSumTerms<T>> for ExpSum<T> {
    type Error = Error;

    fn try_from(raw: ExpSumTerms<T>) -> Result<Self> {
        Self::from_terms(raw.terms.into_iter().map(|t| (t.coeff, t.rate)))
    }
}

impl<T: Scalar> Default for ExpSum<T> {
    fn default() -> Self {
        Self::zero()
    }
}

fn check_rate<T: Scalar>(rate: Cx<T>) -> Result<()> {
    if rate.re > T::zero() && rate.re.is_finite() && rate.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Divergent {
            re: rate.re.as_f64(),
            im: rate.im.as_f64(),
        })
    }
}

impl<T: Scalar> ExpSum<T> {
    /// The zero function.
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// A single term `coeff * exp(-rate * a)`.
    ///
    /// Fails with [`Error::Divergent`] unless `Re(rate) > 0`.
    pub fn single(coeff: Cx<T>, rate: Cx<T>) -> Result<Self> {
        Self::from_terms([(coeff, rate)])
    }

    /// Build from `(coeff, rate)` pairs, canonicalizing the result.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Cx<T>, Cx<T>)>,
    {
        let mut raw = Vec::new();
        for (coeff, rate) in terms {
            check_rate(rate)?;
            raw.push(Term { coeff, rate });
        }
        Ok(Self::canonical(raw))
    }

    fn canonical(raw: Vec<Term<T>>) -> Self {
        let tol = T::tol(RATE_MERGE_TOL);
        let mut merged: Vec<Term<T>> = Vec::with_capacity(raw.len());
        for t in raw {
            match merged.iter_mut().find(|m| (m.rate - t.rate).norm() <= tol) {
                Some(m) => m.coeff = m.coeff + t.coeff,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != Complex::new(T::zero(), T::zero()));
        merged.sort_by(|x, y| {
            x.rate
                .re
                .partial_cmp(&y.rate.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(
                    x.rate
                        .im
                        .partial_cmp(&y.rate.im)
                        .unwrap_or(std::cmp::Ordering::Equal),
                )
        });
        Self { terms: merged }
    }

    /// Canonical terms.
    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    /// Number of canonical terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero function.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: Cx<T>) -> Self {
        Self::canonical(
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * c,
                    rate: t.rate,
                })
                .collect(),
        )
    }

    /// Pointwise product; rates add.
    pub fn mul(&self, other: &Self) -> Self {
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for x in &self.terms {
            for y in &other.terms {
                raw.push(Term {
                    coeff: x.coeff * y.coeff,
                    rate: x.rate + y.rate,
                });
            }
        }
        Self::canonical(raw)
    }

    /// Pointwise complex conjugate: conjugates both coefficients and rates.
    pub fn conj(&self) -> Self {
        Self::canonical(
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.conj(),
                    rate: t.rate.conj(),
                })
                .collect(),
        )
    }

    /// Value at age `a >= 0`.
    pub fn eval(&self, a: T) -> Cx<T> {
        self.terms
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, t| {
                acc + t.coeff * (-t.rate * a).exp()
            })
    }

    /// `∫₀^∞ f(a) da = Σ c/r`.
    pub fn integral(&self) -> Cx<T> {
        self.terms
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, t| acc + t.coeff / t.rate)
    }

    /// `∫₁^∞ e^τ f(a) da = Σ c·e^{τ−r}/r`.
    pub fn beta_integral(&self, tau: T) -> Cx<T> {
        self.terms
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, t| {
                let shift = Complex::new(tau, T::zero()) - t.rate;
                acc + t.coeff * shift.exp() / t.rate
            })
    }

    /// Largest distance between matching terms of two sums, or `None` when
    /// the rate sets differ (after merging).
    pub fn max_term_distance(&self, other: &Self) -> Option<T> {
        if self.len() != other.len() {
            return None;
        }
        let tol = T::tol(RATE_MERGE_TOL);
        let mut worst = T::zero();
        for x in &self.terms {
            let y = other
                .terms
                .iter()
                .find(|y| (y.rate - x.rate).norm() <= tol)?;
            worst = worst.max((x.coeff - y.coeff).norm());
        }
        Some(worst)
    }

    /// True when both sums have the same rates and coefficients agree to
    /// `tol` relative to the larger coefficient magnitude.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        let scale = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .fold(T::one(), |m, t| m.max(t.coeff.norm()));
        match self.max_term_distance(other) {
            Some(d) => d <= tol * scale,
            None => false,
        }
    }
}

impl<T: Scalar> Add for &ExpSum<T> {
    type Output = ExpSum<T>;
    fn add(self, rhs: Self) -> ExpSum<T> {
        let mut raw = self.terms.clone();
        raw.extend_from_slice(&rhs.terms);
        ExpSum::canonical(raw)
    }
}

impl<T: Scalar> Add for ExpSum<T> {
    type Output = ExpSum<T>;
    fn add(self, rhs: Self) -> ExpSum<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Neg for &ExpSum<T> {
    type Output = ExpSum<T>;
    fn neg(self) -> ExpSum<T> {
        self.scale(Complex::new(-T::one(), T::zero()))
    }
}

impl<T: Scalar> Sub for &ExpSum<T> {
    type Output = ExpSum<T>;
    fn sub(self, rhs: Self) -> ExpSum<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Sub for ExpSum<T> {
    type Output = ExpSum<T>;
    fn sub(self, rhs: Self) -> ExpSum<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for &ExpSum<T> {
    type Output = ExpSum<T>;
    fn mul(self, rhs: Self) -> ExpSum<T> {
        ExpSum::mul(self, rhs)
    }
}

impl<T: Scalar> Mul<Cx<T>> for &ExpSum<T> {
    type Output = ExpSum<T>;
    fn mul(self, rhs: Cx<T>) -> ExpSum<T> {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn merge_and_drop() {
        let r = cx(2.0, 1.0);
        let f = ExpSum::from_terms([(cx(1.0, 0.0), r), (cx(-1.0, 0.0), r + cx(1e-14, 0.0))]).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn rejects_nonpositive_rate() {
        assert!(matches!(
            ExpSum::single(cx(1.0, 0.0), cx(0.0, 3.0)),
            Err(Error::Divergent { .. })
        ));
    }

    #[test]
    fn sorted_terms() {
        let f = ExpSum::from_terms([(cx(1.0, 0.0), cx(3.0, 0.0)), (cx(1.0, 0.0), cx(1.0, 2.0))]).unwrap();
        assert_eq!(f.terms()[0].rate, cx(1.0, 2.0));
    }
}
