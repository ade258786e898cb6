// SPDX-License-Identifier: MIT OR Apache-2.0

//! Model parameters, rescaling, the positive equilibrium and the reduced
//! coefficient system.
//!
//! The model is an SIS system structured by infection age `a`. The contact
//! kernel is a step: `β(a) = 0` for ages below the switch age and
//! `β(a) = β* = e^τ` beyond it. After rescaling age and time by `τ` the switch
//! sits at `a = 1` and the scaled system reads
//!
//! ```text
//! S'(t)            = τ [ Λ − μ S − S P / (1 + J) + η P ]
//! ∂i/∂t + ∂i/∂a    = −τ i
//! i(t, 0)          = τ S P / (1 + J)
//! P = ∫₀^∞ i da,   J = ∫ β(a) i da
//! ```
//!
//! The recruitment rate is written `Λ` throughout; some texts use the letter
//! `A` for the same constant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expsum::ExpSum;
use crate::scalar::{real, Scalar};

/// Largest delay for which the kernel height `e^τ` is ever formed on its own.
pub const BETA_STAR_TAU_MAX: f64 = 300.0;

/// Epidemiological constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams<T: Scalar = f64> {
    /// Recruitment rate `Λ > 0`.
    pub lambda: T,
    /// Natural death rate, `0 < μ < 1`.
    pub mu: T,
    /// Recovery rate, `0 < η < 1`.
    pub eta: T,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(lambda: T, mu: T, eta: T) -> Self {
        Self { lambda, mu, eta }
    }

    /// Check the standing ranges and endemicity; returns the parameters
    /// unchanged on success.
    pub fn validate(self) -> Result<Self> {
        let range = |name, value: T, constraint| Error::Range {
            name,
            value: value.as_f64(),
            constraint,
        };
        if !(self.lambda.is_finite() && self.lambda > T::zero()) {
            return Err(range("lambda", self.lambda, "lambda > 0"));
        }
        if !(self.mu > T::zero() && self.mu < T::one()) {
            return Err(range("mu", self.mu, "0 < mu < 1"));
        }
        if !(self.eta > T::zero() && self.eta < T::one()) {
            return Err(range("eta", self.eta, "0 < eta < 1"));
        }
        if self.lambda - self.mu <= T::zero() {
            return Err(Error::Endemicity {
                gap: (self.lambda - self.mu).as_f64(),
            });
        }
        Ok(self)
    }

    /// Total infected mass at the positive equilibrium,
    /// `ξ = (Λ − μ)/(1 + μ − η)`.
    pub fn xi(&self) -> T {
        (self.lambda - self.mu) / (T::one() + self.mu - self.eta)
    }
}

/// Kernel height `β* = e^τ`, available only while it stays comfortably finite.
pub fn beta_star<T: Scalar>(tau: T) -> Result<T> {
    if tau > T::lit(BETA_STAR_TAU_MAX) {
        return Err(Error::Range {
            name: "tau",
            value: tau.as_f64(),
            constraint: "tau <= 300 where exp(tau) is materialized",
        });
    }
    Ok(tau.exp())
}

/// The real coefficients `(ξ, B, C, D, E)` of the characteristic function
/// `g(ζ) = ζ² + Bζ + C + (Dζ + E) e^{−τζ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedCoeffs<T: Scalar = f64> {
    pub xi: T,
    pub b_coef: T,
    pub c_coef: T,
    pub d_coef: T,
    pub e_coef: T,
}

impl<T: Scalar> ReducedCoeffs<T> {
    /// Coefficients that do not come from a parameter set, for synthetic
    /// spectral tests. `ξ` is set consistently with `D = ξ/(1+ξ)` when
    /// `D < 1`, and to zero otherwise.
    pub fn synthetic(b: T, c: T, d: T, e: T) -> Self {
        let xi = if d < T::one() { d / (T::one() - d) } else { T::zero() };
        Self {
            xi,
            b_coef: b,
            c_coef: c,
            d_coef: d,
            e_coef: e,
        }
    }

    /// `Λ − μ` recovered from the coefficients: `μ = E/D`, `η = 1 − C/D`,
    /// hence `Λ − μ = ξ(C + E)/D`. Zero when `D = 0`.
    pub fn lambda_minus_mu(&self) -> T {
        if self.d_coef == T::zero() {
            T::zero()
        } else {
            self.xi * (self.c_coef + self.e_coef) / self.d_coef
        }
    }
}

/// Evaluate the five reduced coefficients.
pub fn reduced_coeffs<T: Scalar>(params: &ModelParams<T>) -> Result<ReducedCoeffs<T>> {
    let p = params.validate()?;
    let one = T::one();
    let d = (p.lambda - p.mu) / (one + p.lambda - p.eta);
    Ok(ReducedCoeffs {
        xi: p.xi(),
        b_coef: (p.mu * (p.lambda - p.eta) + p.lambda) / (p.lambda - p.mu) * d,
        c_coef: (one - p.eta) * d,
        d_coef: d,
        e_coef: p.mu * d,
    })
}

/// Positive equilibrium in scaled coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equilibrium<T: Scalar = f64> {
    pub s_bar: T,
    pub xi: T,
    /// `ī(a) = ξ τ e^{−τ a}`.
    pub i_bar: ExpSum<T>,
    /// `ρ̄(a) = μ(1+Λ−η)/(1+μ−η) · τ e^{−μ τ a}`, whose integral is `S̄`.
    pub rho_bar: ExpSum<T>,
}

/// The unique positive equilibrium at delay `tau`.
pub fn equilibrium<T: Scalar>(params: &ModelParams<T>, tau: T) -> Result<Equilibrium<T>> {
    let p = params.validate()?;
    if !(tau > T::zero()) {
        return Err(Error::Range {
            name: "tau",
            value: tau.as_f64(),
            constraint: "tau > 0",
        });
    }
    let one = T::one();
    let xi = p.xi();
    let rho_height = p.mu * (one + p.lambda - p.eta) / (one + p.mu - p.eta) * tau;
    Ok(Equilibrium {
        s_bar: one + xi,
        xi,
        i_bar: ExpSum::single(real(xi * tau), real(tau))?,
        rho_bar: ExpSum::single(real(rho_height), real(p.mu * tau))?,
    })
}

/// One signed quantity of the stability assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssumptionCheck<T: Scalar = f64> {
    pub name: &'static str,
    pub value: T,
    /// `true` when the value has the required strict sign.
    pub pass: bool,
}

/// The five sign conditions under which a single family of Hopf points
/// exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport<T: Scalar = f64> {
    pub checks: [AssumptionCheck<T>; 5],
    pub pass: bool,
}

/// Evaluate `Λ−μ > 0`, `C−E < 0`, `2E−BD < 0`, `2C−B² < 0` and
/// `E(B²−2C)−BCD < 0`.
pub fn assumption_report<T: Scalar>(c: &ReducedCoeffs<T>) -> AssumptionReport<T> {
    let two = T::lit(2.0);
    let (b, cc, d, e) = (c.b_coef, c.c_coef, c.d_coef, c.e_coef);
    let positive = |name, value: T| AssumptionCheck {
        name,
        value,
        pass: value > T::zero(),
    };
    let negative = |name, value: T| AssumptionCheck {
        name,
        value,
        pass: value < T::zero(),
    };
    let checks = [
        positive("lambda-mu", c.lambda_minus_mu()),
        negative("C-E", cc - e),
        negative("2E-BD", two * e - b * d),
        negative("2C-B^2", two * cc - b * b),
        negative("E(B^2-2C)-BCD", e * (b * b - two * cc) - b * cc * d),
    ];
    let pass = checks.iter().all(|k| k.pass);
    AssumptionReport { checks, pass }
}

/// Map scaled `(t̂, â, î)` to original `(t, a, i)`:
/// `t = τ t̂`, `a = τ â`, `i = î / τ`.
pub fn unscale<T: Scalar>(t_hat: T, a_hat: T, i_hat: T, tau: T) -> (T, T, T) {
    (tau * t_hat, tau * a_hat, i_hat / tau)
}

/// Inverse of [`unscale`].
pub fn scale<T: Scalar>(t: T, a: T, i: T, tau: T) -> (T, T, T) {
    (t / tau, a / tau, i * tau)
}
