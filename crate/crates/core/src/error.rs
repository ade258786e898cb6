// SPDX-License-Identifier: MIT OR Apache-2.0

//! Error surface of the library.
//!
//! Payloads are stored as `f64` regardless of the scalar type in use so that
//! a single non-generic error enum can cross module and crate boundaries.

use thiserror::Error;

/// Every failure mode reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model parameter lies outside its admissible range.
    #[error("parameter {name} = {value} violates {constraint}")]
    Range {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// There is no positive equilibrium because recruitment does not exceed
    /// natural mortality.
    #[error("no positive equilibrium: lambda - mu = {gap} must be > 0")]
    Endemicity { gap: f64 },

    /// The characteristic determinant was evaluated at a pole of
    /// `(lambda + tau)(lambda + mu*tau)`.
    #[error("lambda = {re}{im:+}i is a pole of the characteristic determinant")]
    Pole { re: f64, im: f64 },

    /// The crossing-frequency quartic has no positive root.
    #[error("no imaginary-axis crossing: {reason}")]
    NoCrossing { reason: String },

    /// The crossing root is (numerically) not simple.
    #[error("root is not simple: |g'(i omega0)| = {derivative} is below the floor {floor}")]
    DegenerateRoot { derivative: f64, floor: f64 },

    /// Newton refinement did not reach the residual tolerance.
    #[error("Newton iteration did not converge in {iterations} steps (|g| = {residual}) at tau = {tau}")]
    MaxIter {
        iterations: usize,
        residual: f64,
        tau: f64,
    },

    /// Newton refinement hit a vanishing derivative.
    #[error("derivative vanished during Newton iteration at zeta = {re}{im:+}i (tau = {tau})")]
    DerivativeVanished { re: f64, im: f64, tau: f64 },

    /// An exponential sum with a rate of non-positive real part was built or
    /// integrated.
    #[error("exponential rate {re}{im:+}i has non-positive real part; integral over [0, inf) diverges")]
    Divergent { re: f64, im: f64 },

    /// A second-order resolvent would be singular at the Hopf point.
    #[error("resonance: |det Delta({at})| = {modulus} is below the floor {floor}")]
    Resonance {
        at: &'static str,
        modulus: f64,
        floor: f64,
    },

    /// A simulated state left the representable range.
    #[error("state blew up at t = {time} (|{variable}| = {value})")]
    Blowup {
        time: f64,
        variable: &'static str,
        value: f64,
    },

    /// An inconsistent simulation or command configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Too few oscillation extrema were found to compute diagnostics.
    #[error("insufficient data: found {found} peaks in the trailing window, need at least {required}")]
    InsufficientData { found: usize, required: usize },
}

/// Convenient alias used by fallible operations.
pub type Result<T> = std::result::Result<T, Error>;
