// SPDX-License-Identifier: MIT OR Apache-2.0

//! Hopf bifurcation analysis of an age-structured SIS model with a step
//! contact kernel.
//!
//! The crate is organised as five layers:
//!
//! * [`model`]: parameters, rescaling, equilibrium and reduced coefficients;
//! * [`spectral`]: the characteristic quasi-polynomial, crossing frequency,
//!   critical delays and root refinement;
//! * [`expsum`]: exact algebra on finite sums of decaying exponentials,
//!   which is the representation of every age profile;
//! * [`normalform`]: center-manifold coefficients and classification;
//! * [`simulate`]: time integration by a delay reduction and by the method
//!   of characteristics, with oscillation diagnostics.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` and `*32` aliases below fix the precision.

// Negated comparisons are used on purpose: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expsum;
pub mod model;
pub mod normalform;
pub mod scalar;
pub mod spectral;
pub mod simulate;

pub use error::{Error, Result};
pub use expsum::{ExpSum, Term};
pub use model::{equilibrium, reduced_coeffs, AssumptionReport, Equilibrium, ModelParams, ReducedCoeffs};
pub use normalform::{analyze, classify, Classification, HopfContext, NormalFormOptions, NormalFormResult};
pub use scalar::{Cx, Scalar};
pub use spectral::{hopf_points, Branch, HopfPoint};

pub type ModelParams64 = ModelParams<f64>;
pub type ModelParams32 = ModelParams<f32>;
pub type ReducedCoeffs64 = ReducedCoeffs<f64>;
pub type ReducedCoeffs32 = ReducedCoeffs<f32>;
pub type HopfPoint64 = HopfPoint<f64>;
pub type HopfPoint32 = HopfPoint<f32>;
pub type ExpSum64 = ExpSum<f64>;
pub type ExpSum32 = ExpSum<f32>;
pub type NormalFormResult64 = NormalFormResult<f64>;
pub type NormalFormResult32 = NormalFormResult<f32>;
pub type SimConfig64 = simulate::SimConfig<f64>;
pub type SimConfig32 = simulate::SimConfig<f32>;
pub type Trajectory64 = simulate::Trajectory<f64>;
pub type Trajectory32 = simulate::Trajectory<f32>;
