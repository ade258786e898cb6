// SPDX-License-Identifier: MIT OR Apache-2.0

//! Time integration of the scaled model.
//!
//! Two independent schemes are provided.
//!
//! The [`dde`] scheme uses the exact reduction along characteristics. With
//! `b(t) = i(t, 0)` the density is `i(t, a) = b(t − a) e^{−τa}` for `a < t`,
//! so `P = ∫₀^∞ b(t−a)e^{−τa} da` and, because `β = e^τ` beyond `a = 1`,
//! `J = ∫₀^∞ b(t−1−s)e^{−τs} ds`. Differentiating gives a closed system with
//! a single discrete delay:
//!
//! ```text
//! b  = τ S P / (1 + J)
//! S' = τ [Λ − μS − S P/(1+J) + ηP]
//! P' = b(t) − τP
//! J' = b(t−1) − τJ
//! ```
//!
//! The [`pde`] scheme transports the age profile along characteristics on a
//! grid with `da = dt` and closes the boundary condition by quadrature. It
//! is slower and carries an `O(dt²)` quadrature bias, and exists to cross-
//! check the reduction and to accept arbitrary initial age profiles.
//!
//! Both schemes use fixed steps: `1/dt` must be an integer so the delay and
//! the kernel switch fall on grid points.

pub mod dde;
pub mod diagnostics;
pub mod pde;
pub mod sweep;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expsum::ExpSum;
use crate::model::ModelParams;
use crate::scalar::Scalar;

pub use dde::{integrate_dde, reduce_to_dde, DelaySystem};
pub use diagnostics::{diagnostics, OscillationRecord, Verdict};
pub use pde::{integrate_pde, AgeSurface};
pub use sweep::{linear_regression, onset_bracket, sweep_amplitude, Regression, SweepPoint};

/// Any state component above this magnitude aborts the run.
pub const BLOWUP_LIMIT: f64 = 1e12;
/// Default relative displacement of the seed from equilibrium.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Dde,
    Pde,
}

/// Initial data.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seed<T: Scalar = f64> {
    /// Every equilibrium quantity scaled by `1 + ε`: boundary history
    /// `b ≡ τξ(1+ε)` on `[−1, 0)`, `P(0) = J(0) = ξ(1+ε)`, `S(0) = S̄(1+ε)`.
    EquilibriumScaled,
    /// An initial age profile `i₀(a)` and susceptible mass `s0`. For the
    /// delay scheme the history is recovered as `b(s) = i₀(−s) e^{−τs}`.
    Custom { profile: ExpSum<T>, s0: T },
}

/// How the PDE boundary value is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary<T: Scalar = f64> {
    /// The nonlocal incidence condition.
    Coupled,
    /// A constant inflow, with `S` held fixed. Used for transport tests.
    Frozen(T),
}

/// Run configuration in scaled units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig<T: Scalar = f64> {
    pub tau: T,
    pub dt: T,
    pub t_end: T,
    pub scheme: Scheme,
    /// Age truncation of the PDE grid; `None` picks `1 + 40/τ` rounded up to
    /// a grid point.
    pub a_max: Option<T>,
    pub epsilon: T,
    pub seed: Seed<T>,
    /// Keep every `stride`-th step in the trajectory.
    pub stride: usize,
    pub boundary: Boundary<T>,
    /// PDE only: record the age profile every this many steps.
    pub snapshot_every: Option<usize>,
    /// PDE only: keep every this many age nodes in snapshots.
    pub snapshot_age_stride: usize,
}

impl<T: Scalar> SimConfig<T> {
    /// Delay-scheme configuration with the default seed and stride 1.
    pub fn dde(tau: T, dt: T, t_end: T) -> Self {
        Self {
            tau,
            dt,
            t_end,
            scheme: Scheme::Dde,
            a_max: None,
            epsilon: T::lit(DEFAULT_EPSILON),
            seed: Seed::EquilibriumScaled,
            stride: 1,
            boundary: Boundary::Coupled,
            snapshot_every: None,
            snapshot_age_stride: 1,
        }
    }

    /// Characteristic-scheme configuration with the default seed.
    pub fn pde(tau: T, dt: T, t_end: T) -> Self {
        Self {
            scheme: Scheme::Pde,
            ..Self::dde(tau, dt, t_end)
        }
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    /// Number of steps per unit delay, checked to be an integer `≥ 4`.
    pub fn steps_per_delay(&self) -> Result<usize> {
        if !(self.dt > T::zero() && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt = {} must be positive", self.dt)));
        }
        let n = (T::one() / self.dt).round();
        let aligned = (n * self.dt - T::one()).abs() <= T::tol(1e-12) * n.max(T::one());
        if !aligned || n < T::lit(4.0) {
            return Err(Error::Config(format!(
                "1/dt = {} must be an integer of at least 4 so the delay falls on the grid",
                (T::one() / self.dt)
            )));
        }
        Ok(n.to_usize().unwrap_or(0))
    }

    /// Total number of steps, `round(t_end/dt)`.
    pub fn total_steps(&self) -> Result<usize> {
        if !(self.t_end > T::zero() && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end = {} must be positive", self.t_end)));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if !(self.tau > T::zero() && self.tau.is_finite()) {
            return Err(Error::Range {
                name: "tau",
                value: self.tau.as_f64(),
                constraint: "tau > 0",
            });
        }
        if !(self.epsilon.is_finite() && self.epsilon > -T::one()) {
            return Err(Error::Config(format!("epsilon = {} must exceed -1", self.epsilon)));
        }
        Ok((self.t_end / self.dt).round().to_usize().unwrap_or(0))
    }
}

/// A sampled solution and its oscillation record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory<T: Scalar = f64> {
    pub tau: T,
    pub scheme: Scheme,
    pub times: Vec<T>,
    pub s: Vec<T>,
    pub p: Vec<T>,
    pub j: Vec<T>,
    pub b: Vec<T>,
    /// `None` when the series has too few oscillations to classify.
    pub diagnostics: Option<OscillationRecord<T>>,
    /// Non-fatal conditions met during the run, such as age-grid truncation.
    pub warnings: Vec<String>,
    pub surface: Option<AgeSurface<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub(crate) fn with_capacity(tau: T, scheme: Scheme, n: usize) -> Self {
        Self {
            tau,
            scheme,
            times: Vec::with_capacity(n),
            s: Vec::with_capacity(n),
            p: Vec::with_capacity(n),
            j: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
            diagnostics: None,
            warnings: Vec::new(),
            surface: None,
        }
    }

    pub(crate) fn push(&mut self, t: T, s: T, p: T, j: T, b: T) {
        self.times.push(t);
        self.s.push(s);
        self.p.push(p);
        self.j.push(j);
        self.b.push(b);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest `max(|S − s_bar|, |P − xi|, |J − xi|)` over the stored samples.
    pub fn max_deviation(&self, s_bar: T, xi: T) -> T {
        (0..self.len()).fold(T::zero(), |m, k| {
            m.max((self.s[k] - s_bar).abs())
                .max((self.p[k] - xi).abs())
                .max((self.j[k] - xi).abs())
        })
    }

    /// Euclidean `|(S, P) − (s_bar, xi)|` at the last sample.
    pub fn terminal_deviation(&self, s_bar: T, xi: T) -> T {
        match self.len() {
            0 => T::nan(),
            n => (self.s[n - 1] - s_bar).hypot(self.p[n - 1] - xi),
        }
    }
}

pub(crate) fn check_blowup<T: Scalar>(time: T, values: [(&'static str, T); 4]) -> Result<()> {
    let limit = T::lit(BLOWUP_LIMIT);
    for (variable, value) in values {
        if !(value.abs() <= limit) {
            return Err(Error::Blowup {
                time: time.as_f64(),
                variable,
                value: value.as_f64(),
            });
        }
    }
    Ok(())
}

/// Run the configured scheme.
pub fn run<T: Scalar>(config: &SimConfig<T>, params: &ModelParams<T>) -> Result<Trajectory<T>> {
    match config.scheme {
        Scheme::Dde => integrate_dde(config, params),
        Scheme::Pde => integrate_pde(config, params),
    }
}
