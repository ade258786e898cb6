// SPDX-License-Identifier: MIT OR Apache-2.0

//! Parameter sweeps over the delay and simple regression helpers.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Scalar;

use super::{run, SimConfig, Verdict};

/// Terminal oscillation state of one run in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint<T: Scalar = f64> {
    pub tau: T,
    /// Last peak-to-trough height of `S`, zero when no oscillation was
    /// detected.
    pub amplitude: T,
    pub verdict: Option<Verdict>,
}

/// Run `template` at `steps` evenly spaced delays in `[tau_from, tau_to]`.
/// Runs execute in parallel; the output is ordered by `τ`.
pub fn sweep_amplitude<T: Scalar>(
    params: &ModelParams<T>,
    tau_from: T,
    tau_to: T,
    steps: usize,
    template: &SimConfig<T>,
) -> Result<Vec<SweepPoint<T>>> {
    if steps < 2 || !(tau_to > tau_from) {
        return Err(Error::Config(format!(
            "sweep needs at least 2 points on an increasing range, got {steps} on [{tau_from}, {tau_to}]"
        )));
    }
    let h = (tau_to - tau_from) / T::from_count(steps - 1);
    (0..steps)
        .into_par_iter()
        .map(|k| {
            let tau = tau_from + T::from_count(k) * h;
            let config = SimConfig {
                tau,
                ..template.clone()
            };
            let traj = run(&config, params)?;
            let (amplitude, verdict) = match &traj.diagnostics {
                Some(d) => (d.amplitude, Some(d.verdict)),
                None => (T::zero(), None),
            };
            Ok(SweepPoint {
                tau,
                amplitude,
                verdict,
            })
        })
        .collect()
}

/// First pair of consecutive sweep points across which the amplitude rises
/// from at most `threshold` to above it.
pub fn onset_bracket<T: Scalar>(points: &[SweepPoint<T>], threshold: T) -> Option<(T, T)> {
    points
        .windows(2)
        .find(|w| w[0].amplitude <= threshold && w[1].amplitude > threshold)
        .map(|w| (w[0].tau, w[1].tau))
}

/// Least-squares line `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regression<T: Scalar = f64> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

/// Ordinary least squares on paired samples.
pub fn linear_regression<T: Scalar>(x: &[T], y: &[T]) -> Result<Regression<T>> {
    let n = x.len().min(y.len());
    if n < 2 {
        return Err(Error::InsufficientData { found: n, required: 2 });
    }
    let nf = T::from_count(n);
    let mx = x[..n].iter().fold(T::zero(), |a, &v| a + v) / nf;
    let my = y[..n].iter().fold(T::zero(), |a, &v| a + v) / nf;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for k in 0..n {
        let (dx, dy) = (x[k] - mx, y[k] - my);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() {
        return Err(Error::Config("regression abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == T::zero() { T::one() } else { sxy * sxy / (sxx * syy) };
    Ok(Regression {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}
