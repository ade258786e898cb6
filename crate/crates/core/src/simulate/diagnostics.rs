// SPDX-License-Identifier: MIT OR Apache-2.0

//! Oscillation diagnostics on the susceptible series.
//!
//! Peaks and troughs of `S(t)` are located in the trailing half of the
//! stored samples and refined by a parabola through each discrete extremum
//! and its two neighbours. The amplitude of an oscillation is the height of
//! a peak above the trough that follows it.
//!
//! The verdict compares consecutive amplitudes through their geometric mean
//! ratio `(A_last / A_first)^{1/(n−1)}`, which is the per-period growth
//! factor of a geometric sequence and is insensitive to the phase at which
//! the window happens to start. Near the critical delay a decaying run
//! also has a ratio close to one, so an amplitude that has fallen to the
//! rounding floor is reported as decaying regardless of the ratio.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Trajectory;

/// Peaks required in the trailing window.
pub const MIN_PEAKS: usize = 3;
/// A ratio inside `[1 − band, 1 + band]` counts as sustained.
pub const SUSTAINED_BAND: f64 = 0.01;
/// Amplitudes below `AMPLITUDE_FLOOR · max(1, |mean S|)` are rounding noise.
pub const AMPLITUDE_FLOOR: f64 = 1e-9;

/// Long-run behaviour of the oscillation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Decaying,
    Sustained,
    Growing,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Decaying => "decaying",
            Verdict::Sustained => "sustained",
            Verdict::Growing => "growing",
        }
    }
}

/// Oscillation summary of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationRecord<T: Scalar = f64> {
    /// Refined peak times in the trailing window.
    pub peaks: Vec<T>,
    /// Refined peak values, aligned with `peaks`.
    pub peak_values: Vec<T>,
    /// Peak-to-trough heights of the trailing oscillations.
    pub amplitudes: Vec<T>,
    /// Last peak-to-trough height.
    pub amplitude: T,
    /// Geometric mean of consecutive amplitude ratios.
    pub ratio: T,
    /// Mean spacing of the trailing peaks, scaled time.
    pub period: T,
    pub verdict: Verdict,
}

/// Parabolic refinement of a discrete extremum at index `k`.
fn refine<T: Scalar>(t: &[T], y: &[T], k: usize) -> (T, T) {
    let (t0, t1, t2) = (t[k - 1], t[k], t[k + 1]);
    let (y0, y1, y2) = (y[k - 1], y[k], y[k + 1]);
    let h = t1 - t0;
    let denom = y0 - T::lit(2.0) * y1 + y2;
    if denom == T::zero() || (t2 - t1 - h).abs() > T::tol(1e-9) * h.abs().max(T::one()) {
        return (t1, y1);
    }
    let x = T::lit(0.5) * (y0 - y2) / denom;
    let x = x.max(-T::one()).min(T::one());
    (t1 + x * h, y1 - T::lit(0.25) * (y0 - y2) * x)
}

/// Locate refined extrema of `y` at indices `≥ start`; `sign = 1` for
/// maxima and `−1` for minima.
fn extrema<T: Scalar>(t: &[T], y: &[T], start: usize, sign: T) -> Vec<(T, T)> {
    let mut out = Vec::new();
    for k in start.max(1)..y.len().saturating_sub(1) {
        let (a, b, c) = (sign * y[k - 1], sign * y[k], sign * y[k + 1]);
        if b > a && b >= c {
            out.push(refine(t, y, k));
        }
    }
    out
}

/// Build the oscillation record of `traj`.
pub fn diagnostics<T: Scalar>(traj: &Trajectory<T>) -> Result<OscillationRecord<T>> {
    oscillation_record(&traj.times, &traj.s)
}

/// As [`diagnostics`] on raw series.
pub fn oscillation_record<T: Scalar>(times: &[T], y: &[T]) -> Result<OscillationRecord<T>> {
    let n = times.len().min(y.len());
    if n < 3 {
        return Err(Error::InsufficientData {
            found: 0,
            required: MIN_PEAKS,
        });
    }
    let (times, y) = (&times[..n], &y[..n]);
    let t_mid = T::lit(0.5) * (times[0] + times[n - 1]);
    let start = times.partition_point(|&t| t < t_mid);
    let peaks = extrema(times, y, start, T::one());
    let troughs = extrema(times, y, start, -T::one());
    if peaks.len() < MIN_PEAKS {
        return Err(Error::InsufficientData {
            found: peaks.len(),
            required: MIN_PEAKS,
        });
    }

    let mut amplitudes = Vec::new();
    let mut trough_iter = troughs.iter().peekable();
    for &(tp, vp) in &peaks {
        while trough_iter.peek().is_some_and(|&&(tt, _)| tt <= tp) {
            trough_iter.next();
        }
        if let Some(&&(_, vt)) = trough_iter.peek() {
            amplitudes.push(vp - vt);
        }
    }
    if amplitudes.len() < 2 {
        return Err(Error::InsufficientData {
            found: amplitudes.len(),
            required: 2,
        });
    }

    let first = amplitudes[0];
    let last = amplitudes[amplitudes.len() - 1];
    let ratio = if first > T::zero() && last > T::zero() {
        (last / first).powf(T::one() / T::from_count(amplitudes.len() - 1))
    } else {
        T::one()
    };
    let spacing = (peaks[peaks.len() - 1].0 - peaks[0].0) / T::from_count(peaks.len() - 1);
    let mean = y[start..].iter().fold(T::zero(), |a, &v| a + v) / T::from_count(n - start);
    let floor = T::lit(AMPLITUDE_FLOOR) * mean.abs().max(T::one());
    let band = T::lit(SUSTAINED_BAND);
    let verdict = if last <= floor || ratio < T::one() - band {
        Verdict::Decaying
    } else if ratio > T::one() + band {
        Verdict::Growing
    } else {
        Verdict::Sustained
    };

    Ok(OscillationRecord {
        peak_values: peaks.iter().map(|p| p.1).collect(),
        peaks: peaks.iter().map(|p| p.0).collect(),
        amplitudes,
        amplitude: last,
        ratio,
        period: spacing,
        verdict,
    })
}
