// SPDX-License-Identifier: MIT OR Apache-2.0

//! Fixed-step RK4 for the delay reduction.
//!
//! The delayed inflow `b(t − 1)` is needed at the three RK4 stage times
//! `t_n − 1 + {0, dt/2, dt}`. While `t_n + dt ≤ 1` these fall in the
//! initial history and are evaluated exactly. Afterwards the end points are
//! stored grid values and the midpoint comes from a cubic Lagrange
//! interpolant on four neighbouring grid values, which keeps the scheme
//! fourth order. Only the last `1/dt + 8` grid values of `b` are retained.

use crate::error::Result;
use crate::expsum::ExpSum;
use crate::model::{equilibrium, ModelParams};
use crate::scalar::Scalar;

use super::{check_blowup, diagnostics, Seed, SimConfig, Trajectory};

/// The closed delay system at one delay value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelaySystem<T: Scalar = f64> {
    pub params: ModelParams<T>,
    pub tau: T,
}

impl<T: Scalar> DelaySystem<T> {
    /// Boundary flux `b = τ S P / (1 + J)`.
    pub fn inflow(&self, s: T, p: T, j: T) -> T {
        self.tau * s * p / (T::one() + j)
    }

    /// `(S', P', J')` given the delayed inflow `b(t − 1)`.
    pub fn rhs(&self, y: [T; 3], b_delayed: T) -> [T; 3] {
        let [s, p, j] = y;
        let ModelParams { lambda, mu, eta } = self.params;
        let b = self.inflow(s, p, j);
        [
            self.tau * (lambda - mu * s + eta * p) - b,
            b - self.tau * p,
            b_delayed - self.tau * j,
        ]
    }
}

/// Build the delay system after validating `params` and `tau`.
pub fn reduce_to_dde<T: Scalar>(params: &ModelParams<T>, tau: T) -> Result<DelaySystem<T>> {
    equilibrium(params, tau)?;
    Ok(DelaySystem { params: *params, tau })
}

/// Initial history and state derived from a [`Seed`].
enum History<T: Scalar> {
    Constant(T),
    Profile { profile: ExpSum<T>, tau: T },
}

impl<T: Scalar> History<T> {
    /// `b(s)` for `s ∈ [−1, 0)`.
    fn at(&self, s: T) -> T {
        match self {
            History::Constant(v) => *v,
            History::Profile { profile, tau } => profile.eval(-s).re * (-*tau * s).exp(),
        }
    }
}

fn axpy<T: Scalar>(y: [T; 3], h: T, k: [T; 3]) -> [T; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

/// Ring buffer over the grid values `b_k = b(k dt)`, `k ≥ 0`.
struct Ring<T> {
    data: Vec<T>,
}

impl<T: Scalar> Ring<T> {
    fn new(len: usize) -> Self {
        Self {
            data: vec![T::zero(); len],
        }
    }

    fn set(&mut self, k: usize, v: T) {
        let n = self.data.len();
        self.data[k % n] = v;
    }

    fn get(&self, k: usize) -> T {
        self.data[k % self.data.len()]
    }

    /// Cubic Lagrange value at `k + 1/2`, through `k−1 … k+2`, shifted to
    /// `0 … 3` at the start of the series.
    fn midpoint(&self, k: usize) -> T {
        let sixteenth = T::lit(1.0 / 16.0);
        if k == 0 {
            // Nodes 0, 1, 2, 3 evaluated at x = 0.5.
            let w = [5.0, 15.0, -5.0, 1.0];
            return (0..4).fold(T::zero(), |acc, m| acc + T::lit(w[m]) * self.get(m)) * sixteenth;
        }
        let w = [-1.0, 9.0, 9.0, -1.0];
        (0..4).fold(T::zero(), |acc, m| acc + T::lit(w[m]) * self.get(k - 1 + m)) * sixteenth
    }
}

/// Integrate the delay reduction.
pub fn integrate_dde<T: Scalar>(config: &SimConfig<T>, params: &ModelParams<T>) -> Result<Trajectory<T>> {
    let sys = reduce_to_dde(params, config.tau)?;
    let n_delay = config.steps_per_delay()?;
    let steps = config.total_steps()?;
    let eq = equilibrium(params, config.tau)?;
    let dt = config.dt;
    let tau = config.tau;
    let scale = T::one() + config.epsilon;

    let (history, mut y) = match &config.seed {
        Seed::EquilibriumScaled => (
            History::Constant(tau * eq.xi * scale),
            [eq.s_bar * scale, eq.xi * scale, eq.xi * scale],
        ),
        Seed::Custom { profile, s0 } => (
            History::Profile {
                profile: profile.clone(),
                tau,
            },
            [*s0, profile.integral().re, profile.beta_integral(tau).re],
        ),
    };

    let mut ring = Ring::new(n_delay + 8);
    let b0 = sys.inflow(y[0], y[1], y[2]);
    ring.set(0, b0);
    let mut traj = Trajectory::with_capacity(tau, config.scheme, steps / config.stride + 2);
    traj.push(T::zero(), y[0], y[1], y[2], b0);

    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    for n in 0..steps {
        let t = T::from_count(n) * dt;
        let (d0, dh, d1) = if n < n_delay {
            let s = t - T::one();
            (history.at(s), history.at(s + half * dt), history.at(s + dt))
        } else {
            let k = n - n_delay;
            (ring.get(k), ring.midpoint(k), ring.get(k + 1))
        };
        let k1 = sys.rhs(y, d0);
        let k2 = sys.rhs(axpy(y, half * dt, k1), dh);
        let k3 = sys.rhs(axpy(y, half * dt, k2), dh);
        let k4 = sys.rhs(axpy(y, dt, k3), d1);
        for c in 0..3 {
            y[c] = y[c] + dt * sixth * (k1[c] + T::lit(2.0) * (k2[c] + k3[c]) + k4[c]);
        }
        let b = sys.inflow(y[0], y[1], y[2]);
        ring.set(n + 1, b);
        let t_next = T::from_count(n + 1) * dt;
        check_blowup(t_next, [("S", y[0]), ("P", y[1]), ("J", y[2]), ("b", b)])?;
        if (n + 1) % config.stride == 0 || n + 1 == steps {
            traj.push(t_next, y[0], y[1], y[2], b);
        }
    }
    traj.diagnostics = diagnostics(&traj).ok();
    Ok(traj)
}
