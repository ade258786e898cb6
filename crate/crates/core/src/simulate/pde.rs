// SPDX-License-Identifier: MIT OR Apache-2.0

//! Method of characteristics on a uniform age grid with `da = dt`.
//!
//! The solver stores the characteristic value `u(t, a) = i(t, a) e^{τa}`,
//! which is constant along characteristics, so one time step is an exact
//! shift of the grid by one node. Every stored number stays of the order of
//! the boundary flux, and the integrals use precomputed weights:
//!
//! ```text
//! P = ∫₀^{a_max} u e^{−τa} da,     J = ∫₁^{a_max} u e^{−τ(a−1)} da,
//! ```
//!
//! both by the composite trapezoid rule. The boundary node enters `P` with
//! weight `da/2`, so the incidence condition is solved for it in closed form.
//! A seed that violates the boundary condition leaves a jump travelling
//! along `a = t`; the node on it holds the average of the two sides.
//! `S` is advanced by RK4 with `P`, `J` interpolated linearly over the step.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{equilibrium, ModelParams};
use crate::scalar::Scalar;

use super::{check_blowup, diagnostics, Boundary, Seed, SimConfig, Trajectory};

/// Relative tail mass beyond `a_max` that triggers a truncation warning.
pub const TRUNCATION_TOL: f64 = 1e-14;

/// Recorded age profiles `i(t, a)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgeSurface<T: Scalar = f64> {
    pub times: Vec<T>,
    pub ages: Vec<T>,
    /// `values[m][k] = i(times[m], ages[k])`.
    pub values: Vec<Vec<T>>,
}

/// Smallest admissible truncation age, `1 + 40/τ`.
pub fn min_a_max<T: Scalar>(tau: T) -> T {
    T::one() + T::lit(40.0) / tau
}

struct Grid<T: Scalar> {
    da: T,
    /// Node index of `a = 1`.
    switch: usize,
    /// Trapezoid weights of `P` and `J` including `da`.
    wp: Vec<T>,
    wj: Vec<T>,
}

impl<T: Scalar> Grid<T> {
    fn new(config: &SimConfig<T>, n_delay: usize) -> Result<Self> {
        let tau = config.tau;
        let da = config.dt;
        let floor = min_a_max(tau);
        let a_max = config.a_max.unwrap_or(floor);
        if a_max < floor * (T::one() - T::tol(1e-12)) {
            return Err(Error::Config(format!(
                "a_max = {a_max} is below 1 + 40/tau = {floor}"
            )));
        }
        let nodes = (a_max / da).ceil().to_usize().unwrap_or(0) + 1;
        let half = T::lit(0.5);
        let mut wp = Vec::with_capacity(nodes);
        let mut wj = Vec::with_capacity(nodes);
        for k in 0..nodes {
            let a = T::from_count(k) * da;
            let end = if k == 0 || k + 1 == nodes { half } else { T::one() };
            wp.push(end * da * (-tau * a).exp());
            let wj_k = match k.cmp(&n_delay) {
                std::cmp::Ordering::Less => T::zero(),
                std::cmp::Ordering::Equal => half * da,
                std::cmp::Ordering::Greater => end * da * (-tau * (a - T::one())).exp(),
            };
            wj.push(wj_k);
        }
        Ok(Self {
            da,
            switch: n_delay,
            wp,
            wj,
        })
    }

    fn nodes(&self) -> usize {
        self.wp.len()
    }

    /// `(P without the boundary node, J)`.
    fn integrals(&self, u: &[T]) -> (T, T) {
        let dot = |w: &[T], u: &[T]| w.iter().zip(u).fold(T::zero(), |acc, (&w, &u)| acc + w * u);
        (dot(&self.wp[1..], &u[1..]), dot(&self.wj[self.switch..], &u[self.switch..]))
    }
}

/// Integrate along characteristics.
pub fn integrate_pde<T: Scalar>(config: &SimConfig<T>, params: &ModelParams<T>) -> Result<Trajectory<T>> {
    let n_delay = config.steps_per_delay()?;
    let steps = config.total_steps()?;
    let eq = equilibrium(params, config.tau)?;
    let grid = Grid::new(config, n_delay)?;
    let tau = config.tau;
    let dt = config.dt;
    let ModelParams { lambda, mu, eta } = *params;
    let scale = T::one() + config.epsilon;
    let half = T::lit(0.5);

    let mut u: Vec<T> = match &config.seed {
        Seed::EquilibriumScaled => vec![tau * eq.xi * scale; grid.nodes()],
        Seed::Custom { profile, .. } => (0..grid.nodes())
            .map(|k| {
                let a = T::from_count(k) * grid.da;
                profile.eval(a).re * (tau * a).exp()
            })
            .collect(),
    };
    let mut s = match &config.seed {
        Seed::EquilibriumScaled => eq.s_bar * scale,
        Seed::Custom { s0, .. } => *s0,
    };

    let (p_rest, mut j) = grid.integrals(&u);
    let mut p = p_rest + grid.wp[0] * u[0];
    let b0 = match config.boundary {
        Boundary::Frozen(v) => v,
        Boundary::Coupled => tau * s * p / (T::one() + j),
    };
    let mut traj = Trajectory::with_capacity(tau, config.scheme, steps / config.stride + 2);
    traj.push(T::zero(), s, p, j, b0);

    let ages: Vec<usize> = (0..grid.nodes()).step_by(config.snapshot_age_stride.max(1)).collect();
    let mut surface = config.snapshot_every.map(|_| AgeSurface {
        times: Vec::new(),
        ages: ages.iter().map(|&k| T::from_count(k) * grid.da).collect(),
        values: Vec::new(),
    });
    let snapshot = |surface: &mut Option<AgeSurface<T>>, t: T, u: &[T]| {
        if let Some(sf) = surface.as_mut() {
            sf.times.push(t);
            sf.values.push(
                ages.iter()
                    .map(|&k| u[k] * (-tau * T::from_count(k) * grid.da).exp())
                    .collect(),
            );
        }
    };
    snapshot(&mut surface, T::zero(), &u);
    // The seed need not satisfy the boundary condition, so the profile can
    // jump across the characteristic a = t. That node carries the mean of
    // both one-sided values, which keeps the trapezoid rule second order.
    u[0] = half * (u[0] + b0);

    let rhs = |s: T, p: T, j: T| tau * (lambda - mu * s - s * p / (T::one() + j) + eta * p);
    let sixth = T::one() / T::lit(6.0);
    let mut truncated = false;
    let tail_rate = T::one() / tau;

    for n in 0..steps {
        let t_next = T::from_count(n + 1) * dt;
        // Discarded tail: the last node leaves the grid.
        let last = u[u.len() - 1];
        let tail = last * grid.wp[grid.nodes() - 1] / (half * grid.da) * tail_rate;
        if !truncated && tail.abs() > T::lit(TRUNCATION_TOL) * p.abs() {
            truncated = true;
            traj.warnings.push(format!(
                "age truncation: mass beyond a_max is {} of P at t = {}",
                (tail / p).as_f64(),
                t_next.as_f64()
            ));
        }
        u.rotate_right(1);
        let (p_rest, j_next) = grid.integrals(&u);

        let (s_next, b) = match config.boundary {
            Boundary::Frozen(v) => (s, v),
            Boundary::Coupled => {
                let boundary = |s: T| tau * s * p_rest / (T::one() + j_next - tau * s * grid.wp[0]);
                let mut s_guess = s;
                for _ in 0..2 {
                    let p_next = p_rest + grid.wp[0] * boundary(s_guess);
                    let pi = |c: T| (p + c * (p_next - p), j + c * (j_next - j));
                    let (pm, jm) = pi(half);
                    let k1 = rhs(s, p, j);
                    let k2 = rhs(s + half * dt * k1, pm, jm);
                    let k3 = rhs(s + half * dt * k2, pm, jm);
                    let k4 = rhs(s + dt * k3, p_next, j_next);
                    s_guess = s + dt * sixth * (k1 + T::lit(2.0) * (k2 + k3) + k4);
                }
                (s_guess, boundary(s_guess))
            }
        };
        u[0] = b;
        s = s_next;
        p = p_rest + grid.wp[0] * b;
        j = j_next;
        check_blowup(t_next, [("S", s), ("P", p), ("J", j), ("b", b)])?;
        if (n + 1) % config.stride == 0 || n + 1 == steps {
            traj.push(t_next, s, p, j, b);
        }
        if let Some(every) = config.snapshot_every {
            if every > 0 && (n + 1) % every == 0 {
                snapshot(&mut surface, t_next, &u);
            }
        }
    }
    traj.surface = surface;
    traj.diagnostics = diagnostics(&traj).ok();
    Ok(traj)
}
