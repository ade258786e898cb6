// SPDX-License-Identifier: MIT OR Apache-2.0

//! Characteristic equation, imaginary-axis crossings and their checks.
//!
//! Linearizing the scaled model at the positive equilibrium gives the
//! characteristic determinant `det Δ(λ) = f̃(λ)/g̃(λ)` with
//!
//! ```text
//! f̃(λ) = λ² + τBλ + τ²C + τDλe^{−λ} + τ²Ee^{−λ},   g̃(λ) = (λ+τ)(λ+μτ).
//! ```
//!
//! In the variable `ζ = λ/τ` the numerator becomes `τ² g(ζ)` with
//! `g(ζ) = ζ² + Bζ + C + (Dζ + E)e^{−τζ}`. A purely imaginary root `iω`
//! requires `ω⁴ + (B²−2C−D²)ω² + C²−E² = 0`, which fixes the crossing
//! frequency `ω₀`; the delays at which the crossing happens form the
//! arithmetic family `τ_k = τ₀ + 2πk/ω₀`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, ReducedCoeffs};
use crate::scalar::{cx, real, Cx, Scalar};

/// Absolute residual at which Newton refinement stops.
pub const NEWTON_TOL: f64 = 1e-12;
/// Iteration cap for Newton refinement.
pub const NEWTON_MAX_ITER: usize = 50;
/// Default floor for `|g'(iω₀)|` below which a crossing is not simple.
pub const SIMPLICITY_FLOOR: f64 = 1e-8;

/// `g(ζ) = ζ² + Bζ + C + (Dζ + E)e^{−τζ}`.
pub fn char_g<T: Scalar>(zeta: Cx<T>, tau: T, c: &ReducedCoeffs<T>) -> Cx<T> {
    let e = (-zeta * tau).exp();
    zeta * zeta + zeta * c.b_coef + real(c.c_coef) + (zeta * c.d_coef + real(c.e_coef)) * e
}

/// `g′(ζ) = 2ζ + B + (D − τDζ − τE)e^{−τζ}`.
pub fn char_g_prime<T: Scalar>(zeta: Cx<T>, tau: T, c: &ReducedCoeffs<T>) -> Cx<T> {
    let e = (-zeta * tau).exp();
    let two = T::lit(2.0);
    zeta * two + real(c.b_coef) + (real(c.d_coef) - zeta * (tau * c.d_coef) - real(tau * c.e_coef)) * e
}

/// `∂g/∂τ = −ζ(Dζ + E)e^{−τζ}`.
pub fn char_g_dtau<T: Scalar>(zeta: Cx<T>, tau: T, c: &ReducedCoeffs<T>) -> Cx<T> {
    -zeta * (zeta * c.d_coef + real(c.e_coef)) * (-zeta * tau).exp()
}

/// Numerator `f̃(λ)` of the characteristic determinant.
pub fn f_tilde<T: Scalar>(lambda: Cx<T>, tau: T, c: &ReducedCoeffs<T>) -> Cx<T> {
    let e = (-lambda).exp();
    lambda * lambda
        + lambda * (tau * c.b_coef)
        + real(tau * tau * c.c_coef)
        + (lambda * (tau * c.d_coef) + real(tau * tau * c.e_coef)) * e
}

/// `∂f̃/∂λ = 2λ + τB + (τD − τDλ − τ²E)e^{−λ}`.
pub fn f_tilde_prime<T: Scalar>(lambda: Cx<T>, tau: T, c: &ReducedCoeffs<T>) -> Cx<T> {
    let e = (-lambda).exp();
    lambda * T::lit(2.0)
        + real(tau * c.b_coef)
        + (real(tau * c.d_coef) - lambda * (tau * c.d_coef) - real(tau * tau * c.e_coef)) * e
}

/// `∂f̃/∂τ` at fixed `λ`: `Bλ + 2τC + (Dλ + 2τE)e^{−λ}`.
pub fn f_tilde_dtau<T: Scalar>(lambda: Cx<T>, tau: T, c: &ReducedCoeffs<T>) -> Cx<T> {
    let two = T::lit(2.0);
    let e = (-lambda).exp();
    lambda * c.b_coef + real(two * tau * c.c_coef) + (lambda * c.d_coef + real(two * tau * c.e_coef)) * e
}

/// Denominator `g̃(λ) = (λ+τ)(λ+μτ)`.
pub fn g_tilde<T: Scalar>(lambda: Cx<T>, tau: T, mu: T) -> Cx<T> {
    (lambda + tau) * (lambda + mu * tau)
}

fn check_pole<T: Scalar>(lambda: Cx<T>, tau: T, mu: T) -> Result<()> {
    let tiny = T::epsilon() * tau.max(T::one());
    if (lambda + tau).norm() <= tiny || (lambda + mu * tau).norm() <= tiny {
        return Err(Error::Pole {
            re: lambda.re.as_f64(),
            im: lambda.im.as_f64(),
        });
    }
    Ok(())
}

/// `det Δ(λ) = f̃(λ)/g̃(λ)`.
pub fn det_delta<T: Scalar>(
    lambda: Cx<T>,
    tau: T,
    params: &ModelParams<T>,
    c: &ReducedCoeffs<T>,
) -> Result<Cx<T>> {
    check_pole(lambda, tau, params.mu)?;
    Ok(f_tilde(lambda, tau, c) / g_tilde(lambda, tau, params.mu))
}

/// `d det Δ/dλ = (f̃′g̃ − f̃g̃′)/g̃²`.
pub fn d_det_delta<T: Scalar>(
    lambda: Cx<T>,
    tau: T,
    params: &ModelParams<T>,
    c: &ReducedCoeffs<T>,
) -> Result<Cx<T>> {
    check_pole(lambda, tau, params.mu)?;
    let gt = g_tilde(lambda, tau, params.mu);
    let gtp = lambda * T::lit(2.0) + tau + params.mu * tau;
    let f = f_tilde(lambda, tau, c);
    let fp = f_tilde_prime(lambda, tau, c);
    Ok((fp * gt - f * gtp) / (gt * gt))
}

/// The 2×2 characteristic matrix `Δ(λ)` acting on boundary values
/// `(infected flux, susceptible flux)`.
pub fn delta_matrix<T: Scalar>(
    lambda: Cx<T>,
    tau: T,
    params: &ModelParams<T>,
    c: &ReducedCoeffs<T>,
) -> Result<[[Cx<T>; 2]; 2]> {
    check_pole(lambda, tau, params.mu)?;
    let one = real(T::one());
    let r = lambda + tau;
    let rm = lambda + params.mu * tau;
    let dt = c.d_coef * tau;
    let delayed = (-lambda).exp() * dt / r;
    Ok([
        [one - real(tau) / r + delayed, -real(dt) / rm],
        [-real(tau * (params.eta - T::one())) / r - delayed, one + real(dt) / rm],
    ])
}

/// Determinant of a 2×2 complex matrix.
pub fn det2<T: Scalar>(m: &[[Cx<T>; 2]; 2]) -> Cx<T> {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Solve `m x = rhs` for a 2×2 complex system by Cramer's rule.
pub fn solve2<T: Scalar>(m: &[[Cx<T>; 2]; 2], rhs: [Cx<T>; 2]) -> [Cx<T>; 2] {
    let det = det2(m);
    [
        (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ]
}

/// Closed-form crossing frequency `ω₀`.
///
/// `σ = ω²` solves `σ² + pσ + q = 0` with `p = B²−2C−D²`, `q = C²−E²`; the
/// larger root is returned (the only positive one under the standing
/// assumptions). The root is formed without cancellation when `p > 0`.
pub fn omega0<T: Scalar>(c: &ReducedCoeffs<T>) -> Result<T> {
    let (p, q) = quartic_pq(c);
    let disc = p * p - T::lit(4.0) * q;
    if disc < T::zero() {
        return Err(Error::NoCrossing {
            reason: format!("sigma-quadratic discriminant {} < 0", disc.as_f64()),
        });
    }
    let root = disc.sqrt();
    let sigma = if p > T::zero() {
        if root + p == T::zero() {
            T::zero()
        } else {
            -T::lit(2.0) * q / (p + root)
        }
    } else {
        (root - p) / T::lit(2.0)
    };
    if !(sigma > T::zero()) {
        return Err(Error::NoCrossing {
            reason: format!(
                "no positive sigma root (B^2-2C-D^2 = {}, C^2-E^2 = {})",
                p.as_f64(),
                q.as_f64()
            ),
        });
    }
    Ok(sigma.sqrt())
}

/// Coefficients `(p, q)` of the crossing quartic `ω⁴ + pω² + q`.
pub fn quartic_pq<T: Scalar>(c: &ReducedCoeffs<T>) -> (T, T) {
    let (b, cc, d, e) = (c.b_coef, c.c_coef, c.d_coef, c.e_coef);
    (b * b - T::lit(2.0) * cc - d * d, cc * cc - e * e)
}

/// Signed value of the crossing quartic at `ω`.
pub fn quartic<T: Scalar>(c: &ReducedCoeffs<T>, omega: T) -> T {
    let (p, q) = quartic_pq(c);
    let s = omega * omega;
    s * s + p * s + q
}

/// Which inverse-cosine branch produced `τ_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Arccos,
    TwoPiMinusArccos,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Arccos => "arccos",
            Branch::TwoPiMinusArccos => "two-pi-minus-arccos",
        }
    }
}

/// A crossing of the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopfPoint<T: Scalar = f64> {
    pub k: usize,
    /// Crossing frequency in the `ζ` variable.
    pub omega0: T,
    pub tau_k: T,
    pub branch: Branch,
    /// `true` when the branch selector was exactly zero (resolved to
    /// [`Branch::Arccos`]).
    pub branch_tie: bool,
    /// Closed-form transversality quotient, see [`transversality`].
    pub transversality: T,
    /// `|g(iω₀; τ_k)|`.
    pub residual: T,
}

impl<T: Scalar> HopfPoint<T> {
    /// Frequency on the `λ = τζ` scale, `ω_k = τ_k ω₀`.
    pub fn omega_k(&self) -> T {
        self.tau_k * self.omega0
    }

    /// Scaled oscillation period at onset, `2π/(τ_k ω₀)`.
    pub fn period(&self) -> T {
        T::lit(2.0) * T::PI() / self.omega_k()
    }
}

/// The branch selector `ω₀(Dω₀² + BE − CD)`.
pub fn branch_selector<T: Scalar>(c: &ReducedCoeffs<T>, omega0: T) -> T {
    omega0 * (c.d_coef * omega0 * omega0 + c.b_coef * c.e_coef - c.c_coef * c.d_coef)
}

/// The `k`-th critical delay for the crossing frequency `omega0`.
///
/// `τ_k = (θ + 2kπ)/ω₀` where `θ = arccos(((E−BD)ω₀² − CE)/(D²ω₀² + E²))`
/// when the branch selector is non-negative and `2π − arccos(…)` otherwise.
pub fn tau_k<T: Scalar>(c: &ReducedCoeffs<T>, omega0: T, k: usize) -> HopfPoint<T> {
    let (b, cc, d, e) = (c.b_coef, c.c_coef, c.d_coef, c.e_coef);
    let w2 = omega0 * omega0;
    let cos_arg = ((e - b * d) * w2 - cc * e) / (d * d * w2 + e * e);
    let base = cos_arg.max(-T::one()).min(T::one()).acos();
    let sel = branch_selector(c, omega0);
    let two_pi = T::lit(2.0) * T::PI();
    let (theta, branch) = if sel >= T::zero() {
        (base, Branch::Arccos)
    } else {
        (two_pi - base, Branch::TwoPiMinusArccos)
    };
    let tau = (theta + two_pi * T::from_count(k)) / omega0;
    HopfPoint {
        k,
        omega0,
        tau_k: tau,
        branch,
        branch_tie: sel == T::zero(),
        transversality: transversality(c, omega0),
        residual: char_g(cx(T::zero(), omega0), tau, c).norm(),
    }
}

/// Crossings `k = 0..=k_max`.
pub fn hopf_points<T: Scalar>(c: &ReducedCoeffs<T>, k_max: usize) -> Result<Vec<HopfPoint<T>>> {
    let w = omega0(c)?;
    Ok((0..=k_max).map(|k| tau_k(c, w, k)).collect())
}

/// The two real equations of `g(iω) = 0`:
///
/// ```text
/// ω² − C − Dω sin(ωτ) − E cos(ωτ) = 0
/// Bω + Dω cos(ωτ) − E sin(ωτ)     = 0
/// ```
///
/// Returns both left-hand sides.
pub fn crossing_equations<T: Scalar>(c: &ReducedCoeffs<T>, omega: T, tau: T) -> (T, T) {
    let (s, co) = (omega * tau).sin_cos();
    (
        omega * omega - c.c_coef - c.d_coef * omega * s - c.e_coef * co,
        c.b_coef * omega + c.d_coef * omega * co - c.e_coef * s,
    )
}

/// Closed-form transversality quotient `(2ω₀² + B² − 2C − D²)/(D²ω₀² + E²)`.
///
/// Its sign equals the sign of `d Re ζ/dτ` at every `τ_k`.
pub fn transversality<T: Scalar>(c: &ReducedCoeffs<T>, omega0: T) -> T {
    let (p, _) = quartic_pq(c);
    let w2 = omega0 * omega0;
    (T::lit(2.0) * w2 + p) / (c.d_coef * c.d_coef * w2 + c.e_coef * c.e_coef)
}

/// `|g′(iω₀)|` at `τ_k`; fails below `floor`.
pub fn simplicity_check<T: Scalar>(c: &ReducedCoeffs<T>, omega0: T, tau_k: T, floor: T) -> Result<T> {
    let d = char_g_prime(cx(T::zero(), omega0), tau_k, c).norm();
    if d < floor {
        return Err(Error::DegenerateRoot {
            derivative: d.as_f64(),
            floor: floor.as_f64(),
        });
    }
    Ok(d)
}

/// Outcome of a Newton refinement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NewtonReport<T: Scalar = f64> {
    pub root: Cx<T>,
    pub iterations: usize,
    /// `|g|` before each step and at the final iterate.
    pub residuals: Vec<T>,
}

impl<T: Scalar> NewtonReport<T> {
    pub fn residual(&self) -> T {
        *self.residuals.last().expect("at least one residual")
    }
}

/// Undamped Newton iteration on `g(·; τ)`.
pub fn refine_root<T: Scalar>(zeta0: Cx<T>, tau: T, c: &ReducedCoeffs<T>) -> Result<NewtonReport<T>> {
    let tol = T::tol(NEWTON_TOL);
    let mut z = zeta0;
    let mut residuals = Vec::new();
    for it in 0..=NEWTON_MAX_ITER {
        let g = char_g(z, tau, c);
        let r = g.norm();
        residuals.push(r);
        if r < tol {
            return Ok(NewtonReport {
                root: z,
                iterations: it,
                residuals,
            });
        }
        if it == NEWTON_MAX_ITER || !r.is_finite() {
            break;
        }
        let gp = char_g_prime(z, tau, c);
        if !(gp.norm() > T::epsilon() * T::epsilon()) {
            return Err(Error::DerivativeVanished {
                re: z.re.as_f64(),
                im: z.im.as_f64(),
                tau: tau.as_f64(),
            });
        }
        z = z - g / gp;
    }
    Err(Error::MaxIter {
        iterations: NEWTON_MAX_ITER,
        residual: residuals.last().copied().unwrap_or(T::nan()).as_f64(),
        tau: tau.as_f64(),
    })
}

/// Analytic root velocity `dζ/dτ = −(∂g/∂τ)/(∂g/∂ζ)` at a root `ζ`.
pub fn root_velocity<T: Scalar>(zeta: Cx<T>, tau: T, c: &ReducedCoeffs<T>) -> Cx<T> {
    -char_g_dtau(zeta, tau, c) / char_g_prime(zeta, tau, c)
}

/// Central finite difference of `Re ζ(τ)` at a Hopf point, obtained by
/// Newton refinement of the crossing root at `τ_k ± δ`.
pub fn fd_transversality<T: Scalar>(c: &ReducedCoeffs<T>, point: &HopfPoint<T>, delta: T) -> Result<T> {
    let seed = cx(T::zero(), point.omega0);
    let up = refine_root(seed, point.tau_k + delta, c)?.root;
    let down = refine_root(seed, point.tau_k - delta, c)?.root;
    Ok((up.re - down.re) / (T::lit(2.0) * delta))
}

/// Brute-force oracle for the crossing frequencies.
///
/// Samples `|ω⁴ + pω² + q|` on `n` equal subintervals of `(0, omega_max]`,
/// keeps the grid-local minimizers, and refines each by bisection on the
/// signed quartic whenever it changes sign across the minimizer's
/// neighbours. Tangential zeros (no sign change) are accepted only when the
/// sampled residual is at rounding level.
pub fn scan_crossings<T: Scalar>(c: &ReducedCoeffs<T>, omega_max: T, n: usize) -> Vec<T> {
    assert!(n >= 1000, "scan requires at least 1000 grid intervals");
    let h = omega_max / T::from_count(n);
    let w = |j: usize| h * T::from_count(j);
    let f = |x: T| quartic(c, x);
    let (p, q) = quartic_pq(c);
    let scale = T::one() + p.abs() + q.abs() + omega_max.powi(4);
    let mut found: Vec<T> = Vec::new();
    for j in 1..n {
        let (fl, fm, fr) = (f(w(j - 1)).abs(), f(w(j)).abs(), f(w(j + 1)).abs());
        if !(fm <= fl && fm < fr) {
            continue;
        }
        let (mut a, mut b) = (w(j - 1), w(j + 1));
        let (fa, fb) = (f(a), f(b));
        let candidate = if fa == T::zero() {
            Some(a)
        } else if fb == T::zero() {
            Some(b)
        } else if (fa < T::zero()) != (fb < T::zero()) {
            // Two sign changes can share one bracket only when roots are
            // closer than a grid step; split at the midpoint first.
            let mid = w(j);
            let fmid = f(mid);
            if fmid == T::zero() {
                Some(mid)
            } else {
                if (fa < T::zero()) != (fmid < T::zero()) {
                    b = mid;
                } else {
                    a = mid;
                }
                let mut fa = f(a);
                for _ in 0..200 {
                    let m = (a + b) / T::lit(2.0);
                    if m <= a || m >= b {
                        break;
                    }
                    let fm = f(m);
                    if fm == T::zero() {
                        a = m;
                        b = m;
                        break;
                    }
                    if (fa < T::zero()) != (fm < T::zero()) {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                Some((a + b) / T::lit(2.0))
            }
        } else if fm <= T::epsilon() * T::lit(16.0) * scale {
            Some(w(j))
        } else {
            None
        };
        if let Some(x) = candidate {
            if x > T::zero() && found.last().map_or(true, |&y| (x - y).abs() > h) {
                found.push(x);
            }
        }
    }
    found
}

/// Continue the crossing root `ζ(τ)` from `tau_from` to `tau_to` in `steps`
/// equal increments using a secant predictor and Newton corrector.
///
/// The path starts from the root near `iω₀` refined at `tau_from`.
pub fn trace_leading_root<T: Scalar>(
    c: &ReducedCoeffs<T>,
    tau_from: T,
    tau_to: T,
    steps: usize,
) -> Result<Vec<(T, Cx<T>)>> {
    if !(tau_from > T::zero()) || steps < 2 {
        return Err(Error::Config(
            "trace_leading_root needs tau_from > 0 and at least 2 steps".into(),
        ));
    }
    let w0 = omega0(c)?;
    let h = (tau_to - tau_from) / T::from_count(steps);
    let mut path: Vec<(T, Cx<T>)> = Vec::with_capacity(steps + 1);
    let first = refine_root(cx(T::zero(), w0), tau_from, c)?.root;
    path.push((tau_from, first));
    for j in 1..=steps {
        let tau = tau_from + h * T::from_count(j);
        let seed = match path.len() {
            1 => {
                let (t0, z0) = path[0];
                z0 + root_velocity(z0, t0, c) * (tau - t0)
            }
            n => {
                let (_, z1) = path[n - 1];
                let (_, z0) = path[n - 2];
                z1 * T::lit(2.0) - z0
            }
        };
        let z = refine_root(seed, tau, c)?.root;
        path.push((tau, z));
    }
    Ok(path)
}
