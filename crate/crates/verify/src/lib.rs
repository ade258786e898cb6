// SPDX-License-Identifier: MIT OR Apache-2.0

//! Acceptance criteria for the Figure-1 parameter set `Λ = 0.6`, `μ = 0.2`,
//! `η = 0.81`.
//!
//! Each criterion is a function returning an [`Outcome`] with the measured
//! quantity in its detail line. Tolerances and runtime budgets are the
//! constants next to each function. The `acceptance` test target runs them
//! all and prints one line per criterion.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use agehopf::model::assumption_report;
use agehopf::normalform::audit::conjugation_audit;
use agehopf::normalform::{analyze, hopf_context, NormalFormOptions};
use agehopf::simulate::{linear_regression, onset_bracket, run, sweep_amplitude, SimConfig, Verdict};
use agehopf::spectral::{char_g, crossing_equations, fd_transversality, omega0, scan_crossings};
use agehopf::{equilibrium, hopf_points, reduced_coeffs, HopfPoint64, ModelParams64, ReducedCoeffs64, Result};

/// Result of one criterion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// One acceptance criterion with its runtime budget.
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub budget: Duration,
    pub check: fn() -> Result<Outcome>,
}

/// Outcome of running a criterion, budget included.
#[derive(Debug, Clone)]
pub struct Report {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub elapsed: Duration,
    pub detail: String,
}

impl Criterion {
    pub fn run(&self) -> Report {
        let start = Instant::now();
        let outcome = (self.check)().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let elapsed = start.elapsed();
        let in_budget = elapsed <= self.budget;
        let detail = if in_budget {
            outcome.detail
        } else {
            format!("{}; over budget {:.1?} > {:.0?}", outcome.detail, elapsed, self.budget)
        };
        Report {
            id: self.id,
            name: self.name,
            pass: outcome.pass && in_budget,
            elapsed,
            detail,
        }
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} criterion {:>2} {:<28} [{:>8.2?}] {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed,
            self.detail
        )
    }
}

pub fn params() -> ModelParams64 {
    ModelParams64::new(0.6, 0.2, 0.81)
}

fn coeffs() -> ReducedCoeffs64 {
    reduced_coeffs(&params()).expect("Figure-1 parameters are admissible")
}

fn first_point() -> Result<HopfPoint64> {
    Ok(hopf_points(&coeffs(), 0)?[0])
}

/// Printed first critical delay.
pub const TAU0_PRINTED: f64 = 23.2282;
pub const TAU0_TOL: f64 = 1e-3;

fn hopf_threshold() -> Result<Outcome> {
    let tau0 = first_point()?.tau_k;
    let err = (tau0 - TAU0_PRINTED).abs();
    Ok(Outcome::new(err <= TAU0_TOL, format!("tau0 = {tau0:.10}, |tau0 - 23.2282| = {err:.2e}")))
}

/// The caption's four printed combinations, compared after rounding to
/// four decimals.
pub const CAPTION: [(&str, f64); 4] = [("E-C", 0.0051), ("BD-2E", 0.1551), ("B^2-2C", 0.3065), ("BCD-E(B^2-2C)", 0.0034)];

fn caption_coefficients() -> Result<Outcome> {
    let c = coeffs();
    let (b, cc, d, e) = (c.b_coef, c.c_coef, c.d_coef, c.e_coef);
    let values = [e - cc, b * d - 2.0 * e, b * b - 2.0 * cc, b * cc * d - e * (b * b - 2.0 * cc)];
    let mut pass = true;
    let mut parts = Vec::new();
    for ((name, printed), v) in CAPTION.iter().zip(values) {
        let rounded = (v * 1e4).round() / 1e4;
        pass &= (rounded - printed).abs() < 1e-12;
        parts.push(format!("{name} = {v:.6}"));
    }
    Ok(Outcome::new(pass, parts.join(", ")))
}

pub const G_RESIDUAL_TOL: f64 = 1e-10;
pub const EQUATION_TOL: f64 = 1e-9;
pub const K_MAX: usize = 5;

fn crossing_residual() -> Result<Outcome> {
    let c = coeffs();
    let (mut worst_g, mut worst_eq): (f64, f64) = (0.0, 0.0);
    for pt in hopf_points(&c, K_MAX)? {
        worst_g = worst_g.max(char_g(Complex64::new(0.0, pt.omega0), pt.tau_k, &c).norm());
        let (re, im) = crossing_equations(&c, pt.omega0, pt.tau_k);
        worst_eq = worst_eq.max(re.abs()).max(im.abs());
    }
    Ok(Outcome::new(
        worst_g < G_RESIDUAL_TOL && worst_eq < EQUATION_TOL,
        format!("k = 0..5: max |g| = {worst_g:.2e}, max equation residual = {worst_eq:.2e}"),
    ))
}

pub const FD_DELTA: f64 = 1e-4;

fn transversality() -> Result<Outcome> {
    let c = coeffs();
    let mut pass = true;
    let mut min_fd = f64::INFINITY;
    let mut closed = 0.0;
    for pt in hopf_points(&c, K_MAX)? {
        let fd = fd_transversality(&c, &pt, FD_DELTA)?;
        pass &= pt.transversality > 0.0 && fd.signum() == pt.transversality.signum();
        min_fd = min_fd.min(fd);
        closed = pt.transversality;
    }
    Ok(Outcome::new(
        pass,
        format!("closed form {closed:.6}, min finite-difference dRe/dtau over k = 0..5 = {min_fd:.3e}"),
    ))
}

pub const ORACLE_SETS: usize = 100;
pub const ORACLE_TOL: f64 = 1e-6;
pub const ORACLE_SEED: u64 = 20_240_605;

/// Random parameter sets that satisfy all five assumptions.
pub fn admissible_sets(n: usize, seed: u64) -> Vec<ModelParams64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mu = rng.gen_range(0.02..0.6);
        let lo = (1.0 - mu + 0.005f64).min(0.98);
        let eta = lo + rng.gen::<f64>() * (0.99 - lo);
        let lambda = mu + 0.02 + rng.gen::<f64>() * (3.0 - mu - 0.02);
        let p = ModelParams64::new(lambda, mu, eta);
        if reduced_coeffs(&p).map(|c| assumption_report(&c).pass).unwrap_or(false) {
            out.push(p);
        }
    }
    out
}

fn oracle_equivalence() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut miscounts = 0;
    for p in admissible_sets(ORACLE_SETS, ORACLE_SEED) {
        let c = reduced_coeffs(&p)?;
        let w = omega0(&c)?;
        match scan_crossings(&c, 4.0 * w.max(0.25), 200_000).as_slice() {
            [only] => worst = worst.max((only - w).abs()),
            _ => miscounts += 1,
        }
    }
    Ok(Outcome::new(
        miscounts == 0 && worst < ORACLE_TOL,
        format!("{ORACLE_SETS} sets, max |scan - closed form| = {worst:.2e}, root-count mismatches = {miscounts}"),
    ))
}

pub const PRE_CRITICAL_TOL: f64 = 1e-3;

fn pre_critical() -> Result<Outcome> {
    let p = params();
    let tr = run(&SimConfig::dde(20.0, 1e-3, 200.0).with_stride(10), &p)?;
    let eq = equilibrium(&p, 20.0)?;
    let dev = tr.terminal_deviation(eq.s_bar, eq.xi);
    let verdict = tr.diagnostics.as_ref().map(|d| d.verdict.label()).unwrap_or("none");
    Ok(Outcome::new(
        dev < PRE_CRITICAL_TOL,
        format!("tau = 20, t_end = 200: terminal deviation {dev:.3e} (verdict {verdict})"),
    ))
}

pub const RATIO_BAND: (f64, f64) = (0.99, 1.01);
pub const PERIOD_TOL: f64 = 0.05;

fn post_critical() -> Result<Outcome> {
    let p = params();
    let tau = 24.0;
    let tr = run(&SimConfig::dde(tau, 1e-3, 4000.0).with_stride(10), &p)?;
    let Some(d) = tr.diagnostics else {
        return Ok(Outcome::new(false, "no oscillation detected"));
    };
    let predicted = 2.0 * std::f64::consts::PI / (tau * first_point()?.omega0);
    let rel = (d.period - predicted).abs() / predicted;
    Ok(Outcome::new(
        d.verdict == Verdict::Sustained && d.ratio >= RATIO_BAND.0 && d.ratio <= RATIO_BAND.1 && rel <= PERIOD_TOL,
        format!(
            "tau = 24: verdict {}, ratio {:.5}, period {:.5} vs 2pi/(tau omega0) = {predicted:.5} ({:.2}%)",
            d.verdict.label(),
            d.ratio,
            d.period,
            100.0 * rel
        ),
    ))
}

pub const SWEEP: (f64, f64, usize) = (22.0, 26.0, 17);
pub const ONSET_WINDOW: (f64, f64) = (23.0, 23.5);
/// Onset threshold on the trailing amplitude, relative to `S̄`.
pub const ONSET_THRESHOLD: f64 = 1e-6;

fn onset_bracketing() -> Result<Outcome> {
    let p = params();
    let tau0 = first_point()?.tau_k;
    let template = SimConfig::dde(SWEEP.0, 5e-3, 4e4).with_stride(10);
    let points = sweep_amplitude(&p, SWEEP.0, SWEEP.1, SWEEP.2, &template)?;
    let s_bar = 1.0 + p.xi();
    let Some((lo, hi)) = onset_bracket(&points, ONSET_THRESHOLD * s_bar) else {
        return Ok(Outcome::new(false, "amplitude never crosses the threshold"));
    };
    Ok(Outcome::new(
        lo >= ONSET_WINDOW.0 && hi <= ONSET_WINDOW.1 && lo < tau0 && tau0 <= hi,
        format!("onset bracket ({lo}, {hi}) around tau0 = {tau0:.4}"),
    ))
}

pub const SCHEME_TOL: f64 = 1e-3;

fn scheme_cross_validation() -> Result<Outcome> {
    let p = params();
    let (dde, pde) = rayon::join(
        || run(&SimConfig::dde(24.0, 1e-3, 100.0), &p),
        || run(&SimConfig::pde(24.0, 1e-3, 100.0), &p),
    );
    let (dde, pde) = (dde?, pde?);
    let scale = dde.p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gap = dde.p.iter().zip(&pde.p).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale;
    Ok(Outcome::new(
        gap < SCHEME_TOL && !pde.warnings.iter().any(|w| w.contains("trunc")),
        format!("tau = 24, dt = 1e-3, t <= 100: sup |P_pde - P_dde| / sup |P| = {gap:.3e}"),
    ))
}

/// Offsets `τ − τ₀` of the amplitude-law runs.
pub const AMPLITUDE_OFFSETS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
pub const R_SQUARED_MIN: f64 = 0.95;
pub const SLOPE_TOL: f64 = 0.2;

fn normal_form_consistency() -> Result<Outcome> {
    let p = params();
    let pt = first_point()?;
    let nf = analyze(&p, &pt, NormalFormOptions::default())?;
    // Peak-to-trough height of S is 4|S_q|ρ to leading order.
    let s_factor = hopf_context(&p, &pt)?.s_amplitude_factor();
    let runs: Vec<Result<(f64, f64, Option<Verdict>)>> = AMPLITUDE_OFFSETS
        .par_iter()
        .map(|&dt| {
            let tr = run(&SimConfig::dde(pt.tau_k + dt, 5e-3, 6e4).with_stride(10), &p)?;
            Ok(match tr.diagnostics {
                Some(d) => (dt, (d.amplitude / (4.0 * s_factor)).powi(2), Some(d.verdict)),
                None => (dt, 0.0, None),
            })
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let saturates = runs.iter().all(|r| r.2 == Some(Verdict::Sustained));
    let x: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let y: Vec<f64> = runs.iter().map(|r| r.1).collect();
    let fit = linear_regression(&x, &y)?;
    let slope_err = (fit.slope - nf.radius_slope).abs() / nf.radius_slope.abs();
    let pass = nf.iota1 > 0.0
        && ((nf.iota2 < 0.0) == saturates)
        && fit.r_squared > R_SQUARED_MIN
        && slope_err <= SLOPE_TOL;
    Ok(Outcome::new(
        pass,
        format!(
            "iota1 = {:.4e}, iota2 = {:.4e}, saturation {saturates}, rho^2 slope {:.4} vs -iota1/iota2 = {:.4} ({:.1}%), R^2 = {:.5}",
            nf.iota1,
            nf.iota2,
            fit.slope,
            nf.radius_slope,
            100.0 * slope_err,
            fit.r_squared
        ),
    ))
}

fn conjugation() -> Result<Outcome> {
    let p = params();
    let mut total = 0;
    let mut failed = Vec::new();
    for pt in hopf_points(&coeffs(), 2)? {
        let audit = conjugation_audit(&p, &pt, NormalFormOptions::default())?;
        total += audit.checks.len();
        failed.extend(audit.failures().map(|c| format!("k={} {}", pt.k, c.name)));
    }
    Ok(Outcome::new(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{total} paired checks at k = 0..2 within 1e-10")
        } else {
            format!("failed: {}", failed.join(", "))
        },
    ))
}

pub const STATIONARY_TOL: f64 = 1e-8;

fn stationarity() -> Result<Outcome> {
    let p = params();
    let mut worst: f64 = 0.0;
    for tau in [20.0, 24.0] {
        let tr = run(&SimConfig::dde(tau, 1e-3, 500.0).with_epsilon(0.0).with_stride(10), &p)?;
        let eq = equilibrium(&p, tau)?;
        worst = worst.max(tr.max_deviation(eq.s_bar, eq.xi));
    }
    Ok(Outcome::new(
        worst < STATIONARY_TOL,
        format!("eps = 0, tau in {{20, 24}}, t_end = 500: max deviation {worst:.2e}"),
    ))
}

/// Every criterion in order.
pub fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion { id: 1, name: "Hopf threshold", budget: secs(1), check: hopf_threshold },
        Criterion { id: 2, name: "caption coefficients", budget: secs(1), check: caption_coefficients },
        Criterion { id: 3, name: "crossing residual", budget: secs(1), check: crossing_residual },
        Criterion { id: 4, name: "transversality", budget: secs(5), check: transversality },
        Criterion { id: 5, name: "oracle equivalence", budget: secs(30), check: oracle_equivalence },
        Criterion { id: 6, name: "pre-critical dynamics", budget: secs(10), check: pre_critical },
        Criterion { id: 7, name: "post-critical dynamics", budget: secs(30), check: post_critical },
        Criterion { id: 8, name: "onset bracketing", budget: secs(300), check: onset_bracketing },
        Criterion { id: 9, name: "scheme cross-validation", budget: secs(300), check: scheme_cross_validation },
        Criterion { id: 10, name: "normal-form consistency", budget: secs(600), check: normal_form_consistency },
        Criterion { id: 11, name: "conjugation audit", budget: secs(1), check: conjugation },
        Criterion { id: 12, name: "equilibrium stationarity", budget: secs(10), check: stationarity },
    ]
}
