// SPDX-License-Identifier: MIT OR Apache-2.0

//! Oracle suites behind `agehopf validate`.
//!
//! Each suite prints one `PASS`/`FAIL` line with its worst measured
//! quantity. The spectral suite samples parameter sets from a Weyl sequence
//! so the run is deterministic without a random seed.

use anyhow::Result;
use num_complex::Complex64;

use agehopf::model::assumption_report;
use agehopf::normalform::audit::{conjugation_audit, perturbed_audit, ConjugationAudit};
use agehopf::simulate::{run, SimConfig};
use agehopf::spectral::{crossing_equations, fd_transversality, omega0, scan_crossings};
use agehopf::{hopf_points, reduced_coeffs, ModelParams64, NormalFormOptions};

use crate::args::{Suite, ValidateArgs};
use crate::commands::reverify_document;
use crate::config;
use crate::exit::{Exit, FAILURE};

const SPECTRAL_SETS: usize = 100;
const SPECTRAL_TOL: f64 = 1e-6;
const RESIDUAL_TOL: f64 = 1e-10;
const FD_DELTA: f64 = 1e-4;
const SCHEMES_TOL: f64 = 1e-3;

struct Outcome {
    pass: bool,
    detail: String,
}

/// Admissible parameter sets on the additive recurrence with the inverse
/// powers of the plastic number as increments.
fn weyl_sets(n: usize) -> Vec<ModelParams64> {
    const ALPHA: [f64; 3] = [0.819_172_513_396_164_4, 0.671_043_606_703_789_2, 0.549_700_477_901_970_1];
    let mut out = Vec::with_capacity(n);
    let mut x = [0.5f64; 3];
    while out.len() < n {
        for (xi, a) in x.iter_mut().zip(ALPHA) {
            *xi = (*xi + a).fract();
        }
        let mu = 0.02 + x[0] * 0.58;
        let lo = (1.0 - mu + 0.005).min(0.98);
        let eta = lo + x[1] * (0.99 - lo);
        let lambda = mu + 0.02 + x[2] * (3.0 - mu - 0.02);
        let p = ModelParams64::new(lambda, mu, eta);
        if reduced_coeffs(&p).map(|c| assumption_report(&c).pass).unwrap_or(false) {
            out.push(p);
        }
    }
    out
}

fn spectral(params: &ModelParams64) -> Result<Outcome> {
    let mut worst_freq: f64 = 0.0;
    let mut bad = Vec::new();
    for p in weyl_sets(SPECTRAL_SETS) {
        let c = reduced_coeffs(&p)?;
        let w = omega0(&c)?;
        let found = scan_crossings(&c, 4.0 * w.max(0.25), 20_000);
        match found.as_slice() {
            [only] => worst_freq = worst_freq.max((only - w).abs()),
            _ => bad.push(format!("{} scan roots at {p:?}", found.len())),
        }
    }
    let c = reduced_coeffs(params)?;
    let mut worst_residual: f64 = 0.0;
    for pt in hopf_points(&c, 5)? {
        let (re, im) = crossing_equations(&c, pt.omega0, pt.tau_k);
        worst_residual = worst_residual.max(re.hypot(im));
    }
    Ok(Outcome {
        pass: bad.is_empty() && worst_freq < SPECTRAL_TOL && worst_residual < RESIDUAL_TOL,
        detail: format!(
            "{SPECTRAL_SETS} sets, max |omega_scan - omega_0| = {worst_freq:.3e}, max crossing residual (k <= 5) = {worst_residual:.3e}{}",
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
        ),
    })
}

fn transversality(params: &ModelParams64) -> Result<Outcome> {
    let c = reduced_coeffs(params)?;
    let mut pass = true;
    let mut lines = Vec::new();
    for pt in hopf_points(&c, 2)? {
        let fd = fd_transversality(&c, &pt, FD_DELTA)?;
        pass &= pt.transversality > 0.0 && fd > 0.0;
        lines.push(format!("k={} closed {:.6e} fd {:.6e}", pt.k, pt.transversality, fd));
    }
    Ok(Outcome {
        pass,
        detail: lines.join(", "),
    })
}

fn schemes(params: &ModelParams64) -> Result<Outcome> {
    let dde = run(&SimConfig::dde(24.0, 1e-3, 10.0), params)?;
    let pde = run(&SimConfig::pde(24.0, 1e-3, 10.0), params)?;
    let scale = dde.p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gap = dde.p.iter().zip(&pde.p).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale;
    Ok(Outcome {
        pass: gap < SCHEMES_TOL,
        detail: format!("tau = 24, dt = 1e-3, t <= 10: max relative |P_pde - P_dde| = {gap:.3e}"),
    })
}

fn audit_outcome(label: String, audit: &ConjugationAudit<f64>) -> (bool, String) {
    let worst = audit
        .checks
        .iter()
        .filter(|c| c.allowed > 0.0)
        .map(|c| c.distance / c.allowed)
        .fold(0.0, f64::max);
    let failed: Vec<&str> = audit.failures().map(|c| c.name.as_str()).collect();
    let detail = if failed.is_empty() {
        format!("{label}: {} checks, worst distance/allowed {worst:.3e}", audit.checks.len())
    } else {
        let shown = failed.iter().take(4).copied().collect::<Vec<_>>().join(", ");
        format!("{label}: {} of {} checks failed ({shown}, ...)", failed.len(), audit.checks.len())
    };
    (audit.pass, detail)
}

fn audit(params: &ModelParams64, inject: Option<f64>) -> Result<Outcome> {
    let c = reduced_coeffs(params)?;
    let opts = NormalFormOptions::default();
    let mut pass = true;
    let mut lines = Vec::new();
    for pt in hopf_points(&c, 2)? {
        let report = match inject {
            Some(d) => perturbed_audit(params, &pt, opts, Complex64::new(d, 0.0))?,
            None => conjugation_audit(params, &pt, opts)?,
        };
        let (ok, line) = audit_outcome(format!("k={}", pt.k), &report);
        pass &= ok;
        lines.push(line);
    }
    Ok(Outcome {
        pass,
        detail: lines.join("; "),
    })
}

pub fn validate(args: &ValidateArgs) -> Result<()> {
    if let Some(path) = &args.audit_file {
        let text = std::fs::read_to_string(path)?;
        let ok = reverify_document(&text)?;
        println!("{} audit-file {}", if ok { "PASS" } else { "FAIL" }, path.display());
        return if ok {
            Ok(())
        } else {
            Err(Exit::new(FAILURE, "stored audit record failed re-verification").into())
        };
    }
    let (params, _) = config::model(&args.model)?;
    let c = reduced_coeffs(&params)?;
    if !assumption_report(&c).pass {
        return Err(Exit::assumptions(&assumption_report(&c)).into());
    }
    let suites = if args.suite.is_empty() {
        vec![Suite::Spectral, Suite::Transversality, Suite::Schemes, Suite::Audit]
    } else {
        args.suite.clone()
    };
    let mut all = true;
    for suite in suites {
        let (name, outcome) = match suite {
            Suite::Spectral => ("spectral", spectral(&params)?),
            Suite::Transversality => ("transversality", transversality(&params)?),
            Suite::Schemes => ("schemes", schemes(&params)?),
            Suite::Audit => ("audit", audit(&params, args.inject_perturbation)?),
        };
        println!("{} {name}: {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
        all &= outcome.pass;
    }
    if all {
        Ok(())
    } else {
        Err(Exit::new(FAILURE, "validation failed").into())
    }
}
