// SPDX-License-Identifier: MIT OR Apache-2.0

//! Named intermediates of the normal-form pipeline and the conjugation
//! audit over them.
//!
//! The vector field has real coefficients, so every quantity evaluated at
//! `−iω_k` must equal the complex conjugate of its value at `+iω_k`. The
//! audit checks this in two ways. Within one orientation it compares the
//! explicitly paired values (`p₋` against `p₊`, `c₃₃₁₀` against `c₂₂₁₀`,
//! and so on). Across orientations it re-runs the whole pipeline on the
//! mirrored context and compares every named entry with the conjugate of
//! its forward twin.

use serde::{Deserialize, Serialize};

use super::{published, reduction, HopfContext, NormalFormOptions, ProfilePair};
use crate::error::Result;
use crate::expsum::ExpSum;
use crate::model::ModelParams;
use crate::scalar::{Cx, Scalar};
use crate::spectral::HopfPoint;

/// Relative tolerance of every audit comparison.
pub const AUDIT_TOL: f64 = 1e-10;

/// Every named intermediate at one Hopf point, in one orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = ""))]
pub struct AuditRecord<T: Scalar = f64> {
    pub k: usize,
    pub tau_k: T,
    /// Signed frequency of the orientation the record was computed in.
    pub omega: T,
    pub scalars: Vec<(String, Cx<T>)>,
    pub profiles: Vec<(String, ExpSum<T>)>,
}

impl<T: Scalar> AuditRecord<T> {
    pub fn scalar(&self, name: &str) -> Option<Cx<T>> {
        self.scalars.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn profile(&self, name: &str) -> Option<&ExpSum<T>> {
        self.profiles.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

fn push_pair<T: Scalar>(out: &mut Vec<(String, ExpSum<T>)>, name: &str, pair: &ProfilePair<T>) {
    out.push((format!("{name}.first"), pair.first.clone()));
    out.push((format!("{name}.second"), pair.second.clone()));
}

/// Collect the record on a prepared context.
pub fn audit_record<T: Scalar>(ctx: &HopfContext<T>, options: NormalFormOptions) -> Result<AuditRecord<T>> {
    let l2 = published::l2_coefficients(ctx);
    let psi = published::psi_profiles(ctx, &l2)?;
    let quad = published::quadratic_normal_coeffs(ctx, options.reading);
    let cubic = published::cubic_coefficient(ctx, &quad, &psi);
    let red = reduction::reduce(ctx)?;

    let mut scalars: Vec<(String, Cx<T>)> = [
        ("d_delta_plus", ctx.d_delta_plus),
        ("d_delta_minus", ctx.d_delta_minus),
        ("p_plus", ctx.p_plus),
        ("p_minus", ctx.p_minus),
        ("int_b2", ctx.b2.integral()),
        ("int_b4", ctx.b4.integral()),
        ("c2210", l2.c2210),
        ("c2310", l2.c2310),
        ("c3310", l2.c3310),
        ("c2210_as_printed", published::c2210_as_printed(ctx)),
        ("psi_iomega12", published::psi_iomega12(ctx, options.reading)),
        ("psi_iomega34", published::psi_iomega34(ctx, options.reading)),
        ("a20", quad.a20),
        ("a11", quad.a11),
        ("a02", quad.a02),
        ("a20_brace", quad.a20_brace),
        ("a02_brace", quad.a02_brace),
        ("A1", quad.a1),
        ("A2", quad.a2),
        ("C0", cubic.c0),
        ("C1", cubic.c1),
        ("reduction.a20", red.a20),
        ("reduction.a11", red.a11),
        ("reduction.a02", red.a02),
        ("reduction.b_qq", red.b_qq),
        ("reduction.b_qqbar", red.b_qqbar),
        ("reduction.b_qbarqbar", red.b_qbarqbar),
        ("reduction.A1", red.a1),
        ("reduction.C0", red.c0),
        ("reduction.C1", red.c1),
    ]
    .into_iter()
    .map(|(n, v)| (n.to_string(), v))
    .collect();
    scalars.extend(cubic.terms.iter().map(|(n, v)| (format!("C0.{n}"), *v)));

    let mut profiles = vec![
        ("b1".to_string(), ctx.b1.clone()),
        ("b2".to_string(), ctx.b2.clone()),
        ("b3".to_string(), ctx.b3.clone()),
        ("b4".to_string(), ctx.b4.clone()),
    ];
    push_pair(&mut profiles, "psi22", &psi.psi22);
    push_pair(&mut profiles, "psi23", &psi.psi23);
    push_pair(&mut profiles, "psi33", &psi.psi33);
    push_pair(&mut profiles, "reduction.h20", &red.h20);
    push_pair(&mut profiles, "reduction.h11", &red.h11);

    Ok(AuditRecord {
        k: ctx.point.k,
        tau_k: ctx.tau(),
        omega: ctx.omega,
        scalars,
        profiles,
    })
}

/// One comparison of the audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditCheck {
    pub name: String,
    /// Absolute distance between the value and its expected conjugate twin
    /// (`+∞` when two exponential sums do not share a rate set).
    pub distance: f64,
    /// The distance allowed, `AUDIT_TOL · max(1, |value|)`.
    pub allowed: f64,
    pub pass: bool,
}

/// Outcome of the conjugation audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugationAudit<T: Scalar = f64> {
    pub forward: AuditRecord<T>,
    pub mirrored: AuditRecord<T>,
    pub checks: Vec<AuditCheck>,
    pub pass: bool,
}

impl<T: Scalar> ConjugationAudit<T> {
    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn check_scalar<T: Scalar>(name: String, value: Cx<T>, expected: Cx<T>) -> AuditCheck {
    let distance = (value - expected).norm().as_f64();
    let allowed = AUDIT_TOL * value.norm().as_f64().max(1.0);
    AuditCheck {
        name,
        distance,
        allowed,
        pass: distance <= allowed,
    }
}

fn check_profile<T: Scalar>(name: String, value: &ExpSum<T>, expected: &ExpSum<T>) -> AuditCheck {
    let scale = value
        .terms()
        .iter()
        .map(|t| t.coeff.norm().as_f64())
        .fold(1.0, f64::max);
    // Rates are matched by the canonical ordering and merge tolerance of
    // `ExpSum`; a rate mismatch is reported as an infinite distance.
    let distance = value
        .max_term_distance(expected)
        .map(|d| d.as_f64())
        .unwrap_or(f64::INFINITY);
    let allowed = AUDIT_TOL * scale;
    AuditCheck {
        name,
        distance,
        allowed,
        pass: distance <= allowed,
    }
}

/// Values that are informational and have no conjugate twin requirement.
const INFORMATIONAL: &[&str] = &["c2210_as_printed"];

/// Run the audit on a prepared forward context. The mirrored context is
/// built from the same point, so a perturbation applied only to `ctx`
/// surfaces as a failure.
pub fn audit_context<T: Scalar>(ctx: &HopfContext<T>, options: NormalFormOptions) -> Result<ConjugationAudit<T>> {
    let forward = audit_record(ctx, options)?;
    let mirrored = audit_record(&ctx.mirrored()?, options)?;
    let mut checks = Vec::new();

    let s = |name: &str| forward.scalar(name).expect("audit entry present");
    let within = [
        ("d_delta_minus", "d_delta_plus"),
        ("p_minus", "p_plus"),
        ("int_b4", "int_b2"),
        ("c3310", "c2210"),
        ("c2310", "c2310"),
        ("a02_brace", "a20_brace"),
    ];
    for (lhs, rhs) in within {
        checks.push(check_scalar(format!("{lhs} = conj {rhs}"), s(lhs), s(rhs).conj()));
    }
    let a11_brace = s("a11") * s("d_delta_plus");
    checks.push(check_scalar("a11 * d_delta_plus real".into(), a11_brace, a11_brace.conj()));

    let p = |name: &str| forward.profile(name).expect("audit entry present");
    for (lhs, rhs) in [
        ("b3", "b1"),
        ("b4", "b2"),
        ("psi33.first", "psi22.first"),
        ("psi33.second", "psi22.second"),
        ("psi23.first", "psi23.first"),
        ("psi23.second", "psi23.second"),
        ("reduction.h11.first", "reduction.h11.first"),
        ("reduction.h11.second", "reduction.h11.second"),
    ] {
        checks.push(check_profile(format!("{lhs} = conj {rhs}"), p(lhs), &p(rhs).conj()));
    }

    for (name, value) in &forward.scalars {
        if INFORMATIONAL.contains(&name.as_str()) {
            continue;
        }
        if let Some(twin) = mirrored.scalar(name) {
            checks.push(check_scalar(format!("mirror {name}"), twin, value.conj()));
        }
    }
    for (name, value) in &forward.profiles {
        if let Some(twin) = mirrored.profile(name) {
            checks.push(check_profile(format!("mirror {name}"), twin, &value.conj()));
        }
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(ConjugationAudit {
        forward,
        mirrored,
        checks,
        pass,
    })
}

/// Build the forward context at `point` and audit it.
pub fn conjugation_audit<T: Scalar>(
    params: &ModelParams<T>,
    point: &HopfPoint<T>,
    options: NormalFormOptions,
) -> Result<ConjugationAudit<T>> {
    let ctx = super::hopf_context(params, point)?;
    audit_context(&ctx, options)
}

/// Audit a context whose `p₋` was shifted by `delta`: the negative control.
pub fn perturbed_audit<T: Scalar>(
    params: &ModelParams<T>,
    point: &HopfPoint<T>,
    options: NormalFormOptions,
    delta: Cx<T>,
) -> Result<ConjugationAudit<T>> {
    let ctx = super::hopf_context(params, point)?.with_p_minus_perturbation(delta)?;
    audit_context(&ctx, options)
}

/// Re-verify a stored pair of records, as done when the CLI loads one.
pub fn reverify<T: Scalar>(forward: &AuditRecord<T>, mirrored: &AuditRecord<T>) -> bool {
    forward.scalars.iter().all(|(name, value)| {
        INFORMATIONAL.contains(&name.as_str())
            || mirrored
                .scalar(name)
                .map_or(true, |twin| check_scalar(name.clone(), twin, value.conj()).pass)
    })
}
