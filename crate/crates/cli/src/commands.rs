// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;

use agehopf::model::{assumption_report, beta_star, unscale, AssumptionReport};
use agehopf::normalform::audit::{audit_context, reverify, AuditRecord};
use agehopf::normalform::{hopf_context, ExpReading, NormalFormOptions, Route};
use agehopf::simulate::{run, Scheme, SimConfig, Trajectory, DEFAULT_EPSILON};
use agehopf::spectral::{hopf_points, HopfPoint};
use agehopf::{equilibrium, reduced_coeffs, ExpSum64, ModelParams64, ReducedCoeffs64};

use crate::args::*;
use crate::config::{self, Config};
use crate::exit::Exit;
use crate::output::{self, emit_json, num, sibling, write_csv, RunManifest};

fn require_assumptions(c: &ReducedCoeffs64) -> Result<()> {
    let report = assumption_report(c);
    if report.pass {
        Ok(())
    } else {
        Err(Exit::assumptions(&report).into())
    }
}

fn finish(manifest: RunManifest, out: Option<&Path>) -> Result<()> {
    let mut manifest = manifest;
    if let Some(p) = out {
        manifest.record(p);
    }
    if manifest.outputs.is_empty() {
        Ok(())
    } else {
        manifest.write_sidecars()
    }
}

// ---------------------------------------------------------------- analyze

#[derive(Serialize)]
struct Caption {
    #[serde(rename = "E-C")]
    e_minus_c: f64,
    #[serde(rename = "BD-2E")]
    bd_minus_2e: f64,
    #[serde(rename = "B^2-2C")]
    b2_minus_2c: f64,
    #[serde(rename = "BCD-E(B^2-2C)")]
    bcd_minus_e_b2_minus_2c: f64,
}

#[derive(Serialize)]
struct Profiles {
    tau: f64,
    /// `e^τ`, absent when it would overflow the guard.
    beta_star: Option<f64>,
    i_bar: ExpSum64,
    rho_bar: ExpSum64,
}

#[derive(Serialize)]
struct AnalysisReport {
    params: ModelParams64,
    reduced_coeffs: ReducedCoeffs64,
    caption: Caption,
    assumptions: AssumptionReport,
    equilibrium: serde_json::Value,
    profiles: Option<Profiles>,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let (params, cfg) = config::model(&args.model)?;
    let tau: Option<f64> = cfg.pick(args.tau, "tau")?;
    let out = cfg.pick_path(args.out.clone(), "out")?;
    let c = reduced_coeffs(&params)?;
    let (b, cc, d, e) = (c.b_coef, c.c_coef, c.d_coef, c.e_coef);
    let profiles = match tau {
        Some(t) => {
            let eq = equilibrium(&params, t)?;
            Some(Profiles {
                tau: t,
                beta_star: beta_star(t).ok(),
                i_bar: eq.i_bar,
                rho_bar: eq.rho_bar,
            })
        }
        None => None,
    };
    let report = AnalysisReport {
        params,
        reduced_coeffs: c,
        caption: Caption {
            e_minus_c: e - cc,
            bd_minus_2e: b * d - 2.0 * e,
            b2_minus_2c: b * b - 2.0 * cc,
            bcd_minus_e_b2_minus_2c: b * cc * d - e * (b * b - 2.0 * cc),
        },
        assumptions: assumption_report(&c),
        equilibrium: json!({ "s_bar": 1.0 + c.xi, "xi": c.xi }),
        profiles,
    };
    emit_json(out.as_deref(), &report)?;
    let mut manifest = RunManifest::new("analyze", params, json!({ "tau": tau }));
    if let Some(t) = tau {
        manifest = manifest.with_tau(t);
    }
    finish(manifest, out.as_deref())
}

// ------------------------------------------------------------------- hopf

#[derive(Serialize)]
struct HopfRow {
    k: usize,
    omega0: f64,
    tau_k: f64,
    branch: &'static str,
    transversality: f64,
    residual: f64,
    /// Frequency on the `λ = τζ` scale.
    omega_k: f64,
    /// Scaled period at onset.
    period: f64,
}

impl From<&HopfPoint> for HopfRow {
    fn from(p: &HopfPoint) -> Self {
        Self {
            k: p.k,
            omega0: p.omega0,
            tau_k: p.tau_k,
            branch: p.branch.label(),
            transversality: p.transversality,
            residual: p.residual,
            omega_k: p.omega_k(),
            period: p.period(),
        }
    }
}

pub fn hopf(args: &HopfArgs) -> Result<()> {
    let (params, cfg) = config::model(&args.model)?;
    let k_max: usize = cfg.pick_or(args.k_max, "k_max", 5)?;
    let format = match (args.format, cfg.pick::<String>(None, "format")?.as_deref()) {
        (Some(f), _) => f,
        (None, Some("csv")) => TableFormat::Csv,
        (None, None | Some("json")) => TableFormat::Json,
        (None, Some(other)) => return Err(Exit::validation(format!("unknown format {other}")).into()),
    };
    let out = cfg.pick_path(args.out.clone(), "out")?;
    let c = reduced_coeffs(&params)?;
    require_assumptions(&c)?;
    let rows: Vec<HopfRow> = hopf_points(&c, k_max)?.iter().map(HopfRow::from).collect();
    match format {
        TableFormat::Json => emit_json(out.as_deref(), &json!({ "params": params, "points": rows }))?,
        TableFormat::Csv => {
            let records = rows.iter().map(|r| {
                vec![
                    r.k.to_string(),
                    num(r.omega0),
                    num(r.tau_k),
                    r.branch.to_string(),
                    num(r.transversality),
                    num(r.residual),
                ]
            });
            let header = ["k", "omega0", "tau_k", "branch", "transversality", "residual"];
            match &out {
                Some(p) => write_csv(p, &header, records)?,
                None => {
                    let mut w = csv::WriterBuilder::new()
                        .terminator(csv::Terminator::Any(b'\n'))
                        .from_writer(std::io::stdout());
                    w.write_record(header)?;
                    for r in records {
                        w.write_record(&r)?;
                    }
                    w.flush()?;
                }
            }
        }
    }
    let manifest = RunManifest::new("hopf", params, json!({ "k_max": k_max }));
    finish(manifest, out.as_deref())
}

// ------------------------------------------------------------ normal-form

fn options(cfg: &Config, route: Option<RouteArg>, reading: Option<ReadingArg>) -> Result<NormalFormOptions> {
    let route = match (route, cfg.pick::<String>(None, "route")?.as_deref()) {
        (Some(RouteArg::Reduction), _) | (None, None | Some("reduction")) => Route::Reduction,
        (Some(RouteArg::Published), _) | (None, Some("published")) => Route::Published,
        (None, Some(other)) => return Err(Exit::validation(format!("unknown route {other}")).into()),
    };
    let reading = match (reading, cfg.pick::<String>(None, "reading")?.as_deref()) {
        (Some(ReadingArg::Scalar), _) | (None, None | Some("scalar")) => ExpReading::Scalar,
        (Some(ReadingArg::BetaWeightedAge), _) | (None, Some("beta-weighted-age")) => ExpReading::BetaWeightedAge,
        (None, Some(other)) => return Err(Exit::validation(format!("unknown reading {other}")).into()),
    };
    Ok(NormalFormOptions { route, reading })
}

/// Pull both audit records out of a stored normal-form document and
/// re-check every mirrored pair.
pub fn reverify_document(text: &str) -> Result<bool> {
    let doc: serde_json::Value = serde_json::from_str(text).context("parsing normal-form JSON")?;
    let audit = doc.get("audit").context("document has no audit record")?;
    let forward: AuditRecord = serde_json::from_value(audit["forward"].clone()).context("audit.forward")?;
    let mirrored: AuditRecord = serde_json::from_value(audit["mirrored"].clone()).context("audit.mirrored")?;
    Ok(reverify(&forward, &mirrored))
}

pub fn normal_form(args: &NormalFormArgs) -> Result<()> {
    let (params, cfg) = config::model(&args.model)?;
    let k: usize = cfg.pick_or(args.k, "k", 0)?;
    let opts = options(&cfg, args.route, args.reading)?;
    let out = cfg.pick_path(args.out.clone(), "out")?;
    let c = reduced_coeffs(&params)?;
    require_assumptions(&c)?;
    let point = hopf_points(&c, k)?[k];
    let ctx = hopf_context(&params, &point)?;
    let result = agehopf::normalform::analyze_context(&ctx, opts)?;
    let audit = audit_context(&ctx, opts)?;
    let doc = json!({ "params": params, "k": k, "result": result, "audit": audit });
    let text = output::to_json(&doc)?;
    // Round-trip through the serialized form, then re-verify as a reader would.
    if !reverify_document(&text)? || !audit.pass {
        let failed: Vec<String> = audit.failures().map(|c| c.name.clone()).collect();
        return Err(Exit::new(crate::exit::FAILURE, format!("conjugation audit failed: {failed:?}")).into());
    }
    emit_json(out.as_deref(), &doc)?;
    if let Some(p) = &out {
        let stored = std::fs::read_to_string(p)?;
        if !reverify_document(&stored)? {
            return Err(Exit::new(crate::exit::FAILURE, "stored audit record failed re-verification").into());
        }
    }
    eprintln!(
        "k = {k}: tau_k = {:.6}, iota1 = {:.6e}, iota2 = {:.6e}, {}",
        result.tau_k,
        result.iota1,
        result.iota2,
        result.classification.label()
    );
    let manifest = RunManifest::new(
        "normal-form",
        params,
        json!({ "k": k, "route": opts.route, "reading": opts.reading }),
    )
    .with_tau(point.tau_k);
    finish(manifest, out.as_deref())
}

// --------------------------------------------------------------- simulate

#[derive(Serialize)]
pub struct DiagnosticsRecord {
    pub tau: f64,
    pub scheme: Scheme,
    /// `null` when too few oscillations were found.
    pub verdict: Option<&'static str>,
    pub period_scaled: Option<f64>,
    pub period_original: Option<f64>,
    pub amplitude: Option<f64>,
    pub ratio: Option<f64>,
    pub peaks: Vec<f64>,
    pub warnings: Vec<String>,
}

pub fn diagnostics_record(tr: &Trajectory) -> DiagnosticsRecord {
    let d = tr.diagnostics.as_ref();
    DiagnosticsRecord {
        tau: tr.tau,
        scheme: tr.scheme,
        verdict: d.map(|d| d.verdict.label()),
        period_scaled: d.map(|d| d.period),
        period_original: d.map(|d| d.period * tr.tau),
        amplitude: d.map(|d| d.amplitude),
        ratio: d.map(|d| d.ratio),
        peaks: d.map(|d| d.peaks.clone()).unwrap_or_default(),
        warnings: tr.warnings.clone(),
    }
}

fn trajectory_rows(tr: &Trajectory, original: bool) -> impl Iterator<Item = Vec<String>> + '_ {
    (0..tr.len()).map(move |k| {
        let (t, b) = if original {
            let (t, _, b) = unscale(tr.times[k], 0.0, tr.b[k], tr.tau);
            (t, b)
        } else {
            (tr.times[k], tr.b[k])
        };
        vec![num(t), num(tr.s[k]), num(tr.p[k]), num(tr.j[k]), num(b)]
    })
}

fn surface_rows(tr: &Trajectory, original: bool) -> Vec<Vec<String>> {
    let Some(sf) = &tr.surface else {
        return Vec::new();
    };
    let mut rows = Vec::with_capacity(sf.times.len() * sf.ages.len());
    for (m, &t) in sf.times.iter().enumerate() {
        for (k, &a) in sf.ages.iter().enumerate() {
            let (t, a, i) = if original {
                unscale(t, a, sf.values[m][k], tr.tau)
            } else {
                (t, a, sf.values[m][k])
            };
            rows.push(vec![num(t), num(a), num(i)]);
        }
    }
    rows
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let (params, cfg) = config::model(&args.model)?;
    let tau: f64 = cfg
        .pick(args.tau, "tau")?
        .ok_or_else(|| Exit::validation("missing required value --tau (flag or config key)"))?;
    let scheme = match (args.scheme, cfg.pick::<String>(None, "scheme")?.as_deref()) {
        (Some(SchemeArg::Dde), _) | (None, None | Some("dde")) => Scheme::Dde,
        (Some(SchemeArg::Pde), _) | (None, Some("pde")) => Scheme::Pde,
        (None, Some(other)) => return Err(Exit::validation(format!("unknown scheme {other}")).into()),
    };
    let mut config = SimConfig::dde(
        tau,
        cfg.pick_or(args.dt, "dt", 1e-3)?,
        cfg.pick_or(args.t_end, "t_end", 200.0)?,
    )
    .with_epsilon(cfg.pick_or(args.epsilon, "epsilon", DEFAULT_EPSILON)?)
    .with_stride(cfg.pick_or(args.stride, "stride", 1)?);
    config.scheme = scheme;
    let out = cfg.pick_path(args.out.clone(), "out")?;
    let surface = cfg.pick_path(args.surface.clone(), "surface")?;
    if surface.is_some() {
        if scheme != Scheme::Pde {
            return Err(Exit::validation("--surface needs --scheme pde").into());
        }
        config.snapshot_every = Some(cfg.pick_or(args.snapshot_every, "snapshot_every", 100)?);
        config.snapshot_age_stride = cfg.pick_or(args.age_stride, "age_stride", 20)?;
    }
    let original = cfg.switch(args.original_units, "original_units")?;
    let gnuplot = cfg.switch(args.gnuplot, "gnuplot")?;

    let tr = run(&config, &params)?;
    for w in &tr.warnings {
        eprintln!("warning: {w}");
    }
    let record = diagnostics_record(&tr);
    let mut manifest = RunManifest::new(
        "simulate",
        params,
        json!({
            "scheme": scheme, "dt": config.dt, "t_end": config.t_end, "epsilon": config.epsilon,
            "stride": config.stride, "original_units": original,
            "snapshot_every": config.snapshot_every, "age_stride": config.snapshot_age_stride,
        }),
    )
    .with_tau(tau);
    if let Some(p) = &out {
        write_csv(p, &["t", "S", "P", "J", "b"], trajectory_rows(&tr, original))?;
        manifest.record(p);
        let diag = sibling(p, "diagnostics.json");
        emit_json(Some(&diag), &record)?;
        manifest.record(&diag);
        if gnuplot {
            let gp = sibling(p, "gp");
            let label = if original { "t" } else { "t (scaled)" };
            std::fs::write(&gp, output::gnuplot_trajectory(p, label))?;
            manifest.record(&gp);
        }
    }
    if let Some(p) = &surface {
        write_csv(p, &["t", "a", "i"], surface_rows(&tr, original))?;
        manifest.record(p);
    }
    emit_json(None, &record)?;
    finish(manifest, None)
}

// -------------------------------------------------------- figure 1 panels

/// Symmetric Hausdorff distance between two point sets.
fn hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let directed = |x: &[(f64, f64)], y: &[(f64, f64)]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p.0 - q.0).hypot(p.1 - q.1)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

fn diameter(a: &[(f64, f64)]) -> f64 {
    let mut d: f64 = 0.0;
    for p in a {
        for q in a {
            d = d.max((p.0 - q.0).hypot(p.1 - q.1));
        }
    }
    d
}

#[derive(Serialize)]
struct LoopClosure {
    hausdorff: f64,
    diameter: f64,
    relative: f64,
}

/// Compare the last two phase-plane loops, delimited by the last three
/// refined peaks of `S`.
fn loop_closure(tr: &Trajectory) -> Option<LoopClosure> {
    let peaks = &tr.diagnostics.as_ref()?.peaks;
    if peaks.len() < 3 {
        return None;
    }
    let n = peaks.len();
    let pick = |from: f64, to: f64| -> Vec<(f64, f64)> {
        (0..tr.len())
            .filter(|&k| tr.times[k] >= from && tr.times[k] <= to)
            .map(|k| (tr.p[k], tr.s[k]))
            .collect()
    };
    let first = pick(peaks[n - 3], peaks[n - 2]);
    let second = pick(peaks[n - 2], peaks[n - 1]);
    let h = hausdorff(&first, &second);
    let d = diameter(&second);
    Some(LoopClosure {
        hausdorff: h,
        diameter: d,
        relative: h / d,
    })
}

const PANEL_STRIDE: usize = 20;

pub fn reproduce_figure1(args: &FigureArgs) -> Result<()> {
    let cfg = Config::load(args.model.config.as_deref())?;
    // The caption's constants are the defaults here.
    let params = ModelParams64::new(
        cfg.pick(args.model.lambda, "lambda")?.or(cfg.pick(None, "A")?).unwrap_or(0.6),
        cfg.pick_or(args.model.mu, "mu", 0.2)?,
        cfg.pick_or(args.model.eta, "eta", 0.81)?,
    )
    .validate()?;
    let outdir: PathBuf = cfg.pick_path(args.outdir.clone(), "outdir")?.unwrap_or_else(|| "figure1".into());
    let tau: f64 = cfg.pick_or(args.tau, "tau", 24.0)?;
    let t_end: f64 = cfg.pick_or(args.t_end, "t_end", 2000.0)?;
    let gnuplot = cfg.switch(args.gnuplot, "gnuplot")?;
    std::fs::create_dir_all(&outdir).with_context(|| format!("creating {}", outdir.display()))?;

    let c = reduced_coeffs(&params)?;
    require_assumptions(&c)?;
    let p0 = hopf_points(&c, 0)?[0];

    // Keep every step so the loop-closure measure is not limited by the
    // sampling; the panels are thinned on output.
    let series = run(&SimConfig::dde(tau, 1e-3, t_end), &params)?;
    let rows = || (0..series.len()).step_by(PANEL_STRIDE);
    let mut surface_cfg = SimConfig::pde(tau, 1e-3, 20.0).with_stride(50);
    surface_cfg.snapshot_every = Some(50);
    surface_cfg.snapshot_age_stride = 20;
    let surface = run(&surface_cfg, &params)?;

    let mut manifest = RunManifest::new(
        "reproduce-figure1",
        params,
        json!({
            "series": { "scheme": "dde", "dt": 1e-3, "t_end": t_end, "stride": PANEL_STRIDE, "epsilon": DEFAULT_EPSILON },
            "surface": { "scheme": "pde", "dt": 1e-3, "t_end": 20.0, "snapshot_every": 50, "age_stride": 20 },
        }),
    )
    .with_tau(tau);

    let panel_a = outdir.join("panel_a_S.csv");
    write_csv(
        &panel_a,
        &["t", "S"],
        rows().map(|k| vec![num(series.times[k]), num(series.s[k])]),
    )?;
    let panel_b = outdir.join("panel_b_P.csv");
    write_csv(
        &panel_b,
        &["t", "P"],
        rows().map(|k| vec![num(series.times[k]), num(series.p[k])]),
    )?;
    let panel_c = outdir.join("panel_c_phase.csv");
    write_csv(
        &panel_c,
        &["P", "S"],
        rows().map(|k| vec![num(series.p[k]), num(series.s[k])]),
    )?;
    let panel_d = outdir.join("panel_d_surface.csv");
    write_csv(&panel_d, &["t", "a", "i"], surface_rows(&surface, false))?;

    let diag = diagnostics_record(&series);
    let summary = json!({
        "params": params,
        "tau0": p0.tau_k,
        "omega0": p0.omega0,
        "tau": tau,
        "verdict": diag.verdict,
        "period_scaled": diag.period_scaled,
        "period_original": diag.period_original,
        "period_at_onset": p0.period(),
        "amplitude": diag.amplitude,
        "ratio": diag.ratio,
        "loop_closure": loop_closure(&series),
    });
    let summary_path = outdir.join("summary.json");
    emit_json(Some(&summary_path), &summary)?;

    for p in [&panel_a, &panel_b, &panel_c, &panel_d, &summary_path] {
        manifest.record(p);
    }
    if gnuplot {
        let gp = outdir.join("figure1.gp");
        std::fs::write(&gp, FIGURE_GNUPLOT)?;
        manifest.record(&gp);
    }
    emit_json(None, &summary)?;
    finish(manifest, None)
}

const FIGURE_GNUPLOT: &str = "set datafile separator ','\n\
set key autotitle columnhead\n\
set multiplot layout 2,2\n\
set xlabel 't (scaled)'\n\
plot 'panel_a_S.csv' using 1:2 with lines title 'S(t)'\n\
plot 'panel_b_P.csv' using 1:2 with lines title 'P(t)'\n\
set xlabel 'P'\n\
plot 'panel_c_phase.csv' using 1:2 with lines title '(P, S)'\n\
set xlabel 't (scaled)'\n\
set ylabel 'a (scaled)'\n\
set view map\n\
splot 'panel_d_surface.csv' using 1:2:3 with points palette pointtype 5 pointsize 0.3 title 'i(t,a)'\n\
unset multiplot\n\
pause -1\n";
