// SPDX-License-Identifier: MIT OR Apache-2.0

mod common;

use agehopf::simulate::diagnostics::oscillation_record;
use agehopf::simulate::*;
use agehopf::spectral::{hopf_points, refine_root};
use agehopf::{equilibrium, reduced_coeffs, Error, ExpSum, SimConfig64, Trajectory64};
use approx::assert_relative_eq;
use common::figure1;
use num_complex::Complex64 as C64;

fn sample_at(tr: &Trajectory64, t: f64) -> usize {
    tr.times.iter().position(|&x| (x - t).abs() < 1e-9).unwrap()
}

#[test]
fn equilibrium_is_stationary_for_the_delay_scheme() {
    let p = figure1();
    let eq = equilibrium(&p, 24.0).unwrap();
    let tr = run(&SimConfig64::dde(24.0, 1e-3, 100.0).with_epsilon(0.0), &p).unwrap();
    assert_eq!(tr.max_deviation(eq.s_bar, eq.xi), 0.0);
    assert!(tr.diagnostics.is_none());
}

#[test]
fn characteristic_scheme_stays_near_equilibrium() {
    // The discrete equilibrium of the trapezoid scheme is O(dt²) away.
    let p = figure1();
    let eq = equilibrium(&p, 24.0).unwrap();
    let coarse = run(&SimConfig64::pde(24.0, 2e-3, 20.0).with_epsilon(0.0), &p).unwrap();
    let fine = run(&SimConfig64::pde(24.0, 1e-3, 20.0).with_epsilon(0.0), &p).unwrap();
    let (dc, df) = (coarse.max_deviation(eq.s_bar, eq.xi), fine.max_deviation(eq.s_bar, eq.xi));
    assert!(df < 1e-3);
    assert!((dc / df - 4.0).abs() < 0.3, "{dc} {df}");
}

#[test]
fn sustained_oscillation_above_the_first_delay() {
    let p = figure1();
    let tr = run(&SimConfig64::dde(24.0, 1e-3, 3000.0).with_stride(10), &p).unwrap();
    let d = tr.diagnostics.as_ref().unwrap();
    assert_eq!(d.verdict, Verdict::Sustained);
    let pt = hopf_points(&reduced_coeffs(&p).unwrap(), 0).unwrap()[0];
    assert!((d.period / pt.period() - 1.0).abs() < 0.01, "{}", d.period);
    assert!(d.amplitude > 0.3 && d.amplitude < 0.6);
    // Positivity along the orbit.
    for k in 0..tr.len() {
        assert!(tr.s[k] > 0.0 && tr.p[k] > 0.0 && tr.j[k] > 0.0 && tr.b[k] > 0.0);
    }
}

#[test]
fn decay_below_the_first_delay() {
    let p = figure1();
    let tr = run(&SimConfig64::dde(20.0, 1e-3, 200.0), &p).unwrap();
    let d = tr.diagnostics.as_ref().unwrap();
    assert_eq!(d.verdict, Verdict::Decaying);
    assert!(d.ratio < 0.99);
    let eq = equilibrium(&p, 20.0).unwrap();
    assert!(tr.terminal_deviation(eq.s_bar, eq.xi) < 1e-2);
}

#[test]
fn schemes_agree_and_the_gap_is_second_order() {
    let p = figure1();
    let reference = run(&SimConfig64::dde(24.0, 1e-3, 6.0), &p).unwrap();
    let gap = |dt: f64| {
        let tr = run(&SimConfig64::pde(24.0, dt, 6.0), &p).unwrap();
        let stride = (dt / 1e-3).round() as usize;
        (0..tr.len())
            .map(|k| (tr.s[k] - reference.s[k * stride]).abs())
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (gap(4e-3), gap(2e-3));
    assert!(fine < 1e-3);
    assert!((coarse / fine - 4.0).abs() < 0.3, "{coarse} {fine}");
}

#[test]
fn delay_scheme_is_fourth_order_before_the_second_delay() {
    // Richardson estimate at t = 1.8, where the history kink at t = 1 has
    // passed but the one at t = 2 has not.
    let p = figure1();
    let s: Vec<f64> = [100.0, 200.0, 400.0]
        .iter()
        .map(|n| {
            let tr = run(&SimConfig64::dde(24.0, 1.0 / n, 1.9), &p).unwrap();
            tr.s[sample_at(&tr, 1.8)]
        })
        .collect();
    let order = ((s[0] - s[1]) / (s[1] - s[2])).log2();
    assert!((order - 4.0).abs() < 0.3, "order {order}");
}

#[test]
fn linear_regime_frequency_matches_the_leading_root() {
    let p = figure1();
    let c = reduced_coeffs(&p).unwrap();
    let pt = hopf_points(&c, 0).unwrap()[0];
    let tau = pt.tau_k + 0.05;
    let root = refine_root(C64::new(0.0, pt.omega0), tau, &c).unwrap().root;
    let expected = 2.0 * std::f64::consts::PI / (tau * root.im);
    let tr = run(&SimConfig64::dde(tau, 1e-3, 300.0).with_epsilon(1e-4), &p).unwrap();
    let d = tr.diagnostics.unwrap();
    assert!((d.period / expected - 1.0).abs() < 0.01, "{} vs {expected}", d.period);
}

#[test]
fn frozen_boundary_is_pure_transport() {
    let p = figure1();
    let (tau, v, dt) = (24.0, 2.0, 2.5e-4);
    let mut config = SimConfig64::pde(tau, dt, 0.5);
    config.seed = Seed::Custom {
        profile: ExpSum::zero(),
        s0: 1.0,
    };
    config.boundary = Boundary::Frozen(v);
    config.snapshot_every = Some(400);
    let tr = run(&config, &p).unwrap();
    assert!(tr.s.iter().all(|&s| s == 1.0));

    // Nodes behind the front carry v e^{−τa}, nodes ahead are empty, and
    // the node on the front holds the mean.
    let surface = tr.surface.as_ref().unwrap();
    let (m, t) = (surface.times.len() - 1, *surface.times.last().unwrap());
    let l1: f64 = surface
        .ages
        .iter()
        .zip(&surface.values[m])
        .map(|(&a, &i)| {
            let exact = if (a - t).abs() < 0.5 * dt {
                0.5 * v * (-tau * a).exp()
            } else if a < t {
                v * (-tau * a).exp()
            } else {
                0.0
            };
            (i - exact).abs() * dt
        })
        .sum();
    assert!(l1 < 1e-12, "{l1}");

    // P' = v − τP holds up to the trapezoid bias (τ dt)²/12.
    for &t in &[0.05, 0.2, 0.5] {
        let k = sample_at(&tr, t);
        let exact = v / tau * (1.0 - (-tau * t).exp());
        assert!((tr.p[k] / exact - 1.0).abs() < 1e-4);
    }
    // Per step, P follows the exact update of P' = v − τP up to the
    // trapezoid bias dt·v·(τ dt)²/12 ≈ 1.5e-9 of the inflow strip.
    let decay = (-tau * dt).exp();
    let step_residual = tr
        .p
        .windows(2)
        .map(|w| (w[1] - (w[0] * decay + v / tau * (1.0 - decay))).abs())
        .fold(0.0, f64::max);
    assert!(step_residual < 1e-8, "{step_residual}");
    assert_eq!(tr.j[sample_at(&tr, 0.5)], 0.0);
}

#[test]
fn infection_free_manifold_is_invariant() {
    let p = figure1();
    for scheme in [Scheme::Dde, Scheme::Pde] {
        let mut config = SimConfig64::dde(24.0, 1e-3, 1.0);
        config.scheme = scheme;
        config.seed = Seed::Custom {
            profile: ExpSum::zero(),
            s0: 0.5,
        };
        let tr = run(&config, &p).unwrap();
        let target = p.lambda / p.mu;
        for k in 0..tr.len() {
            assert_eq!(tr.p[k], 0.0);
            let exact = target + (0.5 - target) * (-p.mu * 24.0 * tr.times[k]).exp();
            assert!((tr.s[k] - exact).abs() < 1e-10, "{scheme:?} t={}", tr.times[k]);
        }
    }
}

#[test]
fn custom_profile_agrees_between_schemes() {
    let p = figure1();
    let eq = equilibrium(&p, 24.0).unwrap();
    let profile = eq.i_bar.scale(C64::new(1.1, 0.0));
    let mk = |scheme| {
        let mut c = SimConfig64::dde(24.0, 1e-3, 5.0);
        c.scheme = scheme;
        c.seed = Seed::Custom {
            profile: profile.clone(),
            s0: eq.s_bar,
        };
        run(&c, &p).unwrap()
    };
    let (a, b) = (mk(Scheme::Dde), mk(Scheme::Pde));
    let gap = (0..a.len()).map(|k| (a.s[k] - b.s[k]).abs()).fold(0.0, f64::max);
    assert!(gap < 1e-3, "{gap}");
}

#[test]
fn configuration_errors() {
    let p = figure1();
    let bad = |c: SimConfig64| matches!(run(&c, &p), Err(Error::Config(_)));
    assert!(bad(SimConfig64::dde(24.0, 0.3, 1.0)));
    assert!(bad(SimConfig64::dde(24.0, 0.5, 1.0)));
    assert!(bad(SimConfig64::dde(24.0, -1e-3, 1.0)));
    assert!(bad(SimConfig64::dde(24.0, 1e-3, 0.0)));
    assert!(bad(SimConfig64::dde(24.0, 1e-3, 1.0).with_stride(0)));
    assert!(bad(SimConfig64::dde(24.0, 1e-3, 1.0).with_epsilon(-2.0)));
    let mut short = SimConfig64::pde(24.0, 1e-3, 1.0);
    short.a_max = Some(1.5);
    assert!(bad(short));
    assert!(matches!(
        run(&SimConfig64::dde(0.0, 1e-3, 1.0), &p),
        Err(Error::Range { name: "tau", .. })
    ));
    assert_eq!(SimConfig64::dde(24.0, 0.25, 1.0).steps_per_delay().unwrap(), 4);
}

#[test]
fn blowup_is_reported() {
    let p = figure1();
    let mut config = SimConfig64::dde(24.0, 1e-2, 1.0);
    config.seed = Seed::Custom {
        profile: ExpSum::zero(),
        s0: 1e13,
    };
    assert!(matches!(run(&config, &p), Err(Error::Blowup { variable: "S", .. })));
}

#[test]
fn truncation_warning_on_a_slow_profile() {
    let p = figure1();
    let mut config = SimConfig64::pde(24.0, 1e-2, 0.05);
    // A rate of 0.5 leaves a large tail beyond a_max ≈ 2.67.
    config.seed = Seed::Custom {
        profile: ExpSum::single(C64::new(1.0, 0.0), C64::new(0.5, 0.0)).unwrap(),
        s0: 1.0,
    };
    let tr = run(&config, &p).unwrap();
    assert!(tr.warnings.iter().any(|w| w.contains("age truncation")));
    let clean = run(&SimConfig64::pde(24.0, 1e-2, 0.05), &p).unwrap();
    assert!(clean.warnings.is_empty());
}

#[test]
fn diagnostics_on_synthetic_series() {
    let t: Vec<f64> = (0..20_000).map(|k| k as f64 * 0.01).collect();
    let flat = vec![1.0; t.len()];
    assert!(matches!(oscillation_record(&t, &flat), Err(Error::InsufficientData { .. })));

    let wave = |g: f64| t.iter().map(|&x| 3.0 + (g * x).exp() * (2.0 * x).sin()).collect::<Vec<_>>();
    let period = std::f64::consts::PI;
    let steady = oscillation_record(&t, &wave(0.0)).unwrap();
    assert_eq!(steady.verdict, Verdict::Sustained);
    assert_relative_eq!(steady.period, period, max_relative = 1e-5);
    assert_relative_eq!(steady.amplitude, 2.0, max_relative = 1e-5);
    assert_eq!(oscillation_record(&t, &wave(-0.01)).unwrap().verdict, Verdict::Decaying);
    assert_eq!(oscillation_record(&t, &wave(0.01)).unwrap().verdict, Verdict::Growing);
    let r = oscillation_record(&t, &wave(-0.01)).unwrap();
    assert_relative_eq!(r.ratio, (-0.01 * period).exp(), max_relative = 1e-3);
}

#[test]
fn sweep_and_regression_helpers() {
    let p = figure1();
    let template = SimConfig64::dde(24.0, 1e-2, 400.0);
    let pts = sweep_amplitude(&p, 20.0, 26.0, 3, &template).unwrap();
    assert_eq!(pts.iter().map(|s| s.tau).collect::<Vec<_>>(), vec![20.0, 23.0, 26.0]);
    assert!(pts[2].amplitude > pts[0].amplitude);
    assert_eq!(pts[2].verdict, Some(Verdict::Sustained));
    assert!(sweep_amplitude(&p, 26.0, 20.0, 3, &template).is_err());

    let synthetic = [(1.0, 0.0), (2.0, 1e-9), (3.0, 0.5), (4.0, 0.0)]
        .map(|(tau, amplitude)| SweepPoint { tau, amplitude, verdict: None });
    assert_eq!(onset_bracket(&synthetic, 1e-6), Some((2.0, 3.0)));
    assert_eq!(onset_bracket(&synthetic[..2], 1e-6), None);

    let x = [0.1, 0.2, 0.3, 0.4];
    let y = x.map(|v| 10.0 * v - 0.2);
    let r = linear_regression(&x, &y).unwrap();
    assert_relative_eq!(r.slope, 10.0, max_relative = 1e-12);
    assert_relative_eq!(r.intercept, -0.2, epsilon = 1e-12);
    assert_relative_eq!(r.r_squared, 1.0, max_relative = 1e-12);
    assert!(linear_regression(&[1.0], &[1.0]).is_err());
    assert!(linear_regression(&[1.0, 1.0], &[1.0, 2.0]).is_err());
}

#[test]
fn single_precision_run() {
    let p = agehopf::ModelParams32::new(0.6, 0.2, 0.81);
    let tr = run(&agehopf::SimConfig32::dde(24.0, 1e-2, 50.0), &p).unwrap();
    assert!(tr.s.iter().all(|s| s.is_finite()));
}
