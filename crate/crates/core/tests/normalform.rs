// SPDX-License-Identifier: MIT OR Apache-2.0

mod common;

use agehopf::normalform::audit::{conjugation_audit, perturbed_audit, reverify};
use agehopf::normalform::reduction::{functionals, left_functional, resolvent, Functionals};
use agehopf::normalform::*;
use agehopf::spectral::{hopf_points, refine_root, HopfPoint};
use agehopf::{reduced_coeffs, Error};
use approx::assert_relative_eq;
use common::figure1;
use num_complex::Complex64 as C64;

fn point(k: usize) -> HopfPoint<f64> {
    hopf_points(&reduced_coeffs(&figure1()).unwrap(), k).unwrap()[k]
}

fn result() -> NormalFormResult<f64> {
    analyze(&figure1(), &point(0), NormalFormOptions::default()).unwrap()
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1e-300)
}

/// `∂^{j+k} F / ∂e₁^j ∂e₂^k` at the origin from the double Cauchy integral
/// over two circles of radius `r`.
fn mixed_derivative(f: impl Fn(C64, C64) -> C64, j: u32, k: u32, r: f64, n: usize) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for a in 0..n {
        let w1 = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * a as f64 / n as f64);
        for b in 0..n {
            let w2 = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * b as f64 / n as f64);
            acc += f(w1 * r, w2 * r) / (w1.powu(j) * w2.powu(k));
        }
    }
    let fact = |m: u32| (1..=m).product::<u32>() as f64;
    acc * fact(j) * fact(k) / ((n * n) as f64 * r.powi((j + k) as i32))
}

/// The incidence `S P / (1 + J)` evaluated at `m̄ + e₁x + e₂y`.
fn incidence_along(xi: f64, x: Functionals<f64>, y: Functionals<f64>) -> impl Fn(C64, C64) -> C64 {
    move |e1, e2| {
        let s = 1.0 + xi + e1 * x.s + e2 * y.s;
        let p = xi + e1 * x.p + e2 * y.p;
        let j = xi + e1 * x.j + e2 * y.j;
        s * p / (1.0 + j)
    }
}

// Frozen values of the reduction route at the Figure-1 point, produced by
// the oracles in this file on first run.
const A1: (f64, f64) = (0.0031892195083645727, 0.009611623795034276);
const C1: (f64, f64) = (-0.00031749965874398796, -0.00044509908481609345);
const A20: (f64, f64) = (0.0037994818203703025, 0.013497282328644219);
const C2310: f64 = 0.0013796271190697916;
const RADIUS_SLOPE: f64 = 10.044796649486043;

#[test]
fn frozen_reduction_values() {
    let r = result();
    assert_eq!(r.route, Route::Reduction);
    assert!(close(r.a1, C64::new(A1.0, A1.1), 1e-10));
    assert!(close(r.c1, C64::new(C1.0, C1.1), 1e-10));
    assert!(close(r.a20, C64::new(A20.0, A20.1), 1e-10));
    assert_relative_eq!(r.c2310.re, C2310, max_relative = 1e-10);
    assert!(r.c2310.im.abs() < 1e-18);
    assert_relative_eq!(r.radius_slope, RADIUS_SLOPE, max_relative = 1e-10);
    assert_eq!(r.iota1, r.a1.re);
    assert_eq!(r.iota2, r.c1.re);
    assert_eq!(r.classification, Classification::SupercriticalStable);
}

#[test]
fn printed_values_of_the_published_route() {
    let r = result();
    let pb = &r.published;
    // Reported to four or five significant figures alongside the example.
    assert!(close(pb.a1, C64::new(1.12208, -0.46386), 1e-4));
    assert!(close(pb.a2, C64::new(1.11612, -0.10100), 1e-4));
    assert!(close(pb.c0, C64::new(-3.7316e-4, 2.1391e-4), 1e-4));
    assert!(close(pb.c1, C64::new(-6.3374e-4, 4.7121e-4), 1e-4));
    assert!(close(pb.c2210_as_printed, C64::new(0.121924, -0.000830), 1e-4));
    assert_eq!(pb.classification, Classification::SupercriticalStable);
    assert_eq!(pb.iota1_scalar_reading, pb.iota1);
    assert!((pb.iota1_beta_weighted_reading - 2.04434).abs() < 1e-4);
    assert_eq!(pb.iota2_scalar_reading, pb.iota2_beta_weighted_reading);

    let sum: C64 = r.c0_terms.iter().map(|t| t.1).sum();
    assert!(r.c0_terms.iter().all(|t| t.1.re.is_finite() && t.1.im.is_finite()));
    assert!(close(sum, pb.c0, 1e-12));
}

#[test]
fn routes_agree_on_second_order_quantities() {
    let r = result();
    let red = &r.reduction;
    assert!(close(r.a20, red.a20, 1e-12));
    assert!(close(r.a11, red.a11, 1e-12));
    assert!(close(r.a02, red.a02, 1e-12));
    assert!(close(r.c2210, red.b_qq, 1e-12));
    assert!(close(r.c2310, red.b_qqbar, 1e-12));
    assert!(close(r.c3310, red.b_qbarqbar, 1e-12));
    let published_route = analyze(
        &figure1(),
        &point(0),
        NormalFormOptions {
            route: Route::Published,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(published_route.c1, r.published.c1);
    assert_eq!(published_route.classification, r.classification);
}

#[test]
fn second_derivatives_against_contour_oracle() {
    let pt = point(0);
    let ctx = hopf_context(&figure1(), &pt).unwrap();
    let red = reduction::reduce(&ctx).unwrap();
    let tau = ctx.tau();
    let xi = ctx.coeffs.xi;
    let mq = functionals(&ctx.q(), tau);
    let mqb = functionals(&ctx.q_bar(), tau);

    // D²f[x, y] = ∂²/∂e₁∂e₂ f(m̄ + e₁x + e₂y).
    let d2 = |x, y| mixed_derivative(incidence_along(xi, x, y), 1, 1, 1.0, 32);
    assert!(close(red.b_qq, d2(mq, mq) * tau, 1e-12));
    assert!(close(red.b_qqbar, d2(mq, mqb) * tau, 1e-12));
    assert!(close(red.b_qbarqbar, d2(mqb, mqb) * tau, 1e-12));

    // C₀ = τ(½D³f[q,q,q̄] + ½D²f[q̄,h₂₀] + D²f[q,h₁₁]).
    let m20 = functionals(&red.h20, tau);
    let m11 = functionals(&red.h11, tau);
    let d3 = mixed_derivative(incidence_along(xi, mq, mqb), 2, 1, 1.0, 32);
    let c0 = (d3 * 0.5 + d2(mqb, m20) * 0.5 + d2(mq, m11)) * tau;
    assert!(close(red.c0, c0, 1e-11));
}

#[test]
fn resolvent_residue_is_the_projection() {
    // (λ − iω) R(λ)δ → ℓ(δ) q as λ → iω.
    let ctx = hopf_context(&figure1(), &point(0)).unwrap();
    let delta = [C64::new(0.3, -0.1), C64::new(-0.2, 0.5)];
    let ell = left_functional(&ctx, delta).unwrap();
    let h = 1e-7;
    let r = resolvent(&ctx, ctx.i_omega() + h, delta).unwrap();
    let first = r.first.terms()[0].coeff * h;
    let second = r.second.terms()[0].coeff * h;
    assert!(close(first, ell, 1e-5));
    assert!(close(second, ell * ctx.p_plus, 1e-5));
}

#[test]
fn published_profiles_differ_from_resolvent_by_center_modes() {
    let r = result();
    let ctx = hopf_context(&figure1(), &point(0)).unwrap();
    let (tau, w, mu) = (ctx.tau(), ctx.omega, ctx.params.mu);

    // 2ψ₂₂ − h₂₀ keeps only the ±iω rates, each a multiple of q or q̄.
    let diff_first = &r.psi22.first.scale(C64::new(2.0, 0.0)) - &r.reduction.h20.first;
    let diff_second = &r.psi22.second.scale(C64::new(2.0, 0.0)) - &r.reduction.h20.second;
    // The 2iω terms cancel to rounding.
    let floor = 1e-13 * r.reduction.h20.first.terms()[0].coeff.norm();
    let live = |e: &agehopf::ExpSum<f64>| e.terms().iter().copied().filter(|t| t.coeff.norm() > floor).collect::<Vec<_>>();
    let (diff_first, diff_second) = (live(&diff_first), live(&diff_second));
    let rates: Vec<C64> = diff_first.iter().map(|t| t.rate).collect();
    assert_eq!(rates, vec![C64::new(tau, -w), C64::new(tau, w)]);
    assert_eq!(diff_second.len(), 2);
    for (f, s) in diff_first.iter().zip(&diff_second) {
        assert_relative_eq!(s.rate.re, mu * tau, max_relative = 1e-14);
        let expected = if f.rate.im > 0.0 { ctx.p_plus } else { ctx.p_minus };
        assert!(close(s.coeff / f.coeff, expected, 1e-10));
    }

    // 2ψ₂₃ carries h₁₁ on the real rate.
    let t = r.psi23.first.terms().iter().find(|t| t.rate.im == 0.0).unwrap();
    assert!(close(t.coeff * 2.0, r.reduction.h11.first.terms()[0].coeff, 1e-12));
}

#[test]
fn a1_matches_the_traced_root() {
    let pt = point(0);
    let c = reduced_coeffs(&figure1()).unwrap();
    let h = 1e-5;
    let lam = |t: f64| refine_root(C64::new(0.0, pt.omega0), t, &c).unwrap().root * t;
    let fd = (lam(pt.tau_k + h) - lam(pt.tau_k - h)) / (2.0 * h);
    let r = result();
    assert!(close(r.a1, fd, 1e-7));
    // Re λ increases through the crossing, matching sign(ι₁).
    assert!(r.iota1 > 0.0 && fd.re > 0.0);
}

#[test]
fn conjugation_audit_passes_and_catches_a_perturbation() {
    let opts = NormalFormOptions::default();
    let audit = conjugation_audit(&figure1(), &point(0), opts).unwrap();
    assert!(audit.pass, "{:?}", audit.failures().collect::<Vec<_>>());
    assert!(audit.checks.len() > 40);
    assert!(reverify(&audit.forward, &audit.mirrored));

    let bad = perturbed_audit(&figure1(), &point(0), opts, C64::new(1e-6, 0.0)).unwrap();
    assert!(!bad.pass);
    assert!(bad.failures().any(|c| c.name.contains("p_minus")));
    assert!(!reverify(&bad.forward, &audit.mirrored));

    let beta = NormalFormOptions {
        reading: ExpReading::BetaWeightedAge,
        ..opts
    };
    assert!(conjugation_audit(&figure1(), &point(1), beta).unwrap().pass);
}

#[test]
fn mirrored_pipeline_gives_conjugates() {
    let ctx = hopf_context(&figure1(), &point(0)).unwrap();
    let fwd = analyze_context(&ctx, NormalFormOptions::default()).unwrap();
    let mir = analyze_context(&ctx.mirrored().unwrap(), NormalFormOptions::default()).unwrap();
    assert_eq!(mir.omega_k, -fwd.omega_k);
    for (a, b) in [
        (mir.c0, fwd.c0),
        (mir.c1, fwd.c1),
        (mir.a1, fwd.a1),
        (mir.published.c0, fwd.published.c0),
    ] {
        assert!(close(a, b.conj(), 1e-10));
    }
    assert_eq!(mir.classification, fwd.classification);
}

#[test]
fn classify_cases() {
    assert_eq!(classify(1.0, -1.0), Classification::SupercriticalStable);
    assert_eq!(classify(-1.0, 1.0), Classification::SupercriticalUnstable);
    assert_eq!(classify(-1.0, -1.0), Classification::SubcriticalStable);
    assert_eq!(classify(1.0, 1.0), Classification::SubcriticalUnstable);
    assert_eq!(classify(0.0, -1.0), Classification::Degenerate);
    assert_eq!(classify(1.0, 1e-13), Classification::Degenerate);
    assert_eq!(classify(f64::NAN, 1.0), Classification::Degenerate);
    assert_eq!(classify(1.0, -DEGENERACY_FLOOR), Classification::SupercriticalStable);
    assert_eq!(Classification::SupercriticalStable.label(), "supercritical-stable");
}

#[test]
fn no_resonance_at_the_example() {
    let ctx = hopf_context(&figure1(), &point(0)).unwrap();
    let zero = ctx.det(C64::new(0.0, 0.0)).unwrap().norm();
    let double = ctx.det(ctx.i_omega() * 2.0).unwrap().norm();
    assert!(zero > 1e3 * RESONANCE_FLOOR && double > 1e3 * RESONANCE_FLOOR);
}

#[test]
fn invalid_points_are_rejected() {
    let mut pt = point(0);
    pt.residual = 1.0;
    assert!(matches!(hopf_context(&figure1(), &pt), Err(Error::NoCrossing { .. })));
    let mut pt = point(0);
    pt.tau_k += 0.1;
    assert!(matches!(hopf_context(&figure1(), &pt), Err(Error::NoCrossing { .. })));
}

#[test]
fn refinement_does_not_move_the_coefficients() {
    let c = reduced_coeffs(&figure1()).unwrap();
    let pt = point(0);
    let refined = refine_root(C64::new(1e-4, pt.omega0 * 1.01), pt.tau_k, &c).unwrap().root;
    let alt = HopfPoint {
        omega0: refined.im,
        ..pt
    };
    let a = analyze(&figure1(), &pt, NormalFormOptions::default()).unwrap();
    let b = analyze(&figure1(), &alt, NormalFormOptions::default()).unwrap();
    assert!(close(b.c1, a.c1, 1e-6));
    assert!(close(b.a1, a.a1, 1e-6));
}

#[test]
fn later_crossings_share_the_pattern() {
    for k in 1..=3 {
        let r = analyze(&figure1(), &point(k), NormalFormOptions::default()).unwrap();
        assert_eq!(r.k, k);
        assert!(r.iota1 > 0.0, "k={k}");
        assert!(r.iota1.is_finite() && r.iota2.is_finite());
    }
}
