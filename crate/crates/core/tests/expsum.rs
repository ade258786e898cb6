// SPDX-License-Identifier: MIT OR Apache-2.0

use agehopf::expsum::{ExpSum, RATE_MERGE_TOL};
use agehopf::Error;
use approx::assert_relative_eq;
use num_complex::Complex64 as C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Composite Simpson on `[lo, hi]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> C64, lo: f64, hi: f64, n: usize) -> C64 {
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(lo + k as f64 * h) * w;
    }
    acc * (h / 3.0)
}

fn sample() -> ExpSum<f64> {
    ExpSum::from_terms([(c(1.5, -0.5), c(2.0, 3.0)), (c(-0.25, 0.0), c(0.7, 0.0)), (c(0.0, 2.0), c(4.0, -1.0))])
        .unwrap()
}

#[test]
fn closed_form_integrals_match_quadrature() {
    let f = sample();
    // The slowest rate is 0.7, so the tail beyond a = 80 is below e^{-56}.
    let oracle = simpson(|a| f.eval(a), 0.0, 80.0, 400_000);
    assert!((f.integral() - oracle).norm() < 1e-10);

    let tau: f64 = 6.0;
    // The kernel vanishes on [0, 1) and is e^τ beyond.
    let beta_oracle = simpson(|a| f.eval(a), 1.0, 81.0, 400_000) * tau.exp();
    assert!((f.beta_integral(tau) - beta_oracle).norm() < 1e-9 * beta_oracle.norm());
}

#[test]
fn beta_integral_keeps_large_kernel_height_finite() {
    let tau = 250.0;
    let f = ExpSum::single(c(1.0, 0.0), c(tau, 0.0)).unwrap();
    // ∫₁^∞ e^{τ} e^{−τa} da = 1/τ exactly.
    let v = f.beta_integral(tau);
    assert!(v.re.is_finite());
    assert_relative_eq!(v.re, 1.0 / tau, max_relative = 1e-14);
}

#[test]
fn product_rates_add() {
    let tau = 24.0;
    let w = 0.12 * tau;
    let b1 = ExpSum::single(c(0.3, 0.1), c(tau, w)).unwrap();
    let b3 = b1.conj();
    let prod = b1.mul(&b3);
    assert_eq!(prod.len(), 1);
    assert_relative_eq!(prod.terms()[0].rate.re, 2.0 * tau);
    assert_eq!(prod.terms()[0].rate.im, 0.0);
    assert_relative_eq!(prod.terms()[0].coeff.re, 0.1, max_relative = 1e-14);

    let r = ExpSum::single(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let s = ExpSum::single(c(1.0, 0.0), c(2.5, 0.0)).unwrap();
    assert_eq!(r.mul(&s), ExpSum::single(c(1.0, 0.0), c(3.5, 0.0)).unwrap());
    for a in [0.0, 0.3, 2.0] {
        assert!((prod.eval(a) - b1.eval(a) * b3.eval(a)).norm() < 1e-15);
    }
}

#[test]
fn cancellation_leaves_the_zero_sum() {
    let f = sample();
    let minus = f.scale(c(-1.0, 0.0));
    assert!((&f + &minus).is_empty());
    assert!((&f - &f).is_empty());
    assert_eq!(ExpSum::<f64>::zero().integral(), c(0.0, 0.0));
    assert_eq!(ExpSum::<f64>::default(), ExpSum::zero());
}

#[test]
fn nearby_rates_merge() {
    let f = ExpSum::from_terms([(c(1.0, 0.0), c(1.0, 0.0)), (c(2.0, 0.0), c(1.0 + 0.1 * RATE_MERGE_TOL, 0.0))]).unwrap();
    assert_eq!(f.len(), 1);
    assert_eq!(f.terms()[0].coeff, c(3.0, 0.0));
}

#[test]
fn integrals_are_linear() {
    let f = sample();
    let g = ExpSum::from_terms([(c(0.4, 0.4), c(1.0, -2.0)), (c(1.0, 0.0), c(0.7, 0.0))]).unwrap();
    let (x, y) = (c(0.3, -1.2), c(-2.0, 0.5));
    let h = &(&f * x) + &(&g * y);
    assert!((h.integral() - (f.integral() * x + g.integral() * y)).norm() < 1e-14);
    assert!((h.beta_integral(3.0) - (f.beta_integral(3.0) * x + g.beta_integral(3.0) * y)).norm() < 1e-14);
}

#[test]
fn divergent_rates_are_rejected() {
    for rate in [c(0.0, 1.0), c(-1.0, 0.0), c(f64::NAN, 0.0), c(1.0, f64::INFINITY)] {
        assert!(matches!(ExpSum::single(c(1.0, 0.0), rate), Err(Error::Divergent { .. })));
    }
}

#[test]
fn evaluation_and_conjugation() {
    let f = sample();
    let at0: C64 = f.terms().iter().map(|t| t.coeff).sum();
    assert!((f.eval(0.0) - at0).norm() < 1e-15);
    for a in [0.0, 0.5, 3.0] {
        assert!((f.conj().eval(a) - f.eval(a).conj()).norm() < 1e-15);
    }
    assert!((f.conj().integral() - f.integral().conj()).norm() < 1e-15);
    assert!(f.eval(60.0).norm() < 1e-18);
    assert!(f.approx_eq(&f.conj().conj(), 0.0));
    assert_eq!(f.max_term_distance(&f.scale(c(1.0, 1e-3))).map(|d| d > 0.0), Some(true));
    assert_eq!(f.max_term_distance(&ExpSum::single(c(1.0, 0.0), c(9.0, 0.0)).unwrap()), None);
}
