// SPDX-License-Identifier: MIT OR Apache-2.0

//! Transcription of the assembled closed-form normal-form coefficients.
//!
//! Each function below evaluates one display exactly as written, in terms
//! of the quantities held by a [`HopfContext`]. The frequency is the signed
//! `ω` of the context, so evaluating on a mirrored context re-evaluates the
//! display at `−iω_k`.
//!
//! Notation shared by all displays:
//!
//! | symbol | value |
//! |--------|-------|
//! | `r`    | `iω + τ` |
//! | `rm`   | `iω + μτ` |
//! | `rb`   | `−iω + τ` |
//! | `rbm`  | `−iω + μτ` |
//! | `em`, `ep` | `e^{−iω}`, `e^{iω}` |
//! | `dDp`, `dDm` | `d det Δ/dλ` at `±iω` |
//!
//! Known defect: the printed `c₂₂₁₀` is not the conjugate twin of the
//! printed `c₃₃₁₀` (the pair must satisfy `c₃₃₁₀ = conj c₂₂₁₀` because the
//! second-order form has real coefficients). [`c2210`] therefore evaluates
//! the `c₃₃₁₀` display at the opposite frequency, which is the conjugate-
//! consistent form and agrees with the multilinear reduction to rounding.
//! The printed expression stays available as [`c2210_as_printed`].

use serde::Serialize;

use super::{exp_factors, ExpReading, HopfContext, ProfilePair, RESONANCE_FLOOR};
use crate::error::{Error, Result};
use crate::expsum::ExpSum;
use crate::scalar::{cx, imag_unit, real, Cx, Scalar};

/// Shorthand values shared by the displays.
struct Sym<T: Scalar> {
    i: Cx<T>,
    w: T,
    t: T,
    mu: T,
    eta: T,
    x: T,
    lam: T,
    r: Cx<T>,
    rm: Cx<T>,
    rb: Cx<T>,
    rbm: Cx<T>,
    em: Cx<T>,
    ep: Cx<T>,
    pp: Cx<T>,
    pm: Cx<T>,
    ddp: Cx<T>,
    ddm: Cx<T>,
}

impl<T: Scalar> Sym<T> {
    fn new(ctx: &HopfContext<T>) -> Self {
        let i = imag_unit::<T>();
        let w = ctx.omega;
        let t = ctx.tau();
        let mu = ctx.params.mu;
        let iw = i * w;
        Self {
            i,
            w,
            t,
            mu,
            eta: ctx.params.eta,
            x: ctx.coeffs.xi,
            lam: ctx.params.lambda,
            r: iw + t,
            rm: iw + mu * t,
            rb: -iw + t,
            rbm: -iw + mu * t,
            em: (-iw).exp(),
            ep: iw.exp(),
            pp: ctx.p_plus,
            pm: ctx.p_minus,
            ddp: ctx.d_delta_plus,
            ddm: ctx.d_delta_minus,
        }
    }

    fn re(&self, v: f64) -> Cx<T> {
        real(T::lit(v))
    }
}

/// The three second-order boundary coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L2Coefficients<T: Scalar = f64> {
    pub c2210: Cx<T>,
    pub c2310: Cx<T>,
    pub c3310: Cx<T>,
}

/// `c₂₂₁₀` as printed:
/// `2τe^{−iω}(ξ+1−ξe^{−iω}) / ((−iμτ+ω) r² (ξ+1)²) · [p₊e^{iω}(iτ−ω) − ω + iμτ]`.
pub fn c2210_as_printed<T: Scalar>(ctx: &HopfContext<T>) -> Cx<T> {
    let s = Sym::new(ctx);
    let (i, w, t, x) = (s.i, real(s.w), real(s.t), real(s.x));
    let one = s.re(1.0);
    let two = s.re(2.0);
    two * t * s.em * (x + one - x * s.em) / ((-i * s.mu * s.t + w) * s.r * s.r * (x + one) * (x + one))
        * (s.pp * s.ep * (i * t - w) - w + i * s.mu * s.t)
}

/// `c₃₃₁₀ = 2τ(ξ+1−ξe^{iω})(e^{iω}(iω−μτ) − p₋(iω−τ)) / ((iω−μτ)(iτ+ω)²(ξ+1)²)`.
pub fn c3310<T: Scalar>(ctx: &HopfContext<T>) -> Cx<T> {
    let s = Sym::new(ctx);
    c3310_at(&s, s.w, s.ep, s.pm)
}

fn c3310_at<T: Scalar>(s: &Sym<T>, w: T, ep: Cx<T>, pm: Cx<T>) -> Cx<T> {
    let i = s.i;
    let (t, x) = (real(s.t), real(s.x));
    let one = s.re(1.0);
    let two = s.re(2.0);
    let iw = i * w;
    two * t * (x + one - x * ep) * (ep * (iw - s.mu * s.t) - pm * (iw - t))
        / ((iw - s.mu * s.t) * (i * t + w) * (i * t + w) * (x + one) * (x + one))
}

/// Conjugate-consistent `c₂₂₁₀`: the `c₃₃₁₀` display at `ω → −ω`
/// (so `e^{iω} → e^{−iω}` and `p₋ → p₊`).
pub fn c2210<T: Scalar>(ctx: &HopfContext<T>) -> Cx<T> {
    let s = Sym::new(ctx);
    c3310_at(&s, -s.w, s.em, s.pp)
}

/// `c₂₃₁₀ = −τ{ 1/(ξ+1)·((e^{−iω}+e^{iω})/(ω²+τ²) − p₊/((−iμτ+ω)(iτ+ω)) + p₋/((iω−μτ)(iω+τ)))
///            − ξ/(ξ+1)²·(2/(ω²+τ²) − p₊e^{iω}/((−iμτ+ω)(iτ+ω)) + p₋e^{−iω}/((iω−μτ)(iω+τ))) }`.
pub fn c2310<T: Scalar>(ctx: &HopfContext<T>) -> Cx<T> {
    let s = Sym::new(ctx);
    let (i, w, t, x) = (s.i, real(s.w), real(s.t), real(s.x));
    let one = s.re(1.0);
    let two = s.re(2.0);
    let n2 = w * w + t * t;
    let d_plus = (-i * s.mu * s.t + w) * (i * t + w);
    let d_minus = (i * w - s.mu * s.t) * (i * w + t);
    -t * (one / (x + one) * ((s.em + s.ep) / n2 - s.pp / d_plus + s.pm / d_minus)
        - x / ((x + one) * (x + one)) * (two / n2 - s.pp * s.ep / d_plus + s.pm * s.em / d_minus))
}

/// All three boundary coefficients.
pub fn l2_coefficients<T: Scalar>(ctx: &HopfContext<T>) -> L2Coefficients<T> {
    L2Coefficients {
        c2210: c2210(ctx),
        c2310: c2310(ctx),
        c3310: c3310(ctx),
    }
}

/// The three second-order profile pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiProfiles<T: Scalar = f64> {
    pub psi22: ProfilePair<T>,
    pub psi23: ProfilePair<T>,
    pub psi33: ProfilePair<T>,
}

/// One `ψ` pair: `½c · ( profile at λ / det Δ(λ) − residue terms )`, with
/// the susceptible component weighted by `(ητ − (λ+τ))/(λ+τ)`, `p₊`, `p₋`.
fn psi_pair<T: Scalar>(
    s: &Sym<T>,
    c: Cx<T>,
    lambda: Cx<T>,
    det: Cx<T>,
    div_plus: Cx<T>,
    div_minus: Cx<T>,
) -> Result<ProfilePair<T>> {
    let h = c * T::lit(0.5);
    let iw = s.i * s.w;
    let lead = h / det;
    let weight = (real(s.eta * s.t) - (lambda + s.t)) / (lambda + s.t);
    let plus = -h / (s.ddp * div_plus);
    let minus = -h / (s.ddm * div_minus);
    let first = ExpSum::from_terms([
        (lead, lambda + s.t),
        (plus, iw + s.t),
        (minus, -iw + s.t),
    ])?;
    let second = ExpSum::from_terms([
        (lead * weight, lambda + s.mu * s.t),
        (plus * s.pp, iw + s.mu * s.t),
        (minus * s.pm, -iw + s.mu * s.t),
    ])?;
    Ok(ProfilePair { first, second })
}

/// `ψ₂₂`, `ψ₂₃`, `ψ₃₃` after checking non-resonance at `0` and `±2iω`.
pub fn psi_profiles<T: Scalar>(ctx: &HopfContext<T>, l2: &L2Coefficients<T>) -> Result<PsiProfiles<T>> {
    let s = Sym::new(ctx);
    let iw = s.i * s.w;
    let zero = cx(T::zero(), T::zero());
    let det2p = ctx.det(iw * T::lit(2.0))?;
    let det0 = ctx.det(zero)?;
    let det2m = ctx.det(-iw * T::lit(2.0))?;
    let floor = T::lit(RESONANCE_FLOOR);
    for (at, d) in [("2i omega_k", det2p), ("0", det0), ("-2i omega_k", det2m)] {
        if !(d.norm() > floor) {
            return Err(Error::Resonance {
                at,
                modulus: d.norm().as_f64(),
                floor: RESONANCE_FLOOR,
            });
        }
    }
    let three = T::lit(3.0);
    Ok(PsiProfiles {
        psi22: psi_pair(&s, l2.c2210, iw * T::lit(2.0), det2p, iw, iw * three)?,
        psi23: psi_pair(&s, l2.c2310, zero, det0, -iw, iw)?,
        psi33: psi_pair(&s, l2.c3310, -iw * T::lit(2.0), det2m, -iw * three, -iw)?,
    })
}

/// `ψ_{iω12}`, the `τ̂x₁` projector coefficient entering `A₁`.
pub fn psi_iomega12<T: Scalar>(ctx: &HopfContext<T>, reading: ExpReading) -> Cx<T> {
    let s = Sym::new(ctx);
    let (em, _) = exp_factors(ctx, reading);
    let (t, x, mu) = (real(s.t), real(s.x), real(s.mu));
    let one = s.re(1.0);
    let r2 = s.r * s.r;
    let rm2 = s.rm * s.rm;
    let k = x * t / (s.rm * (x + one));
    t / s.ddp
        * ((one + k) * (one / r2 - x * em / (r2 * (x + one)) + mu * x * s.pp / (rm2 * (x + one)))
            + k * (real(s.eta - T::one()) / r2 + x * em / (r2 * (x + one)) - mu * x * s.pp / (rm2 * (x + one))))
}

/// `ψ_{iω34}`, the `τ̂x₂` projector coefficient entering `A₂`.
pub fn psi_iomega34<T: Scalar>(ctx: &HopfContext<T>, reading: ExpReading) -> Cx<T> {
    let s = Sym::new(ctx);
    let (em, ep) = exp_factors(ctx, reading);
    let (i, w, t, x, mu) = (s.i, real(s.w), real(s.t), real(s.x), real(s.mu));
    let one = s.re(1.0);
    let two = s.re(2.0);
    let iw = i * w;
    let k = t * x / (s.rm * (x + one));
    let pair_tau = one / (iw + t) + one / (iw - t);
    let pair_exp = em / (iw + t) + ep / (iw - t);
    let pair_mu = one / (iw + mu * t) + one / (iw - mu * t);
    let half = i / (two * w);
    let first = half * pair_tau - half * x / (x + one) * pair_exp + half * x * mu * s.pm / (x + one) * pair_mu;
    let second = half * real(s.eta - T::one()) * pair_tau + half * x / (x + one) * pair_exp
        - half * x * mu * s.pm / (x + one) * pair_mu;
    t / s.ddp * ((k + one) * first + k * second)
}

/// `a₂₀`, `a₁₁`, `a₀₂`, `A₁` and the audit-only `A₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticCoeffs<T: Scalar = f64> {
    pub a20: Cx<T>,
    pub a11: Cx<T>,
    pub a02: Cx<T>,
    pub a1: Cx<T>,
    pub a2: Cx<T>,
    /// `a₂₀ · dDp`, `a₀₂ · dDp`: the braces of the two displays, which are
    /// conjugate twins.
    pub a20_brace: Cx<T>,
    pub a02_brace: Cx<T>,
}

/// Second-order normal-form coefficients and the linear coefficient `A₁`.
pub fn quadratic_normal_coeffs<T: Scalar>(ctx: &HopfContext<T>, reading: ExpReading) -> QuadraticCoeffs<T> {
    let s = Sym::new(ctx);
    let (t, x, mu, eta) = (real(s.t), real(s.x), real(s.mu), real(s.eta));
    let one = s.re(1.0);
    let two = s.re(2.0);
    let x1 = x + one;
    let (pp, pm, em, ep) = (s.pp, s.pm, s.em, s.ep);
    let (r, rm, rb, rbm) = (s.r, s.rm, s.rb, s.rbm);

    let a20_brace = t / x1 / r * (pp / rm - em / r) + t * x / (x1 * x1) * em / r * (em / r - pp / rm);
    let a11_brace = t / x1 * (one / r * (pm / rbm - ep / rb) + one / rb * (pp / rm - em / r))
        + t * x / (x1 * x1) * (ep / rb * (em / r - pp / rm) + em / r * (ep / rb - pm / rbm));
    let a02_brace = t / x1 / rb * (pm / rbm - ep / rb) + t * x / (x1 * x1) * ep / rb * (ep / rb - pm / rbm);

    // Λ + ξ(η − 1), which equals μ(1 + ξ) at the equilibrium.
    let lx = real(s.lam) + x * (eta - one);
    let k1 = one + lx * (one - mu * t) / (x1 * mu) - x * (one - t) / x1;
    let k2 = x / x1 + x * (one - t) / x1 - x * x * (one - t) / (x1 * x1);
    let k3 = t * x / x1 - two * x * x * (t - one) / (x1 * x1) + x * lx * (mu * t - one) / (mu * x1 * x1);
    let eta_term = eta * x * t / (rm * x1);

    let a1 = (k1 / r + k2 * pp / rm + k3 * em / r) / s.ddp + eta_term / r / s.ddp + psi_iomega12(ctx, reading);
    let a2 = (k1 / rb + k2 * pm / rbm + k3 * ep / rb) / s.ddp + eta_term / rb / s.ddp + psi_iomega34(ctx, reading);

    QuadraticCoeffs {
        a20: a20_brace / s.ddp,
        a11: a11_brace / s.ddp,
        a02: a02_brace / s.ddp,
        a1,
        a2,
        a20_brace,
        a02_brace,
    }
}

/// `C₀`, `C₁ = C₀ / dDp` and the labelled addends of `C₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubicCoefficient<T: Scalar = f64> {
    pub c0: Cx<T>,
    pub c1: Cx<T>,
    pub terms: Vec<(String, Cx<T>)>,
}

/// Assemble `C₀` term by term. Every `∫` and `∫β` is evaluated exactly on
/// the `ψ` exponential sums.
pub fn cubic_coefficient<T: Scalar>(
    ctx: &HopfContext<T>,
    quad: &QuadraticCoeffs<T>,
    psi: &PsiProfiles<T>,
) -> CubicCoefficient<T> {
    let s = Sym::new(ctx);
    let (i, w, t, x) = (s.i, s.w, real(s.t), real(s.x));
    let one = s.re(1.0);
    let two = s.re(2.0);
    let three = s.re(3.0);
    let four = s.re(4.0);
    let x1 = x + one;
    let (pp, pm, em, ep) = (s.pp, s.pm, s.em, s.ep);
    let (r, rm, rb, rbm) = (s.r, s.rm, s.rb, s.rbm);
    let iw = i * w;
    let (a20, a11) = (quad.a20, quad.a11);
    let a02b = quad.a02.conj();
    let a11b = quad.a11.conj();

    let tau = s.t;
    let int = |f: &ExpSum<T>| f.integral();
    let bint = |f: &ExpSum<T>| f.beta_integral(tau);
    let (p221, p222) = (&psi.psi22.first, &psi.psi22.second);
    let (p231, p232) = (&psi.psi23.first, &psi.psi23.second);

    let g1 = one / x1;
    let g2 = x / (x1 * x1);
    let terms: Vec<(&str, Cx<T>)> = vec![
        (
            "cubic-direct",
            t / (x1 * x1) * (one / rb * em / r * (em / r - pp / rm) - one / r * (pp / rm * ep / rb + pm / rbm * em / r)),
        ),
        ("cubic-direct-xi", x * t / (x1 * x1 * x1) * (em / r) * (em / r) * (pm / rbm - three * ep / rb)),
        ("a20-center", g1 * a20 / iw * (pp / rm / rb + one / r * pm / rbm - one / rb * em / r - one / r * ep / rb)),
        ("a11-center", g1 * two * a11 / iw * (-pp / rm / r + one / r * em / r)),
        ("a02bar-center", g1 * two * a02b / (three * iw) * (pm / rbm / rb + one / rb * ep / rb)),
        (
            "a11bar-center",
            g1 * a11b / iw * (one / r * pm / rbm + one / rb * pp / rm + one / r * ep / rb + one / rb * em / r),
        ),
        ("a20-center-xi", -g2 * a20 / iw * (pm / rbm * em / r + ep / rb * (pp / rm - two * em / r))),
        ("a11-center-xi", g2 * two * a11 / iw * (em / r * (em / r - pp / rm))),
        ("a02bar-center-xi", -g2 * two * a02b / (three * iw) * (ep / rb * (pm / rbm - ep / rb))),
        ("a11bar-center-xi", -g2 * a11b / iw * (pm / rbm * em / r + ep / rb * (pp / rm - two * em / r))),
        ("psi23-beta1-plus-2", g1 * two / r * (bint(p231) + int(p232))),
        ("psi23-1", g1 * two * pp / rm * int(p231)),
        ("psi22-beta1-plus-2", g1 / rb * (bint(p221) + int(p222))),
        ("psi22-1", g1 * pm / rbm * int(p221)),
        ("psi23-1-exp", g1 * two * em / r * int(p231)),
        ("psi22-1-exp", g1 * ep / rb * int(p221)),
        ("psi23-2-xi", -g2 * two / r * int(p232)),
        ("psi23-beta1-xi", -g2 * two * pp / rm * bint(p231)),
        ("psi22-2-xi", -g2 / rb * int(p222)),
        ("psi22-beta1-xi", -g2 * pm / rbm * bint(p221)),
        ("psi23-beta1-exp-xi", g2 * four * em / r * bint(p231)),
        ("psi22-beta1-exp-xi", g2 * two * ep / rb * bint(p221)),
    ];
    let c0 = terms
        .iter()
        .fold(cx(T::zero(), T::zero()), |acc, (_, v)| acc + *v);
    CubicCoefficient {
        c0,
        c1: c0 / s.ddp,
        terms: terms.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    }
}
