// SPDX-License-Identifier: MIT OR Apache-2.0

//! Normal-form coefficients from the multilinear expansion of the
//! incidence term.
//!
//! The only nonlinearity of the scaled model is the boundary flux
//! `τ f(S, P, J)` with `f = S P/(1 + J)`, fed into the infected boundary
//! with sign `+` and into the susceptible balance with sign `−`. Writing
//! `m(u) = (S(u), P(u), J(u))` for the three functionals of a profile pair
//! `u = (infected, susceptible)`,
//!
//! ```text
//! S(u) = ∫ u₂,   P(u) = ∫ u₁,   J(u) = ∫ β u₁,
//! ```
//!
//! the second and third derivatives of the vector field are
//! `B(x, y) = τ D²f[m(x), m(y)]·(1, −1)` and
//! `C(x, y, z) = τ D³f[m(x), m(y), m(z)]·(1, −1)`.
//!
//! With `q = (b₁, b₂)`, the projection `ℓ` onto `q` along the rest of the
//! spectrum, and the resolvent `R(λ)` of a boundary input, the coefficients
//! are
//!
//! ```text
//! a₂₀ = ½ℓ(B(q,q)),  a₁₁ = ℓ(B(q,q̄)),  a₀₂ = ½ℓ(B(q̄,q̄)),
//! h₂₀ = R(2iω) B(q,q),   h₁₁ = R(0) B(q,q̄),
//! C₁  = ℓ( ½C(q,q,q̄) + ½B(q̄,h₂₀) + B(q,h₁₁) ),
//! A₁  = dλ/dτ = −∂_τ f̃ / ∂_λ f̃   at λ = iω.
//! ```
//!
//! `ℓ` is evaluated through the adjugate of `Δ(iω)`, and `R(λ)δ` is the pair
//! `(v₁e^{−(λ+τ)a}, v₂e^{−(λ+μτ)a})` with `v = Δ(λ)⁻¹δ`.

use serde::Serialize;

use super::{HopfContext, ProfilePair};
use crate::error::Result;
use crate::expsum::ExpSum;
use crate::scalar::{cx, Cx, Scalar};
use crate::spectral;

/// The three functionals `(S, P, J)` of a profile pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Functionals<T: Scalar = f64> {
    pub s: Cx<T>,
    pub p: Cx<T>,
    pub j: Cx<T>,
}

/// `m(u)` for a profile pair at delay `tau`.
pub fn functionals<T: Scalar>(u: &ProfilePair<T>, tau: T) -> Functionals<T> {
    Functionals {
        s: u.second.integral(),
        p: u.first.integral(),
        j: u.first.beta_integral(tau),
    }
}

/// Partial derivatives of `f(S, P, J) = S P / (1 + J)` at `(1+ξ, ξ, ξ)`.
#[derive(Debug, Clone, Copy)]
struct Incidence<T: Scalar> {
    s: T,
    p: T,
    /// `dᵏ/dJᵏ (1+J)⁻¹` for `k = 0..=3`.
    g: [T; 4],
}

impl<T: Scalar> Incidence<T> {
    fn at(xi: T) -> Self {
        let one = T::one();
        let inv = one / (one + xi);
        Self {
            s: one + xi,
            p: xi,
            g: [
                inv,
                -inv * inv,
                T::lit(2.0) * inv * inv * inv,
                -T::lit(6.0) * inv * inv * inv * inv,
            ],
        }
    }

    fn d2(&self, x: &Functionals<T>, y: &Functionals<T>) -> Cx<T> {
        let [g0, g1, g2, _] = self.g;
        (x.s * y.p + y.s * x.p) * g0
            + (x.s * y.j + y.s * x.j) * (self.p * g1)
            + (x.p * y.j + y.p * x.j) * (self.s * g1)
            + x.j * y.j * (self.s * self.p * g2)
    }

    fn d3(&self, x: &Functionals<T>, y: &Functionals<T>, z: &Functionals<T>) -> Cx<T> {
        let [_, g1, g2, g3] = self.g;
        let v = [x, y, z];
        let mut spj = cx(T::zero(), T::zero());
        for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
            spj = spj + v[a].s * v[b].p * v[c].j;
        }
        let sjj = x.s * y.j * z.j + y.s * x.j * z.j + z.s * x.j * y.j;
        let pjj = x.p * y.j * z.j + y.p * x.j * z.j + z.p * x.j * y.j;
        spj * g1 + sjj * (self.p * g2) + pjj * (self.s * g2) + x.j * y.j * z.j * (self.s * self.p * g3)
    }
}

/// Output of the reduction route.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedNormalForm<T: Scalar = f64> {
    pub a20: Cx<T>,
    pub a11: Cx<T>,
    pub a02: Cx<T>,
    /// `τD²f(q,q)`, `τD²f(q,q̄)`, `τD²f(q̄,q̄)`; the counterparts of the
    /// published `c₂₂₁₀`, `c₂₃₁₀`, `c₃₃₁₀`.
    pub b_qq: Cx<T>,
    pub b_qqbar: Cx<T>,
    pub b_qbarqbar: Cx<T>,
    pub h20: ProfilePair<T>,
    pub h11: ProfilePair<T>,
    #[serde(rename = "A1")]
    pub a1: Cx<T>,
    #[serde(rename = "C0")]
    pub c0: Cx<T>,
    #[serde(rename = "C1")]
    pub c1: Cx<T>,
}

/// `(λ − 𝒜)⁻¹` applied to the boundary input `delta` at delay `ctx.tau()`.
pub fn resolvent<T: Scalar>(ctx: &HopfContext<T>, lambda: Cx<T>, delta: [Cx<T>; 2]) -> Result<ProfilePair<T>> {
    let tau = ctx.tau();
    let m = spectral::delta_matrix(lambda, tau, &ctx.params, &ctx.coeffs)?;
    let v = spectral::solve2(&m, delta);
    Ok(ProfilePair {
        first: ExpSum::single(v[0], lambda + tau)?,
        second: ExpSum::single(v[1], lambda + ctx.params.mu * tau)?,
    })
}

/// Spectral projection coefficient of a boundary input onto `q`:
/// `ℓ(δ) = (Δ*(iω) δ)₁ / (d det Δ/dλ)(iω)` with `Δ*` the adjugate.
pub fn left_functional<T: Scalar>(ctx: &HopfContext<T>, delta: [Cx<T>; 2]) -> Result<Cx<T>> {
    let m = spectral::delta_matrix(ctx.i_omega(), ctx.tau(), &ctx.params, &ctx.coeffs)?;
    // First row of the adjugate of [[a, b], [c, d]] is (d, −b).
    let first = m[1][1] * delta[0] - m[0][1] * delta[1];
    Ok(first / ctx.d_delta_plus)
}

fn boundary<T: Scalar>(value: Cx<T>) -> [Cx<T>; 2] {
    [value, -value]
}

/// Run the reduction at a context.
pub fn reduce<T: Scalar>(ctx: &HopfContext<T>) -> Result<ReducedNormalForm<T>> {
    let tau = ctx.tau();
    let f = Incidence::at(ctx.coeffs.xi);
    let q = ctx.q();
    let qb = ctx.q_bar();
    let mq = functionals(&q, tau);
    let mqb = functionals(&qb, tau);
    let half = T::lit(0.5);

    let b_qq = f.d2(&mq, &mq) * tau;
    let b_qqbar = f.d2(&mq, &mqb) * tau;
    let b_qbarqbar = f.d2(&mqb, &mqb) * tau;

    let a20 = left_functional(ctx, boundary(b_qq))? * half;
    let a11 = left_functional(ctx, boundary(b_qqbar))?;
    let a02 = left_functional(ctx, boundary(b_qbarqbar))? * half;

    let iw = ctx.i_omega();
    let h20 = resolvent(ctx, iw * T::lit(2.0), boundary(b_qq))?;
    let h11 = resolvent(ctx, cx(T::zero(), T::zero()), boundary(b_qqbar))?;
    let m20 = functionals(&h20, tau);
    let m11 = functionals(&h11, tau);

    let c0 = (f.d3(&mq, &mq, &mqb) * half + f.d2(&mqb, &m20) * half + f.d2(&mq, &m11)) * tau;
    let c1 = left_functional(ctx, boundary(c0))?;

    let a1 = -spectral::f_tilde_dtau(iw, tau, &ctx.coeffs) / spectral::f_tilde_prime(iw, tau, &ctx.coeffs);

    Ok(ReducedNormalForm {
        a20,
        a11,
        a02,
        b_qq,
        b_qqbar,
        b_qbarqbar,
        h20,
        h11,
        a1,
        c0,
        c1,
    })
}
