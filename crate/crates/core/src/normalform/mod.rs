// SPDX-License-Identifier: MIT OR Apache-2.0

//! Normal form of the Hopf bifurcation at a critical delay.
//!
//! On the center manifold the dynamics reduce to
//!
//! ```text
//! ρ' = ι₁ τ̂ ρ + ι₂ ρ³,    ι₁ = Re A₁,  ι₂ = Re C₁,   τ̂ = τ − τ_k,
//! ```
//!
//! so the bifurcation is supercritical when `ι₁ι₂ < 0` and the bifurcating
//! orbit is stable when `ι₂ < 0`. Two independent evaluations of `(A₁, C₁)`
//! are provided:
//!
//! * [`published`] transcribes the assembled closed-form coefficient
//!   displays of the normal-form literature for this model (second-order
//!   coefficients `c₂₂₁₀, c₂₃₁₀, c₃₃₁₀`, the `ψ` profiles, `a₂₀, a₁₁, a₀₂`,
//!   `A₁`, `C₀`, `C₁`);
//! * [`reduction`] recomputes the same quantities from the multilinear
//!   expansion of the incidence term and the exact boundary resolvent, with
//!   `A₁ = dλ/dτ` obtained by implicit differentiation of the characteristic
//!   equation.
//!
//! The two agree on every second-order quantity once one transcription
//! defect in `c₂₂₁₀` is repaired (see [`published::c2210_as_printed`]). The
//! assembled `A₁` and `C₀` displays do not agree with the reduction, and the
//! reduction is the one confirmed by direct simulation, so it is the default
//! [`Route`]. The published values are always reported alongside for audit.
//!
//! Every quantity is a function of the signed frequency stored in
//! [`HopfContext`]. Building the context with [`Orientation::Mirrored`]
//! re-evaluates the entire pipeline at `−iω_k`, which is what the
//! conjugation audit in [`audit`] compares against.

pub mod audit;
pub mod published;
pub mod reduction;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expsum::ExpSum;
use crate::model::{reduced_coeffs, ModelParams, ReducedCoeffs};
use crate::scalar::{cx, imag_unit, real, Cx, Scalar};
use crate::spectral::{self, HopfPoint};

/// Residual a Hopf point must satisfy before a context is built on it.
pub const POINT_RESIDUAL_MAX: f64 = 1e-10;
/// Floor on `|ι₁|`, `|ι₂|` below which the classification is degenerate.
pub const DEGENERACY_FLOOR: f64 = 1e-12;
/// Floor on `|det Δ(0)|`, `|det Δ(±2iω_k)|`.
pub const RESONANCE_FLOOR: f64 = 1e-8;

/// Sign of the frequency at which the pipeline is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Evaluate at `+iω_k`.
    Forward,
    /// Evaluate every formula at `−iω_k`.
    Mirrored,
}

/// How the age-looking factor `e^{∓iω_k·}` inside the scalar projector
/// coefficients `ψ_{iω12}`, `ψ_{iω34}` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpReading {
    /// The scalar `e^{∓iω_k}`, i.e. the kernel integral
    /// `∫β e^{−(±iω+τ)a} da · (±iω+τ)`. This is the default.
    Scalar,
    /// The kernel-weighted first age moment: `e^{∓iω_k}` is replaced by
    /// `e^{∓iω_k}(1 + (±iω_k + τ_k))`, which is what the factor becomes if
    /// the dot stands for an age variable integrated against `β`,
    /// `∫β a e^{−ra} da = e^{τ−r}(1 + r)/r²`.
    BetaWeightedAge,
}

/// Which evaluation supplies the reported `A₁`, `C₀`, `C₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Reduction,
    Published,
}

/// Options of [`analyze`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormalFormOptions {
    pub route: Route,
    pub reading: ExpReading,
}

impl Default for NormalFormOptions {
    fn default() -> Self {
        Self {
            route: Route::Reduction,
            reading: ExpReading::Scalar,
        }
    }
}

/// An exponential-sum pair `(infected component, susceptible component)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilePair<T: Scalar = f64> {
    pub first: ExpSum<T>,
    pub second: ExpSum<T>,
}

impl<T: Scalar> ProfilePair<T> {
    pub fn conj(&self) -> Self {
        Self {
            first: self.first.conj(),
            second: self.second.conj(),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.first.approx_eq(&other.first, tol) && self.second.approx_eq(&other.second, tol)
    }

    /// Largest coefficient distance to `other`, `None` if the rate sets differ.
    pub fn max_term_distance(&self, other: &Self) -> Option<T> {
        Some(
            self.first
                .max_term_distance(&other.first)?
                .max(self.second.max_term_distance(&other.second)?),
        )
    }
}

/// Everything the coefficient formulas need at one Hopf point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfContext<T: Scalar = f64> {
    pub params: ModelParams<T>,
    pub coeffs: ReducedCoeffs<T>,
    pub point: HopfPoint<T>,
    pub orientation: Orientation,
    /// Signed frequency on the `λ` scale: `+τ_kω₀` or `−τ_kω₀`.
    pub omega: T,
    /// `d det Δ/dλ` at `iω`.
    pub d_delta_plus: Cx<T>,
    /// `d det Δ/dλ` at `−iω`.
    pub d_delta_minus: Cx<T>,
    /// `p₊ = (ητ − (iω+τ))/(iω+τ)`.
    pub p_plus: Cx<T>,
    /// `p₋ = (ητ − (−iω+τ))/(−iω+τ)`.
    pub p_minus: Cx<T>,
    /// `b₁ = e^{−(iω+τ)a}`.
    pub b1: ExpSum<T>,
    /// `b₂ = p₊ e^{−(iω+μτ)a}`.
    pub b2: ExpSum<T>,
    /// `b₃ = e^{−(−iω+τ)a}`.
    pub b3: ExpSum<T>,
    /// `b₄ = p₋ e^{−(−iω+μτ)a}`.
    pub b4: ExpSum<T>,
    /// `|det Δ(iω)|`, zero up to rounding at a genuine crossing.
    pub det_at_root: T,
}

fn p_of<T: Scalar>(eta: T, tau: T, r: Cx<T>) -> Cx<T> {
    (real(eta * tau) - r) / r
}

/// Build the context at a Hopf point (forward orientation).
pub fn hopf_context<T: Scalar>(params: &ModelParams<T>, point: &HopfPoint<T>) -> Result<HopfContext<T>> {
    hopf_context_oriented(params, point, Orientation::Forward)
}

/// Build the context in the requested orientation.
pub fn hopf_context_oriented<T: Scalar>(
    params: &ModelParams<T>,
    point: &HopfPoint<T>,
    orientation: Orientation,
) -> Result<HopfContext<T>> {
    let coeffs = reduced_coeffs(params)?;
    if !(point.residual < T::tol(POINT_RESIDUAL_MAX)) {
        return Err(Error::NoCrossing {
            reason: format!(
                "Hopf point residual {} exceeds {}",
                point.residual.as_f64(),
                POINT_RESIDUAL_MAX
            ),
        });
    }
    let tau = point.tau_k;
    let omega = match orientation {
        Orientation::Forward => point.omega_k(),
        Orientation::Mirrored => -point.omega_k(),
    };
    let iw = cx(T::zero(), omega);
    let det_at_root = spectral::det_delta(iw, tau, params, &coeffs)?.norm();
    if !(det_at_root < T::tol(POINT_RESIDUAL_MAX)) {
        return Err(Error::NoCrossing {
            reason: format!("|det Delta(i omega_k)| = {} is not a root", det_at_root.as_f64()),
        });
    }
    let d_delta_plus = spectral::d_det_delta(iw, tau, params, &coeffs)?;
    let d_delta_minus = spectral::d_det_delta(-iw, tau, params, &coeffs)?;
    let r = iw + tau;
    let rb = -iw + tau;
    let p_plus = p_of(params.eta, tau, r);
    let p_minus = p_of(params.eta, tau, rb);
    let one = real(T::one());
    let mu_tau = params.mu * tau;
    Ok(HopfContext {
        params: *params,
        coeffs,
        point: *point,
        orientation,
        omega,
        d_delta_plus,
        d_delta_minus,
        p_plus,
        p_minus,
        b1: ExpSum::single(one, r)?,
        b2: ExpSum::single(p_plus, iw + mu_tau)?,
        b3: ExpSum::single(one, rb)?,
        b4: ExpSum::single(p_minus, -iw + mu_tau)?,
        det_at_root,
    })
}

impl<T: Scalar> HopfContext<T> {
    /// The same point evaluated at the opposite frequency.
    pub fn mirrored(&self) -> Result<Self> {
        let flip = match self.orientation {
            Orientation::Forward => Orientation::Mirrored,
            Orientation::Mirrored => Orientation::Forward,
        };
        hopf_context_oriented(&self.params, &self.point, flip)
    }

    /// Test hook: shift `p₋` by `delta` without touching `p₊`, breaking the
    /// conjugate pairing on purpose. Used as a negative control for the
    /// conjugation audit.
    pub fn with_p_minus_perturbation(mut self, delta: Cx<T>) -> Result<Self> {
        self.p_minus = self.p_minus + delta;
        let iw = cx(T::zero(), self.omega);
        self.b4 = ExpSum::single(self.p_minus, -iw + self.params.mu * self.tau())?;
        Ok(self)
    }

    pub fn tau(&self) -> T {
        self.point.tau_k
    }

    pub fn i_omega(&self) -> Cx<T> {
        cx(T::zero(), self.omega)
    }

    /// `det Δ(λ)` at this point's delay.
    pub fn det(&self, lambda: Cx<T>) -> Result<Cx<T>> {
        spectral::det_delta(lambda, self.tau(), &self.params, &self.coeffs)
    }

    /// Eigenfunction pair `q = (b₁, b₂)`.
    pub fn q(&self) -> ProfilePair<T> {
        ProfilePair {
            first: self.b1.clone(),
            second: self.b2.clone(),
        }
    }

    /// Conjugate eigenfunction pair `q̄ = (b₃, b₄)`.
    pub fn q_bar(&self) -> ProfilePair<T> {
        ProfilePair {
            first: self.b3.clone(),
            second: self.b4.clone(),
        }
    }

    /// `|S(q)| = |∫b₂|`: converts the normal-form radius into the
    /// half peak-to-trough of `S(t)` (`S − S̄ ≈ 2ρ|S(q)| cos(·)`).
    pub fn s_amplitude_factor(&self) -> T {
        self.b2.integral().norm()
    }
}

/// Bifurcation type and orbit stability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    SupercriticalStable,
    SupercriticalUnstable,
    SubcriticalStable,
    SubcriticalUnstable,
    Degenerate,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Classification::SupercriticalStable => "supercritical-stable",
            Classification::SupercriticalUnstable => "supercritical-unstable",
            Classification::SubcriticalStable => "subcritical-stable",
            Classification::SubcriticalUnstable => "subcritical-unstable",
            Classification::Degenerate => "degenerate",
        }
    }
}

/// Supercritical iff `ι₁ι₂ < 0`; the orbit is stable iff `ι₂ < 0`;
/// degenerate when either value is below [`DEGENERACY_FLOOR`] in magnitude.
pub fn classify<T: Scalar>(iota1: T, iota2: T) -> Classification {
    let floor = T::lit(DEGENERACY_FLOOR);
    if !(iota1.abs() >= floor && iota2.abs() >= floor) {
        return Classification::Degenerate;
    }
    let stable = iota2 < T::zero();
    let supercritical = (iota1 < T::zero()) != (iota2 < T::zero());
    match (supercritical, stable) {
        (true, true) => Classification::SupercriticalStable,
        (true, false) => Classification::SupercriticalUnstable,
        (false, true) => Classification::SubcriticalStable,
        (false, false) => Classification::SubcriticalUnstable,
    }
}

/// The published-route coefficients and their classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublishedSummary<T: Scalar = f64> {
    pub a1: Cx<T>,
    pub a2: Cx<T>,
    pub c0: Cx<T>,
    pub c1: Cx<T>,
    pub iota1: T,
    pub iota2: T,
    pub classification: Classification,
    /// `c₂₂₁₀` exactly as printed, kept for the record.
    pub c2210_as_printed: Cx<T>,
    /// `ι₁` under each reading of the `e^{∓iω·}` factors.
    pub iota1_scalar_reading: T,
    pub iota1_beta_weighted_reading: T,
    /// `ι₂` is independent of the reading; both values are reported.
    pub iota2_scalar_reading: T,
    pub iota2_beta_weighted_reading: T,
}

/// Full normal-form outcome at one Hopf point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalFormResult<T: Scalar = f64> {
    pub k: usize,
    pub tau_k: T,
    pub omega_k: T,
    pub route: Route,
    pub reading: ExpReading,
    pub p_plus: Cx<T>,
    pub p_minus: Cx<T>,
    pub d_delta_plus: Cx<T>,
    pub a20: Cx<T>,
    pub a11: Cx<T>,
    pub a02: Cx<T>,
    pub c2210: Cx<T>,
    pub c2310: Cx<T>,
    pub c3310: Cx<T>,
    pub psi22: ProfilePair<T>,
    pub psi23: ProfilePair<T>,
    pub psi33: ProfilePair<T>,
    #[serde(rename = "A1")]
    pub a1: Cx<T>,
    #[serde(rename = "C0")]
    pub c0: Cx<T>,
    #[serde(rename = "C1")]
    pub c1: Cx<T>,
    pub iota1: T,
    pub iota2: T,
    pub classification: Classification,
    /// Predicted `ρ*²/τ̂ = −ι₁/ι₂` of the bifurcating orbit.
    pub radius_slope: T,
    pub published: PublishedSummary<T>,
    pub reduction: reduction::ReducedNormalForm<T>,
    /// Labelled addends of the published `C₀`.
    pub c0_terms: Vec<(String, Cx<T>)>,
}

/// Run both evaluation routes at `point` and assemble the result.
pub fn analyze<T: Scalar>(
    params: &ModelParams<T>,
    point: &HopfPoint<T>,
    options: NormalFormOptions,
) -> Result<NormalFormResult<T>> {
    let ctx = hopf_context(params, point)?;
    analyze_context(&ctx, options)
}

/// As [`analyze`] but on a prepared context (any orientation).
pub fn analyze_context<T: Scalar>(ctx: &HopfContext<T>, options: NormalFormOptions) -> Result<NormalFormResult<T>> {
    let l2 = published::l2_coefficients(ctx);
    let psi = published::psi_profiles(ctx, &l2)?;
    let quad = published::quadratic_normal_coeffs(ctx, options.reading);
    let cubic = published::cubic_coefficient(ctx, &quad, &psi);
    let other_reading = match options.reading {
        ExpReading::Scalar => ExpReading::BetaWeightedAge,
        ExpReading::BetaWeightedAge => ExpReading::Scalar,
    };
    let quad_other = published::quadratic_normal_coeffs(ctx, other_reading);
    let cubic_other = published::cubic_coefficient(ctx, &quad_other, &psi);
    let (scalar_q, scalar_c, beta_q, beta_c) = match options.reading {
        ExpReading::Scalar => (&quad, &cubic, &quad_other, &cubic_other),
        ExpReading::BetaWeightedAge => (&quad_other, &cubic_other, &quad, &cubic),
    };
    let red = reduction::reduce(ctx)?;

    let pub_iota1 = quad.a1.re;
    let pub_iota2 = cubic.c1.re;
    let published = PublishedSummary {
        a1: quad.a1,
        a2: quad.a2,
        c0: cubic.c0,
        c1: cubic.c1,
        iota1: pub_iota1,
        iota2: pub_iota2,
        classification: classify(pub_iota1, pub_iota2),
        c2210_as_printed: published::c2210_as_printed(ctx),
        iota1_scalar_reading: scalar_q.a1.re,
        iota1_beta_weighted_reading: beta_q.a1.re,
        iota2_scalar_reading: scalar_c.c1.re,
        iota2_beta_weighted_reading: beta_c.c1.re,
    };
    let (a1, c0, c1) = match options.route {
        Route::Reduction => (red.a1, red.c0, red.c1),
        Route::Published => (quad.a1, cubic.c0, cubic.c1),
    };
    let iota1 = a1.re;
    let iota2 = c1.re;
    Ok(NormalFormResult {
        k: ctx.point.k,
        tau_k: ctx.tau(),
        omega_k: ctx.omega,
        route: options.route,
        reading: options.reading,
        p_plus: ctx.p_plus,
        p_minus: ctx.p_minus,
        d_delta_plus: ctx.d_delta_plus,
        a20: quad.a20,
        a11: quad.a11,
        a02: quad.a02,
        c2210: l2.c2210,
        c2310: l2.c2310,
        c3310: l2.c3310,
        psi22: psi.psi22,
        psi23: psi.psi23,
        psi33: psi.psi33,
        a1,
        c0,
        c1,
        iota1,
        iota2,
        classification: classify(iota1, iota2),
        radius_slope: -iota1 / iota2,
        published,
        reduction: red,
        c0_terms: cubic.terms,
    })
}

/// `e^{−iω}` and `e^{iω}` under the chosen reading (see [`ExpReading`]).
pub(crate) fn exp_factors<T: Scalar>(ctx: &HopfContext<T>, reading: ExpReading) -> (Cx<T>, Cx<T>) {
    let i = imag_unit::<T>();
    let em = (-i * ctx.omega).exp();
    let ep = (i * ctx.omega).exp();
    match reading {
        ExpReading::Scalar => (em, ep),
        ExpReading::BetaWeightedAge => {
            let r = ctx.i_omega() + ctx.tau();
            let rb = -ctx.i_omega() + ctx.tau();
            (em * (r + T::one()), ep * (rb + T::one()))
        }
    }
}
