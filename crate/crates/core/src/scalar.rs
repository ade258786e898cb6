// SPDX-License-Identifier: MIT OR Apache-2.0

//! Floating-point abstraction shared by every numerical kernel.
//!
//! All formulas in this crate are closed-form or fixed-step, so they only
//! need the operations provided by [`num_traits::Float`]. The trait below
//! bundles the extra bounds the crate relies on (constants, conversion,
//! thread-safety, serialization) and is implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Real scalar type used throughout the crate (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + Serialize + serde::de::DeserializeOwned + 'static
{
    /// Convert a literal. Every literal in the crate is representable in `f32`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in the scalar type")
    }

    /// Convert an index or count.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in the scalar type")
    }

    /// An absolute tolerance of `x`, raised to a small multiple of machine
    /// epsilon when `x` is below what the type can resolve.
    ///
    /// For `f64` the requested tolerance is returned unchanged for every value
    /// used in this crate; for `f32` tolerances such as `1e-12` become `~8e-6`.
    #[inline]
    fn tol(x: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(x).max(floor)
    }

    /// Lossy conversion to `f64`, used for error payloads and reports.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the crate scalar.
pub type Cx<T> = Complex<T>;

/// Build a complex number from real and imaginary parts.
#[inline]
pub fn cx<T: Scalar>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

/// The imaginary unit.
#[inline]
pub fn imag_unit<T: Scalar>() -> Cx<T> {
    Complex::new(T::zero(), T::one())
}

/// Embed a real number.
#[inline]
pub fn real<T: Scalar>(x: T) -> Cx<T> {
    Complex::new(x, T::zero())
}
