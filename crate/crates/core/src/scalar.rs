//! Scalar traits the rest of the crate is generic over.
//!
//! Numerical code is written against [`Real`] (implemented for `f32` and
//! `f64`) and works on `Complex<T>` where eigenvectors demand it. Exact code
//! (the oracle) is written against [`Field`], which `BigRational` satisfies
//! along with the float types.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, panicking only if the target cannot represent
    /// finite values at all (never for `f32`/`f64`).
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

/// Exact (or at least division-closed) scalar used by the algebraic routines.
///
/// Rank and null-space computations test entries against zero exactly, so
/// the results are only meaningful for exact fields such as `BigRational`.
pub trait Field: Clone + PartialEq + Debug + Num + Neg<Output = Self> {}

impl<T> Field for T where T: Clone + PartialEq + Debug + Num + Neg<Output = T> {}

#[inline]
pub(crate) fn cabs<T: Real>(z: C<T>) -> T {
    z.re.hypot(z.im)
}
