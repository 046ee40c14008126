//! Scalar abstraction: the whole library is generic over the floating
//! point type through [`Real`], with `f32`/`f64` the intended instances.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};

/// Floating point scalar used throughout: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Shorthand for converting a literal; panics only on NaN-producing
    /// conversions, which cannot happen for the constants used here.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must convert to scalar type")
    }

    /// Lossy view for diagnostics and error payloads.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssignOps
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Complex number over the library scalar.
pub type Cplx<T> = Complex<T>;

/// `a + b i`
pub fn cplx<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}
