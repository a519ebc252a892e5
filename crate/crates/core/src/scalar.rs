//! Scalar abstraction: all numerics are generic over a floating-point type.

use std::fmt;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the library is generic over (`f32` or `f64`).
///
/// The stated tolerances of the crate assume `f64`; `f32` works structurally
/// but cannot reach them.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion of an `f64` constant into the scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant must be representable")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + fmt::Debug
        + fmt::Display
        + fmt::LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Complex number over the generic scalar.
pub type C<R> = Complex<R>;

/// Build a complex number from `f64` parts.
#[inline]
pub fn cx<R: Real>(re: f64, im: f64) -> C<R> {
    Complex::new(R::of(re), R::of(im))
}

/// `x` as a real complex number.
#[inline]
pub fn re<R: Real>(x: R) -> C<R> {
    Complex::new(x, R::zero())
}

/// The imaginary unit.
#[inline]
pub fn i<R: Real>() -> C<R> {
    Complex::new(R::zero(), R::one())
}

/// True when both parts are finite.
#[inline]
pub fn is_finite<R: Real>(z: C<R>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
