//! Floating-point scalar abstraction shared by every module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

mod private {
    pub trait Sealed {}
    impl Sealed for f32 {}
    impl Sealed for f64 {}
}

/// Binary floating-point type usable as the base of the interval kernel.
///
/// Only `f32` and `f64` implement it. Directed rounding needs to know the
/// exact binary format (Veltkamp splitting constant, ulp stepping), which is
/// why the trait is sealed.
pub trait Scalar:
    private::Sealed
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// `2^ceil(p/2) + 1` for a `p`-bit significand.
    const SPLITTER: Self;
    /// Below this magnitude a product may lose bits to underflow.
    const TWO_PROD_MIN: Self;
    /// Above this magnitude Veltkamp splitting may overflow.
    const TWO_PROD_MAX: Self;

    fn next_up(self) -> Self;
    fn next_down(self) -> Self;

    /// Step `k` ulps towards +inf.
    fn up_by(self, k: u32) -> Self {
        (0..k).fold(self, |x, _| x.next_up())
    }

    /// Step `k` ulps towards -inf.
    fn down_by(self, k: u32) -> Self {
        (0..k).fold(self, |x, _| x.next_down())
    }

    fn from_i64_exact(k: i64) -> Self {
        Self::from_i64(k).expect("integer fits the scalar range")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const SPLITTER: f64 = 134_217_729.0;
    const TWO_PROD_MIN: f64 = 1.0e-290;
    const TWO_PROD_MAX: f64 = 1.0e290;

    #[inline]
    fn next_up(self) -> Self {
        f64::next_up(self)
    }

    #[inline]
    fn next_down(self) -> Self {
        f64::next_down(self)
    }
}

impl Scalar for f32 {
    const SPLITTER: f32 = 4097.0;
    const TWO_PROD_MIN: f32 = 1.0e-30;
    const TWO_PROD_MAX: f32 = 1.0e30;

    #[inline]
    fn next_up(self) -> Self {
        f32::next_up(self)
    }

    #[inline]
    fn next_down(self) -> Self {
        f32::next_down(self)
    }
}
