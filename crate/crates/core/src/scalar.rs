//! Scalar abstraction shared by all floating-point geometry.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the geometry is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count into the scalar type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// `π / n`, computed directly from the branch order.
    #[inline]
    fn pi_over(n: u32) -> Self {
        Self::PI() / Self::from_u32(n).expect("branch order representable")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    /// Inverse hyperbolic cosine clamped at 1 so rounding noise below 1 maps to 0.
    #[inline]
    fn arcosh_clamped(self) -> Self {
        if self <= Self::one() {
            Self::zero()
        } else {
            self.acosh()
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
