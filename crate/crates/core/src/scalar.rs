use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the matrix algebra is generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Tolerance `x`, floored at a few hundred ulps of the scalar type so
    /// that double-precision thresholds stay meaningful in single precision.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(256.0))
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Reduces an angle to the canonical range (-π, π].
pub fn canonical_angle<T: Scalar>(x: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut r = (x + T::PI()) % two_pi;
    if r < T::zero() {
        r += two_pi;
    }
    let r = r - T::PI();
    if r <= -T::PI() {
        T::PI()
    } else {
        r
    }
}

/// Difference of two angles reduced to (-π, π].
pub fn angle_diff<T: Scalar>(a: T, b: T) -> T {
    canonical_angle(a - b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn canonical_range() {
        assert_eq!(canonical_angle(0.0_f64), 0.0);
        assert_eq!(canonical_angle(PI), PI);
        assert_eq!(canonical_angle(-PI), PI);
        assert!((canonical_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((canonical_angle(2.0 * PI + 0.25) - 0.25).abs() < 1e-12);
        assert!((canonical_angle(-2.0 * PI - 0.25) + 0.25).abs() < 1e-12);
    }

    #[test]
    fn tol_floor() {
        assert_eq!(<f64 as Scalar>::tol(1e-12), 1e-12);
        assert!(<f32 as Scalar>::tol(1e-12) > 1e-6);
    }
}
