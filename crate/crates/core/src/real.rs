//! Scalar abstraction for the numerical core.
//!
//! Everything downstream is generic over [`Real`] so the same algorithms run
//! at `f32` or `f64`; the crate-root aliases pin the default `f64` pipeline.

use std::fmt;
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the operator machinery.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; constants below `T`'s range flush to zero.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant not representable in scalar type")
    }

    /// Exact conversion from a small unsigned integer (series indices, n).
    fn of_u64(v: u64) -> Self {
        Self::from_u64(v).expect("integer not representable in scalar type")
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum<T>
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Natural log of the gamma function, bridged through `f64`.
///
/// The argument never exceeds ~1e7 in this crate (series indices), where the
/// f64 evaluation carries more precision than any supported scalar needs.
pub fn ln_gamma<T: Real>(x: T) -> T {
    T::of(statrs::function::gamma::ln_gamma(
        x.to_f64().expect("ln_gamma argument not convertible to f64"),
    ))
}

/// Log of the binomial coefficient C(n, k) via ln-gamma.
pub fn ln_binomial<T: Real>(n: u64, k: u64) -> T {
    if k > n {
        return T::neg_infinity();
    }
    if k == 0 || k == n {
        return T::zero();
    }
    ln_gamma::<T>(T::of_u64(n) + T::one())
        - ln_gamma::<T>(T::of_u64(k) + T::one())
        - ln_gamma::<T>(T::of_u64(n - k) + T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_binomial_matches_small_cases() {
        assert!((ln_binomial::<f64>(5, 2).exp() - 10.0).abs() < 1e-10);
        assert!((ln_binomial::<f64>(10, 5).exp() - 252.0).abs() < 1e-9);
        assert_eq!(ln_binomial::<f64>(5, 0), 0.0);
        assert_eq!(ln_binomial::<f64>(5, 5), 0.0);
        assert!(ln_binomial::<f64>(3, 5).is_infinite());
    }

    #[test]
    fn works_at_f32() {
        let v: f32 = ln_binomial(6, 3);
        assert!((v.exp() - 20.0).abs() < 1e-3);
    }
}
