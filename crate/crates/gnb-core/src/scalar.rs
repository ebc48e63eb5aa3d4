//! Scalar abstraction for the numerical core.
//!
//! Every algorithm in this crate is written against [`Real`], so the whole
//! library works for `f32` and `f64` alike. The documented accuracy targets
//! (1e-7 .. 1e-13 relative) assume `f64`; `f32` is supported but cannot meet
//! them.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::AddAssign;

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + AddAssign + Debug + Display + LowerExp + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for converting an `f64` constant into the working scalar.
#[inline]
pub(crate) fn real<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("f64 constant converts into any Real scalar")
}

/// Convert a nonnegative integer index into the working scalar.
#[inline]
pub(crate) fn real_from_u64<R: Real>(n: u64) -> R {
    R::from_u64(n).expect("index converts into any Real scalar")
}

/// Neumaier-compensated accumulator. Keeps series summation error at a few
/// ulps of the result regardless of term count or sign pattern.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Neumaier<R> {
    sum: R,
    comp: R,
}

impl<R: Real> Neumaier<R> {
    pub fn new() -> Self {
        Neumaier { sum: R::zero(), comp: R::zero() }
    }

    #[inline]
    pub fn add(&mut self, x: R) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> R {
        self.sum + self.comp
    }
}
