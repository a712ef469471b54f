//! Scalar abstraction for the numeric parts of the crate.
//!
//! Graph structure is integral; everything that touches the modularity
//! matrix, the eigensolver or the theory curves is generic over [`Real`].
//! `f64` is the working precision used by the sweep harness and CLI, `f32`
//! is supported for experimentation with looser tolerances.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable throughout the numeric modules.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + nalgebra::Scalar
    + serde::Serialize
    + 'static
{
    /// Lossy conversion from `f64`; used for configuration constants.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Real")
    }

    /// Conversion of a count.
    #[inline]
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize is representable in every Real")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Dot product with fixed left-to-right accumulation order.
#[inline]
pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub(crate) fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
#[inline]
pub(crate) fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

#[inline]
pub(crate) fn scale<T: Real>(alpha: T, x: &mut [T]) {
    for xi in x.iter_mut() {
        *xi = *xi * alpha;
    }
}

/// Removes the component along the all-ones vector.
#[inline]
pub(crate) fn project_off_ones<T: Real>(x: &mut [T]) {
    if x.is_empty() {
        return;
    }
    let mean = x.iter().copied().sum::<T>() / T::of_usize(x.len());
    for xi in x.iter_mut() {
        *xi = *xi - mean;
    }
}
