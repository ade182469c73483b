//! Numeric abstractions shared by the metric, agreement and ranking code.
//!
//! Ratio-style quantities (goal accuracy, F1, kappa) only need field
//! arithmetic and are generic over [`Field`], which exact rationals satisfy.
//! Anything that takes logs or exponentials (BLEU, binomial tails) requires
//! [`Real`].

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Exact-or-approximate field arithmetic: `f32`, `f64`, `Ratio<i64>`, ...
pub trait Field: Num + FromPrimitive + Copy + PartialOrd + Debug + Send + Sync + 'static {
    /// Lossless conversion from a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// `num / den` for counts.
    fn ratio(num: usize, den: usize) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }
}

impl<T> Field for T where T: Num + FromPrimitive + Copy + PartialOrd + Debug + Send + Sync + 'static {}

/// Floating point scalars (`f32`, `f64`).
pub trait Real: Field + Float + ToPrimitive {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl<T> Real for T where T: Field + Float + ToPrimitive {}
