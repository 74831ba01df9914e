//! Entry types for the dense oracle.

use std::fmt::Debug;

use num_traits::{NumAssign, Signed};

/// Exact or floating entries of a dense transform matrix.
///
/// Integers (`i32`, `i64`) keep the oracle exact; `f64` and rationals also work.
pub trait Scalar: Signed + NumAssign + Copy + PartialEq + Debug + Send + Sync + 'static {}

impl<T> Scalar for T where T: Signed + NumAssign + Copy + PartialEq + Debug + Send + Sync + 'static {}
