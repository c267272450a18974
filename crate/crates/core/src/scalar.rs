//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`) underlying the complex algebra.
///
/// Validation tolerances scale with the precision of the type: the `f64`
/// values are the contract values used throughout the documentation.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Hermiticity, unitarity, idempotence and PSD tolerance (max-abs-entry norm).
    fn validation_tol() -> Self;

    /// Eigenvalues of a normalized state below this floor contribute nothing to entropy.
    fn eigen_floor() -> Self;

    /// Convergence threshold for the Jacobi eigensolver, relative to the matrix scale.
    fn jacobi_eps() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("real scalar converts to f64")
    }
}

impl Real for f64 {
    fn validation_tol() -> Self {
        1e-10
    }

    fn eigen_floor() -> Self {
        1e-14
    }

    fn jacobi_eps() -> Self {
        1e-15
    }
}

impl Real for f32 {
    fn validation_tol() -> Self {
        1e-4
    }

    fn eigen_floor() -> Self {
        1e-6
    }

    fn jacobi_eps() -> Self {
        1e-7
    }
}
