//! Scalar abstraction: all physics and statistics code is generic over a
//! floating-point type implementing [`Real`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable throughout the crate: `f32` or `f64`.
///
/// The associated tolerances scale with the precision of the type; every
/// algebraic identity the library enforces (unit norms, unitarity,
/// probabilities summing to one) is checked against `ALGEBRA_TOL`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Tolerance for algebraic identities (norm preservation, unitarity,
    /// probability completeness, lightlike interval classification).
    const ALGEBRA_TOL: Self;

    /// Amplitudes with squared magnitude below this are flushed to zero
    /// after a measurement projection.
    const FLUSH_TOL: Self;

    /// Convert an `f64` literal; panics if the value is not representable.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Real for f64 {
    const ALGEBRA_TOL: f64 = 1e-12;
    const FLUSH_TOL: f64 = 1e-15;
}

impl Real for f32 {
    const ALGEBRA_TOL: f32 = 1e-5;
    const FLUSH_TOL: f32 = 1e-6;
}
