//! Scalar abstraction shared by every module.
//!
//! All linear algebra is written against [`Real`], implemented for `f32` and
//! `f64`. Tolerances are part of the scalar type: the `f64` values are the
//! ones the library is specified against, the `f32` values are loosened to
//! what single precision can actually resolve.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type the library is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance for structural predicates (hermiticity, orthonormality, commutation).
    fn structural_tol() -> Self;
    /// Tolerance for comparisons against exact algebraic values.
    fn value_tol() -> Self;
    /// Default threshold above which an outcome counts as possible.
    fn support_tol() -> Self;
    /// Born probabilities this far below zero are clamped to zero.
    fn clamp_tol() -> Self;

    /// Converts an `f64` literal. Panics only for values the type cannot represent at all.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_real {
    ($t:ty, $structural:expr, $value:expr, $support:expr, $clamp:expr) => {
        impl Real for $t {
            fn structural_tol() -> Self {
                $structural
            }
            fn value_tol() -> Self {
                $value
            }
            fn support_tol() -> Self {
                $support
            }
            fn clamp_tol() -> Self {
                $clamp
            }
        }
    };
}

impl_real!(f64, 1e-9, 1e-12, 1e-9, 1e-12);
impl_real!(f32, 1e-5, 1e-6, 1e-5, 1e-6);

/// Complex amplitude over a real scalar.
pub type ComplexScalar<T> = Complex<T>;

pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn is_finite<T: Real>(z: &Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Largest of `|re|` and `|im|`, the entrywise metric used for matrix comparisons.
pub(crate) fn max_part<T: Real>(z: &Complex<T>) -> T {
    z.re.abs().max(z.im.abs())
}
