//! Coefficient arithmetic: exact Gaussian rationals, complex floats, and
//! Laurent polynomials in `x` over either.

mod gaussian;
mod laurent;

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Zero};

pub use gaussian::GaussianRational;
pub(crate) use gaussian::scan_gaussian;
pub use laurent::LaurentPoly;
pub(crate) use laurent::write_term as laurent_write_term;

/// Scalars that series, fields and automorphisms can be built over.
///
/// Implemented for the exact field [`GaussianRational`] and for
/// [`Complex64`]; exact and float data never mix implicitly.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn to_complex(&self) -> Complex64;
}

impl Coeff for GaussianRational {
    fn from_i64(v: i64) -> Self {
        GaussianRational::from_integer(v)
    }

    fn inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }

    fn to_complex(&self) -> Complex64 {
        GaussianRational::to_complex(self)
    }
}

impl Coeff for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Complex64::new(1.0, 0.0) / self)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// `1/k` in the coefficient ring, `k != 0`.
pub(crate) fn inv_int<C: Coeff>(k: i64) -> C {
    C::from_i64(k).inv().expect("nonzero integer")
}
