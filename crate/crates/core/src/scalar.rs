//! The scalar abstraction shared by the matrix, polynomial and solver code.
//!
//! Exact fields (rationals, number-field elements) decide zero exactly;
//! floating types decide it against [`NUMERIC_TOL`].

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactnum::{ArithError, Rat};

/// Zero threshold used by every floating-point scalar.
pub const NUMERIC_TOL: f64 = 1e-9;

/// A field element usable as a matrix entry or polynomial coefficient.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whether zero tests are exact.
    const EXACT: bool;

    fn from_rat(r: &Rat) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rat(&Rat::from_integer(n.into()))
    }

    /// Zero test used by elimination: exact for exact fields, tolerance-based otherwise.
    fn is_negligible(&self) -> bool;

    fn try_recip(&self) -> Result<Self, ArithError>;

    fn try_div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self.clone() * other.try_recip()?)
    }

    /// Size used for pivot choice and residual norms. Exact types only need
    /// zero/nonzero to be distinguished.
    fn magnitude(&self) -> f64;
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn try_recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= NUMERIC_TOL
    }

    fn try_recip(&self) -> Result<Self, ArithError> {
        if *self == 0.0 {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(1.0 / self)
        }
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn is_negligible(&self) -> bool {
        self.norm() <= NUMERIC_TOL
    }

    fn try_recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(self.inv())
        }
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}
