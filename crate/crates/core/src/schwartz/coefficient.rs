use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Coefficient field for [`super::GaussPoly`]: it must contain `i`, `pi`,
/// `1/pi`, the rationals and the Gaussian scales.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Serialize
    + DeserializeOwned
{
    type Scale: Clone + PartialEq + Debug + Serialize + DeserializeOwned;

    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn imag() -> Self;
    fn pi() -> Self;
    fn inv_pi() -> Self;
    fn from_scale(a: &Self::Scale) -> Self;
    fn scale_recip(a: &Self::Scale) -> Self::Scale;
    fn scale_cmp(a: &Self::Scale, b: &Self::Scale) -> Ordering;
    fn scale_is_positive(a: &Self::Scale) -> bool;
    /// `a^{-1/2}`; exact modes fail when the root is irrational.
    fn inv_sqrt_scale(a: &Self::Scale) -> Result<Self>;
}

impl Coefficient for Complex64 {
    type Scale = f64;

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn imag() -> Self {
        Complex64::i()
    }
    fn pi() -> Self {
        Complex64::new(std::f64::consts::PI, 0.0)
    }
    fn inv_pi() -> Self {
        Complex64::new(std::f64::consts::FRAC_1_PI, 0.0)
    }
    fn from_scale(a: &f64) -> Self {
        Complex64::new(*a, 0.0)
    }
    fn scale_recip(a: &f64) -> f64 {
        1.0 / a
    }
    fn scale_cmp(a: &f64, b: &f64) -> Ordering {
        a.total_cmp(b)
    }
    fn scale_is_positive(a: &f64) -> bool {
        a.is_finite() && *a > 0.0
    }
    fn inv_sqrt_scale(a: &f64) -> Result<Self> {
        Ok(Complex64::new(1.0 / a.sqrt(), 0.0))
    }
}

pub(super) fn inexact(msg: impl Into<String>) -> Error {
    Error::Inexact(msg.into())
}
