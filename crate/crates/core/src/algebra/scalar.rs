use core::fmt::Debug;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::Float;

pub type C64 = Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// Field scalars the polynomial and matrix code is generic over: `f64` and
/// `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn to_c64(self) -> C64;
    fn conj(self) -> Self;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        Float::abs(self)
    }
    fn to_c64(self) -> C64 {
        c64(self, 0.0)
    }
    fn conj(self) -> Self {
        self
    }
    fn is_finite(self) -> bool {
        Float::is_finite(self)
    }
}

impl Scalar for C64 {
    fn zero() -> Self {
        c64(0.0, 0.0)
    }
    fn one() -> Self {
        c64(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        c64(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn to_c64(self) -> C64 {
        self
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}
