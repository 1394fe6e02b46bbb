//! Numeric traits shared by every module.
//!
//! The geometry is written once against [`Scalar`] (real floating point) and
//! [`Entry`] (a matrix entry, either a real scalar or a complex number over
//! one). `f64` is the reference precision; every tolerance in the crate is
//! calibrated for it and passed through [`Scalar::tol`] so that `f32` builds
//! get a proportionally looser threshold.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Real floating-point scalar.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Entry<Real = Self>
{
    /// Converts an `f64` constant into this type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }

    /// Maps a tolerance calibrated for `f64` onto this precision.
    fn tol(v: f64) -> Self;

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    #[inline]
    fn tol(v: f64) -> f64 {
        v
    }
}

impl Scalar for f32 {
    // Single precision carries roughly half the digits.
    #[inline]
    fn tol(v: f64) -> f32 {
        v.sqrt() as f32
    }
}

/// Element of a dense matrix: a real scalar or a complex number over one.
pub trait Entry:
    Copy + PartialEq + Debug + Send + Sync + 'static + Num + NumAssign + Neg<Output = Self>
{
    type Real: Scalar;

    fn conj(self) -> Self;
    fn norm_sqr(self) -> Self::Real;
    fn modulus(self) -> Self::Real;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;
    /// `self / |self|`, or one when `self` is zero.
    fn phase(self) -> Self;
    fn scale(self, r: Self::Real) -> Self;
    fn finite(self) -> bool;
}

macro_rules! real_entry {
    ($t:ty) => {
        impl Entry for $t {
            type Real = $t;

            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn norm_sqr(self) -> Self {
                self * self
            }
            #[inline]
            fn modulus(self) -> Self {
                self.abs()
            }
            #[inline]
            fn re(self) -> Self {
                self
            }
            #[inline]
            fn im(self) -> Self {
                0.0
            }
            #[inline]
            fn from_real(r: Self) -> Self {
                r
            }
            #[inline]
            fn phase(self) -> Self {
                if self < 0.0 {
                    -1.0
                } else {
                    1.0
                }
            }
            #[inline]
            fn scale(self, r: Self) -> Self {
                self * r
            }
            #[inline]
            fn finite(self) -> bool {
                <$t>::is_finite(self)
            }
        }
    };
}

real_entry!(f32);
real_entry!(f64);

impl<T: Scalar> Entry for Complex<T> {
    type Real = T;

    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    #[inline]
    fn norm_sqr(self) -> T {
        Complex::norm_sqr(&self)
    }
    #[inline]
    fn modulus(self) -> T {
        self.re.hypot(self.im)
    }
    #[inline]
    fn re(self) -> T {
        self.re
    }
    #[inline]
    fn im(self) -> T {
        self.im
    }
    #[inline]
    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }
    #[inline]
    fn phase(self) -> Self {
        let m = Entry::modulus(self);
        if m == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(self.re / m, self.im / m)
        }
    }
    #[inline]
    fn scale(self, r: T) -> Self {
        Complex::new(self.re * r, self.im * r)
    }
    #[inline]
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}
