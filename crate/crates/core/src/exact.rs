//! Exact Gaussian-rational scalars: complex numbers with `BigRational`
//! parts. The symbolic identity ledgers run over these so equalities are
//! checked with zero tolerance.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::C64;

/// Complex number with exact rational real and imaginary parts.
pub type GaussianRational = Complex<BigRational>;

pub fn gq_zero() -> GaussianRational {
    Complex::new(BigRational::zero(), BigRational::zero())
}

pub fn gq_one() -> GaussianRational {
    Complex::new(BigRational::one(), BigRational::zero())
}

pub fn gq_int(re: i64) -> GaussianRational {
    Complex::new(BigRational::from_integer(BigInt::from(re)), BigRational::zero())
}

pub fn gq(re: i64, im: i64) -> GaussianRational {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

pub fn gq_ratio(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussianRational {
    Complex::new(
        BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
        BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
    )
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Scalar type usable as a Leavitt/crossed-word coefficient: floats for
/// norm work, Gaussian rationals for the exact ledgers.
pub trait Coeff:
    Clone + PartialEq + num_traits::Zero + num_traits::One + core::ops::Neg<Output = Self>
{
    fn conj(&self) -> Self;
    fn to_c64(&self) -> C64;
}

impl Coeff for C64 {
    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }

    fn to_c64(&self) -> C64 {
        *self
    }
}

impl Coeff for GaussianRational {
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn to_c64(&self) -> C64 {
        C64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}
