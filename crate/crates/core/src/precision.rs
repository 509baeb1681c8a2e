//! High-precision real arithmetic for the bound formulas.
//!
//! Admissible parameters sit far below the range of `f64` (for `r = 3` the
//! upper limit on `c` is `3^-204`), so every formula is evaluated with a
//! 256-bit binary significand (about 77 decimal digits).

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

pub const PRECISION_BITS: usize = 256;

pub type Real = FBig<HalfEven, 2>;

pub fn real(x: u64) -> Real {
    Real::from(x).with_precision(PRECISION_BITS).value()
}

/// Exact conversion of a finite double.
pub fn real_f64(x: f64) -> Result<Real> {
    Real::try_from(x)
        .map(|r| r.with_precision(PRECISION_BITS).value())
        .map_err(|_| Error::InvalidParameter(format!("not a finite number: {x}")))
}

pub fn ratio(num: u64, den: u64) -> Real {
    real(num) / real(den)
}

/// `x^(num/den)` for `x >= 0`, with `0^p = 0` for `p > 0`.
pub fn pow_ratio(x: &Real, num: i64, den: u64) -> Real {
    if *x == Real::ZERO {
        return if num == 0 { real(1) } else { real(0) };
    }
    let e = Real::from(num).with_precision(PRECISION_BITS).value() / real(den);
    x.powf(&e)
}

/// `base^exp` for an integer exponent of either sign.
pub fn powi(base: u64, exp: i64) -> Real {
    real(base).powi(exp.into())
}

pub fn sqrt(x: &Real) -> Real {
    if *x == Real::ZERO {
        real(0)
    } else {
        x.sqrt()
    }
}

pub fn ln(x: &Real) -> Real {
    x.ln()
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

/// `⌈x⌉` as an integer.
pub fn ceil_int(x: &Real) -> BigInt {
    to_bigint(&x.ceil())
}

/// `⌊x⌋` as an integer.
pub fn floor_int(x: &Real) -> BigInt {
    to_bigint(&x.floor())
}

fn to_bigint(integral: &Real) -> BigInt {
    let i = integral.to_int().value();
    i.to_string()
        .parse()
        .expect("integer formatting round-trips")
}

/// Exact value of a high-precision binary float as a rational.
pub fn to_rational(x: &Real) -> BigRational {
    let repr = x.repr();
    let sig: BigInt = repr.significand().to_string().parse().expect("integer");
    let exp = repr.exponent();
    let two = BigInt::from(2u8);
    if exp >= 0 {
        BigRational::from_integer(sig * num_traits::pow(two, exp as usize))
    } else {
        BigRational::new(sig, num_traits::pow(two, (-exp) as usize))
    }
}
