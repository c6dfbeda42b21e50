//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let t = text.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let mut num: BigInt = digits.parse().map_err(|_| err())?;
        if negative {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRational::new(num, den));
    }
    let p: BigInt = t.parse().map_err(|_| err())?;
    Ok(BigRational::from_integer(p))
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest double; falls back to a scaled conversion for huge numerators.
pub fn to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb - db - 60).max(0) as u32;
    let scaled = (r.numer().abs() >> shift) * BigInt::from(1u64 << 60) / r.denom();
    let mag = scaled.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(shift as i32 - 60);
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n, n) / BigInt::from(n + 1)
}
