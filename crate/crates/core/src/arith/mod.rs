//! Exact arithmetic: rationals, quadratic surds, rational intervals and
//! unimodular 2×2 integer matrices acting by Möbius transformations.

mod interval;
mod matrix;
pub mod parse;
mod surd;

pub use interval::RatInterval;
pub use matrix::IntMatrix2;
pub use surd::{inv_sqrt5, surd_compare, SurdValue};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Exact rational in canonical form (positive denominator, coprime parts).
pub type BigFraction = BigRational;

/// `num/den` as a canonical fraction.
pub fn frac(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigFraction {
    BigFraction::new(num.into(), den.into())
}

/// Formats a fraction as `num/den`, keeping the denominator even when it is 1.
pub fn fmt_frac(f: &BigFraction) -> String {
    format!("{}/{}", f.numer(), f.denom())
}

/// Parses `n`, `n/d` or a finite decimal such as `0.25` into a fraction.
pub fn parse_fraction(s: &str) -> crate::Result<BigFraction> {
    let s = s.trim();
    let bad = || crate::Error::parse(format!("not a rational literal: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(crate::Error::DivisionByZero);
        }
        return Ok(BigFraction::new(n, d));
    }
    if let Some((int, fr)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int = if int.is_empty() || int == "-" || int == "+" { "0" } else { int };
        let int: BigInt = int.parse().map_err(|_| bad())?;
        if fr.is_empty() || !fr.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = num_traits::pow(BigInt::from(10u32), fr.len());
        let fr: BigInt = fr.parse().map_err(|_| bad())?;
        let mag = int.abs() * &scale + fr;
        let num = if neg { -mag } else { mag };
        return Ok(BigFraction::new(num, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigFraction::from_integer(n))
}

/// Sign of `alpha + beta·√d` for a square-free `d` (or `d = 0`).
pub(crate) fn quad_sign(alpha: &BigInt, beta: &BigInt, d: u64) -> Ordering {
    if beta.is_zero() || d == 0 {
        return alpha.sign_ord();
    }
    if d == 1 {
        return (alpha + beta).sign_ord();
    }
    let sa = alpha.sign_ord();
    let sb = beta.sign_ord();
    if sa == Ordering::Equal {
        return sb;
    }
    if sa == sb {
        return sa;
    }
    // opposite signs: the larger magnitude wins
    let a2 = alpha * alpha;
    let b2d = beta * beta * BigInt::from(d);
    match a2.cmp(&b2d) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        match self.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Nearest-ish `f64` for `num/den`, robust for operands far beyond `f64` range.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let n = top_bits(num, nb);
    let d = top_bits(den, db);
    let shift = (nb - nb.min(64)) - (db - db.min(64));
    n / d * 2f64.powi(shift.clamp(-2000, 2000) as i32)
}

fn top_bits(v: &BigInt, bits: i64) -> f64 {
    let drop = (bits - 64).max(0) as usize;
    (v >> drop).to_f64().unwrap_or(f64::NAN)
}

pub fn frac_to_f64(f: &BigFraction) -> f64 {
    ratio_to_f64(f.numer(), f.denom())
}

/// Natural logarithm of a positive big integer.
pub fn ln_bigint(v: &BigInt) -> f64 {
    debug_assert!(v.is_positive());
    let bits = v.bits() as i64;
    let drop = (bits - 60).max(0);
    let top = (v >> drop as usize).to_f64().unwrap_or(f64::NAN);
    top.ln() + drop as f64 * std::f64::consts::LN_2
}

/// Integer square root (floor) of a non-negative integer.
pub(crate) fn isqrt(v: &BigInt) -> BigInt {
    debug_assert!(!v.is_negative());
    v.sqrt()
}

pub(crate) fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}
