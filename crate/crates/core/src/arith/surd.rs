use super::{floor_div, isqrt, quad_sign, ratio_to_f64, BigFraction};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exact element `(a + b·√d)/c` of a real quadratic field.
///
/// Canonical form: `c > 0`, `gcd(a, b, c) = 1`, `d` square-free, and
/// `b = d = 0` whenever the value is rational. Structural equality is
/// therefore numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdValue {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: u64,
}

impl SurdValue {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: u64) -> Result<Self> {
        let (a, b, c) = (a.into(), b.into(), c.into());
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(a, b, c, d))
    }

    pub fn from_fraction(f: &BigFraction) -> Self {
        Self { a: f.numer().clone(), b: BigInt::zero(), c: f.denom().clone(), d: 0 }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self { a: v.into(), b: BigInt::zero(), c: BigInt::one(), d: 0 }
    }

    /// `√d` for a non-negative integer `d`.
    pub fn sqrt(d: u64) -> Self {
        Self::canonical(BigInt::zero(), BigInt::one(), BigInt::one(), d)
    }

    fn canonical(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: u64) -> Self {
        let (k, d) = split_square(d);
        b *= k;
        let d = match d {
            0 => {
                b = BigInt::zero();
                0
            }
            1 => {
                a += &b;
                b = BigInt::zero();
                0
            }
            d => d,
        };
        let d = if b.is_zero() { 0 } else { d };
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Self { a, b, c, d }
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, u64) {
        (&self.a, &self.b, &self.c, self.d)
    }

    /// Radicand, or 0 for rationals.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_fraction(&self) -> Option<BigFraction> {
        self.is_rational().then(|| BigFraction::new(self.a.clone(), self.c.clone()))
    }

    fn field_with(&self, other: &Self) -> Result<u64> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (d, e) if d == e => Ok(d),
            (d, e) => Err(Error::MixedRadicands(d, e)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.field_with(other)?;
        let a = &self.a * &other.c + &other.a * &self.c;
        let b = &self.b * &other.c + &other.b * &self.c;
        Ok(Self::canonical(a, b, &self.c * &other.c, d))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { a: -&self.a, b: -&self.b, c: self.c.clone(), d: self.d }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.field_with(other)?;
        let dd = BigInt::from(d);
        let a = &self.a * &other.a + &self.b * &other.b * dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::canonical(a, b, &self.c * &other.c, d))
    }

    pub fn recip(&self) -> Result<Self> {
        // c/(a + b√d) = c(a − b√d)/(a² − b²d)
        let den = &self.a * &self.a - &self.b * &self.b * BigInt::from(self.d);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(&self.c * &self.a, -(&self.c * &self.b), den, self.d))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.field_with(other)?;
        self.mul(&other.recip()?)
    }

    pub fn scale(&self, f: &BigFraction) -> Self {
        Self::canonical(&self.a * f.numer(), &self.b * f.numer(), &self.c * f.denom(), self.d)
    }

    pub fn add_fraction(&self, f: &BigFraction) -> Self {
        let a = &self.a * f.denom() + f.numer() * &self.c;
        Self::canonical(a, &self.b * f.denom(), &self.c * f.denom(), self.d)
    }

    pub fn signum(&self) -> Ordering {
        quad_sign(&self.a, &self.b, self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact `⌊self⌋`.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return floor_div(&self.a, &self.c);
        }
        // b√d is irrational, so ⌊(a + b√d)/c⌋ = ⌊(a + ⌊b√d⌋)/c⌋
        let t = floor_b_sqrt_d(&self.b, self.d);
        floor_div(&(&self.a + t), &self.c)
    }

    pub fn to_f64(&self) -> f64 {
        if self.b.is_zero() {
            return ratio_to_f64(&self.a, &self.c);
        }
        // ample for display/quadrature use; exact decisions never go through here
        let (lo, hi) = self.enclosure_bits(80);
        (super::frac_to_f64(&lo) + super::frac_to_f64(&hi)) / 2.0
    }

    /// Rational bounds `lo ≤ self ≤ hi` with `hi − lo ≤ 2^-bits / c`.
    pub fn enclosure_bits(&self, bits: u32) -> (BigFraction, BigFraction) {
        if self.b.is_zero() {
            let v = BigFraction::new(self.a.clone(), self.c.clone());
            return (v.clone(), v);
        }
        let scale = BigInt::one() << bits as usize;
        let sq = &self.b * &self.b * BigInt::from(self.d) * &scale * &scale;
        let s = isqrt(&sq);
        // s ≤ |b|√d·2^bits < s + 1
        let (blo, bhi) = if self.b.is_positive() { (s.clone(), s + BigInt::one()) } else { (-(&s + BigInt::one()), -s) };
        let den = &self.c * &scale;
        (
            BigFraction::new(&self.a * &scale + blo, den.clone()),
            BigFraction::new(&self.a * &scale + bhi, den),
        )
    }

    /// Rational enclosure of width at most `width` (positive).
    pub fn enclosure(&self, width: &BigFraction) -> (BigFraction, BigFraction) {
        let mut bits = 8u32;
        loop {
            let (lo, hi) = self.enclosure_bits(bits);
            if &(&hi - &lo) <= width {
                return (lo, hi);
            }
            bits += 16;
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_fraction(&self, f: &BigFraction) -> Ordering {
        // sign of (a − c·f) + b√d, scaled by den(f) > 0
        let alpha = &self.a * f.denom() - f.numer() * &self.c;
        let beta = &self.b * f.denom();
        quad_sign(&alpha, &beta, self.d)
    }

    /// Certified comparison that also handles two different radicands.
    ///
    /// Two irrationals from different quadratic fields are never equal, so
    /// refining rational enclosures separates them in finitely many rounds.
    pub fn cmp_certified(&self, other: &Self) -> Ordering {
        if let Ok(o) = surd_compare(self, other) {
            return o;
        }
        let mut bits = 32;
        loop {
            let (alo, ahi) = self.enclosure_bits(bits);
            let (blo, bhi) = other.enclosure_bits(bits);
            if ahi < blo {
                return Ordering::Less;
            }
            if bhi < alo {
                return Ordering::Greater;
            }
            bits *= 2;
        }
    }
}

/// Exact ordering of two surds over the same radicand (either may be rational).
pub fn surd_compare(u: &SurdValue, v: &SurdValue) -> Result<Ordering> {
    Ok(u.sub(v)?.signum())
}

impl PartialOrd for SurdValue {
    /// Defined only within one field; mixed radicands compare as `None`.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        surd_compare(self, other).ok()
    }
}

fn floor_b_sqrt_d(b: &BigInt, d: u64) -> BigInt {
    let s = isqrt(&(b * b * BigInt::from(d)));
    if b.is_positive() {
        s
    } else {
        -(s + BigInt::one())
    }
}

/// Writes `d = k²·d'` with `d'` square-free.
fn split_square(mut d: u64) -> (u64, u64) {
    if d < 4 {
        return (1, d);
    }
    let mut k = 1u64;
    let mut p = 2u64;
    while p * p <= d {
        while d.is_multiple_of(p * p) {
            d /= p * p;
            k *= p;
        }
        p += 1;
    }
    (k, d)
}

impl From<BigFraction> for SurdValue {
    fn from(f: BigFraction) -> Self {
        SurdValue::from_fraction(&f)
    }
}

impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            };
        }
        let radical = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else if self.b == -BigInt::one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.b, self.d)
        };
        let num = if self.a.is_zero() {
            radical
        } else if radical.starts_with('-') {
            format!("{}{}", self.a, radical)
        } else {
            format!("{}+{}", self.a, radical)
        };
        if self.c.is_one() {
            write!(f, "{num}")
        } else if self.a.is_zero() && !num.starts_with('-') {
            write!(f, "{num}/{}", self.c)
        } else {
            write!(f, "({num})/{}", self.c)
        }
    }
}

/// `1/√5`, the Hurwitz constant.
pub fn inv_sqrt5() -> SurdValue {
    SurdValue::new(0, 1, 5, 5).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;

    fn s(a: i64, b: i64, c: i64, d: u64) -> SurdValue {
        SurdValue::new(a, b, c, d).unwrap()
    }

    #[test]
    fn canonical_forms() {
        // (2 + 2√8)/4 = (1 + 2√2)/2
        assert_eq!(s(2, 2, 4, 8), s(1, 2, 2, 2));
        // √1 folds into the rational part
        assert_eq!(s(1, 1, 1, 1), SurdValue::from_int(2));
        assert!(s(3, 0, 6, 5).is_rational());
        assert_eq!(s(3, 0, 6, 5).radicand(), 0);
        assert_eq!(s(1, 1, -2, 5), s(-1, -1, 2, 5));
    }

    #[test]
    fn golden_ratio_vs_eight_fifths() {
        let phi = s(1, 1, 2, 5);
        let r = SurdValue::from_fraction(&frac(8, 5));
        // oracle: φ > 8/5 ⇔ √5 > 2·8/5 − 1 = 11/5 ⇔ 5·25 > 121
        let oracle = 5 * 25 - 121;
        assert!(oracle > 0);
        assert_eq!(surd_compare(&phi, &r).unwrap(), Ordering::Greater);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(surd_compare(&SurdValue::sqrt(5), &SurdValue::sqrt(5)).unwrap(), Ordering::Equal);
        let half3 = SurdValue::from_fraction(&frac(3, 2));
        assert_eq!(surd_compare(&SurdValue::sqrt(2), &half3).unwrap(), Ordering::Less);
        assert_eq!(
            surd_compare(&SurdValue::sqrt(2), &SurdValue::sqrt(5)),
            Err(Error::MixedRadicands(2, 5))
        );
        assert_eq!(SurdValue::sqrt(2).cmp_certified(&inv_sqrt5()), Ordering::Greater);
    }

    #[test]
    fn field_operations() {
        let x = s(-1, 1, 1, 2); // √2 − 1
        let inv = x.recip().unwrap(); // √2 + 1
        assert_eq!(inv, s(1, 1, 1, 2));
        assert_eq!(x.mul(&inv).unwrap(), SurdValue::from_int(1));
        assert_eq!(inv.floor(), BigInt::from(2));
        assert_eq!(x.neg().floor(), BigInt::from(-1));
        assert_eq!(s(1, 1, 2, 5).floor(), BigInt::from(1));
        assert_eq!(s(-1, -1, 2, 5).floor(), BigInt::from(-2));
    }

    #[test]
    fn enclosures_contain_value() {
        let x = s(-1, 1, 1, 2);
        let (lo, hi) = x.enclosure(&frac(1, 100));
        assert!(&hi - &lo <= frac(1, 100));
        assert_eq!(x.cmp_fraction(&lo), Ordering::Greater);
        assert_eq!(x.cmp_fraction(&hi), Ordering::Less);
        assert!((x.to_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn display() {
        assert_eq!(s(-1, 1, 2, 5).to_string(), "(-1+sqrt(5))/2");
        assert_eq!(s(0, 1, 5, 5).to_string(), "sqrt(5)/5");
        assert_eq!(s(1, -2, 1, 3).to_string(), "1-2*sqrt(3)");
        assert_eq!(SurdValue::from_fraction(&frac(2, 5)).to_string(), "2/5");
    }
}
