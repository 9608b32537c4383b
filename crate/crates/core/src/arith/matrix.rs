use super::{BigFraction, RatInterval};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// 2×2 integer matrix `[[r, p], [s, q]]`.
///
/// Acts on reals by `t ↦ (r·t + p)/(s·t + q)`. Products of digit matrices
/// `[[0, 1], [1, a]]` have determinant ±1 and bottom row `(q_{n-1}, q_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub r: BigInt,
    pub p: BigInt,
    pub s: BigInt,
    pub q: BigInt,
}

impl IntMatrix2 {
    pub fn new(r: impl Into<BigInt>, p: impl Into<BigInt>, s: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        Self { r: r.into(), p: p.into(), s: s.into(), q: q.into() }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    /// The RCF digit matrix `[[0, 1], [1, a]]`.
    pub fn digit(a: impl Into<BigInt>) -> Self {
        Self::new(0, 1, 1, a)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            r: &self.r * &rhs.r + &self.p * &rhs.s,
            p: &self.r * &rhs.p + &self.p * &rhs.q,
            s: &self.s * &rhs.r + &self.q * &rhs.s,
            q: &self.s * &rhs.p + &self.q * &rhs.q,
        }
    }

    /// In-place right multiplication by `[[0, 1], [1, a]]`.
    pub fn push_digit(&mut self, a: &BigInt) {
        let r = std::mem::replace(&mut self.r, BigInt::zero());
        let s = std::mem::replace(&mut self.s, BigInt::zero());
        let p_new = r + a * &self.p;
        let q_new = s + a * &self.q;
        self.r = std::mem::replace(&mut self.p, p_new);
        self.s = std::mem::replace(&mut self.q, q_new);
    }

    pub fn det(&self) -> BigInt {
        &self.r * &self.q - &self.p * &self.s
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.r.clone(), self.s.clone(), self.p.clone(), self.q.clone())
    }

    /// Inverse of a unimodular matrix (determinant ±1).
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(Error::BadParameter("matrix is not unimodular".into()));
        }
        Ok(Self {
            r: &det * &self.q,
            p: -(&det * &self.p),
            s: -(&det * &self.s),
            q: &det * &self.r,
        })
    }

    /// Möbius action on a raw fraction `num/den`, without reduction.
    pub(crate) fn apply_raw(&self, num: &BigInt, den: &BigInt) -> (BigInt, BigInt) {
        (&self.r * num + &self.p * den, &self.s * num + &self.q * den)
    }

    pub fn apply(&self, t: &BigFraction) -> Result<BigFraction> {
        let (n, d) = self.apply_raw(t.numer(), t.denom());
        if d.is_zero() {
            return Err(Error::PoleInInterval);
        }
        Ok(BigFraction::new(n, d))
    }

    /// Exact image of a closed interval; the map is monotone away from its pole.
    pub fn apply_interval(&self, t: &RatInterval) -> Result<RatInterval> {
        let dl = t.lo() * &self.s + BigFraction::from_integer(self.q.clone());
        let dh = t.hi() * &self.s + BigFraction::from_integer(self.q.clone());
        if dl.is_zero() || dh.is_zero() || (dl.is_positive() != dh.is_positive()) {
            return Err(Error::PoleInInterval);
        }
        let a = self.apply(t.lo())?;
        let b = self.apply(t.hi())?;
        if self.det().is_zero() {
            return Err(Error::BadParameter("singular matrix collapses the interval".into()));
        }
        RatInterval::spanning(a, b)
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.r, self.p, self.s, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;

    /// Textbook triple loop over i64 entries.
    fn naive_product(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
        let mut out = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    fn m(a: [[i64; 2]; 2]) -> IntMatrix2 {
        IntMatrix2::new(a[0][0], a[0][1], a[1][0], a[1][1])
    }

    #[test]
    fn products() {
        assert_eq!(IntMatrix2::identity().mul(&IntMatrix2::identity()), IntMatrix2::identity());
        let a = [[0, 1], [1, 1]];
        let b = [[0, 1], [1, 7]];
        let expected = naive_product(a, b);
        assert_eq!(expected, [[1, 7], [1, 8]]);
        assert_eq!(m(a).mul(&m(b)), m(expected));
        assert_eq!(m(a).mul(&m(a)), IntMatrix2::new(1, 1, 1, 2));
    }

    #[test]
    fn push_digit_matches_mul() {
        let mut acc = IntMatrix2::identity();
        let mut by_mul = IntMatrix2::identity();
        for a in [7, 15, 1, 292] {
            acc.push_digit(&BigInt::from(a));
            by_mul = by_mul.mul(&IntMatrix2::digit(a));
        }
        assert_eq!(acc, by_mul);
        assert_eq!(acc.det(), BigInt::from(1));
        assert_eq!((acc.p.clone(), acc.q.clone()), (BigInt::from(4687), BigInt::from(33102)));
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(IntMatrix2::identity().apply(&frac(3, 7)).unwrap(), frac(3, 7));
        assert_eq!(IntMatrix2::digit(7).apply(&frac(0, 1)).unwrap(), frac(1, 7));
        let i = RatInterval::new(frac(1, 3), frac(1, 2)).unwrap();
        let img = IntMatrix2::digit(2).apply_interval(&i).unwrap();
        assert_eq!(img, RatInterval::new(frac(2, 5), frac(3, 7)).unwrap());
    }

    #[test]
    fn pole_is_reported() {
        let m = IntMatrix2::new(1, 0, 1, -1); // pole at t = 1
        assert_eq!(m.apply(&frac(1, 1)), Err(Error::PoleInInterval));
        let i = RatInterval::new(frac(1, 2), frac(3, 2)).unwrap();
        assert_eq!(m.apply_interval(&i), Err(Error::PoleInInterval));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = IntMatrix2::digit(3).mul(&IntMatrix2::digit(5));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), IntMatrix2::identity());
        assert!(IntMatrix2::new(2, 0, 0, 1).inverse().is_err());
    }
}
