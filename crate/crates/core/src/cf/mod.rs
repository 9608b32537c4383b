//! Regular continued fractions: digit sources, convergents and the
//! approximation coefficient `Θ(x, p/q) = q²·|x − p/q|`.

mod source;

pub use source::{TailSource, TailValue};
pub(crate) use source::mobius_surd;

use crate::arith::{frac, BigFraction, IntMatrix2, RatInterval, SurdValue};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::cmp::Ordering;

/// `p_n / q_n` with its index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergentPair {
    pub index: usize,
    #[serde(serialize_with = "crate::ser::bigint")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::ser::bigint")]
    pub q: BigInt,
}

impl ConvergentPair {
    pub fn to_fraction(&self) -> BigFraction {
        BigFraction::new(self.p.clone(), self.q.clone())
    }
}

/// Convergents `p_1/q_1 … p_n/q_n`, advancing the source as needed.
pub fn convergents(src: &mut TailSource, n: usize) -> Result<Vec<ConvergentPair>> {
    src.advance_to(n)?;
    let mut m = IntMatrix2::identity();
    let mut out = Vec::with_capacity(n);
    for (i, a) in src.digits()[..n].iter().enumerate() {
        m.push_digit(a);
        out.push(ConvergentPair { index: i + 1, p: m.p.clone(), q: m.q.clone() });
    }
    Ok(out)
}

/// `p_n / q_n` for the current depth of the source (`0/1` at depth 0).
pub fn current_convergent(src: &TailSource) -> ConvergentPair {
    let m = src.matrix();
    ConvergentPair { index: src.depth(), p: m.p.clone(), q: m.q.clone() }
}

/// `Θ` as an exact surd or a certified enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaValue {
    Exact(SurdValue),
    Enclosure(RatInterval),
}

impl ThetaValue {
    /// `Some(ordering)` when the comparison with `eps` is certified.
    pub fn cmp_surd(&self, eps: &SurdValue) -> Option<Ordering> {
        match self {
            ThetaValue::Exact(t) => Some(t.cmp_certified(eps)),
            ThetaValue::Enclosure(i) => {
                if eps.cmp_fraction(i.hi()) == Ordering::Greater {
                    Some(Ordering::Less)
                } else if eps.cmp_fraction(i.lo()) == Ordering::Less {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ThetaValue::Exact(t) => t.to_f64(),
            ThetaValue::Enclosure(i) => {
                let (lo, hi) = i.to_f64();
                (lo + hi) / 2.0
            }
        }
    }

    pub fn enclosure(&self, width: &BigFraction) -> RatInterval {
        match self {
            ThetaValue::Exact(t) => {
                let (lo, hi) = t.enclosure(width);
                RatInterval::new(lo, hi).expect("irrational theta")
            }
            ThetaValue::Enclosure(i) => i.clone(),
        }
    }
}

/// `Θ_n = Θ(x, p_n/q_n) = q_n / (q_n·x_{n+1} + q_{n+1})`, from a tail value at depth `n+1`.
pub fn theta_from_tail(q_n: &BigInt, q_next: &BigInt, tail: &TailValue) -> Result<ThetaValue> {
    let m = IntMatrix2::new(0, q_n.clone(), q_n.clone(), q_next.clone());
    match tail {
        TailValue::Exact(t) => mobius_surd(&m, t).map(ThetaValue::Exact),
        TailValue::Enclosure(i) => m.apply_interval(i).map(ThetaValue::Enclosure),
    }
}

fn q_pair(src: &mut TailSource, n: usize) -> Result<(BigInt, BigInt)> {
    src.advance_to(n + 1)?;
    let d = src.digits();
    let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
    for a in &d[..n] {
        let next = a * &q1 + &q0;
        q0 = std::mem::replace(&mut q1, next);
    }
    let q_next = &d[n] * &q1 + &q0;
    Ok((q1, q_next))
}

/// `Θ_n`, using a tail enclosure of width at most `width` for inexact sources.
pub fn theta(src: &mut TailSource, n: usize, width: &BigFraction) -> Result<ThetaValue> {
    let (q_n, q_next) = q_pair(src, n)?;
    let tail = if src.depth() == n + 1 {
        src.tail()
    } else if let TailValue::Exact(t) = src.tail() {
        let back = src.digits()[n + 1..]
            .iter()
            .fold(IntMatrix2::identity(), |m, a| m.mul(&IntMatrix2::digit(a.clone())));
        TailValue::Exact(mobius_surd(&back, &t)?)
    } else {
        TailValue::Enclosure(src.tail_enclosure_at(n + 1, width)?)
    };
    theta_from_tail(&q_n, &q_next, &tail)
}

/// Certified comparison of `Θ_n` with `eps`, refining the source until decided.
pub fn theta_cmp(src: &mut TailSource, n: usize, eps: &SurdValue) -> Result<Ordering> {
    let mut width = frac(1, 1u64 << 32);
    for _ in 0..64 {
        if let Some(o) = theta(src, n, &width)?.cmp_surd(eps) {
            return Ok(o);
        }
        if src.depth() == n + 1 {
            src.refine()?;
        }
        width = &width * &width;
    }
    Err(Error::UndecidableAtBudget)
}

/// Mid-point estimate of `Θ_n` as a float.
pub fn theta_f64(src: &mut TailSource, n: usize) -> Result<f64> {
    theta(src, n, &frac(1, 1u64 << 60)).map(|t| t.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_surd;

    #[test]
    fn pi_convergents() {
        let mut src = TailSource::from_digits([7u32, 15, 1, 292, 1]).unwrap();
        let c = convergents(&mut src, 4).unwrap();
        let pq: Vec<(i64, i64)> = c
            .iter()
            .map(|c| (i64::try_from(&c.p).unwrap(), i64::try_from(&c.q).unwrap()))
            .collect();
        assert_eq!(pq, vec![(1, 7), (15, 106), (16, 113), (4687, 33102)]);
        assert_eq!(convergents(&mut src, 6).unwrap_err(), Error::SourceExhausted(5));
    }

    #[test]
    fn theta_of_sqrt2() {
        // Θ(√2−1, 0/1) = √2−1 and Θ(√2−1, 1/2) = 4·(1/2 − (√2−1)) = 6 − 4√2
        let x = parse_surd("sqrt(2)-1").unwrap();
        let mut src = TailSource::from_surd(x.clone()).unwrap();
        assert_eq!(theta(&mut src, 0, &frac(1, 10)).unwrap(), ThetaValue::Exact(x));
        let t1 = theta(&mut src, 1, &frac(1, 10)).unwrap();
        assert_eq!(t1, ThetaValue::Exact(parse_surd("6-4*sqrt(2)").unwrap()));
        src.advance_to(6).unwrap();
        assert_eq!(theta(&mut src, 1, &frac(1, 10)).unwrap(), t1);
    }

    #[test]
    fn theta_pi_first() {
        let mut src =
            TailSource::from_decimal("0.14159265358979323846264338327950288419716939937510582097494459").unwrap();
        let t = theta_f64(&mut src, 1).unwrap();
        assert!((t - 0.061959974100131315).abs() < 1e-15, "{t}");
        assert_eq!(theta_cmp(&mut src, 1, &frac(1, 16).into()).unwrap(), Ordering::Less);
    }
}
