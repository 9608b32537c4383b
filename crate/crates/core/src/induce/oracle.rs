//! Contraction digits straight from RCF block denominators `q_[m,n]`.
//!
//! Used to cross-check the streaming digits of [`super::socf_digits`].

use super::socf::{GcfDigit, SocfDigits};
use crate::arith::{BigFraction, IntMatrix2};
use crate::cf::TailSource;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;

/// `q_[m,n]`: bottom-right entry of `M_[m,n] = ∏_{i=m}^{n} [[0,1],[1,a_i]]`
/// (`a` is 1-indexed), with `q_[m,m-1] = 1`, `q_[0,-1] = 1` and `q_[0,n] = p_n`.
pub fn q_block(digits: &[BigInt], m: i64, n: i64) -> BigInt {
    if n < m {
        return BigInt::one();
    }
    if m == 0 {
        let m = block(digits, 1, n);
        return m.p;
    }
    block(digits, m, n).q
}

fn block(digits: &[BigInt], m: i64, n: i64) -> IntMatrix2 {
    let mut acc = IntMatrix2::identity();
    for i in m..=n {
        acc.push_digit(&digits[(i - 1) as usize]);
    }
    acc
}

/// Contraction of `x` along `n_k = hit_indices[k] − 1`, for `k = 0..=K`.
///
/// `α_k = (−1)^{n_k − n_{k−1} + 1} · q_[n_{k−2}+2, n_{k−1}] / q_[n_{k−1}+2, n_k]`,
/// `β_k = q_[n_{k−2}+2, n_k] / q_[n_{k−1}+2, n_k]`, with `n_k = k` for `k < 0`.
pub fn socf_digits_oracle(src: &mut TailSource, hit_indices: &[usize], k_max: usize) -> Result<SocfDigits> {
    if hit_indices.len() < k_max + 1 {
        return Err(Error::BadParameter(format!("need {} hit indices, got {}", k_max + 1, hit_indices.len())));
    }
    if hit_indices.windows(2).any(|w| w[0] >= w[1]) || hit_indices[0] == 0 {
        return Err(Error::BadParameter("hit indices must be positive and strictly increasing".into()));
    }
    src.advance_to(hit_indices[k_max])?;
    let digits = src.digits().to_vec();
    let n = |k: i64| -> i64 {
        if k < 0 {
            k
        } else {
            hit_indices[k as usize] as i64 - 1
        }
    };
    let q = |m: i64, nn: i64| q_block(&digits, m, nn);
    let pair = |k: i64| -> (BigFraction, BigFraction) {
        let (n0, n1, n2) = (n(k), n(k - 1), n(k - 2));
        let den = q(n1 + 2, n0);
        let sign = if (n0 - n1 + 1).rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
        let alpha = BigFraction::new(sign * q(n2 + 2, n1), den.clone());
        let beta = BigFraction::new(q(n2 + 2, n0), den);
        (alpha, beta)
    };
    let (alpha0, beta0) = pair(0);
    let digits_out = (1..=k_max as i64)
        .map(|k| {
            let (alpha, beta) = pair(k);
            GcfDigit { k: k as usize, alpha, beta }
        })
        .collect();
    Ok(SocfDigits { beta0, alpha0, digits: digits_out, steps: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, parse::parse_surd};
    use crate::cf::convergents;
    use crate::induce::gcf_convergents;

    #[test]
    fn block_conventions() {
        let d: Vec<BigInt> = [7, 15, 1, 292].map(BigInt::from).to_vec();
        assert_eq!(q_block(&d, 0, -1), BigInt::one());
        assert_eq!(q_block(&d, 3, 2), BigInt::one());
        assert_eq!(q_block(&d, 1, 2), BigInt::from(106));
        assert_eq!(q_block(&d, 0, 2), BigInt::from(15));
        assert_eq!(q_block(&d, 3, 4), BigInt::from(293));
    }

    #[test]
    fn every_index_gives_rcf() {
        let mut src = TailSource::from_digits([3u32, 1, 4, 1, 5, 9, 2, 6, 5]).unwrap();
        let hits: Vec<usize> = (1..=8).collect();
        let d = socf_digits_oracle(&mut src, &hits, 7).unwrap();
        assert_eq!((d.beta0.clone(), d.alpha0.clone()), (frac(0, 1), frac(1, 1)));
        let want = [3, 1, 4, 1, 5, 9, 2];
        for (g, a) in d.digits.iter().zip(want) {
            assert_eq!((g.alpha.clone(), g.beta.clone()), (frac(1, 1), frac(a, 1)));
        }
    }

    #[test]
    fn sqrt2_every_other_index() {
        let x = parse_surd("sqrt(2)-1").unwrap();
        let mut src = TailSource::from_surd(x.clone()).unwrap();
        let hits = [2, 4, 6, 8, 10, 12];
        let d = socf_digits_oracle(&mut src, &hits, 5).unwrap();
        // blocks of the period (2, 2) repeat, so digits are constant from k = 1 on
        let tail: Vec<_> = d.digits[1..].iter().map(|g| (g.alpha.clone(), g.beta.clone())).collect();
        assert!(tail.windows(2).all(|w| w[0] == w[1]), "{tail:?}");
        let conv = gcf_convergents(&d.beta0, &d.alpha0, &d.digits, 5).unwrap();
        let mut rcf = TailSource::from_surd(x).unwrap();
        let rc = convergents(&mut rcf, 11).unwrap();
        for (k, c) in conv.iter().enumerate() {
            let r = &rc[2 * k]; // index 2k + 1
            assert_eq!((&c.p, &c.q), (&r.p, &r.q), "k = {k}");
        }
    }
}
