use crate::arith::{frac, BigFraction, IntMatrix2, RatInterval, SurdValue};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

/// Bits drawn per refinement of a random source.
const RANDOM_CHUNK_BITS: u64 = 256;
/// Hard ceiling on random precision before giving up with `PrecisionExhausted`.
const RANDOM_MAX_BITS: u64 = 1 << 20;

/// Snapshot of the current tail `x_n = G^n(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailValue {
    Exact(SurdValue),
    /// The tail lies strictly inside the interval.
    Enclosure(RatInterval),
}

impl TailValue {
    pub fn enclosure(&self, width: &BigFraction) -> RatInterval {
        match self {
            TailValue::Exact(s) => {
                let (lo, hi) = s.enclosure(width);
                RatInterval::new(lo, hi).expect("irrational tail has a proper enclosure")
            }
            TailValue::Enclosure(i) => i.clone(),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            TailValue::Exact(s) => s.to_f64(),
            TailValue::Enclosure(i) => {
                let (lo, hi) = i.to_f64();
                (lo + hi) / 2.0
            }
        }
    }
}

/// Cursor over the RCF digits of an irrational `x ∈ (0, 1)`.
///
/// Holds the cumulative matrix `M_[1,n] = [[p_{n-1}, p_n], [q_{n-1}, q_n]]`
/// and a certified description of the tail `x_n`. Tails of interval-backed
/// sources are advanced by exact Möbius steps; they are never re-derived from
/// decimal expansions.
#[derive(Clone, Debug)]
pub struct TailSource {
    backend: Backend,
    depth: usize,
    matrix: IntMatrix2,
    digits: Vec<BigInt>,
}

#[derive(Clone, Debug)]
enum Backend {
    Surd {
        tail: SurdValue,
    },
    Interval {
        x_lo: BigFraction,
        x_hi: BigFraction,
        tail_lo: BigFraction,
        tail_hi: BigFraction,
        random: Option<Box<RandomBits>>,
    },
    Digits {
        all: Vec<BigInt>,
        window: usize,
    },
}

/// A uniformly random real, revealed lazily: `x ∈ [n/2^k, (n+1)/2^k]`.
#[derive(Clone, Debug)]
struct RandomBits {
    rng: ChaCha8Rng,
    numer: BigInt,
    bits: u64,
    max_bits: u64,
}

impl RandomBits {
    fn extend(&mut self) -> Result<()> {
        if self.bits + RANDOM_CHUNK_BITS > self.max_bits {
            return Err(Error::PrecisionExhausted);
        }
        let mut bytes = [0u8; (RANDOM_CHUNK_BITS / 8) as usize];
        self.rng.fill_bytes(&mut bytes);
        let chunk = BigInt::from(BigUint::from_bytes_be(&bytes));
        self.numer = (std::mem::take(&mut self.numer) << RANDOM_CHUNK_BITS as usize) + chunk;
        self.bits += RANDOM_CHUNK_BITS;
        Ok(())
    }

    fn bounds(&self) -> (BigFraction, BigFraction) {
        let den = BigInt::one() << self.bits as usize;
        // dyadic; left unreduced
        (BigFraction::new_raw(self.numer.clone(), den.clone()), BigFraction::new_raw(&self.numer + 1, den))
    }
}

/// `m · t` without a gcd; the denominator is made positive.
fn raw_image(m: &IntMatrix2, t: &BigFraction) -> Result<BigFraction> {
    let (n, d) = m.apply_raw(t.numer(), t.denom());
    if d.is_zero() {
        return Err(Error::PoleInInterval);
    }
    Ok(if d.is_negative() { BigFraction::new_raw(-n, -d) } else { BigFraction::new_raw(n, d) })
}

impl TailSource {
    fn with_backend(backend: Backend) -> Self {
        Self { backend, depth: 0, matrix: IntMatrix2::identity(), digits: Vec::new() }
    }

    /// Exact quadratic irrational in `(0, 1)`.
    pub fn from_surd(x: SurdValue) -> Result<Self> {
        if x.is_rational() {
            return Err(Error::RationalInput);
        }
        if x.signum() != Ordering::Greater || x.cmp_fraction(&frac(1, 1)) != Ordering::Less {
            return Err(Error::OutOfDomain);
        }
        Ok(Self::with_backend(Backend::Surd { tail: x }))
    }

    /// Decimal literal such as `0.14159…`; the true value is taken to lie
    /// within one unit of the last given digit.
    pub fn from_decimal(text: &str) -> Result<Self> {
        let t = text.trim().trim_end_matches("...").trim_end_matches('…');
        let (int, fr) = t
            .split_once('.')
            .ok_or_else(|| Error::parse(format!("decimal literal needs a '.': {text:?}")))?;
        if !(int.is_empty() || int == "0") {
            return Err(Error::OutOfDomain);
        }
        let fr: String = fr.chars().filter(|c| !c.is_whitespace() && *c != '_').collect();
        if fr.is_empty() || !fr.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(format!("bad decimal digits in {text:?}")));
        }
        let scale = num_traits::pow(BigInt::from(10u32), fr.len());
        let centre: BigInt = fr.parse().expect("digits");
        if centre.is_zero() {
            return Err(Error::OutOfDomain);
        }
        let lo = BigFraction::new(&centre - 1, scale.clone()).max(BigFraction::zero());
        let hi = BigFraction::new(&centre + 1, scale).min(BigFraction::one());
        Self::from_interval(RatInterval::new(lo, hi)?)
    }

    /// Irrational known only through a fixed certified enclosure.
    pub fn from_interval(x: RatInterval) -> Result<Self> {
        let (lo, hi) = x.into_parts();
        if hi <= BigFraction::zero() || lo >= BigFraction::one() {
            return Err(Error::OutOfDomain);
        }
        let lo = lo.max(BigFraction::zero());
        let hi = hi.min(BigFraction::one());
        Ok(Self::with_backend(Backend::Interval {
            tail_lo: lo.clone(),
            tail_hi: hi.clone(),
            x_lo: lo,
            x_hi: hi,
            random: None,
        }))
    }

    /// Explicit digit list `a_1, a_2, …` (all ≥ 1); fails with
    /// `SourceExhausted` when the list runs out.
    pub fn from_digits<I, T>(digits: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let all: Vec<BigInt> = digits.into_iter().map(Into::into).collect();
        if all.iter().any(|a| !a.is_positive()) {
            return Err(Error::BadParameter("partial denominators must be positive".into()));
        }
        Ok(Self::with_backend(Backend::Digits { all, window: 8 }))
    }

    /// Uniformly random `x ∈ (0, 1)` whose binary digits are drawn lazily
    /// from a seeded ChaCha stream.
    pub fn random(seed: u64) -> Self {
        let mut bits = RandomBits {
            rng: ChaCha8Rng::seed_from_u64(seed),
            numer: BigInt::zero(),
            bits: 0,
            max_bits: RANDOM_MAX_BITS,
        };
        bits.extend().expect("first chunk is within budget");
        let (lo, hi) = bits.bounds();
        Self::with_backend(Backend::Interval {
            tail_lo: lo.clone(),
            tail_hi: hi.clone(),
            x_lo: lo,
            x_hi: hi,
            random: Some(Box::new(bits)),
        })
    }

    /// Lowers the random-precision ceiling (in bits); no effect on other backends.
    pub fn with_max_bits(mut self, max_bits: u64) -> Self {
        if let Backend::Interval { random: Some(r), .. } = &mut self.backend {
            r.max_bits = max_bits.max(RANDOM_CHUNK_BITS);
        }
        self
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `M_[1,n]` for the current depth `n`.
    pub fn matrix(&self) -> &IntMatrix2 {
        &self.matrix
    }

    /// Digits `a_1 … a_n` consumed so far.
    pub fn digits(&self) -> &[BigInt] {
        &self.digits
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.backend, Backend::Surd { .. })
    }

    /// Consumes and returns `a_{n+1}`.
    pub fn next_digit(&mut self) -> Result<BigInt> {
        let a = match &mut self.backend {
            Backend::Surd { tail } => {
                let inv = tail.recip()?;
                let a = inv.floor();
                *tail = inv.add_fraction(&BigFraction::from_integer(-a.clone()));
                a
            }
            Backend::Digits { all, .. } => {
                all.get(self.depth).cloned().ok_or(Error::SourceExhausted(self.depth))?
            }
            Backend::Interval { .. } => loop {
                if let Some(a) = self.interval_digit() {
                    break a;
                }
                self.refine()?;
            },
        };
        if let Backend::Interval { tail_lo, tail_hi, .. } = &mut self.backend {
            // [lo, hi] ↦ [1/hi − a, 1/lo − a]; coprime parts stay coprime
            let new_lo = gauss_step(tail_hi, &a);
            let new_hi = gauss_step(tail_lo, &a);
            *tail_lo = new_lo;
            *tail_hi = new_hi;
        }
        self.matrix.push_digit(&a);
        self.digits.push(a.clone());
        self.depth += 1;
        Ok(a)
    }

    /// Advances until `depth() == n`.
    pub fn advance_to(&mut self, n: usize) -> Result<()> {
        while self.depth < n {
            self.next_digit()?;
        }
        Ok(())
    }

    fn interval_digit(&self) -> Option<BigInt> {
        let Backend::Interval { tail_lo, tail_hi, .. } = &self.backend else {
            return None;
        };
        if !tail_lo.is_positive() {
            return None;
        }
        // digit is ⌊1/hi⌋ provided 1/lo ≤ ⌊1/hi⌋ + 1
        let m = tail_hi.denom().div_floor(tail_hi.numer());
        if m.is_zero() {
            return None;
        }
        if tail_lo.denom() <= &((&m + 1u32) * tail_lo.numer()) {
            Some(m)
        } else {
            None
        }
    }

    /// Current tail as an exact surd or certified enclosure.
    pub fn tail(&self) -> TailValue {
        match &self.backend {
            Backend::Surd { tail } => TailValue::Exact(tail.clone()),
            Backend::Interval { tail_lo, tail_hi, .. } => TailValue::Enclosure(
                RatInterval::new_unchecked(tail_lo.clone(), tail_hi.clone()),
            ),
            Backend::Digits { all, window } => {
                let ahead = &all[self.depth.min(all.len())..];
                let w = (*window).min(ahead.len());
                TailValue::Enclosure(digits_enclosure(&ahead[..w]))
            }
        }
    }

    /// Narrows the current tail enclosure (at least halving its width), or
    /// fails with `PrecisionExhausted` when the backend has nothing more to give.
    pub fn refine(&mut self) -> Result<()> {
        match &mut self.backend {
            Backend::Surd { .. } => Ok(()),
            Backend::Digits { all, window } => {
                let remaining = all.len().saturating_sub(self.depth);
                if *window >= remaining {
                    return Err(Error::PrecisionExhausted);
                }
                *window = (*window * 2).max(*window + 2);
                Ok(())
            }
            Backend::Interval { random: None, .. } => Err(Error::PrecisionExhausted),
            Backend::Interval { x_lo, x_hi, tail_lo, tail_hi, random: Some(r) } => {
                r.extend()?;
                let (lo, hi) = r.bounds();
                let inv = self.matrix.inverse()?;
                let a = raw_image(&inv, &lo)?;
                let b = raw_image(&inv, &hi)?;
                // a Möbius map with positive determinant is increasing
                let (a, b) = if inv.det().is_positive() { (a, b) } else { (b, a) };
                *x_lo = lo;
                *x_hi = hi;
                *tail_lo = a;
                *tail_hi = b;
                Ok(())
            }
        }
    }

    /// Enclosure of the current tail with width at most `width`.
    pub fn tail_enclosure(&mut self, width: &BigFraction) -> Result<RatInterval> {
        if !width.is_positive() {
            return Err(Error::BadParameter("width must be positive".into()));
        }
        loop {
            let enc = self.tail().enclosure(width);
            if &enc.width() <= width {
                return Ok(enc);
            }
            self.refine()?;
        }
    }

    /// Enclosure of `x_n` for any `n`, advancing the cursor if `n` is ahead.
    pub fn tail_enclosure_at(&mut self, n: usize, width: &BigFraction) -> Result<RatInterval> {
        if !width.is_positive() {
            return Err(Error::BadParameter("width must be positive".into()));
        }
        self.advance_to(n)?;
        if n == self.depth {
            return self.tail_enclosure(width);
        }
        // x_n = M_[n+1, depth] · x_depth
        let back = self.digits[n..]
            .iter()
            .fold(IntMatrix2::identity(), |m, a| m.mul(&IntMatrix2::digit(a.clone())));
        if let TailValue::Exact(t) = self.tail() {
            let x_n = mobius_surd(&back, &t)?;
            let (lo, hi) = x_n.enclosure(width);
            return RatInterval::new(lo, hi);
        }
        let mut inner = width.clone();
        loop {
            let enc = back.apply_interval(&self.tail().enclosure(&inner))?;
            let enc = clamp_unit(enc);
            if &enc.width() <= width {
                return Ok(enc);
            }
            inner /= BigFraction::from_integer(BigInt::from(2));
            self.refine()?;
        }
    }

    /// Enclosure (or exact value) of the original `x`.
    pub fn x_value(&mut self, width: &BigFraction) -> Result<TailValue> {
        if let Backend::Surd { tail } = &self.backend {
            let x = mobius_surd(&self.matrix, tail)?;
            return Ok(TailValue::Exact(x));
        }
        if let Backend::Interval { x_lo, x_hi, .. } = &self.backend {
            let enc = RatInterval::new(x_lo.clone(), x_hi.clone())?;
            if &enc.width() <= width {
                return Ok(TailValue::Enclosure(enc));
            }
        }
        self.tail_enclosure_at(0, width).map(TailValue::Enclosure)
    }
}

/// `1/t − a` for a tail endpoint `t = u/v`, keeping coprime parts without a gcd.
fn gauss_step(t: &BigFraction, a: &BigInt) -> BigFraction {
    if t.is_zero() {
        // only reachable for an upper bound 1/lo with lo = 0, which never happens
        // once the digit is determined; keep the trivial bound
        return BigFraction::one();
    }
    let (u, v) = (t.numer(), t.denom());
    BigFraction::new_raw(v - a * u, u.clone())
}

/// Between `[0; a_1…a_w]` and `[0; a_1…a_w + 1]`, i.e. `M·0` and `M·1`.
fn digits_enclosure(ahead: &[BigInt]) -> RatInterval {
    if ahead.is_empty() {
        return RatInterval::new(BigFraction::zero(), BigFraction::one()).expect("unit interval");
    }
    let m = ahead.iter().fold(IntMatrix2::identity(), |m, a| m.mul(&IntMatrix2::digit(a.clone())));
    let at0 = BigFraction::new(m.p.clone(), m.q.clone());
    let at1 = BigFraction::new(&m.r + &m.p, &m.s + &m.q);
    RatInterval::spanning(at0, at1).expect("distinct convergents")
}

fn clamp_unit(i: RatInterval) -> RatInterval {
    let unit = RatInterval::new(BigFraction::zero(), BigFraction::one()).expect("unit interval");
    i.intersect(&unit).unwrap_or(i)
}

/// Möbius action of an integer matrix on a surd.
pub(crate) fn mobius_surd(m: &IntMatrix2, t: &SurdValue) -> Result<SurdValue> {
    let num = t.scale(&BigFraction::from_integer(m.r.clone())).add_fraction(&BigFraction::from_integer(m.p.clone()));
    let den = t.scale(&BigFraction::from_integer(m.s.clone())).add_fraction(&BigFraction::from_integer(m.q.clone()));
    if den.is_zero() {
        return Err(Error::PoleInInterval);
    }
    num.div(&den)
}
