//! Streaming contraction digits `(α_k, β_k)` and their GCF convergents.

use super::{InducedStep, Orbit};
use crate::arith::{frac_to_f64, BigFraction, IntMatrix2};
use crate::cf::{theta_from_tail, TailSource, ThetaValue};
use crate::region::Region;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Partial numerator/denominator pair of a GCF.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcfDigit {
    pub k: usize,
    #[serde(serialize_with = "crate::ser::fraction")]
    pub alpha: BigFraction,
    #[serde(serialize_with = "crate::ser::fraction")]
    pub beta: BigFraction,
}

/// Reduced `P_k / Q_k`, tagged with the RCF index it coincides with when known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcfConvergent {
    pub k: usize,
    #[serde(rename = "P", serialize_with = "crate::ser::bigint")]
    pub p: BigInt,
    #[serde(rename = "Q", serialize_with = "crate::ser::bigint")]
    pub q: BigInt,
    pub rcf_index: Option<usize>,
}

/// One streamed record: digits, hitting data, convergent and `Θ(x, P_k/Q_k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SocfRecord {
    pub k: usize,
    #[serde(serialize_with = "crate::ser::fraction")]
    pub alpha: BigFraction,
    #[serde(serialize_with = "crate::ser::fraction")]
    pub beta: BigFraction,
    pub j: usize,
    #[serde(rename = "P", serialize_with = "crate::ser::bigint")]
    pub p: BigInt,
    #[serde(rename = "Q", serialize_with = "crate::ser::bigint")]
    pub q: BigInt,
    /// RCF index `n(k)` with `P_k/Q_k = p_n/q_n`.
    pub n: usize,
    pub theta: [f64; 2],
    pub cell: String,
    #[serde(skip)]
    pub theta_value: ThetaValue,
    #[serde(skip)]
    pub step: InducedStep,
}

/// Lazily produces [`SocfRecord`]s for `z₀ = (x, 0)` using only consecutive induced steps.
pub struct SocfExpander {
    region: Region,
    orbit: Orbit,
    cap: usize,
    k: usize,
    // (s_Δ, q_Δ) of the previous step
    prev: Option<(BigInt, BigInt)>,
    alpha_prev: BigFraction,
    // (P_{k-1}, P_{k-2}) and (Q_{k-1}, Q_{k-2})
    p_hist: (BigFraction, BigFraction),
    q_hist: (BigFraction, BigFraction),
}

impl SocfExpander {
    pub fn new(region: Region, src: TailSource, cap: usize) -> Self {
        let one = BigFraction::one();
        let zero = BigFraction::zero();
        Self {
            region,
            orbit: Orbit::new(src),
            cap,
            k: 0,
            prev: None,
            alpha_prev: one.clone(),
            p_hist: (one.clone(), zero.clone()),
            q_hist: (zero, one),
        }
    }

    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn next_record(&mut self) -> Result<SocfRecord> {
        let step = self.orbit.induced_step(&self.region, self.cap)?;
        let IntMatrix2 { r, s, q, .. } = &step.m_delta;
        let sign = if step.j % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        let (alpha, beta) = match &self.prev {
            None => (BigFraction::new(sign, s.clone()), BigFraction::new(r.clone(), s.clone())),
            Some((s_prev, q_prev)) => (
                BigFraction::new(sign * s_prev, s.clone()),
                BigFraction::from_integer(q_prev.clone()) + BigFraction::new(s_prev * r, s.clone()),
            ),
        };
        let (p_new, q_new) = if self.k == 0 {
            (beta.clone(), BigFraction::one())
        } else {
            (
                &beta * &self.p_hist.0 + &self.alpha_prev * &self.p_hist.1,
                &beta * &self.q_hist.0 + &self.alpha_prev * &self.q_hist.1,
            )
        };
        if q_new.is_zero() {
            return Err(Error::DivergentConvergent(self.k));
        }
        let conv = &p_new / &q_new;
        let p_old = std::mem::replace(&mut self.p_hist.0, p_new);
        self.p_hist.1 = p_old;
        let q_old = std::mem::replace(&mut self.q_hist.0, q_new);
        self.q_hist.1 = q_old;

        let m = self.orbit.source().matrix();
        let theta_value = theta_from_tail(&m.s, &m.q, &self.orbit.source().tail())?;
        let (lo, hi) = theta_value.enclosure(&BigFraction::new(BigInt::one(), BigInt::one() << 64)).to_f64();
        let record = SocfRecord {
            k: self.k,
            alpha: alpha.clone(),
            beta,
            j: step.j,
            p: conv.numer().clone(),
            q: conv.denom().clone(),
            n: step.depth - 1,
            theta: [lo, hi],
            cell: step.cell_label(self.region.kind()),
            theta_value,
            step: step.clone(),
        };
        self.prev = Some((s.clone(), q.clone()));
        self.alpha_prev = alpha;
        self.k += 1;
        Ok(record)
    }
}

impl Iterator for SocfExpander {
    type Item = Result<SocfRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_record())
    }
}

/// `β₀`, `α₀`, digits `(α_k, β_k)` for `k = 1..=K`, and the `K + 1` induced steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocfDigits {
    pub beta0: BigFraction,
    pub alpha0: BigFraction,
    pub digits: Vec<GcfDigit>,
    pub steps: Vec<InducedStep>,
}

impl SocfDigits {
    /// `[β₀; α₀/β₁, α₁/β₂, …, α_{K-1}/β_K]`.
    pub fn display(&self) -> String {
        format_gcf(&self.beta0, &self.alpha0, &self.digits)
    }

    /// RCF depths `j_1 < j_2 < …` reached after each induced step.
    pub fn hit_indices(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.depth).collect()
    }
}

pub fn socf_digits(region: &Region, src: TailSource, k_max: usize, cap: usize) -> Result<SocfDigits> {
    if k_max == 0 {
        return Err(Error::BadParameter("K must be at least 1".into()));
    }
    let mut ex = SocfExpander::new(region.clone(), src, cap);
    let first = ex.next_record()?;
    let mut out = SocfDigits { beta0: first.beta, alpha0: first.alpha, digits: Vec::new(), steps: vec![first.step] };
    for _ in 0..k_max {
        let r = ex.next_record()?;
        out.digits.push(GcfDigit { k: r.k, alpha: r.alpha, beta: r.beta });
        out.steps.push(r.step);
    }
    Ok(out)
}

/// `P_k/Q_k` for `k = 0..=K` from `P_{-1} = 1, Q_{-1} = 0, P_0 = β₀, Q_0 = 1` and
/// `P_k = β_k·P_{k-1} + α_{k-1}·P_{k-2}`.
pub fn gcf_convergents(
    beta0: &BigFraction,
    alpha0: &BigFraction,
    digits: &[GcfDigit],
    k_max: usize,
) -> Result<Vec<GcfConvergent>> {
    if k_max > digits.len() {
        return Err(Error::BadParameter(format!("{k_max} convergents requested from {} digits", digits.len())));
    }
    let mut out = vec![GcfConvergent { k: 0, p: beta0.numer().clone(), q: beta0.denom().clone(), rcf_index: None }];
    let (mut p2, mut q2) = (BigFraction::one(), BigFraction::zero());
    let (mut p1, mut q1) = (beta0.clone(), BigFraction::one());
    let mut alpha_prev = alpha0.clone();
    for d in &digits[..k_max] {
        if d.alpha.is_zero() {
            return Err(Error::BadParameter(format!("zero partial numerator at k = {}", d.k)));
        }
        let p = &d.beta * &p1 + &alpha_prev * &p2;
        let q = &d.beta * &q1 + &alpha_prev * &q2;
        if q.is_zero() {
            return Err(Error::DivergentConvergent(d.k));
        }
        let c = &p / &q;
        out.push(GcfConvergent { k: d.k, p: c.numer().clone(), q: c.denom().clone(), rcf_index: None });
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
        alpha_prev = d.alpha.clone();
    }
    Ok(out)
}

fn part(f: &BigFraction) -> String {
    if f.is_integer() {
        f.numer().to_string()
    } else {
        format!("({}/{})", f.numer(), f.denom())
    }
}

/// `[β₀; α₀/β₁, …]` with non-integer parts parenthesised.
pub fn format_gcf(beta0: &BigFraction, alpha0: &BigFraction, digits: &[GcfDigit]) -> String {
    let mut alpha = alpha0;
    let mut terms = Vec::with_capacity(digits.len());
    for d in digits {
        terms.push(format!("{}/{}", part(alpha), part(&d.beta)));
        alpha = &d.alpha;
    }
    format!("[{}; {}]", part(beta0), terms.join(", "))
}

impl SocfRecord {
    /// Midpoint of the `Θ` enclosure.
    pub fn theta_f64(&self) -> f64 {
        0.5 * (self.theta[0] + self.theta[1])
    }

    pub fn alpha_f64(&self) -> f64 {
        frac_to_f64(&self.alpha)
    }

    pub fn is_negative(&self) -> bool {
        self.alpha.is_negative()
    }
}
