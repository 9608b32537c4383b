//! Finite checks of the approximation properties of induced expansions and
//! Monte Carlo statistics of their orbits.

mod stats;

pub use stats::{entropy_of, ergodic_stats, levy_target, ErgodicStats, SampleStat};

use crate::arith::{frac, inv_sqrt5, BigFraction, SurdValue};
use crate::cf::{convergents, theta_cmp, TailSource, TailValue};
use crate::induce::{SocfExpander, SocfRecord};
use crate::region::{measure, Region};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;

/// Per-record data of a superoptimality run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperoptimalRow {
    pub k: usize,
    pub n: usize,
    pub j: usize,
    pub theta: [f64; 2],
    /// `Θ(x, P_k/Q_k) ≤ ε`, decided exactly.
    pub within_eps: bool,
    pub log_q_over_k: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperoptimalReport {
    pub region: String,
    pub epsilon: String,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub records: usize,
    /// Enclosure of `max_k Θ(x, P_k/Q_k)` over the records produced.
    pub theta_max: [f64; 2],
    /// `n(k)/k` for `k ≥ 1`.
    pub speed_ratios: Vec<f64>,
    pub clause_i: bool,
    pub violations: Vec<usize>,
    /// Finite-K statement about `liminf n(k)/k ≥ C`; never a proof.
    pub clause_ii: String,
    /// `ν̄(Δ)` and whether `ν̄(Δ) ≤ 1/C`.
    pub measure: f64,
    pub measure_le_inv_c: bool,
    /// Set when the expansion stopped early, e.g. because the orbit never re-entered Δ.
    pub stop_reason: Option<String>,
    #[serde(skip)]
    pub stop_error: Option<Error>,
    pub rows: Vec<SuperoptimalRow>,
}

impl SuperoptimalReport {
    pub fn passed(&self) -> bool {
        self.clause_i && self.stop_error.is_none()
    }
}

/// Checks `Θ(x, P_k/Q_k) ≤ ε` exactly for `k = 0..=K` and reports the
/// finite-K depth ratios `n(k)/k` against `C`.
pub fn verify_superoptimal(
    src: TailSource,
    region: &Region,
    eps: &SurdValue,
    c: f64,
    k_max: usize,
    cap: usize,
) -> Result<SuperoptimalReport> {
    if k_max == 0 {
        return Err(Error::BadParameter("K must be at least 1".into()));
    }
    let mut probe = src.clone();
    let mut ex = SocfExpander::new(region.clone(), src, cap);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut theta_max = [0.0f64, 0.0f64];
    let mut stop_error = None;
    for _ in 0..=k_max {
        let rec = match ex.next_record() {
            Ok(r) => r,
            Err(e) => {
                stop_error = Some(e);
                break;
            }
        };
        let ord = match rec.theta_value.cmp_surd(eps) {
            Some(o) => o,
            None => theta_cmp(&mut probe, rec.n, eps)?,
        };
        let within = ord != Ordering::Greater;
        if !within {
            violations.push(rec.k);
        }
        theta_max = [theta_max[0].max(rec.theta[0]), theta_max[1].max(rec.theta[1])];
        rows.push(row(&rec, within));
    }
    let speed_ratios: Vec<f64> = rows.iter().filter(|r| r.k > 0).map(|r| r.n as f64 / r.k as f64).collect();
    let clause_ii = match speed_ratios.last() {
        Some(&r) if r >= c => format!("n(K)/K = {r:.4} >= C = {c:.4}: consistent with liminf n(k)/k >= C"),
        Some(&r) => format!("n(K)/K = {r:.4} < C = {c:.4} at this K; the liminf is asymptotic and not decided"),
        None => "no ratios: fewer than two records".to_string(),
    };
    let mu = measure(region, 1e-12).value;
    Ok(SuperoptimalReport {
        region: region.label().to_string(),
        epsilon: eps.to_string(),
        c,
        k: k_max,
        records: rows.len(),
        theta_max,
        speed_ratios,
        clause_i: violations.is_empty(),
        violations,
        clause_ii,
        measure: mu,
        measure_le_inv_c: mu <= 1.0 / c + 1e-9,
        stop_reason: stop_error.as_ref().map(|e| e.to_string()),
        stop_error,
        rows,
    })
}

fn row(rec: &SocfRecord, within: bool) -> SuperoptimalRow {
    SuperoptimalRow {
        k: rec.k,
        n: rec.n,
        j: rec.j,
        theta: rec.theta,
        within_eps: within,
        log_q_over_k: (rec.k > 0).then(|| crate::arith::ln_bigint(&rec.q) / rec.k as f64),
    }
}

/// `Θ(x, p/q) = q²·|x − p/q|` compared with `eps`, straight from an
/// enclosure of `x` (independent of the tail recursion).
pub fn direct_theta_cmp(src: &mut TailSource, p: &BigInt, q: &BigInt, eps: &BigFraction) -> Result<Ordering> {
    let q2 = BigFraction::from_integer(q * q);
    let pq = BigFraction::from_integer(p * q);
    let mut width = BigFraction::new(BigInt::one(), (q * q) << 32);
    for _ in 0..32 {
        match src.x_value(&width)? {
            TailValue::Exact(x) => {
                let d = x.scale(&q2).add_fraction(&-pq.clone());
                let t = if d.signum() == Ordering::Less { d.neg() } else { d };
                return Ok(t.cmp_fraction(eps));
            }
            TailValue::Enclosure(i) => {
                let lo = i.lo() * &q2 - &pq;
                let hi = i.hi() * &q2 - &pq;
                let t_hi = lo.abs().max(hi.abs());
                let t_lo = if lo.is_negative() && hi.is_positive() { BigFraction::zero() } else { lo.abs().min(hi.abs()) };
                if &t_hi < eps {
                    return Ok(Ordering::Less);
                }
                if &t_lo > eps {
                    return Ok(Ordering::Greater);
                }
            }
        }
        width = &width * frac(1, 1u64 << 32);
    }
    Err(Error::UndecidableAtBudget)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegendreReport {
    pub epsilon0: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub holds: bool,
    /// SOCF convergents `P_k/Q_k`, `k = 0..=K`.
    pub socf: Vec<String>,
    /// RCF convergents with `Θ < ε0` up to the depth covered by the SOCF list (the witness).
    pub filtered_rcf: Vec<String>,
    pub increasing_denominators: bool,
}

/// Compares the legendre(ε0) SOCF convergents with the RCF convergents whose
/// approximation coefficient is below `ε0`.
pub fn legendre_exactness(src: TailSource, eps0: &BigFraction, k_max: usize, cap: usize) -> Result<LegendreReport> {
    let eps_s = SurdValue::from(eps0.clone());
    let region = Region::legendre(&eps_s)?;
    let mut probe = src.clone();
    let mut ex = SocfExpander::new(region, src, cap);
    let mut socf = Vec::new();
    let mut qs = Vec::new();
    let mut last_n = 0;
    for _ in 0..=k_max {
        let r = ex.next_record()?;
        socf.push(format!("{}/{}", r.p, r.q));
        qs.push(r.q.clone());
        last_n = r.n;
    }
    let mut filtered = Vec::new();
    let mut rcf = vec![(BigInt::zero(), BigInt::one())];
    rcf.extend(convergents(&mut probe, last_n)?.into_iter().map(|c| (c.p, c.q)));
    for (p, q) in &rcf {
        if direct_theta_cmp(&mut probe, p, q, eps0)? == Ordering::Less {
            filtered.push(format!("{p}/{q}"));
        }
    }
    Ok(LegendreReport {
        epsilon0: crate::arith::fmt_frac(eps0),
        k: k_max,
        holds: socf == filtered,
        socf,
        filtered_rcf: filtered,
        increasing_denominators: qs.windows(2).all(|w| w[0] < w[1]),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BorelReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub windows: usize,
    pub holds: bool,
    /// Window start indices whose three coefficients are all ≥ 1/√5.
    pub violations: Vec<usize>,
    /// Largest window minimum (midpoint estimate) and where it occurs.
    pub worst_min: f64,
    pub worst_index: usize,
}

/// For `n = 1..=N−2`, certifies that one of `Θ_n, Θ_{n+1}, Θ_{n+2}` is below `1/√5`.
pub fn borel_window_check(mut src: TailSource, n_max: usize) -> Result<BorelReport> {
    if n_max < 3 {
        return Err(Error::BadParameter("N must be at least 3".into()));
    }
    let eps = inv_sqrt5();
    let mut below = Vec::with_capacity(n_max + 1);
    let mut approx = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n == 0 {
            below.push(false);
            approx.push(f64::NAN);
            continue;
        }
        below.push(theta_cmp(&mut src, n, &eps)? == Ordering::Less);
        approx.push(crate::cf::theta(&mut src, n, &frac(1, 1u64 << 60))?.to_f64());
    }
    let mut violations = Vec::new();
    let (mut worst_min, mut worst_index) = (f64::NEG_INFINITY, 1);
    for n in 1..=n_max - 2 {
        if !(below[n] || below[n + 1] || below[n + 2]) {
            violations.push(n);
        }
        let m = approx[n].min(approx[n + 1]).min(approx[n + 2]);
        if m > worst_min {
            worst_min = m;
            worst_index = n;
        }
    }
    Ok(BorelReport {
        n: n_max,
        windows: n_max - 2,
        holds: violations.is_empty(),
        violations,
        worst_min,
        worst_index,
    })
}

/// `ε` implied by a builtin region: `1/b`, `ε0`, or `1/√5`.
pub fn region_epsilon(region: &Region) -> Option<SurdValue> {
    use crate::region::RegionKind;
    match region.kind() {
        RegionKind::Jump(b) => Some(SurdValue::from(frac(1, b))),
        RegionKind::Hurwitz => Some(inv_sqrt5()),
        RegionKind::Legendre => Some(region.cells()[0][0].coeffs()[0].clone()),
        RegionKind::Custom => None,
    }
}

/// `C = 1/ν̄(Δ)`, the depth rate a region supports.
pub fn region_speed(region: &Region) -> f64 {
    1.0 / measure(region, 1e-12).value
}
