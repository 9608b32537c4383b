//! Visit frequencies and depth growth along Lebesgue-random orbits.

use crate::cf::TailSource;
use crate::induce::Orbit;
use crate::region::{measure, Region};
use crate::{Error, Result};
use num_traits::Signed;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// `π² / (6 log 2 · ν̄(Δ))`, the entropy of the induced system.
pub fn entropy_of(region: &Region) -> Result<f64> {
    let mu = measure(region, 1e-12).value;
    if mu <= 1e-15 {
        return Err(Error::ZeroMeasureRegion);
    }
    Ok(PI * PI / (6.0 * LN_2 * mu))
}

/// `π² / (12 log 2 · μ)`, the expected growth rate of `log Q_k / k` for a region of measure `μ`.
pub fn levy_target(mu: f64) -> f64 {
    PI * PI / (12.0 * LN_2 * mu)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleStat {
    pub sample: usize,
    pub seed: u64,
    /// Visits among `z_1, …, z_L`.
    pub hits: usize,
    pub frequency: f64,
    /// `log Q_k / k` at the last visit.
    pub levy_slope: f64,
    /// Seeds thrown away before this one succeeded.
    pub redraws: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErgodicStats {
    pub region: String,
    pub seed: u64,
    pub samples: usize,
    pub orbit_len: usize,
    pub measure: f64,
    pub entropy: f64,
    pub levy_target: f64,
    pub frequency_mean: f64,
    pub frequency_rel_err: f64,
    pub frequency_ok: bool,
    pub levy_mean: f64,
    pub levy_rel_err: f64,
    pub levy_ok: bool,
    pub redraws: usize,
    pub per_sample: Vec<SampleStat>,
}

const MAX_REDRAWS: usize = 16;

/// Runs `samples` orbits of length `orbit_len` from `(x, 0)` with `x` uniform
/// in `(0, 1)`. Output depends only on the arguments, not on thread count.
pub fn ergodic_stats(region: &Region, samples: usize, orbit_len: usize, seed: u64) -> Result<ErgodicStats> {
    if samples == 0 || orbit_len == 0 {
        return Err(Error::BadParameter("samples and orbit length must be positive".into()));
    }
    let mu = measure(region, 1e-12).value;
    if mu <= 1e-15 {
        return Err(Error::ZeroMeasureRegion);
    }
    let per_sample = (0..samples)
        .into_par_iter()
        .map(|i| run_sample(region, i, orbit_len, seed))
        .collect::<Result<Vec<_>>>()?;
    let n = samples as f64;
    let frequency_mean = per_sample.iter().map(|s| s.frequency).sum::<f64>() / n;
    let levy_mean = per_sample.iter().map(|s| s.levy_slope).sum::<f64>() / n;
    let target = levy_target(mu);
    let frequency_rel_err = (frequency_mean - mu).abs() / mu;
    let levy_rel_err = (levy_mean - target).abs() / target;
    Ok(ErgodicStats {
        region: region.label().to_string(),
        seed,
        samples,
        orbit_len,
        measure: mu,
        entropy: 2.0 * target,
        levy_target: target,
        frequency_mean,
        frequency_rel_err,
        frequency_ok: frequency_rel_err <= 0.01,
        levy_mean,
        levy_rel_err,
        levy_ok: levy_rel_err <= 0.02,
        redraws: per_sample.iter().map(|s| s.redraws).sum(),
        per_sample,
    })
}

fn run_sample(region: &Region, i: usize, orbit_len: usize, seed: u64) -> Result<SampleStat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    let mut last_err = Error::PrecisionExhausted;
    for redraws in 0..MAX_REDRAWS {
        let s = rng.next_u64();
        match orbit_stat(region, s, orbit_len) {
            Ok((hits, levy_slope)) => {
                return Ok(SampleStat {
                    sample: i,
                    seed: s,
                    hits,
                    frequency: hits as f64 / orbit_len as f64,
                    levy_slope,
                    redraws,
                })
            }
            // precision or membership budget ran out: draw a fresh point
            Err(e @ (Error::PrecisionExhausted | Error::UndecidableAtBudget)) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

fn orbit_stat(region: &Region, seed: u64, orbit_len: usize) -> Result<(usize, f64)> {
    let mut z = Orbit::new(TailSource::random(seed));
    let mut hits = 0usize;
    let mut log_q = 0.0;
    for _ in 0..orbit_len {
        z.ne_step()?;
        if z.in_region(region)? {
            hits += 1;
            // Q_k = q_{n-1} at depth n
            let s = &z.source().matrix().s;
            log_q = if s.is_positive() { crate::arith::ln_bigint(s) } else { 0.0 };
        }
    }
    // the m-th visit closes record k = m - 1
    let slope = if hits > 1 { log_q / (hits - 1) as f64 } else { f64::NAN };
    Ok((hits, slope))
}
