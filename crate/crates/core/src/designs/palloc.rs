//! Power allocation across parallel scalar fading subchannels
//! y_k = √snr·h_k·√p_k·x_k + n_k under Σp_k ≤ P.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mc::{paired_difference, CommonDraws, McConfig};
use crate::model::Constellation;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fading {
    Rayleigh { sigma2: f64 },
    Ricean { mu: Complex64, sigma2: f64 },
}

impl Fading {
    pub fn sigma2(&self) -> f64 {
        match *self {
            Fading::Rayleigh { sigma2 } | Fading::Ricean { sigma2, .. } => sigma2,
        }
    }

    pub fn mean(&self) -> Complex64 {
        match *self {
            Fading::Rayleigh { .. } => Complex64::new(0.0, 0.0),
            Fading::Ricean { mu, .. } => mu,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubchannelSpec {
    pub constellation: Constellation,
    pub fading: Fading,
}

impl SubchannelSpec {
    pub fn new(constellation: Constellation, fading: Fading) -> Result<Self> {
        if constellation.n_t() != 1 {
            return Err(Error::InvalidArgument("subchannels carry scalar constellations".into()));
        }
        if constellation.m() < 2 {
            return Err(Error::InvalidArgument("subchannel constellation needs at least two points".into()));
        }
        if !(fading.sigma2() > 0.0) || !fading.sigma2().is_finite() {
            return Err(Error::InvalidArgument("fading variance must be positive".into()));
        }
        Ok(Self { constellation, fading })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    pub p: Vec<f64>,
    pub budget: f64,
}

fn check_budget(subs: &[SubchannelSpec], budget: f64) -> Result<()> {
    if subs.is_empty() {
        return Err(Error::InvalidArgument("no subchannels".into()));
    }
    if !(budget > 0.0) || !budget.is_finite() {
        return Err(Error::InvalidArgument("power budget must be positive".into()));
    }
    Ok(())
}

/// p_k ∝ w_k, normalized to the full budget.
fn normalize(w: Vec<f64>, budget: f64) -> PowerAllocation {
    let total: f64 = w.iter().sum();
    PowerAllocation { p: w.iter().map(|x| budget * x / total).collect(), budget }
}

/// High-snr rule for Rayleigh subchannels: p_k ∝ 1/√((1/M_k)·Σ_{i≠j} d̄²·σ_k²).
pub fn palloc_rayleigh_highsnr(subs: &[SubchannelSpec], budget: f64) -> Result<PowerAllocation> {
    check_budget(subs, budget)?;
    if subs.iter().any(|s| !matches!(s.fading, Fading::Rayleigh { .. })) {
        return Err(Error::InvalidArgument("all subchannels must be Rayleigh".into()));
    }
    let w = subs
        .iter()
        .map(|s| 1.0 / (s.constellation.scaled_pair_sum() * s.fading.sigma2()).sqrt())
        .collect();
    Ok(normalize(w, budget))
}

/// High-snr rule for Ricean subchannels: the Rayleigh weight times e^{−|μ_k|²/(2σ_k²)}.
pub fn palloc_ricean_highsnr(subs: &[SubchannelSpec], budget: f64) -> Result<PowerAllocation> {
    check_budget(subs, budget)?;
    if subs.iter().any(|s| !matches!(s.fading, Fading::Ricean { .. })) {
        return Err(Error::InvalidArgument("all subchannels must be Ricean".into()));
    }
    let w = subs
        .iter()
        .map(|s| {
            let sigma2 = s.fading.sigma2();
            let los = (-s.fading.mean().norm_sqr() / (2.0 * sigma2)).exp();
            los / (s.constellation.scaled_pair_sum() * sigma2).sqrt()
        })
        .collect();
    Ok(normalize(w, budget))
}

// ---------------------------------------------------------------------------
// Numeric search
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct NumericAllocation {
    pub allocation: PowerAllocation,
    /// Σ_k Ī_k at the returned allocation, nats.
    pub capacity: f64,
    pub evaluations: usize,
    /// A 10%-of-budget move away from the optimum was not resolved at 3 s.e.
    pub low_confidence: bool,
}

/// Seed of subchannel k's frozen draws.
fn sub_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

struct Objective<'a> {
    subs: &'a [SubchannelSpec],
    draws: Vec<CommonDraws>,
    snr: f64,
    cache: HashMap<(usize, u64), Vec<f64>>,
    evaluations: usize,
}

impl Objective<'_> {
    /// Per-draw mi gaps of subchannel k at power p.
    fn gaps(&mut self, k: usize, p: f64) -> Result<&Vec<f64>> {
        let key = (k, p.to_bits());
        if !self.cache.contains_key(&key) {
            self.evaluations += 1;
            let rows = if p > 0.0 {
                self.draws[k]
                    .per_channel(self.snr * p, &self.subs[k].constellation)?
                    .into_iter()
                    .map(|r| r[1])
                    .collect()
            } else {
                vec![self.subs[k].constellation.log_m(); self.draws[k].len()]
            };
            self.cache.insert(key, rows);
        }
        Ok(&self.cache[&key])
    }

    fn total_gap(&mut self, p: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        for (k, &pk) in p.iter().enumerate() {
            let g = self.gaps(k, pk)?;
            total += g.iter().sum::<f64>() / g.len() as f64;
        }
        Ok(total)
    }
}

/// Maximizes Σ_k Ī_k(snr·p_k) over the simplex by pairwise-transfer coordinate
/// search, starting from the uniform split. Each subchannel keeps one set of
/// frozen draws for every candidate.
pub fn palloc_numeric(subs: &[SubchannelSpec], budget: f64, snr: f64, cfg: &McConfig) -> Result<NumericAllocation> {
    check_budget(subs, budget)?;
    cfg.validate()?;
    if subs.len() > 4 {
        return Err(Error::InvalidArgument("numeric allocation supports at most 4 subchannels".into()));
    }
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::InvalidArgument("snr must be positive".into()));
    }
    let draws = subs
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let sub_cfg = McConfig { seed: sub_seed(cfg.seed, k), ..*cfg };
            CommonDraws::scalar(s.fading.mean(), s.fading.sigma2(), &sub_cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut obj = Objective { subs, draws, snr, cache: HashMap::new(), evaluations: 0 };
    let n = subs.len();
    let mut p = vec![budget / n as f64; n];
    let mut best = obj.total_gap(&p)?;
    let mut step = budget / 4.0;
    let min_step = 1e-4 * budget;
    while n > 1 && step >= min_step {
        let mut improved = false;
        for a in 0..n {
            for b in 0..n {
                if a == b || p[b] <= 0.0 {
                    continue;
                }
                let delta = step.min(p[b]);
                let mut q = p.clone();
                q[a] += delta;
                q[b] -= delta;
                let v = obj.total_gap(&q)?;
                if v < best {
                    best = v;
                    p = q;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    // Resolution check with paired differences on the frozen draws.
    let mut low_confidence = false;
    if n > 1 {
        let delta = 0.1 * budget;
        let (a, b) = {
            let b = (0..n).max_by(|&x, &y| p[x].total_cmp(&p[y])).unwrap_or(0);
            ((b + 1) % n, b)
        };
        if p[b] >= delta {
            let k_pairs = [(a, p[a] + delta), (b, p[b] - delta)];
            let mut diff_total = 0.0;
            let mut var_total = 0.0;
            for &(k, pk) in &k_pairs {
                let moved = obj.gaps(k, pk)?.clone();
                let here = obj.gaps(k, p[k])?.clone();
                let d = paired_difference(&moved, &here);
                diff_total += d.mean;
                var_total += d.std_error.powi(2);
            }
            low_confidence = !(diff_total > 3.0 * var_total.sqrt());
        }
    }
    let log_m_total: f64 = subs.iter().map(|s| s.constellation.log_m()).sum();
    Ok(NumericAllocation {
        allocation: PowerAllocation { p, budget },
        capacity: log_m_total - best,
        evaluations: obj.evaluations,
        low_confidence,
    })
}
