//! Fixed-channel bounds on MMSE, mutual information and ML error probability
//! that hold at every SNR, and their fading averages.
//!
//! With d = d_ij²(H) and q(d) = ½·erfc(√(d·snr/4)), sums run over ordered pairs i ≠ j:
//!
//! | quantity | lower | upper |
//! |---|---|---|
//! | mmse | Σ d·q / (4M(M−1)) | Σ d·q / M |
//! | mi | log M − (1/M)·Σ 2e^{−d·snr/4} | log M − Σ ½q / (M(M−1)) |
//! | pe | Σ q / (M(M−1)) | Σ q / M |

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::mc::{channel_stream, run_chunks, Estimate, McConfig, Moments, Quantity};
use crate::model::{ChannelModel, Constellation, SnrGrid, SpaceTimeCode};
use crate::special::{erfc, pairwise_q};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair<T = f64> {
    pub lower: T,
    pub upper: T,
}

/// Ordered-pair received distances d_ij²(H), i ≠ j, for one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    m: usize,
    d2: Vec<f64>,
}

impl DistanceTable {
    pub fn new(h: &ComplexMatrix, c: &Constellation) -> Result<Self> {
        Self::from_code(h, &SpaceTimeCode::from_constellation(c))
    }

    /// d_ij² = ‖H(X_i − X_j)‖²_F.
    pub fn from_code(h: &ComplexMatrix, code: &SpaceTimeCode) -> Result<Self> {
        if h.ncols() != code.n_t() {
            return Err(Error::Dimension(format!(
                "channel has {} columns but inputs have {} rows",
                h.ncols(),
                code.n_t()
            )));
        }
        let rx: Vec<ComplexMatrix> = code.codewords().iter().map(|x| h * x).collect();
        let m = rx.len();
        let mut d2 = Vec::with_capacity(m * m.saturating_sub(1));
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    d2.push(linalg::fro2(&(&rx[i] - &rx[j])));
                }
            }
        }
        Ok(Self { m, d2 })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Ordered-pair distances, row-major with the diagonal skipped.
    pub fn distances(&self) -> &[f64] {
        &self.d2
    }

    fn pairs(&self) -> f64 {
        (self.m * (self.m - 1)) as f64
    }

    pub fn mmse(&self, snr: f64) -> BoundPair {
        let s: f64 = self.d2.iter().map(|&d| d * pairwise_q(d, snr)).sum();
        BoundPair { lower: s / (4.0 * self.pairs()), upper: s / self.m as f64 }
    }

    pub fn mi(&self, snr: f64) -> BoundPair {
        let log_m = (self.m as f64).ln();
        let lb: f64 = self.d2.iter().map(|&d| 2.0 * (-d * snr / 4.0).exp()).sum();
        let ub: f64 = self.d2.iter().map(|&d| 0.25 * erfc((d * snr / 4.0).sqrt())).sum();
        BoundPair { lower: log_m - lb / self.m as f64, upper: log_m - ub / self.pairs() }
    }

    pub fn pe(&self, snr: f64) -> BoundPair {
        let s: f64 = self.d2.iter().map(|&d| pairwise_q(d, snr)).sum();
        BoundPair { lower: s / self.pairs(), upper: s / self.m as f64 }
    }

    pub fn get(&self, kind: Quantity, snr: f64) -> BoundPair {
        match kind {
            Quantity::Mmse => self.mmse(snr),
            Quantity::Mi => self.mi(snr),
            Quantity::Pe => self.pe(snr),
        }
    }
}

fn check(snr: f64, c: &Constellation) -> Result<()> {
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::InvalidArgument(format!("snr must be positive and finite, got {snr}")));
    }
    if c.m() < 2 {
        return Err(Error::InvalidArgument("bounds need at least two points".into()));
    }
    Ok(())
}

pub fn mmse_bounds_fixed_h(snr: f64, h: &ComplexMatrix, c: &Constellation) -> Result<BoundPair> {
    check(snr, c)?;
    Ok(DistanceTable::new(h, c)?.mmse(snr))
}

/// Bounds in nats. The lower bound is not clamped and can be negative at low snr.
pub fn mi_bounds_fixed_h(snr: f64, h: &ComplexMatrix, c: &Constellation) -> Result<BoundPair> {
    check(snr, c)?;
    Ok(DistanceTable::new(h, c)?.mi(snr))
}

pub fn pe_bounds_fixed_h(snr: f64, h: &ComplexMatrix, c: &Constellation) -> Result<BoundPair> {
    check(snr, c)?;
    Ok(DistanceTable::new(h, c)?.pe(snr))
}

// ---------------------------------------------------------------------------
// Fading averages
// ---------------------------------------------------------------------------

/// Averaged bounds of all three quantities at one snr.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvgBounds {
    pub snr: f64,
    pub mmse: BoundPair<Estimate>,
    pub mi: BoundPair<Estimate>,
    pub pe: BoundPair<Estimate>,
}

impl AvgBounds {
    pub fn get(&self, kind: Quantity) -> BoundPair<Estimate> {
        match kind {
            Quantity::Mmse => self.mmse,
            Quantity::Mi => self.mi,
            Quantity::Pe => self.pe,
        }
    }
}

/// Channel averages of the fixed-H bounds over a grid.
///
/// Channel draws use the same streams as [`crate::mc::avg_quantities`], so the
/// bounds and the oracle see identical channels for identical configs.
pub fn avg_bounds_grid(grid: &SnrGrid, m: &ChannelModel, c: &Constellation, cfg: &McConfig) -> Result<Vec<AvgBounds>> {
    avg_bounds_code(grid, m, &SpaceTimeCode::from_constellation(c), cfg)
}

pub fn avg_bounds_code(grid: &SnrGrid, m: &ChannelModel, code: &SpaceTimeCode, cfg: &McConfig) -> Result<Vec<AvgBounds>> {
    cfg.validate()?;
    if code.m() < 2 {
        return Err(Error::InvalidArgument("bounds need at least two points".into()));
    }
    if code.n_t() != m.n_t() {
        return Err(Error::Dimension("model and inputs disagree on n_t".into()));
    }
    let snrs = grid.points();
    let parts = run_chunks(cfg.channel_draws, cfg.parallel_chunks, |ch, range| {
        let mut rng = channel_stream(cfg.seed, ch);
        let mut acc = vec![[Moments::default(); 6]; snrs.len()];
        for _ in range {
            let h = m.sample_channel(&mut rng);
            let table = DistanceTable::from_code(&h, code).expect("shapes checked");
            for (s, &snr) in snrs.iter().enumerate() {
                let vals = [table.mmse(snr), table.mi(snr), table.pe(snr)];
                for (q, b) in vals.iter().enumerate() {
                    acc[s][2 * q].push(b.lower);
                    acc[s][2 * q + 1].push(b.upper);
                }
            }
        }
        acc
    });
    let mut total = vec![[Moments::default(); 6]; snrs.len()];
    for p in &parts {
        for (t, o) in total.iter_mut().zip(p) {
            for q in 0..6 {
                t[q].merge(&o[q]);
            }
        }
    }
    Ok(snrs
        .iter()
        .zip(&total)
        .map(|(&snr, t)| {
            let pair = |q: usize| BoundPair { lower: t[2 * q].estimate(), upper: t[2 * q + 1].estimate() };
            AvgBounds { snr, mmse: pair(0), mi: pair(1), pe: pair(2) }
        })
        .collect())
}

pub fn avg_bounds(kind: Quantity, snr: f64, m: &ChannelModel, c: &Constellation, cfg: &McConfig) -> Result<BoundPair<Estimate>> {
    check(snr, c)?;
    let grid = SnrGrid::new(vec![snr])?;
    Ok(avg_bounds_grid(&grid, m, c, cfg)?[0].get(kind))
}
