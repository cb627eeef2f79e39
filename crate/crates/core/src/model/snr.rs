//! SNR grids in linear scale.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SnrGrid {
    points: Vec<f64>,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(snr: f64) -> f64 {
    10.0 * snr.log10()
}

impl SnrGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("snr grid is empty".into()));
        }
        if points.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::InvalidArgument("snr values must be positive and finite".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("snr grid must be strictly increasing".into()));
        }
        Ok(Self { points })
    }

    pub fn from_db(db: &[f64]) -> Result<Self> {
        Self::new(db.iter().map(|&d| db_to_linear(d)).collect())
    }

    /// Inclusive range start, start+step, ... up to stop (with a small tolerance on the last point).
    pub fn from_db_range(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || stop < start {
            return Err(Error::InvalidArgument("bad dB range".into()));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        let db: Vec<f64> = (0..n).map(|k| start + k as f64 * step).collect();
        Self::from_db(&db)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn db(&self) -> Vec<f64> {
        self.points.iter().map(|&s| linear_to_db(s)).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
