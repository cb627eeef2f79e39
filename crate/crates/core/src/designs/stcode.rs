//! Rank and determinant ranking of space-time codebooks.
//!
//! Smaller Σ_Ω Π(1/λ)^{n_r} is better: it lowers the leading coefficient of the
//! capacity gap, so the bounds on constrained capacity go up.

use std::cmp::Ordering;

use crate::asymptotics::distance_dist_spacetime;
use crate::error::{Error, Result};
use crate::model::SpaceTimeCode;

/// Relative tolerance under which two criteria count as equal.
pub const CRITERION_TIE_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StCriteria {
    /// Minimum rank of the codeword difference Gram matrices.
    pub r_min: u32,
    /// Σ over ordered pairs of minimal rank of Π_r λ_r^{−n_r}.
    pub criterion: f64,
    /// Diversity order n_r·r_min.
    pub d: u32,
    /// False outside n_t = 2, where the values are an extrapolation.
    pub certified: bool,
}

pub fn st_criteria(code: &SpaceTimeCode, n_r: usize) -> Result<StCriteria> {
    let dd = distance_dist_spacetime(code, n_r)?;
    let n_r32 = n_r as u32;
    let min_order = dd.pairs().iter().map(|p| p.order).min().expect("at least one pair");
    let criterion = dd.pairs().iter().filter(|p| p.order == min_order).map(|p| p.value).sum();
    let r_min = (min_order + 1) / n_r32;
    Ok(StCriteria { r_min, criterion, d: n_r32 * r_min, certified: code.n_t() == 2 })
}

/// `Greater` means `a` ranks above `b`: higher r_min wins, then the smaller criterion.
pub fn st_compare(a: &SpaceTimeCode, b: &SpaceTimeCode, n_r: usize) -> Result<Ordering> {
    if a.n_t() != b.n_t() || a.t() != b.t() || a.m() != b.m() {
        return Err(Error::Dimension(format!(
            "codebooks differ in shape: ({}, {}, {}) vs ({}, {}, {})",
            a.n_t(),
            a.t(),
            a.m(),
            b.n_t(),
            b.t(),
            b.m()
        )));
    }
    Ok(compare_criteria(&st_criteria(a, n_r)?, &st_criteria(b, n_r)?))
}

pub fn compare_criteria(a: &StCriteria, b: &StCriteria) -> Ordering {
    match a.r_min.cmp(&b.r_min) {
        Ordering::Equal => {
            let scale = a.criterion.abs().max(b.criterion.abs());
            if (a.criterion - b.criterion).abs() <= CRITERION_TIE_REL * scale {
                Ordering::Equal
            } else {
                b.criterion.total_cmp(&a.criterion)
            }
        }
        other => other,
    }
}
