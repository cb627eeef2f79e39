//! Expansion constants k (MMSE), k′ (mutual information) and k″ (error probability).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantKind {
    MmseLb,
    MmseUb,
    MiLb,
    MiUb,
    PeLb,
    PeUb,
}

impl ConstantKind {
    pub const ALL: [ConstantKind; 6] = [
        ConstantKind::MmseLb,
        ConstantKind::MmseUb,
        ConstantKind::MiLb,
        ConstantKind::MiUb,
        ConstantKind::PeLb,
        ConstantKind::PeUb,
    ];
}

fn check(n: u32, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("expansion order must be at least 1".into()));
    }
    if m < 2 {
        return Err(Error::InvalidArgument("cardinality must be at least 2".into()));
    }
    Ok(())
}

/// 4ⁿ·Γ(n + a)/Γ(n + b), in log space.
fn ratio(n: u32, a: f64, b: f64) -> f64 {
    let n = n as f64;
    (n * 4f64.ln() + ln_gamma(n + a) - ln_gamma(n + b)).exp()
}

/// Constant of order n for cardinality M.
///
/// k_LB,n = n·4ⁿΓ(n+3/2) / (2M(M−1)√π·Γ(n+2)),  k_UB,n = 2n·4ⁿΓ(n+3/2) / (M√π·Γ(n+2)),
/// k′_LB,n = 2·4ⁿΓ(n+3/2) / (M√π·Γ(n+2)),       k′_UB,n = 4ⁿΓ(n+3/2) / (2M(M−1)√π·Γ(n+2)),
/// k″_LB,n = 4ⁿΓ(n+1/2) / (2M(M−1)√π·Γ(n+1)),   k″_UB,n = 4ⁿΓ(n+1/2) / (2M√π·Γ(n+1)).
pub fn expansion_constant(kind: ConstantKind, n: u32, m: usize) -> Result<f64> {
    check(n, m)?;
    let mf = m as f64;
    let pairs = mf * (mf - 1.0);
    let sp = PI.sqrt();
    let nf = n as f64;
    Ok(match kind {
        ConstantKind::MmseLb => nf * ratio(n, 1.5, 2.0) / (2.0 * pairs * sp),
        ConstantKind::MmseUb => 2.0 * nf * ratio(n, 1.5, 2.0) / (mf * sp),
        ConstantKind::MiLb => 2.0 * ratio(n, 1.5, 2.0) / (mf * sp),
        ConstantKind::MiUb => ratio(n, 1.5, 2.0) / (2.0 * pairs * sp),
        ConstantKind::PeLb => ratio(n, 0.5, 1.0) / (2.0 * pairs * sp),
        ConstantKind::PeUb => ratio(n, 0.5, 1.0) / (2.0 * mf * sp),
    })
}

/// Alternative closed forms with Γ(n+1/2) denominators:
/// k_LB = n·4^{n+1}Γ(n+3/2) / (8M(M−1)√π·Γ(n+1/2)), k_UB = n·4^{n+1}Γ(n+3/2) / (2M√π·Γ(n+1/2)),
/// and k′ = k/n with the bound sides swapped. They do not reproduce the
/// iterated-integral values and are kept only for comparison. `None` for k″.
pub fn alternate_constant(kind: ConstantKind, n: u32, m: usize) -> Result<Option<f64>> {
    check(n, m)?;
    let mf = m as f64;
    let nf = n as f64;
    let sp = PI.sqrt();
    let core = nf * 4.0 * ratio(n, 1.5, 0.5) / sp;
    let lb = core / (8.0 * mf * (mf - 1.0));
    let ub = core / (2.0 * mf);
    Ok(match kind {
        ConstantKind::MmseLb => Some(lb),
        ConstantKind::MmseUb => Some(ub),
        ConstantKind::MiLb => Some(ub / nf),
        ConstantKind::MiUb => Some(lb / nf),
        ConstantKind::PeLb | ConstantKind::PeUb => None,
    })
}
