//! Channel models and channel draws.
//!
//! H = √(K/(K+1))·H₀ + √(1/(K+1))·Θ_R^{1/2} H_w Θ_T^{1/2}, with H₀ = a_R a_T†.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::model::rng::complex_gaussian;

/// Tolerance on unit diagonals and array-response norms.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelVariant {
    CanonicalRayleigh { n_t: usize, n_r: usize },
    CorrelatedRayleigh { theta_t: ComplexMatrix, theta_r: ComplexMatrix },
    Ricean { k: f64, a_t: ComplexVector, a_r: ComplexVector },
}

/// A validated channel model with its square roots precomputed.
#[derive(Debug, Clone)]
pub struct ChannelModel {
    variant: ChannelVariant,
    sqrt_t: Option<ComplexMatrix>,
    sqrt_r: Option<ComplexMatrix>,
    h0: Option<ComplexMatrix>,
}

fn check_correlation(theta: &ComplexMatrix, name: &str) -> Result<ComplexMatrix> {
    if !theta.is_square() || theta.nrows() == 0 {
        return Err(Error::InvalidModel(format!("{name} must be square and nonempty")));
    }
    if !linalg::all_finite(theta) {
        return Err(Error::InvalidModel(format!("{name} has non-finite entries")));
    }
    if !linalg::is_hermitian(theta) {
        return Err(Error::InvalidModel(format!("{name} is not Hermitian")));
    }
    for k in 0..theta.nrows() {
        if (theta[(k, k)].re - 1.0).abs() > NORM_TOL || theta[(k, k)].im.abs() > NORM_TOL {
            return Err(Error::InvalidModel(format!("{name} must have a unit diagonal")));
        }
    }
    linalg::psd_sqrt(theta).map_err(|e| Error::InvalidModel(format!("{name}: {e}")))
}

impl ChannelModel {
    pub fn canonical_rayleigh(n_t: usize, n_r: usize) -> Result<Self> {
        if n_t == 0 || n_r == 0 {
            return Err(Error::InvalidModel("antenna counts must be at least 1".into()));
        }
        Ok(Self {
            variant: ChannelVariant::CanonicalRayleigh { n_t, n_r },
            sqrt_t: None,
            sqrt_r: None,
            h0: None,
        })
    }

    pub fn correlated_rayleigh(theta_t: ComplexMatrix, theta_r: ComplexMatrix) -> Result<Self> {
        let sqrt_t = check_correlation(&theta_t, "theta_t")?;
        let sqrt_r = check_correlation(&theta_r, "theta_r")?;
        Ok(Self {
            variant: ChannelVariant::CorrelatedRayleigh { theta_t, theta_r },
            sqrt_t: Some(sqrt_t),
            sqrt_r: Some(sqrt_r),
            h0: None,
        })
    }

    pub fn ricean(k: f64, a_t: ComplexVector, a_r: ComplexVector) -> Result<Self> {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::InvalidModel(format!("K-factor must be finite and >= 0, got {k}")));
        }
        let (n_t, n_r) = (a_t.len(), a_r.len());
        if n_t == 0 || n_r == 0 {
            return Err(Error::InvalidModel("array responses must be nonempty".into()));
        }
        if (a_t.norm_squared() - n_t as f64).abs() > NORM_TOL {
            return Err(Error::InvalidModel("‖a_T‖² must equal n_t".into()));
        }
        if (a_r.norm_squared() - n_r as f64).abs() > NORM_TOL {
            return Err(Error::InvalidModel("‖a_R‖² must equal n_r".into()));
        }
        let h0 = &a_r * a_t.adjoint();
        Ok(Self {
            variant: ChannelVariant::Ricean { k, a_t, a_r },
            sqrt_t: None,
            sqrt_r: None,
            h0: Some(h0),
        })
    }

    pub fn variant(&self) -> &ChannelVariant {
        &self.variant
    }

    pub fn n_t(&self) -> usize {
        match &self.variant {
            ChannelVariant::CanonicalRayleigh { n_t, .. } => *n_t,
            ChannelVariant::CorrelatedRayleigh { theta_t, .. } => theta_t.nrows(),
            ChannelVariant::Ricean { a_t, .. } => a_t.len(),
        }
    }

    pub fn n_r(&self) -> usize {
        match &self.variant {
            ChannelVariant::CanonicalRayleigh { n_r, .. } => *n_r,
            ChannelVariant::CorrelatedRayleigh { theta_r, .. } => theta_r.nrows(),
            ChannelVariant::Ricean { a_r, .. } => a_r.len(),
        }
    }

    /// Line-of-sight component H₀ = a_R a_T† (Ricean only).
    pub fn h0(&self) -> Option<&ComplexMatrix> {
        self.h0.as_ref()
    }

    /// One channel draw.
    pub fn sample_channel<R: Rng + ?Sized>(&self, rng: &mut R) -> ComplexMatrix {
        let (n_t, n_r) = (self.n_t(), self.n_r());
        let hw = ComplexMatrix::from_fn(n_r, n_t, |_, _| complex_gaussian(rng));
        match &self.variant {
            ChannelVariant::CanonicalRayleigh { .. } => hw,
            ChannelVariant::CorrelatedRayleigh { .. } => {
                let st = self.sqrt_t.as_ref().expect("validated");
                let sr = self.sqrt_r.as_ref().expect("validated");
                sr * hw * st
            }
            ChannelVariant::Ricean { k, .. } => {
                let h0 = self.h0.as_ref().expect("validated");
                let los = (k / (k + 1.0)).sqrt();
                let scat = (1.0 / (k + 1.0)).sqrt();
                h0.scale(los) + hw.scale(scat)
            }
        }
    }
}

/// d_ij²(H) = ‖H(x_i − x_j)‖².
pub fn received_sq_distance(h: &ComplexMatrix, x_i: &[Complex64], x_j: &[Complex64]) -> f64 {
    let e: Vec<Complex64> = x_i.iter().zip(x_j).map(|(a, b)| a - b).collect();
    linalg::norm2(&linalg::mat_vec(h, &e))
}
