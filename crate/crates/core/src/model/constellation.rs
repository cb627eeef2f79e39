//! Finite equiprobable input constellations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Minimum squared distance for two points to count as distinct.
pub const DISTINCT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ConstellationFamily {
    Bpsk,
    Qpsk,
    Qam16,
    Qam64,
    Qam256,
    /// Joint n_t-vectors taken as given (validated, not normalized).
    Custom(Vec<Vec<Complex64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    n_t: usize,
    points: Vec<Vec<Complex64>>,
}

/// Minimum-distance diagnostic (analog of a kissing number).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KissingInfo {
    pub d2_min: f64,
    /// Ordered pairs (i != j) at the minimum distance.
    pub count: usize,
}

// ---------------------------------------------------------------------------
// Scalar constellations
// ---------------------------------------------------------------------------

fn square_qam(m: usize) -> Vec<Complex64> {
    let side = (m as f64).sqrt().round() as usize;
    debug_assert_eq!(side * side, m);
    let scale = (2.0 * (m as f64 - 1.0) / 3.0).sqrt();
    let level = |k: usize| (2.0 * k as f64 - (side as f64 - 1.0)) / scale;
    let mut pts = Vec::with_capacity(m);
    for a in 0..side {
        for b in 0..side {
            pts.push(Complex64::new(level(a), level(b)));
        }
    }
    pts
}

fn scalar_points(family: &ConstellationFamily) -> Option<Vec<Complex64>> {
    match family {
        ConstellationFamily::Bpsk => Some(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]),
        ConstellationFamily::Qpsk => Some(square_qam(4)),
        ConstellationFamily::Qam16 => Some(square_qam(16)),
        ConstellationFamily::Qam64 => Some(square_qam(64)),
        ConstellationFamily::Qam256 => Some(square_qam(256)),
        ConstellationFamily::Custom(_) => None,
    }
}

/// Builds a constellation. Built-in families are per-antenna products of a
/// unit-energy scalar set, scaled by 1/√n_t so that Σ_x = I/n_t.
pub fn make_constellation(family: ConstellationFamily, n_t: usize) -> Result<Constellation> {
    if n_t == 0 {
        return Err(Error::InvalidArgument("n_t must be at least 1".into()));
    }
    let points = match scalar_points(&family) {
        Some(scalar) => {
            let scale = 1.0 / (n_t as f64).sqrt();
            let m1 = scalar.len();
            let total = m1.pow(n_t as u32);
            (0..total)
                .map(|mut idx| {
                    let mut v = vec![Complex64::new(0.0, 0.0); n_t];
                    for slot in v.iter_mut().rev() {
                        *slot = scalar[idx % m1] * scale;
                        idx /= m1;
                    }
                    v
                })
                .collect()
        }
        None => match family {
            ConstellationFamily::Custom(points) => points,
            _ => unreachable!(),
        },
    };
    Constellation::from_points(n_t, points)
}

impl Constellation {
    /// Validates a joint point set: nonempty, consistent length, distinct, nonzero energy.
    pub fn from_points(n_t: usize, points: Vec<Vec<Complex64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyConstellation);
        }
        if let Some(p) = points.iter().find(|p| p.len() != n_t) {
            return Err(Error::Dimension(format!(
                "point of length {} in a constellation with n_t = {n_t}",
                p.len()
            )));
        }
        if points.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite constellation point".into()));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if diff_norm2(&points[i], &points[j]) <= DISTINCT_TOL {
                    return Err(Error::DuplicatePoint(i, j));
                }
            }
        }
        let energy: f64 = points.iter().map(|p| crate::linalg::norm2(p)).sum();
        if energy <= 0.0 {
            return Err(Error::ZeroEnergy);
        }
        Ok(Self { n_t, points })
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Complex64] {
        &self.points[i]
    }

    pub fn log_m(&self) -> f64 {
        (self.m() as f64).ln()
    }

    /// x_i − x_j.
    pub fn difference(&self, i: usize, j: usize) -> Vec<Complex64> {
        self.points[i].iter().zip(&self.points[j]).map(|(a, b)| a - b).collect()
    }

    /// Row-major M×M table of ‖x_i − x_j‖².
    pub fn pairwise_sq_distances(&self) -> Vec<f64> {
        let m = self.m();
        let mut t = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    t[i * m + j] = diff_norm2(&self.points[i], &self.points[j]);
                }
            }
        }
        t
    }

    /// Mean of d̄_ij² over ordered pairs i != j.
    pub fn mean_pair_sq_distance(&self) -> f64 {
        let m = self.m();
        if m < 2 {
            return 0.0;
        }
        self.pairwise_sq_distances().iter().sum::<f64>() / (m * (m - 1)) as f64
    }

    /// (1/M)·Σ_{i≠j} d̄_ij², the per-constellation factor in the power allocation rules.
    pub fn scaled_pair_sum(&self) -> f64 {
        self.pairwise_sq_distances().iter().sum::<f64>() / self.m() as f64
    }

    /// Empirical input covariance (1/M)·Σ x x†.
    pub fn input_covariance(&self) -> ComplexMatrix {
        let n = self.n_t;
        let m = self.m() as f64;
        ComplexMatrix::from_fn(n, n, |r, c| {
            self.points.iter().map(|p| p[r] * p[c].conj()).sum::<Complex64>() / m
        })
    }

    /// Every point has its negation in the set.
    pub fn is_negation_symmetric(&self) -> bool {
        self.points.iter().all(|p| {
            self.points
                .iter()
                .any(|q| p.iter().zip(q).map(|(a, b)| (a + b).norm_sqr()).sum::<f64>() <= DISTINCT_TOL)
        })
    }

    pub fn kissing(&self) -> KissingInfo {
        let d = self.pairwise_sq_distances();
        let m = self.m();
        let mut d2_min = f64::INFINITY;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    d2_min = d2_min.min(d[i * m + j]);
                }
            }
        }
        let tol = 1e-9 * d2_min.max(1e-300);
        let count = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && (d[i * m + j] - d2_min).abs() <= tol)
            .count();
        KissingInfo { d2_min, count }
    }
}

fn diff_norm2(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}
