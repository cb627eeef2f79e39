//! Linear precoders y = √snr·H·P·x + n under tr(PP†) ≤ P_total.
//!
//! Both problems minimize the leading capacity-gap coefficient
//! f(Z) = Σ_{i≠j} (v_ij† Z v_ij)^{−n_r}, v_ij = Θ_T^{1/2}(x_i − x_j),
//! over {Z ⪰ 0, tr Z ≤ P_total}; Θ_T = I in the canonical case.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::model::rng::{complex_gaussian, stream_rng};
use crate::model::{ChannelModel, Constellation};

/// Stationarity tolerance for accepting the closed-form canonical solution.
pub const CANONICAL_KKT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Precoder {
    pub matrix: ComplexMatrix,
    pub budget: f64,
}

impl Precoder {
    /// Z = P†P.
    pub fn gram(&self) -> ComplexMatrix {
        self.matrix.adjoint() * &self.matrix
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecoderRoute {
    /// Closed form Z = (P/n_t)·I.
    Canonical,
    /// Projected gradient descent.
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderReport {
    pub precoder: Precoder,
    pub z: ComplexMatrix,
    pub objective: f64,
    pub iterations: usize,
    pub stationarity: f64,
    pub route: PrecoderRoute,
}

// ---------------------------------------------------------------------------
// Objective
// ---------------------------------------------------------------------------

/// Directions v_ij for unordered pairs; each stands for two ordered pairs.
struct Directions {
    v: Vec<Vec<Complex64>>,
    n_r: i32,
}

impl Directions {
    fn new(c: &Constellation, sqrt_t: Option<&ComplexMatrix>, n_r: usize) -> Self {
        let m = c.m();
        let mut v = Vec::with_capacity(m * (m - 1) / 2);
        for i in 0..m {
            for j in (i + 1)..m {
                let e = c.difference(i, j);
                v.push(match sqrt_t {
                    Some(s) => linalg::mat_vec(s, &e),
                    None => e,
                });
            }
        }
        Self { v, n_r: n_r as i32 }
    }

    fn value(&self, z: &ComplexMatrix) -> f64 {
        self.v
            .iter()
            .map(|v| {
                let a = linalg::quad_form(z, v);
                if a > 0.0 {
                    2.0 * a.powi(-self.n_r)
                } else {
                    f64::INFINITY
                }
            })
            .sum()
    }

    /// −n_r·Σ a^{−n_r−1}·v v† over ordered pairs.
    fn gradient(&self, z: &ComplexMatrix) -> ComplexMatrix {
        let n = z.nrows();
        let mut g = ComplexMatrix::zeros(n, n);
        for v in &self.v {
            let a = linalg::quad_form(z, v);
            let w = -2.0 * self.n_r as f64 * a.powi(-self.n_r - 1);
            for r in 0..n {
                for k in 0..n {
                    g[(r, k)] += v[r] * v[k].conj() * w;
                }
            }
        }
        g
    }
}

fn frob_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// f(Z) for the given transmit correlation (identity when `theta_t` is `None`).
pub fn precoder_objective(c: &Constellation, theta_t: Option<&ComplexMatrix>, n_r: usize, z: &ComplexMatrix) -> Result<f64> {
    let sqrt_t = theta_t.map(linalg::psd_sqrt).transpose()?;
    Ok(Directions::new(c, sqrt_t.as_ref(), n_r).value(z))
}

// ---------------------------------------------------------------------------
// Feasible set
// ---------------------------------------------------------------------------

/// Euclidean projection of a vector onto {λ ≥ 0, Σλ ≤ budget}.
fn project_capped_simplex(values: &[f64], budget: f64) -> Vec<f64> {
    let clamped: Vec<f64> = values.iter().map(|&l| l.max(0.0)).collect();
    if clamped.iter().sum::<f64>() <= budget {
        return clamped;
    }
    // Shift τ with Σ max(λ − τ, 0) = budget.
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (k, &s) in sorted.iter().enumerate() {
        cum += s;
        let t = (cum - budget) / (k + 1) as f64;
        if k + 1 == sorted.len() || sorted[k + 1] <= t {
            tau = t;
            break;
        }
    }
    values.iter().map(|&l| (l - tau).max(0.0)).collect()
}

/// Projection onto {Z ⪰ 0, tr Z ≤ budget}.
fn project(z: &ComplexMatrix, budget: f64) -> ComplexMatrix {
    let herm = (z + z.adjoint()).scale(0.5);
    let (values, vectors) = linalg::hermitian_eigen(&herm).expect("symmetrized");
    let proj = project_capped_simplex(&values, budget);
    let mut k = 0;
    linalg::spectral_map(&values, &vectors, |_| {
        let v = proj[k];
        k += 1;
        v
    })
}

/// Random Z = A A†·(budget/tr(AA†)) with Gaussian A.
pub fn random_feasible_z<R: Rng + ?Sized>(n_t: usize, budget: f64, rng: &mut R) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n_t, n_t, |_, _| complex_gaussian(rng));
    let z = &a * a.adjoint();
    let tr = linalg::trace_re(&z);
    z.scale(budget / tr)
}

/// KKT residual for min f s.t. tr Z ≤ P, Z ⪰ 0, relative to ‖G‖.
fn kkt_residual(z: &ComplexMatrix, g: &ComplexMatrix) -> f64 {
    let n = z.nrows();
    let gnorm = linalg::fro2(g).sqrt().max(1e-300);
    let tr = linalg::trace_re(z).max(1e-300);
    let nu = -frob_inner(z, g) / tr;
    let shifted = g + ComplexMatrix::identity(n, n).scale(nu);
    let comp = linalg::fro2(&(z * &shifted)).sqrt() / (gnorm * linalg::fro2(z).sqrt().max(1e-300));
    let herm = (&shifted + shifted.adjoint()).scale(0.5);
    let lo = linalg::hermitian_eigen(&herm).map(|(v, _)| v[0]).unwrap_or(f64::NAN);
    let dual = (-lo).max(0.0) / gnorm;
    let sign = (-nu).max(0.0) / gnorm;
    comp + dual + sign
}

// ---------------------------------------------------------------------------
// Canonical channel
// ---------------------------------------------------------------------------

/// Z* = (P/n_t)·I and P = √(P/n_t)·I for negation-symmetric constellations
/// whose closed form passes the stationarity check; otherwise the numeric path with Θ_T = I.
pub fn precoder_canonical(c: &Constellation, n_r: usize, budget: f64) -> Result<PrecoderReport> {
    check_common(c, n_r, budget)?;
    let n_t = c.n_t();
    let dirs = Directions::new(c, None, n_r);
    let z = ComplexMatrix::identity(n_t, n_t).scale(budget / n_t as f64);
    let stationarity = kkt_residual(&z, &dirs.gradient(&z));
    if c.is_negation_symmetric() && stationarity <= CANONICAL_KKT_TOL {
        let matrix = ComplexMatrix::identity(n_t, n_t).scale((budget / n_t as f64).sqrt());
        return Ok(PrecoderReport {
            objective: dirs.value(&z),
            precoder: Precoder { matrix, budget },
            z,
            iterations: 0,
            stationarity,
            route: PrecoderRoute::Canonical,
        });
    }
    let id_t = ComplexMatrix::identity(n_t, n_t);
    let id_r = ComplexMatrix::identity(n_r, n_r);
    precoder_correlated(c, &id_t, &id_r, n_r, budget)
}

fn check_common(c: &Constellation, n_r: usize, budget: f64) -> Result<()> {
    if n_r == 0 {
        return Err(Error::InvalidArgument("n_r must be at least 1".into()));
    }
    if c.m() < 2 {
        return Err(Error::InvalidArgument("constellation needs at least two points".into()));
    }
    if !(budget > 0.0) || !budget.is_finite() {
        return Err(Error::InvalidArgument("power budget must be positive".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Correlated channel
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct PgdOptions {
    pub max_iterations: usize,
    /// Stop when the relative objective decrease falls below this.
    pub rel_tol: f64,
    /// Starting point; (P/n_t)·I when `None`.
    pub start: Option<ComplexMatrix>,
}

impl Default for PgdOptions {
    fn default() -> Self {
        Self { max_iterations: 10_000, rel_tol: 1e-10, start: None }
    }
}

pub fn precoder_correlated(
    c: &Constellation,
    theta_t: &ComplexMatrix,
    theta_r: &ComplexMatrix,
    n_r: usize,
    budget: f64,
) -> Result<PrecoderReport> {
    precoder_correlated_with(c, theta_t, theta_r, n_r, budget, &PgdOptions::default())
}

/// Projected gradient descent on f(Z) with backtracking step size.
///
/// Θ_R enters the objective only as the constant factor 1/det(Θ_R) and does
/// not move the minimizer; it is validated and otherwise unused. The returned
/// precoder is the Hermitian square root of Z, so its left singular vectors
/// are the eigenvectors of Z.
pub fn precoder_correlated_with(
    c: &Constellation,
    theta_t: &ComplexMatrix,
    theta_r: &ComplexMatrix,
    n_r: usize,
    budget: f64,
    opts: &PgdOptions,
) -> Result<PrecoderReport> {
    check_common(c, n_r, budget)?;
    ChannelModel::correlated_rayleigh(theta_t.clone(), theta_r.clone())?;
    let n_t = c.n_t();
    if theta_t.nrows() != n_t || theta_r.nrows() != n_r {
        return Err(Error::Dimension("correlation matrices do not match n_t / n_r".into()));
    }
    let (eig_t, _) = linalg::hermitian_eigen(theta_t)?;
    let top = eig_t.iter().cloned().fold(0.0, f64::max);
    if eig_t[0] <= crate::asymptotics::ZERO_EIG_REL * top {
        return Err(Error::InvalidModel("degenerate transmit correlation is not supported by the optimizer".into()));
    }
    let sqrt_t = linalg::psd_sqrt(theta_t)?;
    let dirs = Directions::new(c, Some(&sqrt_t), n_r);

    let mut z = match &opts.start {
        Some(s) => project(s, budget),
        None => ComplexMatrix::identity(n_t, n_t).scale(budget / n_t as f64),
    };
    let mut f = dirs.value(&z);
    if !f.is_finite() {
        return Err(Error::Numeric("starting point makes some pair indistinguishable".into()));
    }
    let mut step = 1.0 / (linalg::fro2(&dirs.gradient(&z)).sqrt() / budget).max(1e-12);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let g = dirs.gradient(&z);
        // Backtracking on the quadratic upper model.
        let mut accepted = None;
        for _ in 0..200 {
            let cand = project(&(&z - g.scale(step)), budget);
            let fc = dirs.value(&cand);
            let dz = &cand - &z;
            let model = f + frob_inner(&g, &dz) + linalg::fro2(&dz) / (2.0 * step);
            if fc.is_finite() && fc <= model {
                accepted = Some((cand, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, fc)) = accepted else {
            break;
        };
        let decrease = (f - fc) / f.abs().max(1e-300);
        z = cand;
        f = fc;
        step *= 2.0;
        if decrease < opts.rel_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { iterations, objective: f, best: Box::new(z) });
    }
    let g = dirs.gradient(&z);
    let matrix = linalg::psd_sqrt(&((&z + z.adjoint()).scale(0.5)))?;
    Ok(PrecoderReport {
        precoder: Precoder { matrix, budget },
        stationarity: kkt_residual(&z, &g),
        z,
        objective: f,
        iterations,
        route: PrecoderRoute::Numeric,
    })
}

// ---------------------------------------------------------------------------
// Certification by random probes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeReport {
    pub probes: usize,
    /// Probes with objective ≥ the candidate's (minus `slack`).
    pub worse: usize,
    pub best_probe: f64,
}

/// Evaluates f on random feasible Z (seeded) and counts probes that do not beat `objective − slack`.
pub fn certify_by_probes(
    c: &Constellation,
    theta_t: Option<&ComplexMatrix>,
    n_r: usize,
    budget: f64,
    objective: f64,
    probes: usize,
    seed: u64,
    slack: f64,
) -> Result<ProbeReport> {
    let sqrt_t = theta_t.map(linalg::psd_sqrt).transpose()?;
    let dirs = Directions::new(c, sqrt_t.as_ref(), n_r);
    let mut rng = stream_rng(seed, 0);
    let mut worse = 0;
    let mut best_probe = f64::INFINITY;
    for _ in 0..probes {
        let z = random_feasible_z(c.n_t(), budget, &mut rng);
        let v = dirs.value(&z);
        best_probe = best_probe.min(v);
        if v >= objective - slack {
            worse += 1;
        }
    }
    Ok(ProbeReport { probes, worse, best_probe })
}
