//! Behaviour of the pairwise received-distance densities p_{d_ij²} at zero.
//!
//! Every family reduces to d² = Σ_m λ_m·G_m with independent G_m ~ Gamma(μ_m, 1),
//! whose Laplace transform is Π(1+λ_m s)^{−μ_m}. Expanding in 1/s gives the
//! Taylor series of the density at zero; the first nonzero derivative sits at
//! order N−1 with N = Σμ_m and equals Πλ_m^{−μ_m}.

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::model::{ChannelModel, ChannelVariant, Constellation, SpaceTimeCode};

/// Eigenvalues below this fraction of the largest are treated as zero.
pub const ZERO_EIG_REL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Weighted engine
// ---------------------------------------------------------------------------

fn check_weights(eigs: &[(f64, u32)]) -> Result<u32> {
    if eigs.is_empty() {
        return Err(Error::InvalidArgument("empty eigenvalue list".into()));
    }
    if eigs.iter().any(|&(l, _)| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidArgument("eigenvalues must be positive and finite".into()));
    }
    let total: u32 = eigs.iter().map(|&(_, mu)| mu).sum();
    if total == 0 {
        return Err(Error::InvalidArgument("total multiplicity must be at least 1".into()));
    }
    Ok(total)
}

/// Derivatives p^{(N−1+k)}(0), k = 0..terms, of the density of Σ λ_m·Gamma(μ_m, 1).
///
/// Returns (N−1, derivatives).
pub fn pdf_zero_taylor(eigs: &[(f64, u32)], terms: usize) -> Result<(u32, Vec<f64>)> {
    let total = check_weights(eigs)?;
    let terms = terms.max(1);
    // Coefficients of Π(1 + w/λ)^{−μ} in w.
    let mut poly = vec![0.0; terms];
    poly[0] = 1.0;
    for &(lambda, mu) in eigs {
        let mut factor = vec![0.0; terms];
        // (−1)^k·C(μ+k−1, k)·λ^{−k}
        let mut coef = 1.0;
        for (k, f) in factor.iter_mut().enumerate() {
            if k > 0 {
                coef *= -((mu as f64 + k as f64 - 1.0) / k as f64) / lambda;
            }
            *f = coef;
        }
        let mut next = vec![0.0; terms];
        for a in 0..terms {
            for b in 0..(terms - a) {
                next[a + b] += poly[a] * factor[b];
            }
        }
        poly = next;
    }
    let log_lead: f64 = eigs.iter().map(|&(l, mu)| -(mu as f64) * l.ln()).sum();
    let lead = log_lead.exp();
    Ok((total - 1, poly.into_iter().map(|c| c * lead).collect()))
}

/// (order, value) of the first nonzero derivative at zero: (Σμ − 1, Πλ^{−μ}).
pub fn pdf_zero_derivative_weighted(eigs: &[(f64, u32)]) -> Result<(u32, f64)> {
    let (order, d) = pdf_zero_taylor(eigs, 1)?;
    Ok((order, d[0]))
}

// ---------------------------------------------------------------------------
// Distance distributions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    /// Smallest n with p^{(n)}(0) ≠ 0.
    pub order: u32,
    /// p^{(order)}(0).
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceDistribution {
    m: usize,
    pairs: Vec<PairTerm>,
    effective_log_m: f64,
}

impl DistanceDistribution {
    pub fn new(m: usize, pairs: Vec<PairTerm>, effective_log_m: f64) -> Result<Self> {
        if pairs.iter().any(|p| !(p.value > 0.0) || !p.value.is_finite()) {
            return Err(Error::Numeric("leading derivatives must be positive and finite".into()));
        }
        Ok(Self { m, pairs, effective_log_m })
    }

    /// Cardinality of the underlying input set.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> &[PairTerm] {
        &self.pairs
    }

    /// log M, or log M′ when some inputs are indistinguishable.
    pub fn effective_log_m(&self) -> f64 {
        self.effective_log_m
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairTerm> {
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }
}

fn ordered_pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// Canonical Rayleigh: order n_r − 1, value (1/d̄_ij²)^{n_r}.
pub fn distance_dist_rayleigh(c: &Constellation, n_r: usize) -> Result<DistanceDistribution> {
    if n_r == 0 {
        return Err(Error::InvalidArgument("n_r must be at least 1".into()));
    }
    let d = c.pairwise_sq_distances();
    let m = c.m();
    let pairs = ordered_pairs(m)
        .map(|(i, j)| {
            let (order, value) = pdf_zero_derivative_weighted(&[(d[i * m + j], n_r as u32)])?;
            Ok(PairTerm { i, j, order, value })
        })
        .collect::<Result<Vec<_>>>()?;
    DistanceDistribution::new(m, pairs, c.log_m())
}

/// Groups numerically equal values into (value, multiplicity).
fn group(values: &[f64], mult: u32) -> Vec<(f64, u32)> {
    let mut out: Vec<(f64, u32)> = Vec::new();
    for &v in values {
        match out.iter_mut().find(|(u, _)| (u - v).abs() <= 1e-12 * u.abs().max(v.abs())) {
            Some(slot) => slot.1 += mult,
            None => out.push((v, mult)),
        }
    }
    out
}

/// Entropy of the partition of the inputs into classes joined by zero-distance pairs.
fn class_entropy(m: usize, zero_pairs: &[(usize, usize)]) -> f64 {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(i, j) in zero_pairs {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
        }
    }
    let mut sizes = vec![0usize; m];
    for x in 0..m {
        let r = find(&mut parent, x);
        sizes[r] += 1;
    }
    sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / m as f64;
            -p * p.ln()
        })
        .sum()
}

/// Separable correlated Rayleigh.
///
/// d_ij² = λ_T,ij·Σ_k λ_R,k·|ξ_k|² with λ_T,ij = e†Θ_T e. Pairs with λ_T,ij = 0
/// are dropped and the inputs they join are merged into one class; only the
/// n′ nonzero receive eigenvalues contribute.
pub fn distance_dist_correlated(
    c: &Constellation,
    theta_t: &ComplexMatrix,
    theta_r: &ComplexMatrix,
) -> Result<DistanceDistribution> {
    // Validates unit diagonals, Hermitian symmetry and PSD.
    ChannelModel::correlated_rayleigh(theta_t.clone(), theta_r.clone())?;
    if theta_t.nrows() != c.n_t() {
        return Err(Error::Dimension("theta_t does not match the constellation".into()));
    }
    let (eig_t, _) = linalg::hermitian_eigen(theta_t)?;
    let (eig_r, _) = linalg::hermitian_eigen(theta_r)?;
    let lam_r = linalg::significant_eigenvalues(&eig_r, ZERO_EIG_REL);
    let top_t = eig_t.iter().cloned().fold(0.0, f64::max);
    let m = c.m();
    let mut pairs = Vec::new();
    let mut zero = Vec::new();
    for (i, j) in ordered_pairs(m) {
        let e = c.difference(i, j);
        let lam_t = linalg::quad_form(theta_t, &e);
        if lam_t <= ZERO_EIG_REL * top_t * linalg::norm2(&e) {
            zero.push((i, j));
            continue;
        }
        let weights: Vec<f64> = lam_r.iter().map(|&l| l * lam_t).collect();
        let (order, value) = pdf_zero_derivative_weighted(&group(&weights, 1))?;
        pairs.push(PairTerm { i, j, order, value });
    }
    DistanceDistribution::new(m, pairs, class_entropy(m, &zero))
}

/// Ricean with H₀ = a_R a_T†: order n_r − 1, value ((K+1)/d̄²)^{n_r}·exp(−K‖H₀u‖²), u = e/‖e‖.
pub fn distance_dist_ricean(
    c: &Constellation,
    k: f64,
    a_t: &ComplexVector,
    a_r: &ComplexVector,
) -> Result<DistanceDistribution> {
    let model = ChannelModel::ricean(k, a_t.clone(), a_r.clone())?;
    if a_t.len() != c.n_t() {
        return Err(Error::Dimension("a_T does not match the constellation".into()));
    }
    let h0 = model.h0().expect("ricean model");
    let n_r = a_r.len() as u32;
    let m = c.m();
    let pairs = ordered_pairs(m)
        .map(|(i, j)| {
            let e = c.difference(i, j);
            let d2 = linalg::norm2(&e);
            let los = linalg::norm2(&linalg::mat_vec(h0, &e)) / d2;
            let (order, base) = pdf_zero_derivative_weighted(&[(d2 / (k + 1.0), n_r)])?;
            Ok(PairTerm { i, j, order, value: base * (-k * los).exp() })
        })
        .collect::<Result<Vec<_>>>()?;
    DistanceDistribution::new(m, pairs, c.log_m())
}

/// Space-time code over canonical Rayleigh: eigenvalues of Δ_ij, each with multiplicity n_r.
pub fn distance_dist_spacetime(code: &SpaceTimeCode, n_r: usize) -> Result<DistanceDistribution> {
    if n_r == 0 {
        return Err(Error::InvalidArgument("n_r must be at least 1".into()));
    }
    let m = code.m();
    let pairs = ordered_pairs(m)
        .map(|(i, j)| {
            let (eig, _) = linalg::hermitian_eigen(&code.difference_gram(i, j))?;
            let lam = linalg::significant_eigenvalues(&eig, ZERO_EIG_REL);
            if lam.is_empty() {
                return Err(Error::DuplicatePoint(i, j));
            }
            let (order, value) = pdf_zero_derivative_weighted(&group(&lam, n_r as u32))?;
            Ok(PairTerm { i, j, order, value })
        })
        .collect::<Result<Vec<_>>>()?;
    DistanceDistribution::new(m, pairs, (m as f64).ln())
}

/// Dispatches on the channel variant.
pub fn distance_dist_for_model(c: &Constellation, model: &ChannelModel) -> Result<DistanceDistribution> {
    match model.variant() {
        ChannelVariant::CanonicalRayleigh { n_r, .. } => distance_dist_rayleigh(c, *n_r),
        ChannelVariant::CorrelatedRayleigh { theta_t, theta_r } => distance_dist_correlated(c, theta_t, theta_r),
        ChannelVariant::Ricean { k, a_t, a_r } => distance_dist_ricean(c, *k, a_t, a_r),
    }
}
