//! Monte Carlo ground truth for MMSE, mutual information and ML error
//! probability, at a fixed channel and averaged over fading.
//!
//! All three quantities are computed from one pass over the noise draws. For
//! each noise vector n every input index i is visited (stratified over the
//! equiprobable input), with y = √snr·H x_i + n and log-weights
//! a_j = ‖n‖² − ‖y − √snr·H x_j‖² (so a_i = 0).
//!
//! Randomness is explicit: work is split into a fixed number of chunks, chunk
//! c draws channels from stream 2c and noise from stream 2c+1 of the seed.
//! Results depend on (seed, chunk count, inputs) only, never on scheduling.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::model::rng::{complex_gaussian, stream_rng, McRng};
use crate::model::{ChannelModel, Constellation, SnrGrid, SpaceTimeCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Mmse,
    Mi,
    Pe,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Mmse => "mmse",
            Quantity::Mi => "mi",
            Quantity::Pe => "pe",
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mmse" => Ok(Quantity::Mmse),
            "mi" => Ok(Quantity::Mi),
            "pe" => Ok(Quantity::Pe),
            other => Err(Error::InvalidArgument(format!("unknown quantity '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub channel_draws: usize,
    pub noise_draws_per_channel: usize,
    pub seed: u64,
    pub parallel_chunks: usize,
}

impl McConfig {
    pub fn new(channel_draws: usize, noise_draws_per_channel: usize, seed: u64, parallel_chunks: usize) -> Result<Self> {
        let cfg = Self { channel_draws, noise_draws_per_channel, seed, parallel_chunks };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.channel_draws == 0 || self.noise_draws_per_channel == 0 || self.parallel_chunks == 0 {
            return Err(Error::InvalidArgument("Monte Carlo counts must all be at least 1".into()));
        }
        Ok(())
    }
}

/// Noise draws needed for a relative error of roughly 30% on a gap of the given size.
pub fn noise_draws_for_gap(gap_target: f64) -> usize {
    let by_gap = if gap_target > 0.0 { (10.0 / gap_target).ceil() } else { f64::INFINITY };
    by_gap.clamp(1e4, 1e9) as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

impl Estimate {
    /// |a − b| measured in joint standard errors.
    pub fn separation(&self, other: &Estimate) -> f64 {
        let se = (self.std_error.powi(2) + other.std_error.powi(2)).sqrt();
        (self.mean - other.mean).abs() / se
    }
}

// ---------------------------------------------------------------------------
// Streaming moments
// ---------------------------------------------------------------------------

/// Welford accumulator with an order-fixed merge.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub(crate) fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub(crate) fn merge(&mut self, o: &Moments) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n as f64 / n as f64;
        self.m2 += o.m2 + d * d * (self.n as f64 * o.n as f64) / n as f64;
        self.n = n;
    }

    pub(crate) fn mean(&self) -> f64 {
        self.mean
    }

    pub(crate) fn estimate(&self) -> Estimate {
        let se = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            0.0
        };
        Estimate { mean: self.mean, std_error: se, n_samples: self.n }
    }
}

/// Runs `f(chunk, range)` over a fixed partition of `total` items; results in chunk order.
pub(crate) fn run_chunks<T, F>(total: usize, chunks: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, std::ops::Range<usize>) -> T + Sync,
{
    let chunks = chunks.max(1);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * total / chunks;
            let hi = (c + 1) * total / chunks;
            f(c, lo..hi)
        })
        .collect()
}

pub(crate) fn channel_stream(seed: u64, chunk: usize) -> McRng {
    stream_rng(seed, 2 * chunk as u64)
}

pub(crate) fn noise_stream(seed: u64, chunk: usize) -> McRng {
    stream_rng(seed, 2 * chunk as u64 + 1)
}

// ---------------------------------------------------------------------------
// Fixed-channel kernel
// ---------------------------------------------------------------------------

/// Noiseless received codebook H·X_j, flattened to `dim` complex entries each.
#[derive(Debug, Clone)]
struct Received {
    m: usize,
    dim: usize,
    hx: Vec<Complex64>,
}

impl Received {
    fn new(h: &ComplexMatrix, words: &[ComplexMatrix]) -> Self {
        let (n_r, n_t) = h.shape();
        let t = words[0].ncols();
        let dim = n_r * t;
        let mut hx = Vec::with_capacity(words.len() * dim);
        for x in words {
            debug_assert_eq!(x.nrows(), n_t);
            for r in 0..n_r {
                for s in 0..t {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n_t {
                        acc += h[(r, k)] * x[(k, s)];
                    }
                    hx.push(acc);
                }
            }
        }
        Self { m: words.len(), dim, hx }
    }

    fn point(&self, j: usize) -> &[Complex64] {
        &self.hx[j * self.dim..(j + 1) * self.dim]
    }
}

/// Per-noise-draw values of (mmse, mi gap, error indicator) at one snr.
struct Kernel<'a> {
    rx: &'a Received,
    /// √snr·H x_j
    r: Vec<Complex64>,
    a: Vec<f64>,
    y: Vec<Complex64>,
    acc: Vec<Complex64>,
}

impl<'a> Kernel<'a> {
    fn new(rx: &'a Received, snr: f64) -> Self {
        let sqrt_snr = snr.sqrt();
        Self {
            rx,
            r: rx.hx.iter().map(|z| z * sqrt_snr).collect(),
            a: vec![0.0; rx.m],
            y: vec![Complex64::new(0.0, 0.0); rx.dim],
            acc: vec![Complex64::new(0.0, 0.0); rx.dim],
        }
    }

    /// Returns (mmse, gap, error) averaged over the M inputs for this noise vector.
    fn eval(&mut self, noise: &[Complex64]) -> [f64; 3] {
        let (m, dim) = (self.rx.m, self.rx.dim);
        let n2: f64 = noise.iter().map(|z| z.norm_sqr()).sum();
        let mut tot = [0.0; 3];
        for i in 0..m {
            for k in 0..dim {
                self.y[k] = self.r[i * dim + k] + noise[k];
            }
            let mut amax = f64::NEG_INFINITY;
            for j in 0..m {
                if j == i {
                    self.a[j] = 0.0;
                    continue;
                }
                let rj = &self.r[j * dim..(j + 1) * dim];
                let d2: f64 = self.y.iter().zip(rj).map(|(y, r)| (y - r).norm_sqr()).sum();
                let aj = n2 - d2;
                self.a[j] = aj;
                amax = amax.max(aj);
            }
            if m == 1 {
                continue;
            }
            // ML error: some competitor strictly closer than the truth.
            if amax > 0.0 {
                tot[2] += 1.0;
            }
            let shift = amax.max(0.0);
            let mut wsum = (-shift).exp();
            let mut others = 0.0;
            self.acc.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            let hxi = self.rx.point(i);
            for j in 0..m {
                if j == i {
                    continue;
                }
                let w = (self.a[j] - shift).exp();
                if w == 0.0 {
                    continue;
                }
                others += w;
                let hxj = self.rx.point(j);
                for k in 0..dim {
                    self.acc[k] += (hxi[k] - hxj[k]) * w;
                }
            }
            wsum += others;
            tot[1] += if shift == 0.0 { others.ln_1p() } else { shift + wsum.ln() };
            let num: f64 = self.acc.iter().map(|z| z.norm_sqr()).sum();
            tot[0] += num / (wsum * wsum);
        }
        let inv = 1.0 / m as f64;
        [tot[0] * inv, tot[1] * inv, tot[2] * inv]
    }
}

fn draw_noise(rng: &mut McRng, buf: &mut [Complex64]) {
    for z in buf.iter_mut() {
        *z = complex_gaussian(rng);
    }
}

fn check_snr(snr: f64) -> Result<()> {
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::InvalidArgument(format!("snr must be positive and finite, got {snr}")));
    }
    Ok(())
}

fn words_of(c: &Constellation) -> Vec<ComplexMatrix> {
    SpaceTimeCode::from_constellation(c).codewords().to_vec()
}

fn check_shapes(h: &ComplexMatrix, n_t: usize) -> Result<()> {
    if h.ncols() != n_t {
        return Err(Error::Dimension(format!(
            "channel has {} columns but the inputs have {} entries",
            h.ncols(),
            n_t
        )));
    }
    Ok(())
}

/// Fixed-channel estimates of (mmse, mi gap, pe) over the noise.
fn fixed_h_all(snr: f64, h: &ComplexMatrix, words: &[ComplexMatrix], cfg: &McConfig) -> [Estimate; 3] {
    let rx = Received::new(h, words);
    let parts = run_chunks(cfg.noise_draws_per_channel, cfg.parallel_chunks, |c, range| {
        let mut rng = noise_stream(cfg.seed, c);
        let mut kernel = Kernel::new(&rx, snr);
        let mut noise = vec![Complex64::new(0.0, 0.0); rx.dim];
        let mut mom = [Moments::default(); 3];
        for _ in range {
            draw_noise(&mut rng, &mut noise);
            let v = kernel.eval(&noise);
            for q in 0..3 {
                mom[q].push(v[q]);
            }
        }
        mom
    });
    let mut total = [Moments::default(); 3];
    for p in &parts {
        for q in 0..3 {
            total[q].merge(&p[q]);
        }
    }
    [total[0].estimate(), total[1].estimate(), total[2].estimate()]
}

// ---------------------------------------------------------------------------
// Fixed-channel operations
// ---------------------------------------------------------------------------

/// mmse(snr; H) = E‖Hx − H·E{x|y}‖².
pub fn mmse_fixed_h(snr: f64, h: &ComplexMatrix, c: &Constellation, cfg: &McConfig) -> Result<Estimate> {
    check_snr(snr)?;
    cfg.validate()?;
    check_shapes(h, c.n_t())?;
    Ok(fixed_h_all(snr, h, &words_of(c), cfg)[0])
}

/// I(snr; H) in nats.
pub fn mi_fixed_h(snr: f64, h: &ComplexMatrix, c: &Constellation, cfg: &McConfig) -> Result<Estimate> {
    check_snr(snr)?;
    cfg.validate()?;
    check_shapes(h, c.n_t())?;
    let gap = fixed_h_all(snr, h, &words_of(c), cfg)[1];
    Ok(Estimate { mean: c.log_m() - gap.mean, ..gap })
}

/// ML (minimum received distance) symbol error probability.
pub fn pe_ml_fixed_h(snr: f64, h: &ComplexMatrix, c: &Constellation, cfg: &McConfig) -> Result<Estimate> {
    check_snr(snr)?;
    cfg.validate()?;
    check_shapes(h, c.n_t())?;
    Ok(fixed_h_all(snr, h, &words_of(c), cfg)[2])
}

// ---------------------------------------------------------------------------
// Fading averages
// ---------------------------------------------------------------------------

/// Averaged estimates at one snr. `mi_gap` is log M − Ī.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvgSample {
    pub snr: f64,
    pub log_m: f64,
    pub mmse: Estimate,
    pub mi_gap: Estimate,
    pub pe: Estimate,
}

impl AvgSample {
    pub fn get(&self, kind: Quantity) -> Estimate {
        match kind {
            Quantity::Mmse => self.mmse,
            Quantity::Mi => Estimate { mean: self.log_m - self.mi_gap.mean, ..self.mi_gap },
            Quantity::Pe => self.pe,
        }
    }
}

fn avg_words(snrs: &[f64], m: &ChannelModel, words: &[ComplexMatrix], log_m: f64, cfg: &McConfig) -> Result<Vec<AvgSample>> {
    for &s in snrs {
        check_snr(s)?;
    }
    cfg.validate()?;
    if words[0].nrows() != m.n_t() {
        return Err(Error::Dimension(format!(
            "model has n_t = {} but inputs have {} rows",
            m.n_t(),
            words[0].nrows()
        )));
    }
    let single_channel = cfg.channel_draws == 1;
    let parts = run_chunks(cfg.channel_draws, cfg.parallel_chunks, |c, range| {
        let mut crng = channel_stream(cfg.seed, c);
        let mut nrng = noise_stream(cfg.seed, c);
        let dim = m.n_r() * words[0].ncols();
        let mut noise = vec![Complex64::new(0.0, 0.0); dim * cfg.noise_draws_per_channel];
        let mut outer = vec![[Moments::default(); 3]; snrs.len()];
        for _ in range {
            let h = m.sample_channel(&mut crng);
            let rx = Received::new(&h, words);
            draw_noise(&mut nrng, &mut noise);
            for (s, &snr) in snrs.iter().enumerate() {
                let mut kernel = Kernel::new(&rx, snr);
                let mut inner = [Moments::default(); 3];
                for nv in noise.chunks_exact(dim) {
                    let v = kernel.eval(nv);
                    for q in 0..3 {
                        inner[q].push(v[q]);
                    }
                }
                for q in 0..3 {
                    if single_channel {
                        outer[s][q].merge(&inner[q]);
                    } else {
                        outer[s][q].push(inner[q].mean());
                    }
                }
            }
        }
        outer
    });
    let mut total = vec![[Moments::default(); 3]; snrs.len()];
    for p in &parts {
        for (t, o) in total.iter_mut().zip(p) {
            for q in 0..3 {
                t[q].merge(&o[q]);
            }
        }
    }
    Ok(snrs
        .iter()
        .zip(&total)
        .map(|(&snr, t)| AvgSample {
            snr,
            log_m,
            mmse: t[0].estimate(),
            mi_gap: t[1].estimate(),
            pe: t[2].estimate(),
        })
        .collect())
}

/// Fading averages of all three quantities on a grid, with common random numbers across snr.
pub fn avg_quantities(grid: &SnrGrid, m: &ChannelModel, c: &Constellation, cfg: &McConfig) -> Result<Vec<AvgSample>> {
    avg_words(grid.points(), m, &words_of(c), c.log_m(), cfg)
}

/// As [`avg_quantities`] for a space-time code: y = √snr·H X + N over t symbol intervals.
pub fn avg_quantities_code(
    grid: &SnrGrid,
    m: &ChannelModel,
    code: &SpaceTimeCode,
    cfg: &McConfig,
) -> Result<Vec<AvgSample>> {
    avg_words(grid.points(), m, code.codewords(), (code.m() as f64).ln(), cfg)
}

/// Fading average of one quantity. With one channel draw the noise-stage error is reported.
pub fn avg_quantity(kind: Quantity, snr: f64, m: &ChannelModel, c: &Constellation, cfg: &McConfig) -> Result<Estimate> {
    let s = avg_words(&[snr], m, &words_of(c), c.log_m(), cfg)?;
    Ok(s[0].get(kind))
}

/// Frozen channel and noise draws, reusable across candidate designs.
///
/// Evaluating different snr values (or powers) on the same draws turns the MC
/// error of a comparison into a shared offset.
#[derive(Debug, Clone)]
pub struct CommonDraws {
    channels: Vec<ComplexMatrix>,
    noise: Vec<Vec<Complex64>>,
    chunks: usize,
}

impl CommonDraws {
    /// Draws from `m` with the chunked stream layout of [`avg_quantities`].
    pub fn from_model(m: &ChannelModel, cfg: &McConfig) -> Result<Self> {
        cfg.validate()?;
        let dim = m.n_r();
        let parts = run_chunks(cfg.channel_draws, cfg.parallel_chunks, |c, range| {
            let mut crng = channel_stream(cfg.seed, c);
            let mut nrng = noise_stream(cfg.seed, c);
            let mut out = Vec::with_capacity(range.len());
            for _ in range {
                let h = m.sample_channel(&mut crng);
                let mut noise = vec![Complex64::new(0.0, 0.0); dim * cfg.noise_draws_per_channel];
                draw_noise(&mut nrng, &mut noise);
                out.push((h, noise));
            }
            out
        });
        Ok(Self::from_parts(parts.into_iter().flatten().unzip(), cfg.parallel_chunks))
    }

    /// Scalar draws h = μ + σ·g with g ~ CN(0, 1).
    pub fn scalar(mu: Complex64, sigma2: f64, cfg: &McConfig) -> Result<Self> {
        cfg.validate()?;
        if !(sigma2 > 0.0) {
            return Err(Error::InvalidArgument("fading variance must be positive".into()));
        }
        let sigma = sigma2.sqrt();
        let parts = run_chunks(cfg.channel_draws, cfg.parallel_chunks, |c, range| {
            let mut crng = channel_stream(cfg.seed, c);
            let mut nrng = noise_stream(cfg.seed, c);
            let mut out = Vec::with_capacity(range.len());
            for _ in range {
                let h = mu + complex_gaussian(&mut crng) * sigma;
                let mut noise = vec![Complex64::new(0.0, 0.0); cfg.noise_draws_per_channel];
                draw_noise(&mut nrng, &mut noise);
                out.push((ComplexMatrix::from_element(1, 1, h), noise));
            }
            out
        });
        Ok(Self::from_parts(parts.into_iter().flatten().unzip(), cfg.parallel_chunks))
    }

    fn from_parts((channels, noise): (Vec<ComplexMatrix>, Vec<Vec<Complex64>>), chunks: usize) -> Self {
        Self { channels, noise, chunks }
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Per-channel noise averages of (mmse, mi gap, error) at `snr`, in draw order.
    pub fn per_channel(&self, snr: f64, c: &Constellation) -> Result<Vec<[f64; 3]>> {
        check_snr(snr)?;
        if let Some(h) = self.channels.first() {
            check_shapes(h, c.n_t())?;
        }
        let words = words_of(c);
        let n = self.channels.len();
        let parts = run_chunks(n, self.chunks, |_, range| {
            range
                .map(|k| {
                    let rx = Received::new(&self.channels[k], &words);
                    let mut kernel = Kernel::new(&rx, snr);
                    let mut inner = [Moments::default(); 3];
                    for nv in self.noise[k].chunks_exact(rx.dim) {
                        let v = kernel.eval(nv);
                        for q in 0..3 {
                            inner[q].push(v[q]);
                        }
                    }
                    [inner[0].mean(), inner[1].mean(), inner[2].mean()]
                })
                .collect::<Vec<_>>()
        });
        Ok(parts.into_iter().flatten().collect())
    }

    /// Fading average at `snr` on the frozen draws.
    pub fn average(&self, snr: f64, c: &Constellation) -> Result<AvgSample> {
        let rows = self.per_channel(snr, c)?;
        let mut mom = [Moments::default(); 3];
        for r in &rows {
            for q in 0..3 {
                mom[q].push(r[q]);
            }
        }
        Ok(AvgSample { snr, log_m: c.log_m(), mmse: mom[0].estimate(), mi_gap: mom[1].estimate(), pe: mom[2].estimate() })
    }
}

/// Mean and standard error of paired differences a_k − b_k.
pub fn paired_difference(a: &[f64], b: &[f64]) -> Estimate {
    let mut mom = Moments::default();
    for (x, y) in a.iter().zip(b) {
        mom.push(x - y);
    }
    mom.estimate()
}

// ---------------------------------------------------------------------------
// Scaled high-SNR sequences
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonPoint {
    pub snr: f64,
    pub value: f64,
    pub std_error: f64,
    /// Standard error above 20% of the value: the gap is below MC resolution.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSeries {
    pub kind: Quantity,
    pub d: u32,
    pub points: Vec<EpsilonPoint>,
}

impl EpsilonSeries {
    pub fn any_flagged(&self) -> bool {
        self.points.iter().any(|p| p.flagged)
    }

    /// Residual snr·(scaled − leading), the next coefficient when the sequence has converged.
    pub fn second_order(&self, leading: f64) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.snr, p.snr * (p.value - leading))).collect()
    }

    /// Spread (max − min) of the scaled values.
    pub fn spread(&self) -> f64 {
        let hi = self.points.iter().map(|p| p.value).fold(f64::NEG_INFINITY, f64::max);
        let lo = self.points.iter().map(|p| p.value).fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

/// snr^{d+1}·m̄mse, snr^d·(log M − Ī) or snr^d·P̄_e per grid point.
pub fn empirical_epsilon(
    kind: Quantity,
    grid: &SnrGrid,
    m: &ChannelModel,
    c: &Constellation,
    cfg: &McConfig,
    d: u32,
) -> Result<EpsilonSeries> {
    if d == 0 {
        return Err(Error::InvalidArgument("diversity order must be at least 1".into()));
    }
    let samples = avg_quantities(grid, m, c, cfg)?;
    Ok(scale_samples(kind, &samples, d))
}

pub fn scale_samples(kind: Quantity, samples: &[AvgSample], d: u32) -> EpsilonSeries {
    let points = samples
        .iter()
        .map(|s| {
            let (est, power) = match kind {
                Quantity::Mmse => (s.mmse, d + 1),
                Quantity::Mi => (s.mi_gap, d),
                Quantity::Pe => (s.pe, d),
            };
            let scale = s.snr.powi(power as i32);
            let value = est.mean * scale;
            let std_error = est.std_error * scale;
            EpsilonPoint { snr: s.snr, value, std_error, flagged: !(std_error <= 0.2 * value.abs()) }
        })
        .collect();
    EpsilonSeries { kind, d, points }
}

// ---------------------------------------------------------------------------
// Density of d_ij² near zero
// ---------------------------------------------------------------------------

/// Draws of d_ij²(H) = ‖H(X_i − X_j)‖²_F for the requested ordered pairs.
pub fn sample_pair_distances(
    m: &ChannelModel,
    code: &SpaceTimeCode,
    pairs: &[(usize, usize)],
    draws: usize,
    seed: u64,
    chunks: usize,
) -> Vec<Vec<f64>> {
    let diffs: Vec<ComplexMatrix> = pairs
        .iter()
        .map(|&(i, j)| &code.codewords()[i] - &code.codewords()[j])
        .collect();
    let parts = run_chunks(draws, chunks, |c, range| {
        let mut rng = channel_stream(seed, c);
        let mut out = vec![Vec::with_capacity(range.len()); pairs.len()];
        for _ in range {
            let h = m.sample_channel(&mut rng);
            for (p, e) in diffs.iter().enumerate() {
                out[p].push(crate::linalg::fro2(&(&h * e)));
            }
        }
        out
    });
    let mut all = vec![Vec::with_capacity(draws); pairs.len()];
    for part in parts {
        for (a, v) in all.iter_mut().zip(part) {
            a.extend(v);
        }
    }
    all
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroDensityEstimate {
    /// Estimated p^{(order)}(0).
    pub estimate: f64,
    /// Relative standard error (binomial, ≈ 1/√count).
    pub rel_std_error: f64,
    /// Bin [0, bin] used.
    pub bin: f64,
    pub count: usize,
}

/// One-sided box-kernel estimate of the leading derivative at zero.
///
/// The bin is the smallest [0, b] holding `min_count` samples; with
/// p(x) ≈ L·x^k/k! the bin mass is L·b^{k+1}/(k+1)!.
pub fn estimate_leading_derivative(samples: &[f64], order: u32, min_count: usize) -> Option<ZeroDensityEstimate> {
    if min_count == 0 || samples.len() < min_count {
        return None;
    }
    let mut sorted = samples.to_vec();
    let k = min_count - 1;
    sorted.select_nth_unstable_by(k, f64::total_cmp);
    let bin = sorted[k];
    if !(bin > 0.0) {
        return None;
    }
    let mass = min_count as f64 / samples.len() as f64;
    let estimate = mass * crate::special::factorial(order + 1) / bin.powi(order as i32 + 1);
    Some(ZeroDensityEstimate {
        estimate,
        rel_std_error: 1.0 / (min_count as f64).sqrt(),
        bin,
        count: min_count,
    })
}
