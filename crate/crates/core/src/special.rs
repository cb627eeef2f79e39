//! Special functions and numerically safe reductions.

/// Complementary error function (libm, ~1 ulp).
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Pairwise error probability ½·erfc(√(d²·snr/4)).
pub fn pairwise_q(d2: f64, snr: f64) -> f64 {
    0.5 * erfc((d2 * snr / 4.0).sqrt())
}

/// log Σ exp(a_k), stable for large magnitudes. Returns -inf for an empty slice.
pub fn log_sum_exp(a: &[f64]) -> f64 {
    let m = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + a.iter().map(|&v| (v - m).exp()).sum::<f64>().ln()
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
