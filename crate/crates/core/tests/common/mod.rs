//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

// ---------------------------------------------------------------------------
// Adaptive Gauss–Kronrod (7/15) quadrature
// ---------------------------------------------------------------------------

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// (Kronrod estimate, |Kronrod − Gauss|) on [a, b].
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// ∫_a^b f by global adaptive bisection until the summed error estimate is below `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let mut parts = vec![(a, b, gk15(&f, a, b))];
    for _ in 0..5000 {
        let err: f64 = parts.iter().map(|p| p.2 .1).sum();
        if err <= tol {
            break;
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .unwrap();
        let (lo, hi, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        parts.push((lo, mid, gk15(&f, lo, mid)));
        parts.push((mid, hi, gk15(&f, mid, hi)));
    }
    parts.iter().map(|p| p.2 .0).sum()
}

/// ∫_0^∞ f via t = x/(1 − x).
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, tol: f64) -> f64 {
    integrate(
        |x| {
            if x >= 1.0 {
                return 0.0;
            }
            let t = x / (1.0 - x);
            f(t) / ((1.0 - x) * (1.0 - x))
        },
        0.0,
        1.0,
        tol,
    )
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

pub fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

// ---------------------------------------------------------------------------
// Partial-fraction route for two eigenvalues
// ---------------------------------------------------------------------------

/// Generalized binomial C(−μ, j).
fn neg_binomial(mu: u32, j: u32) -> f64 {
    let mut v = 1.0;
    for r in 0..j {
        v *= -(mu as f64) - r as f64;
        v /= (r + 1) as f64;
    }
    v
}

/// Coefficients A_k, k = 1..μ₁, of the (1 + λ₁s)^{−k} terms in (1+λ₁s)^{−μ₁}(1+λ₂s)^{−μ₂}.
fn residues(l1: f64, mu1: u32, l2: f64, mu2: u32) -> Vec<f64> {
    // With w = 1 + λ₁s: 1 + λ₂s = (1 − r) + r·w, r = λ₂/λ₁.
    let r = l2 / l1;
    let base = (1.0 - r).powi(-(mu2 as i32));
    let q = r / (1.0 - r);
    (1..=mu1)
        .map(|k| {
            let j = mu1 - k;
            base * neg_binomial(mu2, j) * q.powi(j as i32)
        })
        .collect()
}

/// p^{(n)}(0) of the density of λ₁·Gamma(μ₁) + λ₂·Gamma(μ₂), by inverting each partial fraction.
///
/// A·x^{k−1}e^{−x/λ}/(λ^k(k−1)!) contributes A·C(n, k−1)·(−1/λ)^{n−k+1}/λ^k for n ≥ k − 1.
pub fn two_eig_derivative(l1: f64, mu1: u32, l2: f64, mu2: u32, n: u32) -> f64 {
    two_eig_derivative_terms(l1, mu1, l2, mu2, n).0
}

/// As [`two_eig_derivative`], with the sum of the absolute terms as a second value.
///
/// The terms cancel when λ₁ ≈ λ₂, so round-off in the result scales with the second value.
pub fn two_eig_derivative_terms(l1: f64, mu1: u32, l2: f64, mu2: u32, n: u32) -> (f64, f64) {
    let term = |lam: f64, a: &[f64]| -> (f64, f64) {
        a.iter().enumerate().fold((0.0, 0.0), |(sum, abs), (idx, &amk)| {
            let k = idx as u32 + 1;
            if n + 1 < k {
                return (sum, abs);
            }
            let t = amk * binomial(n, k - 1) * (-1.0 / lam).powi((n + 1 - k) as i32) / lam.powi(k as i32);
            (sum + t, abs + t.abs())
        })
    };
    if (l1 - l2).abs() <= 1e-14 * l1.max(l2) {
        let mut a = vec![0.0; (mu1 + mu2) as usize];
        a[(mu1 + mu2 - 1) as usize] = 1.0;
        return term(l1, &a);
    }
    let (s1, a1) = term(l1, &residues(l1, mu1, l2, mu2));
    let (s2, a2) = term(l2, &residues(l2, mu2, l1, mu1));
    (s1 + s2, a1 + a2)
}

// ---------------------------------------------------------------------------
// Waterline oracle
// ---------------------------------------------------------------------------

/// argmin Σ c_k/p_k on {p ≥ 0, Σp = budget}: p_k = √(c_k/ν), ν by bisection.
pub fn waterline(c: &[f64], budget: f64) -> Vec<f64> {
    let total = |nu: f64| c.iter().map(|ck| (ck / nu).sqrt()).sum::<f64>();
    let (mut lo, mut hi) = (1e-300f64, 1e300f64);
    for _ in 0..4000 {
        let mid = (lo * hi).sqrt();
        if total(mid) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    let nu = (lo * hi).sqrt();
    c.iter().map(|ck| (ck / nu).sqrt()).collect()
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// BPSK error probability averaged over 1×1 Rayleigh fading.
pub fn rayleigh_bpsk_pe(snr: f64) -> f64 {
    0.5 * (1.0 - (snr / (1.0 + snr)).sqrt())
}

/// Smallest principal angle between unit vectors, in radians.
pub fn vector_angle(u: &[num_complex::Complex64], v: &[num_complex::Complex64]) -> f64 {
    let dot: num_complex::Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let nu: f64 = u.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    (dot.norm() / (nu * nv)).clamp(0.0, 1.0).acos()
}
