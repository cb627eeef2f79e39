//! Complex matrix helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Tolerance for the Hermitian symmetry check.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a PSD claim.
pub const PSD_TOL: f64 = -1e-10;
/// Eigenvalues below this are clamped to zero in square roots.
pub const SQRT_CLAMP: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real matrix lifted to complex entries.
pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_row_iterator(rows, cols, data.iter().map(|&v| c(v, 0.0)))
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn is_hermitian(m: &ComplexMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > HERMITIAN_TOL {
                return false;
            }
        }
    }
    true
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Columns of the returned matrix are the matching unit eigenvectors.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !is_hermitian(m) {
        return Err(Error::InvalidMatrix("matrix is not Hermitian".into()));
    }
    if !all_finite(m) {
        return Err(Error::InvalidMatrix("matrix has non-finite entries".into()));
    }
    let n = m.nrows();
    // Symmetrize exactly before the solver sees it.
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok((values, vectors))
}

/// Checks the Hermitian PSD claim: symmetric within 1e-12, min eigenvalue >= -1e-10.
pub fn check_psd(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (values, _) = hermitian_eigen(m)?;
    match values.first() {
        Some(&lo) if lo < PSD_TOL => Err(Error::InvalidMatrix(format!(
            "matrix is not PSD (min eigenvalue {lo:.3e})"
        ))),
        _ => Ok(values),
    }
}

/// Hermitian PSD square root, eigenvalues clamped at zero below 1e-12.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eigen(m)?;
    if let Some(&lo) = values.first() {
        if lo < PSD_TOL {
            return Err(Error::InvalidMatrix(format!(
                "square root of a non-PSD matrix (min eigenvalue {lo:.3e})"
            )));
        }
    }
    Ok(spectral_map(&values, &vectors, |l| {
        if l < SQRT_CLAMP {
            0.0
        } else {
            l.sqrt()
        }
    }))
}

/// V diag(f(λ)) V†.
pub fn spectral_map(values: &[f64], vectors: &ComplexMatrix, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (k, &l) in values.iter().enumerate() {
        let s = f(l);
        for r in 0..n {
            scaled[(r, k)] *= s;
        }
    }
    &scaled * vectors.adjoint()
}

pub fn trace_re(m: &ComplexMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// Frobenius norm squared.
pub fn fro2(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// x† A x for Hermitian A (real part).
pub fn quad_form(a: &ComplexMatrix, x: &[Complex64]) -> f64 {
    let n = x.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += a[(i, j)] * x[j];
        }
        acc += x[i].conj() * row;
    }
    acc.re
}

/// A x for a dense matrix and a slice.
pub fn mat_vec(a: &ComplexMatrix, x: &[Complex64]) -> Vec<Complex64> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum())
        .collect()
}

/// Dimension of the numerically nonzero spectrum: eigenvalues above `rel` times the largest.
pub fn significant_eigenvalues(values: &[f64], rel: f64) -> Vec<f64> {
    let top = values.iter().cloned().fold(0.0_f64, f64::max);
    if top <= 0.0 {
        return Vec::new();
    }
    values.iter().cloned().filter(|&l| l > rel * top).collect()
}
