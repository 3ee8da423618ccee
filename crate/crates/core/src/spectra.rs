//! Spectra of the scaled Gram matrices (1/n) X^H X and (1/n) X X^H, and the
//! gamma approximation of their largest eigenvalue.
//!
//! The ambient matrices are n x n but have rank at most min(rows, cols) of
//! the rectangular factor, so the decomposition runs on the small-side Gram
//! matrix and maps eigenvectors up. That keeps the per-realization cost at
//! O(n * m^2) instead of O(n^3).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::channel::ComplexMat;
use crate::error::{Error, Result};

/// Mean and variance of the limiting law of the centered, rescaled largest
/// eigenvalue of a complex Wishart matrix (numerically computed constants).
const EDGE_MEAN_OFFSET: f64 = 1.7711;
const EDGE_VARIANCE: f64 = 0.8132;

/// Eigenvalues below `RANK_TOL * lambda_max` count as zero.
const RANK_TOL: f64 = 1e-10;

/// Which scaled Gram product of the rectangular factor X to decompose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// (1/n) X X^H — used for the n x n_t first-hop factor.
    Left,
    /// (1/n) X^H X — used for the n_r x n second-hop factor.
    Right,
}

/// Nonzero part of the spectrum of the n x n scaled Gram matrix.
///
/// `eigenvalues` holds the min(rows, cols) potentially nonzero eigenvalues in
/// descending order; `eigenvectors` holds the n-dimensional unit eigenvectors
/// for the first `nonzero_count` of them (rank-deficient factors, e.g. the
/// line-of-sight channel, have no well-defined eigenvectors past the rank).
/// Each eigenvector's global phase is canonicalized so its first
/// significant component is real positive.
#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<DVector<Complex64>>,
    pub nonzero_count: usize,
}

impl SpectralDecomp {
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Frobenius reconstruction error of sum_l lambda_l v_l v_l^H against W.
    /// Exposed for verification; W is rebuilt from the factor.
    pub fn reconstruction_error(&self, x: &ComplexMat, n: usize, side: Side) -> f64 {
        let w = scaled_gram_full(x, n, side);
        let dim = w.nrows();
        let mut rec = DMatrix::<Complex64>::zeros(dim, dim);
        for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            rec += v * v.adjoint() * Complex64::new(*lam, 0.0);
        }
        let num: f64 = (&w - &rec).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let den: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        num / den
    }
}

fn scaled_gram_small(x: &ComplexMat, n: usize, side: Side) -> DMatrix<Complex64> {
    let inv_n = Complex64::new(1.0 / n as f64, 0.0);
    match side {
        // spectrum of (1/n) X^H X via the rows x rows matrix (1/n) X X^H
        Side::Right => x * x.adjoint() * inv_n,
        // spectrum of (1/n) X X^H via the cols x cols matrix (1/n) X^H X
        Side::Left => x.adjoint() * x * inv_n,
    }
}

fn scaled_gram_full(x: &ComplexMat, n: usize, side: Side) -> DMatrix<Complex64> {
    let inv_n = Complex64::new(1.0 / n as f64, 0.0);
    match side {
        Side::Right => x.adjoint() * x * inv_n,
        Side::Left => x * x.adjoint() * inv_n,
    }
}

/// Rotate the global phase so the first component with significant magnitude
/// is real positive; makes the (eigenvalue, eigenvector) pairing and signs
/// reproducible across runs.
fn canonicalize_phase(v: &mut DVector<Complex64>) {
    let tol = 1e-9 * v.norm();
    if let Some(z) = v.iter().find(|z| z.norm() > tol) {
        let rot = z.conj() / z.norm();
        for e in v.iter_mut() {
            *e *= rot;
        }
    }
}

/// Eigendecomposition of the n x n scaled Gram matrix of X.
///
/// side = Right decomposes (1/n) X^H X (requires X to have n columns);
/// side = Left decomposes (1/n) X X^H (requires X to have n rows).
pub fn wishart_decompose(x: &ComplexMat, n: usize, side: Side) -> Result<SpectralDecomp> {
    let ok = match side {
        Side::Right => x.ncols() == n,
        Side::Left => x.nrows() == n,
    };
    if !ok {
        return Err(Error::Shape(format!(
            "factor is {}x{} but the surface dimension is {n} on side {side:?}",
            x.nrows(),
            x.ncols()
        )));
    }
    let small = scaled_gram_small(x, n, side);
    // enforce exact Hermitian symmetry before the solver
    let small = (&small + small.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = small.symmetric_eigen();

    let m = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("eigenvalues are finite")
    });

    let eigenvalues: Vec<f64> = order
        .iter()
        .map(|&i| eig.eigenvalues[i].max(0.0))
        .collect();
    let lambda_max = eigenvalues.first().copied().unwrap_or(0.0);
    let nonzero_count = eigenvalues
        .iter()
        .take_while(|&&l| l > RANK_TOL * lambda_max && l > 0.0)
        .count();

    let mut eigenvectors = Vec::with_capacity(nonzero_count);
    for &i in order.iter().take(nonzero_count) {
        let w = eig.eigenvectors.column(i);
        let lam = eig.eigenvalues[i];
        // lift the small-side eigenvector to the n-dimensional one
        let mut v = match side {
            Side::Right => x.adjoint() * w,
            Side::Left => x * w,
        };
        v /= Complex64::new((n as f64 * lam).sqrt(), 0.0);
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        canonicalize_phase(&mut v);
        eigenvectors.push(v);
    }

    Ok(SpectralDecomp {
        eigenvalues,
        eigenvectors,
        nonzero_count,
    })
}

/// Gamma approximation of the largest eigenvalue of the n x n scaled Gram
/// matrix built from an m x n (or n x m) standard complex Gaussian factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSummary {
    pub mean: f64,
    pub variance: f64,
    pub gamma_shape: f64,
    pub gamma_scale: f64,
}

/// Closed-form mean/variance of the largest eigenvalue and the
/// moment-matched gamma parameters.
pub fn lambda_plus_gamma(m: usize, n: usize) -> Result<EigenSummary> {
    if m < 1 || n < m {
        return Err(Error::InvalidParameter(format!(
            "need n >= m >= 1, got m = {m}, n = {n}"
        )));
    }
    let (mf, nf) = (m as f64, n as f64);
    let alpha1 = (1.0 + (mf / nf).sqrt()).powi(2);
    let beta1 = nf.powf(-2.0 / 3.0) * (1.0 + (mf / nf).sqrt()) * (1.0 + (nf / mf).sqrt()).cbrt();
    let mean = alpha1 - EDGE_MEAN_OFFSET * beta1;
    let variance = EDGE_VARIANCE * beta1 * beta1;
    if mean <= 0.0 {
        // the asymptotic fit breaks down (only reachable at m = n = 1)
        return Err(Error::NumericDomain(format!(
            "largest-eigenvalue fit has nonpositive mean {mean} at (m, n) = ({m}, {n})"
        )));
    }
    Ok(EigenSummary {
        mean,
        variance,
        gamma_shape: mean * mean / variance,
        gamma_scale: variance / mean,
    })
}
