//! Shared numerical kernels.
//!
//! Everything here is a pure function of its inputs; values are freely
//! shareable across threads. [`RngStream`] is single-owner per trial.

mod assignment;
mod eigen;
mod quadrature;
mod rng;

pub use assignment::{best_permutation, Assignment};
pub use eigen::{project_psd, sym_eig, sym_eig_full, SymEig};
pub use quadrature::{gauss_hermite, QuadratureRule};
pub use rng::RngStream;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix not symmetric: |M[{i},{j}] - M[{j},{i}]| = {delta:.3e} exceeds tolerance {tol:.3e}")]
    NotSymmetric {
        i: usize,
        j: usize,
        delta: f64,
        tol: f64,
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("top_k = {top_k} out of range 1..={n}")]
    TopKOutOfRange { top_k: usize, n: usize },
    #[error("eigensolver did not converge after {iterations} iterations (off-diagonal residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("quadrature order {order} outside supported range 2..=200")]
    OrderOutOfRange { order: usize },
    #[error("matrix entry at ({i},{j}) is {value}; expected finite and >= 0")]
    InvalidEntry { i: usize, j: usize, value: f64 },
    #[error("matrix must be non-empty")]
    Empty,
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Double factorial (2m-1)!! of the odd number 2m-1; equals the 2m-th
/// standard Gaussian moment.
pub fn odd_double_factorial(m: u32) -> f64 {
    (1..=m).map(|j| (2 * j - 1) as f64).product()
}

/// Numerically stable log(sum(exp(terms))).
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = terms.iter().map(|&t| (t - max).exp()).sum();
    max + sum.ln()
}
