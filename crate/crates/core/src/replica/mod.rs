//! Closed-form asymptotics for the symmetric spiked model: the free-energy
//! functional and its maximizer, limiting MMSE and mutual information,
//! clustering thresholds, the tanh fixed point, state evolution, and a
//! finite-size enumeration oracle.

mod enumeration;
mod scalar;
mod simplex;

pub use enumeration::{enumeration_free_energy, EnumerationResult};
pub use scalar::{
    free_energy_scalar, maximize_free_energy_scalar, psi_stationarity_check, scalar_mmse,
    state_evolution, state_evolution_from, tanh_fixed_point, PsiReport, ScalarChannel,
    SnrConvention,
};
pub use simplex::{
    cluster_threshold, free_energy_simplex, maximize_free_energy_simplex, SimplexBatch,
    SimplexOptimum, ThresholdResult,
};

use crate::model::Prior;
use crate::numerics::QuadratureRule;
use ndarray::Array2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReplicaError {
    #[error("prior not supported here: {reason}; use the Monte Carlo variant for continuous priors")]
    UnsupportedPrior { reason: String },
    #[error("argument {name} = {value} outside {constraint}")]
    BadArgument {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("Q = (a-b)I + b*11^T must be PSD: requires a >= b and a + (k-1)b >= 0, got a = {a}, b = {b}")]
    NotPsd { a: f64, b: f64 },
    #[error("bisection bracket failure: no sign change on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("optimization did not converge: {detail}")]
    NoConvergence { detail: String },
    #[error("gamma grid too coarse: stationary points closer than 2 grid steps near gamma = {gamma:.4}; increase the grid size")]
    RefineRequested { gamma: f64 },
    #[error("enumeration budget exceeded: {atoms}^{n} configurations > {budget}")]
    BudgetExceeded {
        atoms: usize,
        n: usize,
        budget: usize,
    },
    #[error(transparent)]
    Numerics(#[from] crate::numerics::NumericsError),
}

/// Which branch of the free energy attained the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Uninformative,
    Informative,
}

/// Replica-analytics output for one SNR point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RSolution {
    /// SNR argument of the free energy (equals q_theta^2 for the symmetric model).
    pub s: f64,
    /// Maximizer of the free energy (1x1 for scalar priors).
    pub q_star: Array2<f64>,
    pub free_energy: f64,
    /// Limiting matrix MMSE: ||E[Λ0 Λ0ᵀ]||_F^2 - ||Q*||_F^2.
    pub mmse_limit: f64,
    /// Limiting mutual information per row.
    pub mutual_info_limit: f64,
    pub branch: Branch,
    /// Monte Carlo standard error of the free-energy value (0 for quadrature).
    pub mc_std_err: f64,
    /// Set when the informative and uninformative branch values are closer
    /// than three standard errors, i.e. near one of the excluded SNR points.
    pub branch_degenerate: bool,
}

/// State-evolution trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SETrace {
    pub gammas: Vec<f64>,
    pub converged: bool,
    pub fixed_point: f64,
    /// True when q_theta <= 1 leaves no informative spectral seed.
    pub degenerate: bool,
}

/// Dispatching maximizer: scalar finite-atom priors run on quadrature, the
/// simplex-basis prior runs the Monte Carlo two-parameter search.
pub fn maximize_free_energy(
    s: f64,
    prior_lambda: &Prior,
    quad: &QuadratureRule,
    config: &RsConfig,
) -> Result<RSolution, ReplicaError> {
    match prior_lambda {
        Prior::SimplexBasis { k } => maximize_free_energy_simplex(s, *k, config),
        _ => maximize_free_energy_scalar(s, prior_lambda, quad),
    }
}

/// Tunables for the Monte Carlo free-energy search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RsConfig {
    /// z-samples for coarse bisection iterations.
    pub mc_coarse: usize,
    /// z-samples for the final refinement iterations.
    pub mc_fine: usize,
    /// Seed for the common-random-numbers batch.
    pub seed: u64,
    /// Target half-width of the threshold bisection.
    pub half_width: f64,
    /// Gain below which sup F - F(Q_0) is treated as zero.
    pub gain_epsilon: f64,
}

impl Default for RsConfig {
    fn default() -> Self {
        RsConfig {
            mc_coarse: 60_000,
            mc_fine: 240_000,
            seed: 0x5eed,
            half_width: 0.024,
            gain_epsilon: 1.0e-5,
        }
    }
}

/// Default quadrature order used across the replica formulas.
pub const DEFAULT_QUAD_ORDER: usize = 61;
