//! Finite-size oracle: exact enumeration of the symmetric-model partition
//! function over all atom configurations, Monte Carlo over the planted signal
//! and the GOE noise.
//!
//! The Hamiltonian of one configuration λ given (Λ, W) is
//! `(q²/2n) <Λ, λ>² + (q/2) λᵀWλ - (q²/4n) ||λ||⁴`, and the per-replicate
//! value is `(1/n) log Σ_λ p(λ) exp(H(λ))`. Enumeration walks a mixed-radix
//! Gray code so each step touches one coordinate and costs O(n).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ReplicaError;
use crate::model::Prior;
use crate::numerics::{log_sum_exp, RngStream};

const CONFIG_BUDGET: usize = 10_000_000;
const MAX_N: usize = 14;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub n: usize,
    pub replicates: usize,
    /// Finite-n free energy density Ψ_n.
    pub psi_n: f64,
    /// Finite-n mutual information per row: q² E[Λ0²]² / 4 - Ψ_n.
    pub info_n: f64,
    pub std_err: f64,
}

pub fn enumeration_free_energy(
    n: usize,
    q_theta: f64,
    prior_lambda: &Prior,
    mc_outer: usize,
    rng: &RngStream,
) -> Result<EnumerationResult, ReplicaError> {
    if n == 0 || n > MAX_N {
        return Err(ReplicaError::BadArgument {
            name: "n",
            value: n as f64,
            constraint: "1..=14",
        });
    }
    if !(q_theta >= 0.0) {
        return Err(ReplicaError::BadArgument {
            name: "q_theta",
            value: q_theta,
            constraint: ">= 0",
        });
    }
    if mc_outer < 2 {
        return Err(ReplicaError::BadArgument {
            name: "mc_outer",
            value: mc_outer as f64,
            constraint: ">= 2",
        });
    }
    let (atoms, weights) = prior_lambda
        .scalar_atoms()
        .ok_or_else(|| ReplicaError::UnsupportedPrior {
            reason: "enumeration needs a finite-atom scalar prior".into(),
        })?;
    let m = atoms.len();
    let configs = m.checked_pow(n as u32).filter(|&c| c <= CONFIG_BUDGET);
    let n_configs = configs.ok_or(ReplicaError::BudgetExceeded {
        atoms: m,
        n,
        budget: CONFIG_BUDGET,
    })?;
    let log_weights: Vec<f64> = weights
        .iter()
        .map(|&w| if w > 0.0 { w.ln() } else { f64::NEG_INFINITY })
        .collect();
    let v: f64 = atoms.iter().zip(&weights).map(|(&a, &w)| w * a * a).sum();

    let values: Vec<f64> = (0..mc_outer)
        .into_par_iter()
        .map(|rep| {
            let rep_rng = rng.substream(rep as u64);
            replicate_value(
                n,
                q_theta,
                &atoms,
                &log_weights,
                n_configs,
                &rep_rng,
            )
        })
        .collect();

    let reps = values.len() as f64;
    let psi_n = values.iter().sum::<f64>() / reps;
    let var = values.iter().map(|x| (x - psi_n) * (x - psi_n)).sum::<f64>() / (reps - 1.0);
    let std_err = (var / reps).sqrt();
    Ok(EnumerationResult {
        n,
        replicates: mc_outer,
        psi_n,
        info_n: 0.25 * q_theta * q_theta * v * v - psi_n,
        std_err,
    })
}

fn replicate_value(
    n: usize,
    q: f64,
    atoms: &[f64],
    log_weights: &[f64],
    n_configs: usize,
    rng: &RngStream,
) -> f64 {
    let m = atoms.len();
    let nf = n as f64;
    // planted signal and GOE noise, mirroring the sampler's sub-stream layout
    let mut lam = vec![0.0; n];
    {
        let mut lr = rng.substream(0);
        let prior = weights_to_cdf(log_weights);
        for l in lam.iter_mut() {
            let u = lr.uniform();
            let mut idx = m - 1;
            for (i, &c) in prior.iter().enumerate() {
                if u < c {
                    idx = i;
                    break;
                }
            }
            *l = atoms[idx];
        }
    }
    let mut w = vec![0.0; n * n];
    {
        let mut wr = rng.substream(1);
        let off = 1.0 / nf.sqrt();
        let diag = (2.0 / nf).sqrt();
        for i in 0..n {
            for j in i..n {
                let g = wr.normal();
                if i == j {
                    w[i * n + i] = diag * g;
                } else {
                    w[i * n + j] = off * g;
                    w[j * n + i] = off * g;
                }
            }
        }
    }

    // Gray-code walk over configurations with O(n) incremental state updates.
    let mut digits = vec![0usize; n];
    let mut dirs = vec![1i32; n];
    let a0 = atoms[0];
    let mut lam_dot: f64 = lam.iter().map(|&l| l * a0).sum();
    let mut wv: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| w[i * n + j] * a0).sum())
        .collect();
    let mut quad: f64 = (0..n).map(|i| wv[i] * a0).sum();
    let mut norm2 = a0 * a0 * nf;
    let mut logw = log_weights[0] * nf;

    let q2 = q * q;
    let mut terms = Vec::with_capacity(n_configs);
    let h = |lam_dot: f64, quad: f64, norm2: f64, logw: f64| -> f64 {
        q2 / (2.0 * nf) * lam_dot * lam_dot + 0.5 * q * quad - q2 / (4.0 * nf) * norm2 * norm2
            + logw
    };
    terms.push(h(lam_dot, quad, norm2, logw));

    'outer: loop {
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            let next = digits[i] as i32 + dirs[i];
            if next < 0 || next >= m as i32 {
                dirs[i] = -dirs[i];
                i += 1;
            } else {
                let old = atoms[digits[i]];
                let new = atoms[next as usize];
                let delta = new - old;
                lam_dot += delta * lam[i];
                quad += 2.0 * delta * wv[i] + delta * delta * w[i * n + i];
                for j in 0..n {
                    wv[j] += delta * w[j * n + i];
                }
                norm2 += new * new - old * old;
                logw += log_weights[next as usize] - log_weights[digits[i]];
                digits[i] = next as usize;
                break;
            }
        }
        terms.push(h(lam_dot, quad, norm2, logw));
    }
    debug_assert_eq!(terms.len(), n_configs);
    log_sum_exp(&terms) / nf
}

fn weights_to_cdf(log_weights: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    log_weights
        .iter()
        .map(|&lw| {
            acc += lw.exp();
            acc
        })
        .collect()
}
