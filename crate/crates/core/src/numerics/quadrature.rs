use ndarray::Array2;

use super::{sym_eig_full, NumericsError};

/// Gauss–Hermite rule in the probabilists' convention: weights sum to one and
/// integrate against the standard normal density, so `E f(Z)` for `Z ~ N(0,1)`
/// is `sum_i w_i f(x_i)`. Exact for polynomials of degree `2*order - 1`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Expectation of `f` under the standard normal law.
    pub fn expect(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Nodes and weights via Golub–Welsch on the Jacobi matrix of the
/// probabilists' Hermite recurrence (off-diagonals sqrt(k)).
pub fn gauss_hermite(order: usize) -> Result<QuadratureRule, NumericsError> {
    if !(2..=200).contains(&order) {
        return Err(NumericsError::OrderOutOfRange { order });
    }
    let mut jacobi = Array2::zeros((order, order));
    for k in 1..order {
        let b = (k as f64).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = sym_eig_full(&jacobi)?;

    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|k| (eig.values[k], eig.vectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // Enforce exact symmetry about 0 by pairing mirrored nodes.
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    for i in 0..order / 2 {
        let j = order - 1 - i;
        let x = 0.5 * (pairs[j].0 - pairs[i].0);
        let w = 0.5 * (pairs[i].1 + pairs[j].1);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
        weights[order / 2] = pairs[order / 2].1;
    }
    Ok(QuadratureRule { nodes, weights })
}
