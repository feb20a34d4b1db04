//! Free energy over the permutation-symmetric family `Q = (a-b) I + b 11ᵀ`
//! for the simplex-basis prior, and the clustering-threshold bisection.
//!
//! The prior is exchangeable, so the search is restricted to this
//! two-parameter family; a built-in self-test (see the test module) verifies
//! the restriction against an unrestricted search at k = 2. All free-energy
//! differences reuse one z-batch (common random numbers), which is what makes
//! the threshold resolvable at the tabulated precision.

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Branch, RSolution, ReplicaError, RsConfig};
use crate::numerics::RngStream;

/// Shared z-sample for common-random-number evaluations.
#[derive(Debug, Clone)]
pub struct SimplexBatch {
    pub k: usize,
    /// m x k standard normals, row-major.
    z: Vec<f64>,
    m: usize,
}

impl SimplexBatch {
    pub fn draw(k: usize, m: usize, rng: &RngStream) -> Self {
        let mut z = vec![0.0; m * k];
        rng.clone().fill_normal(&mut z);
        SimplexBatch { k, z, m }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }
}

fn check_psd(k: usize, a: f64, b: f64) -> Result<(), ReplicaError> {
    if a - b < -1e-12 || a + (k as f64 - 1.0) * b < -1e-12 {
        return Err(ReplicaError::NotPsd { a, b });
    }
    Ok(())
}

// Per-z-row value of the inner log term
//   log( (1/k) sum_i exp( sqrt(s) (Q^{1/2} z)_i + s (Q e_1)_i - (s/2) Q_ii ) ).
// Q^{1/2} has the same (I, 11^T) structure: alpha I + beta 11^T.
fn row_values(batch: &SimplexBatch, s: f64, a: f64, b: f64) -> Vec<f64> {
    let k = batch.k;
    let kf = k as f64;
    let alpha = (a - b).max(0.0).sqrt();
    let beta = ((a + (kf - 1.0) * b).max(0.0).sqrt() - alpha) / kf;
    let sqrt_s = s.sqrt();
    let ln_k = kf.ln();
    let diag_shift = -0.5 * s * a;

    batch
        .z
        .par_chunks(k)
        .map(|zrow| {
            let sum_z: f64 = zrow.iter().sum();
            let mut max = f64::NEG_INFINITY;
            let mut terms = [0.0f64; 32];
            for i in 0..k {
                let half = alpha * zrow[i] + beta * sum_z;
                let signal = if i == 0 { s * a } else { s * b };
                let t = sqrt_s * half + signal + diag_shift;
                terms[i] = t;
                if t > max {
                    max = t;
                }
            }
            let mut sum = 0.0;
            for &t in terms.iter().take(k) {
                sum += (t - max).exp();
            }
            max + sum.ln() - ln_k
        })
        .collect()
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 64 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

fn quadratic_term(k: usize, s: f64, a: f64, b: f64) -> f64 {
    let kf = k as f64;
    -0.25 * s * (kf * a * a + kf * (kf - 1.0) * b * b)
}

/// Mean and standard error of `F(s, Q)` over the batch rows.
pub fn free_energy_simplex_with(
    batch: &SimplexBatch,
    s: f64,
    a: f64,
    b: f64,
) -> Result<(f64, f64), ReplicaError> {
    check_psd(batch.k, a, b)?;
    let rows = row_values(batch, s, a, b);
    let m = rows.len() as f64;
    let mean = pairwise_sum(&rows) / m;
    let var = rows.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (m - 1.0);
    Ok((quadratic_term(batch.k, s, a, b) + mean, (var / m).sqrt()))
}

/// `F(s, Q)` for `Q = (a-b) I + b 11ᵀ` with a fresh Monte Carlo z-sample.
pub fn free_energy_simplex(
    s: f64,
    a: f64,
    b: f64,
    k: usize,
    mc_samples: usize,
    rng: &RngStream,
) -> Result<(f64, f64), ReplicaError> {
    if k < 2 {
        return Err(ReplicaError::BadArgument {
            name: "k",
            value: k as f64,
            constraint: ">= 2",
        });
    }
    if k > 32 {
        return Err(ReplicaError::BadArgument {
            name: "k",
            value: k as f64,
            constraint: "<= 32",
        });
    }
    let batch = SimplexBatch::draw(k, mc_samples.max(16), rng);
    free_energy_simplex_with(&batch, s, a, b)
}

// (u, v) are the eigenvalues of Q on 1-perp and on the all-ones direction:
// Q = u (I - 11^T/k) + (v/k) 11^T, i.e. a = u + (v-u)/k, b = (v-u)/k.
fn uv_to_ab(k: usize, u: f64, v: f64) -> (f64, f64) {
    let kf = k as f64;
    let b = (v - u) / kf;
    (u + b, b)
}

/// Result of maximizing `F(s, ·)` over the two-parameter family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplexOptimum {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub std_err: f64,
    /// Common-random-number estimate of sup F - F(Q_0) and its standard error.
    pub gain_over_q0: f64,
    pub gain_std_err: f64,
    /// Best point restricted to the uninformative ray u = 0.
    pub ray_a: f64,
    pub ray_b: f64,
    pub ray_value: f64,
}

fn mean_of(batch: &SimplexBatch, s: f64, u: f64, v: f64) -> f64 {
    let (a, b) = uv_to_ab(batch.k, u, v);
    let rows = row_values(batch, s, a, b);
    quadratic_term(batch.k, s, a, b) + pairwise_sum(&rows) / rows.len() as f64
}

// Nelder-Mead on (u, v) clamped to the PSD box.
fn nelder_mead(
    batch: &SimplexBatch,
    s: f64,
    start: (f64, f64),
    scale: f64,
    bounds: ((f64, f64), (f64, f64)),
    iters: usize,
) -> ((f64, f64), f64) {
    let clamp = |p: (f64, f64)| {
        (
            p.0.clamp(bounds.0 .0, bounds.0 .1),
            p.1.clamp(bounds.1 .0, bounds.1 .1),
        )
    };
    let f = |p: (f64, f64)| mean_of(batch, s, p.0, p.1);
    let mut simplex = vec![
        clamp(start),
        clamp((start.0 + scale, start.1)),
        clamp((start.0, start.1 + scale)),
    ];
    let mut values: Vec<f64> = simplex.iter().map(|&p| f(p)).collect();
    for _ in 0..iters {
        // sort descending (maximization)
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
        let (best, mid, worst) = (idx[0], idx[1], idx[2]);
        let centroid = (
            0.5 * (simplex[best].0 + simplex[mid].0),
            0.5 * (simplex[best].1 + simplex[mid].1),
        );
        let reflect = clamp((
            centroid.0 + (centroid.0 - simplex[worst].0),
            centroid.1 + (centroid.1 - simplex[worst].1),
        ));
        let fr = f(reflect);
        if fr > values[best] {
            let expand = clamp((
                centroid.0 + 2.0 * (centroid.0 - simplex[worst].0),
                centroid.1 + 2.0 * (centroid.1 - simplex[worst].1),
            ));
            let fe = f(expand);
            if fe > fr {
                simplex[worst] = expand;
                values[worst] = fe;
            } else {
                simplex[worst] = reflect;
                values[worst] = fr;
            }
        } else if fr > values[mid] {
            simplex[worst] = reflect;
            values[worst] = fr;
        } else {
            let contract = clamp((
                centroid.0 + 0.5 * (simplex[worst].0 - centroid.0),
                centroid.1 + 0.5 * (simplex[worst].1 - centroid.1),
            ));
            let fc = f(contract);
            if fc > values[worst] {
                simplex[worst] = contract;
                values[worst] = fc;
            } else {
                for i in 0..3 {
                    if i != best {
                        simplex[i] = clamp((
                            0.5 * (simplex[i].0 + simplex[best].0),
                            0.5 * (simplex[i].1 + simplex[best].1),
                        ));
                        values[i] = f(simplex[i]);
                    }
                }
            }
        }
        let spread = (0..3)
            .map(|i| {
                (simplex[i].0 - simplex[0].0).abs() + (simplex[i].1 - simplex[0].1).abs()
            })
            .fold(0.0, f64::max);
        if spread < 1e-7 {
            break;
        }
    }
    let mut best = 0;
    for i in 1..3 {
        if values[i] > values[best] {
            best = i;
        }
    }
    (simplex[best], values[best])
}

/// Maximize `F(s, ·)` over the family with one shared batch; also the gain
/// over the uninformative point `Q_0 = 11ᵀ/k²` measured on matched rows.
pub fn optimize_simplex(batch: &SimplexBatch, s: f64) -> SimplexOptimum {
    let k = batch.k;
    let kf = k as f64;
    let u_max = 1.5 / kf;
    let bounds = ((0.0, 2.0 / kf), (0.05 / kf, 3.0 / kf));

    // coarse grid, log-spaced in u near 0 to catch a shallow informative well
    let u_grid: Vec<f64> = vec![
        0.0,
        1e-3 / kf,
        3e-3 / kf,
        0.01 / kf,
        0.03 / kf,
        0.08 / kf,
        0.15 / kf,
        0.3 / kf,
        0.5 / kf,
        0.7 / kf,
        0.9 / kf,
        1.1 / kf,
        u_max,
    ];
    let v_grid: Vec<f64> = (0..7).map(|i| (0.55 + 0.25 * i as f64) / kf).collect();

    let mut best = (0.0, 1.0 / kf);
    let mut best_val = f64::NEG_INFINITY;
    let mut ray_best = 1.0 / kf;
    let mut ray_val = f64::NEG_INFINITY;
    for &u in &u_grid {
        for &v in &v_grid {
            let val = mean_of(batch, s, u, v);
            if val > best_val {
                best_val = val;
                best = (u, v);
            }
            if u == 0.0 && val > ray_val {
                ray_val = val;
                ray_best = v;
            }
        }
    }
    let ((u_star, v_star), _) = nelder_mead(batch, s, best, 0.08 / kf, bounds, 120);
    // refine the ray maximum in v alone with a short golden-section pass
    let ray_v = golden_max(
        |v| mean_of(batch, s, 0.0, v),
        (ray_best - 0.3 / kf).max(bounds.1 .0),
        (ray_best + 0.3 / kf).min(bounds.1 .1),
        40,
    );

    let (a, b) = uv_to_ab(k, u_star, v_star);
    let (ray_a, ray_b) = uv_to_ab(k, 0.0, ray_v);
    let rows_best = row_values(batch, s, a, b);
    let q0 = 1.0 / (kf * kf);
    let rows_q0 = row_values(batch, s, q0, q0);
    let m = rows_best.len() as f64;
    let mean_best = pairwise_sum(&rows_best) / m;
    let mean_q0 = pairwise_sum(&rows_q0) / m;
    let value = quadratic_term(k, s, a, b) + mean_best;
    let value_q0 = quadratic_term(k, s, q0, q0) + mean_q0;
    let var_best = rows_best
        .iter()
        .map(|r| (r - mean_best) * (r - mean_best))
        .sum::<f64>()
        / (m - 1.0);
    // paired difference: the whole point of common random numbers
    let diffs: Vec<f64> = rows_best
        .iter()
        .zip(&rows_q0)
        .map(|(x, y)| x - y)
        .collect();
    let mean_diff = pairwise_sum(&diffs) / m;
    let var_diff = diffs
        .iter()
        .map(|d| (d - mean_diff) * (d - mean_diff))
        .sum::<f64>()
        / (m - 1.0);

    SimplexOptimum {
        a,
        b,
        value,
        std_err: (var_best / m).sqrt(),
        gain_over_q0: value - value_q0,
        gain_std_err: (var_diff / m).sqrt(),
        ray_a,
        ray_b,
        ray_value: quadratic_term(k, s, ray_a, ray_b)
            + pairwise_sum(&row_values(batch, s, ray_a, ray_b)) / m,
    }
}

fn golden_max(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        x1
    } else {
        x2
    }
}

/// Maximize the simplex free energy at SNR `s`, returning the branch tag and
/// limit quantities. Uninformative solutions are reported on the `Q_0` ray.
pub fn maximize_free_energy_simplex(
    s: f64,
    k: usize,
    config: &RsConfig,
) -> Result<RSolution, ReplicaError> {
    if k < 2 || k > 32 {
        return Err(ReplicaError::BadArgument {
            name: "k",
            value: k as f64,
            constraint: "2..=32",
        });
    }
    if !(s >= 0.0) {
        return Err(ReplicaError::BadArgument {
            name: "s",
            value: s,
            constraint: ">= 0",
        });
    }
    let kf = k as f64;
    let batch = SimplexBatch::draw(k, config.mc_fine, &RngStream::new(config.seed, 1000 + k as u64));
    let opt = optimize_simplex(&batch, s);

    let informative = opt.gain_over_q0 > config.gain_epsilon.max(3.0 * opt.gain_std_err);
    let (a, b, value) = if informative {
        (opt.a, opt.b, opt.value)
    } else {
        (opt.ray_a, opt.ray_b, opt.ray_value)
    };
    let mut q_star = Array2::from_elem((k, k), b);
    for i in 0..k {
        q_star[(i, i)] = a;
    }
    let q_norm_sq = kf * a * a + kf * (kf - 1.0) * b * b;
    let prior_norm_sq = 1.0 / kf; // ||I/k||_F^2
    Ok(RSolution {
        s,
        q_star,
        free_energy: value,
        mmse_limit: prior_norm_sq - q_norm_sq,
        mutual_info_limit: 0.25 * s * prior_norm_sq - value,
        branch: if informative {
            Branch::Informative
        } else {
            Branch::Uninformative
        },
        mc_std_err: opt.std_err,
        branch_degenerate: !informative && opt.gain_over_q0 > opt.gain_std_err,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub k: usize,
    pub threshold: f64,
    pub half_width: f64,
}

/// Information-theoretic clustering threshold: the smallest `q_theta` at
/// which `sup_Q F(q_theta², Q)` strictly exceeds `F(q_theta², Q_0)`.
///
/// Bisection over `q_theta` with common random numbers, coarse batch first,
/// refined batch for the final iterations. Values for `k <= 8` resolve at
/// the requested half-width; larger `k` runs but with growing Monte Carlo
/// cost per evaluation.
pub fn cluster_threshold(k: usize, config: &RsConfig) -> Result<ThresholdResult, ReplicaError> {
    if k < 2 || k > 32 {
        return Err(ReplicaError::BadArgument {
            name: "k",
            value: k as f64,
            constraint: "2..=32",
        });
    }
    let coarse = SimplexBatch::draw(k, config.mc_coarse, &RngStream::new(config.seed, k as u64));
    let fine = SimplexBatch::draw(
        k,
        config.mc_fine,
        &RngStream::new(config.seed, 500 + k as u64),
    );

    let detect = |q: f64, batch: &SimplexBatch| -> bool {
        let opt = optimize_simplex(batch, q * q);
        opt.gain_over_q0 > config.gain_epsilon.max(3.0 * opt.gain_std_err)
    };

    let kf = k as f64;
    let mut lo = 1.0f64.min(kf * 0.45);
    let mut hi = 2.0 * (kf * kf.ln()).sqrt() + 1.0;
    for _ in 0..4 {
        if !detect(lo, &coarse) {
            break;
        }
        lo *= 0.5;
    }
    if detect(lo, &coarse) {
        return Err(ReplicaError::BracketFailure { lo, hi });
    }
    for _ in 0..4 {
        if detect(hi, &coarse) {
            break;
        }
        hi += 2.0;
    }
    if !detect(hi, &coarse) {
        return Err(ReplicaError::BracketFailure { lo, hi });
    }

    let target = 2.0 * config.half_width;
    while hi - lo > 4.0 * target {
        let mid = 0.5 * (lo + hi);
        if detect(mid, &coarse) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    while hi - lo > target {
        let mid = 0.5 * (lo + hi);
        if detect(mid, &fine) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    Ok(ThresholdResult {
        k,
        threshold: 0.5 * (lo + hi),
        half_width: 0.5 * (hi - lo),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{gauss_hermite, sym_eig_full};
    use ndarray::array;

    #[test]
    fn zero_matrix_gives_zero_free_energy() {
        let rng = RngStream::new(1, 0);
        let (f, se) = free_energy_simplex(4.0, 0.0, 0.0, 3, 5000, &rng).unwrap();
        assert!(f.abs() < 1e-12, "F {f}");
        assert!(se < 1e-12);
    }

    #[test]
    fn q0_baseline_is_finite() {
        let rng = RngStream::new(2, 0);
        let k = 4;
        let q0 = 1.0 / (k as f64 * k as f64);
        let (f, se) = free_energy_simplex(9.0, q0, q0, k, 20000, &rng).unwrap();
        assert!(f.is_finite());
        assert!(se > 0.0 && se < 0.05);
    }

    #[test]
    fn psd_violation_rejected() {
        let rng = RngStream::new(3, 0);
        assert!(matches!(
            free_energy_simplex(4.0, 0.1, 0.3, 3, 1000, &rng),
            Err(ReplicaError::NotPsd { .. })
        ));
        assert!(matches!(
            free_energy_simplex(4.0, 0.1, -0.2, 3, 1000, &rng),
            Err(ReplicaError::NotPsd { .. })
        ));
    }

    #[test]
    fn deterministic_given_seed() {
        let rng = RngStream::new(9, 4);
        let (f1, _) = free_energy_simplex(4.0, 0.2, 0.1, 2, 30000, &rng).unwrap();
        let (f2, _) = free_energy_simplex(4.0, 0.2, 0.1, 2, 30000, &rng).unwrap();
        assert_eq!(f1, f2);
    }

    // Independent oracle: tensorized 2-d Gauss-Hermite evaluation of the
    // z-expectation at k = 2.
    fn k2_quadrature_oracle(s: f64, a: f64, b: f64) -> f64 {
        let quad = gauss_hermite(61).unwrap();
        let alpha = (a - b).max(0.0).sqrt();
        let beta = ((a + b).max(0.0).sqrt() - alpha) / 2.0;
        let mut outer = 0.0;
        for (&z1, &w1) in quad.nodes.iter().zip(&quad.weights) {
            for (&z2, &w2) in quad.nodes.iter().zip(&quad.weights) {
                let sum_z = z1 + z2;
                let t1 = s.sqrt() * (alpha * z1 + beta * sum_z) + s * a - 0.5 * s * a;
                let t2 = s.sqrt() * (alpha * z2 + beta * sum_z) + s * b - 0.5 * s * a;
                let max = t1.max(t2);
                outer += w1 * w2 * (max + ((t1 - max).exp() + (t2 - max).exp()).ln() - 2.0f64.ln());
            }
        }
        -0.25 * s * (2.0 * a * a + 2.0 * b * b) + outer
    }

    #[test]
    fn k2_matches_tensor_quadrature() {
        let rng = RngStream::new(11, 0);
        for &(s, a, b) in &[(4.0, 0.3, 0.1), (6.25, 0.45, 0.2), (2.0, 0.25, 0.25)] {
            let (mc, se) = free_energy_simplex(s, a, b, 2, 200_000, &rng).unwrap();
            let exact = k2_quadrature_oracle(s, a, b);
            assert!(
                (mc - exact).abs() < 3.0 * se + 1e-6,
                "s={s} a={a} b={b}: mc {mc} vs quad {exact} (se {se})"
            );
        }
    }

    // General symmetric-Q evaluation at k = 2 for the unrestricted self-test.
    fn general_q_value(batch: &SimplexBatch, s: f64, q: &Array2<f64>) -> f64 {
        let eig = sym_eig_full(q).unwrap();
        let mut sqrt_q = Array2::<f64>::zeros((2, 2));
        for t in 0..2 {
            let lam = eig.values[t].max(0.0).sqrt();
            for i in 0..2 {
                for j in 0..2 {
                    sqrt_q[(i, j)] += lam * eig.vectors[(i, t)] * eig.vectors[(j, t)];
                }
            }
        }
        let mut acc = 0.0;
        for row in 0..batch.len() {
            let z = [batch.z[2 * row], batch.z[2 * row + 1]];
            let mut terms = [0.0f64; 2];
            for i in 0..2 {
                let half = sqrt_q[(i, 0)] * z[0] + sqrt_q[(i, 1)] * z[1];
                terms[i] = s.sqrt() * half + s * q[(i, 0)] - 0.5 * s * q[(i, i)];
            }
            let max = terms[0].max(terms[1]);
            acc += max + ((terms[0] - max).exp() + (terms[1] - max).exp()).ln() - 2.0f64.ln();
        }
        let frob = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| q[(i, j)] * q[(i, j)])
            .sum::<f64>();
        -0.25 * s * frob + acc / batch.len() as f64
    }

    #[test]
    fn restricted_family_matches_unrestricted_search_at_k2() {
        // Design self-test: the exchangeable two-parameter family attains the
        // same maximum as a 3-parameter symmetric search, within MC error.
        let q_theta = 2.5f64;
        let s = q_theta * q_theta;
        let batch = SimplexBatch::draw(2, 120_000, &RngStream::new(21, 0));
        let family = optimize_simplex(&batch, s);

        let mut best = f64::NEG_INFINITY;
        for a11 in [0.15, 0.25, 0.35, 0.45, 0.55] {
            for a22 in [0.15, 0.25, 0.35, 0.45, 0.55] {
                for a12 in [-0.1, 0.0, 0.1, 0.2, 0.3] {
                    let q = array![[a11, a12], [a12, a22]];
                    let eig = sym_eig_full(&q).unwrap();
                    if eig.values[1] < 0.0 {
                        continue;
                    }
                    let v = general_q_value(&batch, s, &q);
                    if v > best {
                        best = v;
                    }
                }
            }
        }
        // grid search cannot beat the refined family optimum by more than MC
        // noise plus grid slack
        assert!(
            best <= family.value + 3.0 * family.std_err + 2e-3,
            "unrestricted grid {best} vs family {}",
            family.value
        );
        assert!(
            family.value >= best - 3.0 * family.std_err - 2e-3,
            "family {} should reach grid level {best}",
            family.value
        );
    }

    #[test]
    fn informative_branch_above_spectral_threshold() {
        // k = 2 at q_theta = 3 (above threshold 2): clear informative gain.
        let batch = SimplexBatch::draw(2, 60_000, &RngStream::new(5, 0));
        let opt = optimize_simplex(&batch, 9.0);
        assert!(opt.gain_over_q0 > 10.0 * opt.gain_std_err, "gain {} se {}", opt.gain_over_q0, opt.gain_std_err);
        // far below threshold: no informative gain
        let opt_low = optimize_simplex(&batch, 1.0);
        assert!(
            opt_low.gain_over_q0 < 1e-4,
            "below-threshold gain {} (se {})",
            opt_low.gain_over_q0,
            opt_low.gain_std_err
        );
    }

    #[test]
    fn threshold_smoke_k2() {
        let config = RsConfig {
            mc_coarse: 20_000,
            mc_fine: 60_000,
            half_width: 0.05,
            ..RsConfig::default()
        };
        let res = cluster_threshold(2, &config).unwrap();
        assert!(
            (res.threshold - 2.0).abs() < 0.15,
            "k=2 threshold {}",
            res.threshold
        );
    }

    #[test]
    fn maximize_simplex_below_threshold_sits_on_ray() {
        let config = RsConfig {
            mc_coarse: 20_000,
            mc_fine: 40_000,
            ..RsConfig::default()
        };
        let sol = maximize_free_energy_simplex(1.0, 3, &config).unwrap();
        assert_eq!(sol.branch, Branch::Uninformative);
        // on the Q_0 ray all entries are equal
        let a = sol.q_star[(0, 0)];
        let b = sol.q_star[(0, 1)];
        assert!((a - b).abs() < 1e-12, "ray point has a = {a}, b = {b}");
    }
}
