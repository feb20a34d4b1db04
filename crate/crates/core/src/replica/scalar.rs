//! Scalar-prior replica formulas evaluated by exact atom sums and
//! Gauss–Hermite quadrature.

use serde::{Deserialize, Serialize};

use super::{Branch, RSolution, ReplicaError, SETrace, DEFAULT_QUAD_ORDER};
use crate::model::Prior;
use crate::numerics::{gauss_hermite, normal_cdf, QuadratureRule};
use ndarray::Array2;

/// Finite-atom scalar channel: all posterior quantities reduce to exact sums
/// over atoms plus one Gaussian expectation.
#[derive(Debug, Clone)]
pub struct ScalarChannel {
    pub atoms: Vec<f64>,
    pub weights: Vec<f64>,
    log_weights: Vec<f64>,
    pub second_moment: f64,
}

impl ScalarChannel {
    pub fn from_prior(prior: &Prior) -> Result<Self, ReplicaError> {
        let (atoms, weights) = prior
            .scalar_atoms()
            .ok_or_else(|| ReplicaError::UnsupportedPrior {
                reason: format!("need a finite-atom scalar prior, got {prior:?}"),
            })?;
        let log_weights = weights
            .iter()
            .map(|&w| if w > 0.0 { w.ln() } else { f64::NEG_INFINITY })
            .collect();
        let second_moment = atoms
            .iter()
            .zip(&weights)
            .map(|(&a, &w)| w * a * a)
            .sum();
        Ok(ScalarChannel {
            atoms,
            weights,
            log_weights,
            second_moment,
        })
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().zip(&self.weights).map(|(&a, &w)| w * a).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment - m * m
    }

    /// Posterior mean under the tilted observation `x = gamma*Λ + sqrt(gamma)*G`:
    /// p(a | x) ∝ w_a exp(a x - gamma a² / 2).
    pub fn posterior_mean(&self, x: f64, gamma: f64) -> f64 {
        let mut max = f64::NEG_INFINITY;
        for (i, &a) in self.atoms.iter().enumerate() {
            let t = self.log_weights[i] + a * x - 0.5 * gamma * a * a;
            if t > max {
                max = t;
            }
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, &a) in self.atoms.iter().enumerate() {
            let e = (self.log_weights[i] + a * x - 0.5 * gamma * a * a - max).exp();
            num += a * e;
            den += e;
        }
        num / den
    }

    /// Derivative of the posterior mean in `x`: the posterior variance.
    pub fn posterior_mean_derivative(&self, x: f64, gamma: f64) -> f64 {
        let mut max = f64::NEG_INFINITY;
        for (i, &a) in self.atoms.iter().enumerate() {
            let t = self.log_weights[i] + a * x - 0.5 * gamma * a * a;
            if t > max {
                max = t;
            }
        }
        let (mut m1, mut m2, mut den) = (0.0, 0.0, 0.0);
        for (i, &a) in self.atoms.iter().enumerate() {
            let e = (self.log_weights[i] + a * x - 0.5 * gamma * a * a - max).exp();
            m1 += a * e;
            m2 += a * a * e;
            den += e;
        }
        m2 / den - (m1 / den).powi(2)
    }

    /// E[Λ0 * E[Λ0 | observation at SNR gamma]].
    pub fn overlap(&self, gamma: f64, quad: &QuadratureRule) -> f64 {
        if gamma <= 0.0 {
            let m = self.mean();
            return m * m;
        }
        let sq = gamma.sqrt();
        let mut acc = 0.0;
        for (&b, &w) in self.atoms.iter().zip(&self.weights) {
            acc += w * quad.expect(|g| b * self.posterior_mean(gamma * b + sq * g, gamma));
        }
        acc
    }

    /// E[E[Λ0 | observation]²]; equals `overlap` at the Nishimori point.
    pub fn posterior_mean_square(&self, gamma: f64, quad: &QuadratureRule) -> f64 {
        if gamma <= 0.0 {
            let m = self.mean();
            return m * m;
        }
        let sq = gamma.sqrt();
        let mut acc = 0.0;
        for (&b, &w) in self.atoms.iter().zip(&self.weights) {
            acc += w * quad.expect(|g| self.posterior_mean(gamma * b + sq * g, gamma).powi(2));
        }
        acc
    }

    /// E[(Λ0 - E[Λ0 | observation])²] at SNR gamma, by definition.
    pub fn mmse(&self, gamma: f64, quad: &QuadratureRule) -> f64 {
        if gamma <= 0.0 {
            return self.variance();
        }
        let sq = gamma.sqrt();
        let mut acc = 0.0;
        for (&b, &w) in self.atoms.iter().zip(&self.weights) {
            acc += w * quad.expect(|g| (b - self.posterior_mean(gamma * b + sq * g, gamma)).powi(2));
        }
        acc
    }
}

/// Scalar-channel MMSE `E[(Λ0 - E[Λ0 | sqrt(gamma) Λ0 + G])²]`.
///
/// Finite-atom priors use exact sums plus quadrature; the isotropic Gaussian
/// prior uses its closed form.
pub fn scalar_mmse(
    gamma: f64,
    prior_lambda: &Prior,
    quad: &QuadratureRule,
) -> Result<f64, ReplicaError> {
    if !(gamma >= 0.0) {
        return Err(ReplicaError::BadArgument {
            name: "gamma",
            value: gamma,
            constraint: ">= 0",
        });
    }
    if let Prior::GaussianIso { variance, dim: 1 } = prior_lambda {
        return Ok(variance / (1.0 + gamma * variance));
    }
    let chan = ScalarChannel::from_prior(prior_lambda)?;
    Ok(chan.mmse(gamma, quad))
}

/// Free energy `F(s, q)` for a scalar finite-atom prior:
/// `-(s/4) q² + E log Σ_a w_a exp(sqrt(sq) z a + s q a Λ0 - (s/2) q a²)`,
/// inner sum exact, z-expectation by quadrature, Λ0-expectation exact.
pub fn free_energy_scalar(
    s: f64,
    q: f64,
    prior_lambda: &Prior,
    quad: &QuadratureRule,
) -> Result<f64, ReplicaError> {
    if !(s >= 0.0) {
        return Err(ReplicaError::BadArgument {
            name: "s",
            value: s,
            constraint: ">= 0",
        });
    }
    if !(q >= 0.0) {
        return Err(ReplicaError::BadArgument {
            name: "q",
            value: q,
            constraint: ">= 0",
        });
    }
    let chan = ScalarChannel::from_prior(prior_lambda)?;
    Ok(free_energy_channel(s, q, &chan, quad))
}

fn free_energy_channel(s: f64, q: f64, chan: &ScalarChannel, quad: &QuadratureRule) -> f64 {
    if s == 0.0 || q == 0.0 {
        // exponent vanishes and the inner integral is exactly 1
        return 0.0;
    }
    let sq = (s * q).sqrt();
    let mut outer = 0.0;
    let mut terms = vec![0.0; chan.atoms.len()];
    for (&b, &wb) in chan.atoms.iter().zip(&chan.weights) {
        let ez = quad.expect(|z| {
            for (i, &a) in chan.atoms.iter().enumerate() {
                terms[i] = chan.log_weights[i] + sq * z * a + s * q * a * b - 0.5 * s * q * a * a;
            }
            crate::numerics::log_sum_exp(&terms)
        });
        outer += wb * ez;
    }
    -0.25 * s * q * q + outer
}

// Largest fixed point of q -> E[Λ0 E[Λ0 | channel at SNR s*q]] reached by
// damped iteration from `start`, then sharpened by bisection when a bracket
// exists.
fn fixed_point_from(
    s: f64,
    chan: &ScalarChannel,
    quad: &QuadratureRule,
    start: f64,
) -> f64 {
    let map = |q: f64| chan.overlap(s * q, quad);
    let mut q = start;
    let mut last = f64::INFINITY;
    for _ in 0..5000 {
        let next = 0.5 * q + 0.5 * map(q);
        if (next - q).abs() < 1e-14 * (1.0 + q.abs()) {
            q = next;
            break;
        }
        last = q;
        q = next;
    }
    let _ = last;
    // bisection polish on map(q) - q around the candidate
    let h = |x: f64| map(x) - x;
    let delta = (1e-6 * (1.0 + q)).max(1e-9);
    let (mut lo, mut hi) = (q - delta, q + delta);
    if lo > 0.0 && h(lo) * h(hi) < 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(lo) * h(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-15 * (1.0 + q) {
                break;
            }
        }
        q = 0.5 * (lo + hi);
    }
    if q < 1e-12 {
        0.0
    } else {
        q
    }
}

/// Maximize `q -> F(s, q)` for a scalar prior. Stationary points are fixed
/// points of the overlap map; the informative and uninformative branches are
/// located from warm and cold starts and the larger free energy wins.
pub fn maximize_free_energy_scalar(
    s: f64,
    prior_lambda: &Prior,
    quad: &QuadratureRule,
) -> Result<RSolution, ReplicaError> {
    if !(s >= 0.0) {
        return Err(ReplicaError::BadArgument {
            name: "s",
            value: s,
            constraint: ">= 0",
        });
    }
    let chan = ScalarChannel::from_prior(prior_lambda)?;
    let v = chan.second_moment;

    let q_cold = fixed_point_from(s, &chan, quad, 1e-10);
    let q_warm = fixed_point_from(s, &chan, quad, v.max(1e-6));
    let f_cold = free_energy_channel(s, q_cold, &chan, quad);
    let f_warm = free_energy_channel(s, q_warm, &chan, quad);

    let informative = (q_warm - q_cold).abs() > 1e-7 && f_warm >= f_cold;
    let (q_star, f_star, branch) = if informative {
        (q_warm, f_warm, Branch::Informative)
    } else if f_cold >= f_warm {
        (q_cold, f_cold, Branch::Uninformative)
    } else {
        (q_warm, f_warm, Branch::Uninformative)
    };
    let branch_degenerate =
        (q_warm - q_cold).abs() > 1e-7 && (f_warm - f_cold).abs() < 1e-9 * (1.0 + f_warm.abs());

    Ok(RSolution {
        s,
        q_star: Array2::from_elem((1, 1), q_star),
        free_energy: f_star,
        mmse_limit: v * v - q_star * q_star,
        mutual_info_limit: 0.25 * s * v * v - f_star,
        branch,
        mc_std_err: 0.0,
        branch_degenerate,
    })
}

/// Largest nonnegative solution of `s = q_theta² E[tanh(s + sqrt(s) G)²]`
/// and the limiting overlap `Φ(sqrt(s*))` it implies.
pub fn tanh_fixed_point(q_theta: f64, quad: &QuadratureRule) -> Result<(f64, f64), ReplicaError> {
    if !(q_theta >= 0.0) {
        return Err(ReplicaError::BadArgument {
            name: "q_theta",
            value: q_theta,
            constraint: ">= 0",
        });
    }
    let q2 = q_theta * q_theta;
    let map = |s: f64| {
        if s <= 0.0 {
            0.0
        } else {
            q2 * quad.expect(|g| (s + s.sqrt() * g).tanh().powi(2))
        }
    };
    // damped iteration from above the largest fixed point
    let mut s = 10.0 * q2.max(1.0);
    for _ in 0..20_000 {
        let next = 0.5 * s + 0.5 * map(s);
        if (s - next).abs() < 1e-14 * (1.0 + s) {
            s = next;
            break;
        }
        s = next;
    }
    if s < 1e-8 {
        return Ok((0.0, 0.5));
    }
    // bisection polish
    let h = |x: f64| map(x) - x;
    let delta = 1e-6 * (1.0 + s);
    let (mut lo, mut hi) = (s - delta, s + delta);
    if h(lo) * h(hi) < 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(lo) * h(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        s = 0.5 * (lo + hi);
    }
    Ok((s, normal_cdf(s.sqrt())))
}

/// State evolution with the spectral seed `gamma_0 = q_theta² - 1`.
pub fn state_evolution(
    q_theta: f64,
    prior_lambda: &Prior,
    t_max: usize,
    tol: f64,
) -> Result<SETrace, ReplicaError> {
    let gamma0 = q_theta * q_theta - 1.0;
    if gamma0 <= 0.0 {
        return Ok(SETrace {
            gammas: vec![0.0],
            converged: true,
            fixed_point: 0.0,
            degenerate: true,
        });
    }
    state_evolution_from(q_theta, prior_lambda, gamma0, t_max, tol)
}

/// State evolution from an explicit starting SNR; `gamma0 = 1e-6` probes the
/// uninformative basin.
pub fn state_evolution_from(
    q_theta: f64,
    prior_lambda: &Prior,
    gamma0: f64,
    t_max: usize,
    tol: f64,
) -> Result<SETrace, ReplicaError> {
    let chan = ScalarChannel::from_prior(prior_lambda)?;
    if (chan.second_moment - 1.0).abs() > 1e-9 {
        return Err(ReplicaError::UnsupportedPrior {
            reason: format!(
                "state evolution assumes E[Λ0²] = 1, prior has {}",
                chan.second_moment
            ),
        });
    }
    let quad = gauss_hermite(DEFAULT_QUAD_ORDER)?;
    let q2 = q_theta * q_theta;
    let mut gammas = vec![gamma0];
    let mut converged = false;
    let mut gamma = gamma0;
    for _ in 0..t_max {
        let next = q2 * (1.0 - chan.mmse(gamma, &quad));
        gammas.push(next);
        if (next - gamma).abs() < tol {
            gamma = next;
            converged = true;
            break;
        }
        gamma = next;
    }
    Ok(SETrace {
        gammas,
        converged,
        fixed_point: gamma,
        degenerate: false,
    })
}

/// Which SNR is plugged into the second slot of the stationarity potential.
/// The theorem's statement reads `Ψ(γ, q_theta)`; elsewhere the SNR enters the
/// free energy as `q_theta²`. Both are exposed rather than silently unified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum SnrConvention {
    /// s = q_theta, the literal reading.
    #[default]
    QTheta,
    /// s = q_theta², under which the stationary points coincide with the
    /// state-evolution fixed points.
    QThetaSquared,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsiReport {
    pub is_first_stationary_global: bool,
    /// (gamma, psi) samples of the potential.
    pub psi_curve: Vec<(f64, f64)>,
    /// Stationary points located by sign changes of the numerical derivative.
    pub stationary_gammas: Vec<f64>,
    pub convention: SnrConvention,
}

/// Evaluate `Ψ(γ, s) = s²/4 + γ²/(4s) - γ/2 + I(γ)` on a γ-grid, locate the
/// stationary points of γ ↦ Ψ, and report whether the first one attains the
/// global maximum over the located stationary points.
///
/// `I(γ)` is integrated from the scalar-channel MMSE through the de Bruijn
/// identity `I'(γ) = mmse(γ)/2` (trapezoid rule on the same grid).
pub fn psi_stationarity_check(
    q_theta: f64,
    prior_lambda: &Prior,
    grid: usize,
    convention: SnrConvention,
) -> Result<PsiReport, ReplicaError> {
    if grid < 16 {
        return Err(ReplicaError::BadArgument {
            name: "grid",
            value: grid as f64,
            constraint: ">= 16",
        });
    }
    if !(q_theta > 0.0) {
        return Err(ReplicaError::BadArgument {
            name: "q_theta",
            value: q_theta,
            constraint: "> 0",
        });
    }
    let s = match convention {
        SnrConvention::QTheta => q_theta,
        SnrConvention::QThetaSquared => q_theta * q_theta,
    };
    let chan = ScalarChannel::from_prior(prior_lambda)?;
    let quad = gauss_hermite(DEFAULT_QUAD_ORDER)?;

    // Stationary points satisfy gamma = s (1 - mmse(gamma)) <= s * E[Λ0²];
    // pad the grid beyond that.
    let gamma_hi = 1.2 * s * chan.second_moment.max(1.0) + 1.0;
    let step = gamma_hi / (grid - 1) as f64;
    let gammas: Vec<f64> = (0..grid).map(|i| i as f64 * step).collect();

    let mmse: Vec<f64> = gammas.iter().map(|&g| chan.mmse(g, &quad)).collect();
    let mut info = vec![0.0; grid];
    for i in 1..grid {
        info[i] = info[i - 1] + 0.25 * (mmse[i - 1] + mmse[i]) * step;
    }
    let psi: Vec<f64> = (0..grid)
        .map(|i| 0.25 * s * s + gammas[i] * gammas[i] / (4.0 * s) - 0.5 * gammas[i] + info[i])
        .collect();

    // central-difference derivative on the interior
    let deriv: Vec<f64> = (1..grid - 1)
        .map(|i| (psi[i + 1] - psi[i - 1]) / (2.0 * step))
        .collect();
    let mut stationary_idx: Vec<usize> = Vec::new();
    for w in 1..deriv.len() {
        if deriv[w - 1] == 0.0 || deriv[w - 1] * deriv[w] < 0.0 {
            let idx = w; // interior index of the sign change
            if let Some(&prev) = stationary_idx.last() {
                if idx - prev < 2 {
                    return Err(ReplicaError::RefineRequested {
                        gamma: gammas[idx],
                    });
                }
            }
            stationary_idx.push(idx);
        }
    }
    let stationary_gammas: Vec<f64> = stationary_idx.iter().map(|&i| gammas[i]).collect();
    let is_first_stationary_global = match stationary_idx.first() {
        None => true,
        Some(&first) => {
            let best = stationary_idx
                .iter()
                .map(|&i| psi[i])
                .fold(f64::NEG_INFINITY, f64::max);
            psi[first] >= best - 1e-9 * (1.0 + best.abs())
        }
    };

    Ok(PsiReport {
        is_first_stationary_global,
        psi_curve: gammas.into_iter().zip(psi).collect(),
        stationary_gammas,
        convention,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    fn quad() -> QuadratureRule {
        gauss_hermite(DEFAULT_QUAD_ORDER).unwrap()
    }

    #[test]
    fn free_energy_vanishes_at_zero_overlap() {
        let q = quad();
        for prior in [Prior::Rademacher, Prior::TwoPoint { p: 0.3 }] {
            assert_eq!(free_energy_scalar(2.5, 0.0, &prior, &q).unwrap(), 0.0);
        }
    }

    #[test]
    fn rademacher_closed_form_matches_generic_path() {
        // F = -s q²/4 - s q/2 + E log cosh(s q + sqrt(s q) z)
        let q = quad();
        for &(s, ov) in &[(0.7, 0.3), (4.0, 0.9), (2.0, 0.5)] {
            let generic = free_energy_scalar(s, ov, &Prior::Rademacher, &q).unwrap();
            let closed = -0.25 * s * ov * ov - 0.5 * s * ov
                + q.expect(|z| (s * ov + (s * ov).sqrt() * z).cosh().ln());
            assert!(
                (generic - closed).abs() < 1e-10,
                "s={s} q={ov}: {generic} vs {closed}"
            );
        }
    }

    #[test]
    fn maximizer_satisfies_first_order_condition() {
        // Independent oracle: bisect q = E tanh(s q + sqrt(s q) z) directly.
        let q = quad();
        let s = 4.0;
        let map = |x: f64| q.expect(|z| (s * x + (s * x).sqrt() * z).tanh());
        let (mut lo, mut hi) = (0.5, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if map(mid) - mid > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let sol = maximize_free_energy_scalar(s, &Prior::Rademacher, &q).unwrap();
        assert_eq!(sol.branch, Branch::Informative);
        assert!(
            (sol.q_star[(0, 0)] - oracle).abs() < 1e-6,
            "q* {} oracle {oracle}",
            sol.q_star[(0, 0)]
        );
        assert!((sol.mmse_limit - (1.0 - oracle * oracle)).abs() < 1e-5);
    }

    #[test]
    fn below_threshold_mmse_is_one() {
        let q = quad();
        for &s in &[0.3, 0.8, 1.0] {
            let sol = maximize_free_energy_scalar(s, &Prior::Rademacher, &q).unwrap();
            assert_eq!(sol.branch, Branch::Uninformative);
            assert!(
                (sol.mmse_limit - 1.0).abs() < 1e-6,
                "s {s}: mmse {}",
                sol.mmse_limit
            );
            assert!(sol.free_energy.abs() < 1e-12);
        }
    }

    #[test]
    fn nishimori_self_consistency_at_maximizer() {
        let q = quad();
        let chan = ScalarChannel::from_prior(&Prior::Rademacher).unwrap();
        for &s in &[2.0, 4.0, 9.0] {
            let sol = maximize_free_energy_scalar(s, &Prior::Rademacher, &q).unwrap();
            let qs = sol.q_star[(0, 0)];
            let gamma = s * qs;
            let m_sq = chan.posterior_mean_square(gamma, &q);
            let lam_m = chan.overlap(gamma, &q);
            assert!((m_sq - lam_m).abs() < 1e-8, "s {s}: {m_sq} vs {lam_m}");
            assert!((qs - lam_m).abs() < 1e-8, "s {s}: q* {qs} vs map {lam_m}");
        }
    }

    #[test]
    fn scalar_mmse_limits() {
        let q = quad();
        // gamma = 0: prior variance
        let v = scalar_mmse(0.0, &Prior::TwoPoint { p: 0.3 }, &q).unwrap();
        assert!((v - 0.21).abs() < 1e-12);
        // perfect channel
        let tiny = scalar_mmse(1e6, &Prior::Rademacher, &q).unwrap();
        assert!(tiny < 1e-6);
        // Rademacher closed form 1 - E tanh²(γ + sqrt(γ) G)
        for &gamma in &[0.5, 2.0, 7.0] {
            let got = scalar_mmse(gamma, &Prior::Rademacher, &q).unwrap();
            let closed = 1.0 - q.expect(|g| (gamma + gamma.sqrt() * g).tanh().powi(2));
            assert!((got - closed).abs() < 1e-10);
        }
        // Gaussian closed form
        let g = scalar_mmse(3.0, &Prior::GaussianIso { variance: 2.0, dim: 1 }, &q).unwrap();
        assert!((g - 2.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn tanh_fixed_point_at_and_above_threshold() {
        let q = quad();
        let (s0, ov0) = tanh_fixed_point(1.0, &q).unwrap();
        assert_eq!(s0, 0.0);
        assert_eq!(ov0, 0.5);

        let (s2, ov2) = tanh_fixed_point(2.0, &q).unwrap();
        assert!(s2 > 0.0);
        assert!(ov2 > 0.5 && ov2 < 1.0);
        // Monte Carlo residual of the map at s*
        let mut rng = RngStream::new(17, 0);
        let n = 2_000_000usize;
        let mut acc = 0.0;
        for _ in 0..n {
            acc += (s2 + s2.sqrt() * rng.normal()).tanh().powi(2);
        }
        let mc = 4.0 * acc / n as f64;
        assert!((mc - s2).abs() < 1e-3 * (1.0 + s2) + 4.0 * 4.0 / (n as f64).sqrt());

        let (_, ov10) = tanh_fixed_point(10.0, &q).unwrap();
        assert!(ov10 > 0.999);
    }

    #[test]
    fn state_evolution_matches_tanh_fixed_point() {
        let q = quad();
        let trace = state_evolution(2.0, &Prior::Rademacher, 200, 1e-12).unwrap();
        assert!(trace.converged);
        let (s_star, _) = tanh_fixed_point(2.0, &q).unwrap();
        assert!(
            (trace.fixed_point - s_star).abs() < 1e-6,
            "SE {} vs tanh {}",
            trace.fixed_point,
            s_star
        );
    }

    #[test]
    fn state_evolution_degenerate_below_threshold() {
        let trace = state_evolution(0.9, &Prior::Rademacher, 100, 1e-10).unwrap();
        assert!(trace.degenerate);
        assert_eq!(trace.fixed_point, 0.0);
    }

    #[test]
    fn state_evolution_monotone_for_strong_snr() {
        let trace = state_evolution(3.0, &Prior::Rademacher, 300, 1e-12).unwrap();
        for w in trace.gammas.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "trace not monotone: {:?}", trace.gammas);
        }
        assert!(trace.converged);
    }

    #[test]
    fn state_evolution_rejects_non_unit_prior() {
        let err = state_evolution(2.0, &Prior::TwoPoint { p: 0.3 }, 10, 1e-8);
        assert!(matches!(err, Err(ReplicaError::UnsupportedPrior { .. })));
    }

    #[test]
    fn psi_endpoint_value() {
        let report =
            psi_stationarity_check(3.0, &Prior::Rademacher, 200, SnrConvention::QTheta).unwrap();
        let (g0, p0) = report.psi_curve[0];
        assert_eq!(g0, 0.0);
        assert!((p0 - 9.0 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn psi_single_well_for_rademacher() {
        for conv in [SnrConvention::QTheta, SnrConvention::QThetaSquared] {
            let report = psi_stationarity_check(3.0, &Prior::Rademacher, 400, conv).unwrap();
            assert!(report.is_first_stationary_global, "{conv:?}");
            assert!(!report.stationary_gammas.is_empty(), "{conv:?}");
        }
    }

    #[test]
    fn psi_stationary_point_matches_rs_maximizer() {
        // Under the squared convention the stationary points solve the state
        // evolution fixed-point equation gamma = q_theta^2 * q*(gamma scale).
        let q = quad();
        let q_theta = 3.0f64;
        let report = psi_stationarity_check(
            q_theta,
            &Prior::Rademacher,
            3000,
            SnrConvention::QThetaSquared,
        )
        .unwrap();
        assert!(report.is_first_stationary_global);
        let sol = maximize_free_energy_scalar(q_theta * q_theta, &Prior::Rademacher, &q).unwrap();
        let predicted = q_theta * q_theta * sol.q_star[(0, 0)];
        let last = *report.stationary_gammas.last().unwrap();
        assert!(
            (last - predicted).abs() < 1e-3 * (1.0 + predicted),
            "stationary {last} vs s*q* {predicted}"
        );
    }

    #[test]
    fn psi_derivative_matches_analytic_form() {
        // dΨ/dγ = γ/(2s) - 1/2 + mmse(γ)/2 through the de Bruijn identity.
        let q = quad();
        let q_theta = 2.0;
        let report =
            psi_stationarity_check(q_theta, &Prior::Rademacher, 2000, SnrConvention::QTheta)
                .unwrap();
        let step = report.psi_curve[1].0 - report.psi_curve[0].0;
        for i in (10..report.psi_curve.len() - 10).step_by(97) {
            let num = (report.psi_curve[i + 1].1 - report.psi_curve[i - 1].1) / (2.0 * step);
            let gamma = report.psi_curve[i].0;
            let mmse = scalar_mmse(gamma, &Prior::Rademacher, &q).unwrap();
            let analytic = gamma / (2.0 * q_theta) - 0.5 + 0.5 * mmse;
            assert!(
                (num - analytic).abs() < 1e-4,
                "gamma {gamma}: {num} vs {analytic}"
            );
        }
    }

    #[test]
    fn de_bruijn_identity_unit_check() {
        // d/ds I(sqrt(s)) = mmse(sqrt(s)) / 4 at s = 4 (Rademacher).
        let q = quad();
        let h = 1e-3;
        let info =
            |s: f64| maximize_free_energy_scalar(s, &Prior::Rademacher, &q).unwrap().mutual_info_limit;
        let deriv = (info(4.0 + h) - info(4.0 - h)) / (2.0 * h);
        let mmse = maximize_free_energy_scalar(4.0, &Prior::Rademacher, &q).unwrap().mmse_limit;
        assert!(
            (deriv - 0.25 * mmse).abs() < 1e-2,
            "dI/ds {deriv} vs mmse/4 {}",
            0.25 * mmse
        );
    }
}
