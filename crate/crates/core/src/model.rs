//! Priors for factor rows and samplers for every observation model.
//!
//! All samplers are pure functions of an [`RngStream`]: parallel trials each
//! own a distinct `stream_id`. Within one trial the factors and the noise are
//! drawn from three fixed sub-streams (0 for the left factor, 1 for the right
//! factor, 2 for the noise), row-major order. That layout is what makes the
//! mixture sampler and the asymmetric sampler bit-exact couplable.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;
use thiserror::Error;

use crate::numerics::RngStream;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("prior weights must be nonnegative and sum to 1 (sum deviates by {excess:.3e})")]
    BadWeights { excess: f64 },
    #[error("prior has no atoms")]
    EmptyPrior,
    #[error("atom {index} has dimension {got}, expected {expected}")]
    AtomDimension {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("probability parameter p = {p} outside (0, 1)")]
    BadProbability { p: f64 },
    #[error("variance must be positive, got {value}")]
    BadVariance { value: f64 },
    #[error("cluster count k = {k} out of range")]
    BadClusterCount { k: usize },
    #[error("prior dimensions do not match: left factor r = {lambda_r}, right factor r = {theta_r}")]
    DimensionMismatch { lambda_r: usize, theta_r: usize },
    #[error("matrix sizes must satisfy n, d >= 2 (got n = {n}, d = {d})")]
    TooSmall { n: usize, d: usize },
    #[error("signal-to-noise q_theta must be >= 0, got {value}")]
    BadSnr { value: f64 },
    #[error("center prior covariance is not of the form q * I: {detail}")]
    CovarianceNotIsotropic { detail: String },
    #[error("{variant} requires a prior of dimension {expected}, got {got}")]
    VariantPriorMismatch {
        variant: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("Gram reduction applies to weak-regime or custom samples, not strong-regime ones")]
    GramReduceRegime,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt sample container: {0}")]
    Corrupt(String),
}

/// Probability law on R^r for factor rows.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum Prior {
    /// Finitely many atoms with probabilities.
    DiscreteAtoms {
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
    /// N(0, variance * I_dim).
    GaussianIso { variance: f64, dim: usize },
    /// Uniform over the standard basis of R^k; second moment I_k / k.
    SimplexBasis { k: usize },
    /// Uniform on {-1, +1}.
    Rademacher,
    /// Atom (1 - p) with probability p, atom -p with probability 1 - p:
    /// mean 0, variance p(1 - p).
    TwoPoint { p: f64 },
}

const WEIGHT_TOL: f64 = 1e-12;

impl Prior {
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            Prior::DiscreteAtoms { points, weights } => {
                if points.is_empty() || weights.len() != points.len() {
                    return Err(ModelError::EmptyPrior);
                }
                let r = points[0].len();
                if r == 0 {
                    return Err(ModelError::EmptyPrior);
                }
                for (index, p) in points.iter().enumerate() {
                    if p.len() != r {
                        return Err(ModelError::AtomDimension {
                            index,
                            got: p.len(),
                            expected: r,
                        });
                    }
                }
                let mut sum = 0.0;
                for &w in weights {
                    if !(w >= 0.0) {
                        return Err(ModelError::BadWeights { excess: f64::NAN });
                    }
                    sum += w;
                }
                if (sum - 1.0).abs() > WEIGHT_TOL {
                    return Err(ModelError::BadWeights {
                        excess: (sum - 1.0).abs(),
                    });
                }
                Ok(())
            }
            Prior::GaussianIso { variance, dim } => {
                if *variance <= 0.0 {
                    return Err(ModelError::BadVariance { value: *variance });
                }
                if *dim == 0 {
                    return Err(ModelError::BadClusterCount { k: 0 });
                }
                Ok(())
            }
            Prior::SimplexBasis { k } => {
                if *k < 1 {
                    return Err(ModelError::BadClusterCount { k: *k });
                }
                Ok(())
            }
            Prior::Rademacher => Ok(()),
            Prior::TwoPoint { p } => {
                if !(*p > 0.0 && *p < 1.0) {
                    return Err(ModelError::BadProbability { p: *p });
                }
                Ok(())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Prior::DiscreteAtoms { points, .. } => points.first().map_or(0, |p| p.len()),
            Prior::GaussianIso { dim, .. } => *dim,
            Prior::SimplexBasis { k } => *k,
            Prior::Rademacher | Prior::TwoPoint { .. } => 1,
        }
    }

    /// Exact closed-form second-moment matrix E[X Xᵀ].
    pub fn second_moment(&self) -> Array2<f64> {
        match self {
            Prior::DiscreteAtoms { points, weights } => {
                let r = self.dim();
                let mut q = Array2::zeros((r, r));
                for (x, &w) in points.iter().zip(weights) {
                    for a in 0..r {
                        for b in 0..r {
                            q[(a, b)] += w * x[a] * x[b];
                        }
                    }
                }
                q
            }
            Prior::GaussianIso { variance, dim } => Array2::eye(*dim) * *variance,
            Prior::SimplexBasis { k } => Array2::eye(*k) / *k as f64,
            Prior::Rademacher => Array2::from_elem((1, 1), 1.0),
            Prior::TwoPoint { p } => Array2::from_elem((1, 1), p * (1.0 - p)),
        }
    }

    pub fn mean(&self) -> Array1<f64> {
        match self {
            Prior::DiscreteAtoms { points, weights } => {
                let r = self.dim();
                let mut m = Array1::zeros(r);
                for (x, &w) in points.iter().zip(weights) {
                    for a in 0..r {
                        m[a] += w * x[a];
                    }
                }
                m
            }
            Prior::GaussianIso { dim, .. } => Array1::zeros(*dim),
            Prior::SimplexBasis { k } => Array1::from_elem(*k, 1.0 / *k as f64),
            Prior::Rademacher => Array1::zeros(1),
            Prior::TwoPoint { .. } => Array1::zeros(1),
        }
    }

    pub fn mean_is_zero(&self) -> bool {
        self.mean().iter().all(|x| x.abs() < 1e-12)
    }

    /// Whether the full third-moment tensor E[X ⊗ X ⊗ X] vanishes. Recorded
    /// because the weak-signal theory assumes it for the right factor;
    /// sub-Gaussianity itself is noted qualitatively, not certified.
    pub fn third_moment_is_zero(&self) -> bool {
        match self {
            Prior::DiscreteAtoms { points, weights } => {
                let r = self.dim();
                for a in 0..r {
                    for b in a..r {
                        for c in b..r {
                            let t: f64 = points
                                .iter()
                                .zip(weights)
                                .map(|(x, &w)| w * x[a] * x[b] * x[c])
                                .sum();
                            if t.abs() > 1e-12 {
                                return false;
                            }
                        }
                    }
                }
                true
            }
            Prior::GaussianIso { .. } => true,
            Prior::SimplexBasis { .. } => false,
            Prior::Rademacher => true,
            Prior::TwoPoint { p } => (p - 0.5).abs() < 1e-12,
        }
    }

    /// Single-support priors make estimation trivial; allowed but flagged.
    pub fn is_degenerate(&self) -> bool {
        match self {
            Prior::DiscreteAtoms { points, weights } => {
                let support: Vec<&Vec<f64>> = points
                    .iter()
                    .zip(weights)
                    .filter(|(_, &w)| w > 0.0)
                    .map(|(p, _)| p)
                    .collect();
                support.len() <= 1
                    || support
                        .iter()
                        .all(|p| p.iter().zip(support[0]).all(|(a, b)| (a - b).abs() < 1e-15))
            }
            _ => false,
        }
    }

    /// Scalar atom representation (values, weights) for the prior kinds the
    /// exact finite-sum routines support.
    pub fn scalar_atoms(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Prior::Rademacher => Some((vec![1.0, -1.0], vec![0.5, 0.5])),
            Prior::TwoPoint { p } => Some((vec![1.0 - p, -p], vec![*p, 1.0 - *p])),
            Prior::DiscreteAtoms { points, weights } if self.dim() == 1 => {
                Some((points.iter().map(|x| x[0]).collect(), weights.clone()))
            }
            _ => None,
        }
    }

    /// Draw one row into `out` (length must equal `dim()`).
    pub fn sample_row(&self, rng: &mut RngStream, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim());
        match self {
            Prior::DiscreteAtoms { points, weights } => {
                let u = rng.uniform();
                let mut acc = 0.0;
                let mut chosen = points.len() - 1;
                for (i, &w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        chosen = i;
                        break;
                    }
                }
                out.copy_from_slice(&points[chosen]);
            }
            Prior::GaussianIso { variance, .. } => {
                let sd = variance.sqrt();
                for v in out.iter_mut() {
                    *v = sd * rng.normal();
                }
            }
            Prior::SimplexBasis { k } => {
                let j = rng.below(*k);
                out.fill(0.0);
                out[j] = 1.0;
            }
            Prior::Rademacher => {
                out[0] = if rng.uniform() < 0.5 { 1.0 } else { -1.0 };
            }
            Prior::TwoPoint { p } => {
                out[0] = if rng.uniform() < *p { 1.0 - p } else { -p };
            }
        }
    }

    /// Matrix with `rows` i.i.d. rows from the prior.
    pub fn sample_matrix(&self, rng: &mut RngStream, rows: usize) -> Array2<f64> {
        let r = self.dim();
        let mut m = Array2::zeros((rows, r));
        let mut buf = vec![0.0; r];
        for i in 0..rows {
            self.sample_row(rng, &mut buf);
            for (j, &v) in buf.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// Signal-to-noise scaling of the spiked model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Regime {
    /// s_n = n^{-1/2}
    Strong,
    /// s_n = (nd)^{-1/4}
    Weak,
    /// user-chosen s_n, for probing intermediate scalings
    Custom(f64),
}

impl Regime {
    pub fn snr(&self, n: usize, d: usize) -> f64 {
        match self {
            Regime::Strong => 1.0 / (n as f64).sqrt(),
            Regime::Weak => 1.0 / ((n as f64) * (d as f64)).powf(0.25),
            Regime::Custom(s) => *s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeedRecord {
    pub fn of(rng: &RngStream) -> Self {
        SeedRecord {
            seed: rng.seed(),
            stream_id: rng.stream_id(),
        }
    }
}

/// One generated instance of the asymmetric spiked model
/// `A = s_n * Lambda * Thetaᵀ + Z`.
#[derive(Debug, Clone)]
pub struct SpikedSample {
    pub a: Array2<f64>,
    pub lambda: Array2<f64>,
    pub theta: Array2<f64>,
    pub s_n: f64,
    pub regime: Regime,
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub seed: SeedRecord,
}

/// One generated instance of the symmetric model
/// `Y = (q_theta / n) * Lambda * Lambdaᵀ + W`, `W ~ GOE(n)`.
#[derive(Debug, Clone)]
pub struct SymmetricSample {
    pub y: Array2<f64>,
    pub lambda: Array2<f64>,
    pub q_theta: f64,
    pub n: usize,
    pub seed: SeedRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GmmVariant {
    /// Two clusters at ±Theta / (nd)^{1/4}, labels uniform on {+1, -1}.
    SymmetricPair,
    /// k clusters with approximately orthogonal centers.
    OrthogonalCenters(usize),
}

/// Gaussian-mixture data; rows of `a` are the samples.
#[derive(Debug, Clone)]
pub struct GmmSample {
    pub a: Array2<f64>,
    pub labels: Vec<usize>,
    pub centers: Array2<f64>,
    pub variant: GmmVariant,
    pub q_theta: f64,
    pub n: usize,
    pub d: usize,
    pub seed: SeedRecord,
}

impl GmmSample {
    pub fn k(&self) -> usize {
        match self.variant {
            GmmVariant::SymmetricPair => 2,
            GmmVariant::OrthogonalCenters(k) => k,
        }
    }
}

/// Exact closed-form second moment; see [`Prior::second_moment`].
pub fn second_moment(prior: &Prior) -> Result<Array2<f64>, ModelError> {
    prior.validate()?;
    Ok(prior.second_moment())
}

/// Sample the asymmetric model. Factor rows are i.i.d. from the priors, noise
/// is i.i.d. standard Gaussian, all three from independent sub-streams.
pub fn sample_asymmetric(
    prior_lambda: &Prior,
    prior_theta: &Prior,
    n: usize,
    d: usize,
    regime: Regime,
    rng: &RngStream,
) -> Result<SpikedSample, ModelError> {
    prior_lambda.validate()?;
    prior_theta.validate()?;
    if n < 2 || d < 2 {
        return Err(ModelError::TooSmall { n, d });
    }
    let r = prior_lambda.dim();
    if prior_theta.dim() != r {
        return Err(ModelError::DimensionMismatch {
            lambda_r: r,
            theta_r: prior_theta.dim(),
        });
    }
    let s_n = regime.snr(n, d);

    let lambda = prior_lambda.sample_matrix(&mut rng.substream(0), n);
    let theta = prior_theta.sample_matrix(&mut rng.substream(1), d);

    let mut a = Array2::zeros((n, d));
    {
        let mut z = rng.substream(2);
        for i in 0..n {
            for j in 0..d {
                a[(i, j)] = z.normal();
            }
        }
    }
    ndarray::linalg::general_mat_mul(s_n, &lambda, &theta.t(), 1.0, &mut a);

    Ok(SpikedSample {
        a,
        lambda,
        theta,
        s_n,
        regime,
        n,
        d,
        r,
        seed: SeedRecord::of(rng),
    })
}

/// Sample the symmetric model: `W_ii ~ N(0, 2/n)`, `W_ij = W_ji ~ N(0, 1/n)`
/// for `i < j`, independent of `Lambda`. `q_theta = 0` is admitted as the
/// pure-noise limiting case.
pub fn sample_symmetric(
    prior_lambda: &Prior,
    n: usize,
    q_theta: f64,
    rng: &RngStream,
) -> Result<SymmetricSample, ModelError> {
    prior_lambda.validate()?;
    if n < 2 {
        return Err(ModelError::TooSmall { n, d: n });
    }
    if !(q_theta >= 0.0) {
        return Err(ModelError::BadSnr { value: q_theta });
    }
    let lambda = prior_lambda.sample_matrix(&mut rng.substream(0), n);

    let mut y = Array2::zeros((n, n));
    {
        let mut w = rng.substream(1);
        let off = 1.0 / (n as f64).sqrt();
        let diag = (2.0 / n as f64).sqrt();
        for i in 0..n {
            for j in i..n {
                let g = w.normal();
                if i == j {
                    y[(i, i)] = diag * g;
                } else {
                    y[(i, j)] = off * g;
                    y[(j, i)] = off * g;
                }
            }
        }
    }
    // The rank-r update preserves exact symmetry: entries (i,j) and (j,i)
    // are the same floating-point dot product.
    ndarray::linalg::general_mat_mul(q_theta / n as f64, &lambda, &lambda.t(), 1.0, &mut y);

    Ok(SymmetricSample {
        y,
        lambda,
        q_theta,
        n,
        seed: SeedRecord::of(rng),
    })
}

/// Sample Gaussian-mixture data by the label/center encoding of the weak
/// asymmetric model; with matched streams the data matrix is bit-exactly the
/// one `sample_asymmetric` would produce.
pub fn sample_gmm(
    variant: GmmVariant,
    prior_centers: &Prior,
    n: usize,
    d: usize,
    rng: &RngStream,
) -> Result<GmmSample, ModelError> {
    prior_centers.validate()?;
    match variant {
        GmmVariant::SymmetricPair => {
            if prior_centers.dim() != 1 {
                return Err(ModelError::VariantPriorMismatch {
                    variant: "SymmetricPair",
                    expected: 1,
                    got: prior_centers.dim(),
                });
            }
            let q_theta = prior_centers.second_moment()[(0, 0)];
            let spiked =
                sample_asymmetric(&Prior::Rademacher, prior_centers, n, d, Regime::Weak, rng)?;
            let labels = spiked
                .lambda
                .column(0)
                .iter()
                .map(|&x| if x > 0.0 { 0 } else { 1 })
                .collect();
            Ok(GmmSample {
                a: spiked.a,
                labels,
                centers: spiked.theta,
                variant,
                q_theta,
                n,
                d,
                seed: SeedRecord::of(rng),
            })
        }
        GmmVariant::OrthogonalCenters(k) => {
            if k < 2 {
                return Err(ModelError::BadClusterCount { k });
            }
            if prior_centers.dim() != k {
                return Err(ModelError::VariantPriorMismatch {
                    variant: "OrthogonalCenters",
                    expected: k,
                    got: prior_centers.dim(),
                });
            }
            let q = prior_centers.second_moment();
            let q_theta = q[(0, 0)];
            for i in 0..k {
                for j in 0..k {
                    let want = if i == j { q_theta } else { 0.0 };
                    if (q[(i, j)] - want).abs() > 1e-10 {
                        return Err(ModelError::CovarianceNotIsotropic {
                            detail: format!("entry ({i},{j}) = {}, expected {want}", q[(i, j)]),
                        });
                    }
                }
            }
            let spiked = sample_asymmetric(
                &Prior::SimplexBasis { k },
                prior_centers,
                n,
                d,
                Regime::Weak,
                rng,
            )?;
            let labels = spiked
                .lambda
                .rows()
                .into_iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                        .map(|(j, _)| j)
                        .unwrap()
                })
                .collect();
            Ok(GmmSample {
                a: spiked.a,
                labels,
                centers: spiked.theta,
                variant,
                q_theta,
                n,
                d,
                seed: SeedRecord::of(rng),
            })
        }
    }
}

/// Gram reduction `(A Aᵀ - d I) / sqrt(nd)`; exactly symmetric.
pub fn gram_reduce(sample: &SpikedSample) -> Result<Array2<f64>, ModelError> {
    if matches!(sample.regime, Regime::Strong) {
        return Err(ModelError::GramReduceRegime);
    }
    Ok(gram_reduce_matrix(&sample.a))
}

/// Gram reduction of a raw data matrix (rows = samples).
pub fn gram_reduce_matrix(a: &Array2<f64>) -> Array2<f64> {
    let (n, d) = a.dim();
    let scale = 1.0 / ((n as f64) * (d as f64)).sqrt();
    let mut y = Array2::zeros((n, n));
    ndarray::linalg::general_mat_mul(scale, a, &a.t(), 0.0, &mut y);
    let shift = d as f64 * scale;
    for i in 0..n {
        y[(i, i)] -= shift;
    }
    y
}

// ---------------------------------------------------------------------------
// Serialization: a small columnar binary container plus CSV with a sidecar
// metadata file.

const MAGIC: &[u8; 8] = b"SPKLBIN1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleMeta {
    pub kind: String,
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub s_n: f64,
    pub q_theta: Option<f64>,
    pub regime: Option<Regime>,
    pub seed: u64,
    pub stream_id: u64,
    pub matrices: Vec<String>,
}

fn write_matrix<W: Write>(w: &mut W, m: &Array2<f64>) -> std::io::Result<()> {
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    for &x in m.iter() {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

fn read_matrix<R: Read>(r: &mut R) -> Result<Array2<f64>, ModelError> {
    let mut buf8 = [0u8; 8];
    r.read_exact(&mut buf8)?;
    let rows = u64::from_le_bytes(buf8) as usize;
    r.read_exact(&mut buf8)?;
    let cols = u64::from_le_bytes(buf8) as usize;
    if rows.checked_mul(cols).is_none() || rows * cols > (1 << 31) {
        return Err(ModelError::Corrupt(format!(
            "unreasonable matrix shape {rows}x{cols}"
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        r.read_exact(&mut buf8)?;
        data.push(f64::from_le_bytes(buf8));
    }
    Array2::from_shape_vec((rows, cols), data)
        .map_err(|e| ModelError::Corrupt(format!("shape error: {e}")))
}

fn write_container(
    path: &Path,
    meta: &SampleMeta,
    matrices: &[&Array2<f64>],
) -> Result<(), ModelError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    w.write_all(MAGIC)?;
    let json = serde_json::to_vec(meta).expect("meta serializes");
    w.write_all(&(json.len() as u64).to_le_bytes())?;
    w.write_all(&json)?;
    for m in matrices {
        write_matrix(&mut w, m)?;
    }
    Ok(())
}

fn read_container(path: &Path) -> Result<(SampleMeta, Vec<Array2<f64>>), ModelError> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(ModelError::Corrupt("bad magic".into()));
    }
    let mut buf8 = [0u8; 8];
    r.read_exact(&mut buf8)?;
    let len = u64::from_le_bytes(buf8) as usize;
    if len > (1 << 20) {
        return Err(ModelError::Corrupt("unreasonable metadata length".into()));
    }
    let mut json = vec![0u8; len];
    r.read_exact(&mut json)?;
    let meta: SampleMeta =
        serde_json::from_slice(&json).map_err(|e| ModelError::Corrupt(format!("bad meta: {e}")))?;
    let mut matrices = Vec::with_capacity(meta.matrices.len());
    for _ in 0..meta.matrices.len() {
        matrices.push(read_matrix(&mut r)?);
    }
    Ok((meta, matrices))
}

impl SpikedSample {
    pub fn meta(&self) -> SampleMeta {
        SampleMeta {
            kind: "spiked".into(),
            n: self.n,
            d: self.d,
            r: self.r,
            s_n: self.s_n,
            q_theta: None,
            regime: Some(self.regime),
            seed: self.seed.seed,
            stream_id: self.seed.stream_id,
            matrices: vec!["a".into(), "lambda".into(), "theta".into()],
        }
    }

    pub fn write_binary(&self, path: &Path) -> Result<(), ModelError> {
        write_container(path, &self.meta(), &[&self.a, &self.lambda, &self.theta])
    }

    pub fn read_binary(path: &Path) -> Result<SpikedSample, ModelError> {
        let (meta, mut ms) = read_container(path)?;
        if meta.kind != "spiked" || ms.len() != 3 {
            return Err(ModelError::Corrupt(format!(
                "expected spiked container, got kind '{}' with {} matrices",
                meta.kind,
                ms.len()
            )));
        }
        let theta = ms.pop().unwrap();
        let lambda = ms.pop().unwrap();
        let a = ms.pop().unwrap();
        Ok(SpikedSample {
            a,
            lambda,
            theta,
            s_n: meta.s_n,
            regime: meta.regime.unwrap_or(Regime::Custom(meta.s_n)),
            n: meta.n,
            d: meta.d,
            r: meta.r,
            seed: SeedRecord {
                seed: meta.seed,
                stream_id: meta.stream_id,
            },
        })
    }

    /// Write `A` as CSV next to a `key = value` sidecar with n, d, r, s_n and
    /// the seed record.
    pub fn write_csv(&self, matrix_path: &Path, meta_path: &Path) -> Result<(), ModelError> {
        write_matrix_csv(matrix_path, &self.a)?;
        let mut w = std::io::BufWriter::new(std::fs::File::create(meta_path)?);
        writeln!(w, "kind = spiked")?;
        writeln!(w, "n = {}", self.n)?;
        writeln!(w, "d = {}", self.d)?;
        writeln!(w, "r = {}", self.r)?;
        writeln!(w, "s_n = {}", self.s_n)?;
        writeln!(w, "seed = {}", self.seed.seed)?;
        writeln!(w, "stream_id = {}", self.seed.stream_id)?;
        Ok(())
    }
}

impl SymmetricSample {
    pub fn meta(&self) -> SampleMeta {
        SampleMeta {
            kind: "symmetric".into(),
            n: self.n,
            d: self.n,
            r: self.lambda.ncols(),
            s_n: self.q_theta / self.n as f64,
            q_theta: Some(self.q_theta),
            regime: None,
            seed: self.seed.seed,
            stream_id: self.seed.stream_id,
            matrices: vec!["y".into(), "lambda".into()],
        }
    }

    pub fn write_binary(&self, path: &Path) -> Result<(), ModelError> {
        write_container(path, &self.meta(), &[&self.y, &self.lambda])
    }

    pub fn read_binary(path: &Path) -> Result<SymmetricSample, ModelError> {
        let (meta, mut ms) = read_container(path)?;
        if meta.kind != "symmetric" || ms.len() != 2 {
            return Err(ModelError::Corrupt(format!(
                "expected symmetric container, got kind '{}'",
                meta.kind
            )));
        }
        let lambda = ms.pop().unwrap();
        let y = ms.pop().unwrap();
        Ok(SymmetricSample {
            y,
            lambda,
            q_theta: meta.q_theta.unwrap_or(0.0),
            n: meta.n,
            seed: SeedRecord {
                seed: meta.seed,
                stream_id: meta.stream_id,
            },
        })
    }
}

pub fn write_matrix_csv(path: &Path, m: &Array2<f64>) -> Result<(), ModelError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}
