//! Programming a graph into a threshold Gaussian boson sampler.
//!
//! A real symmetric matrix `A` is factored as `A = U diag(λ) Uᵀ` with `U`
//! unitary and `λ ≥ 0` (Autonne–Takagi). For real symmetric input this comes
//! straight from the eigendecomposition `A = V diag(μ) Vᵀ`: take `λ = |μ|` and
//! multiply the eigenvector columns with negative eigenvalue by `i`, since
//! `(i v)(i v)ᵀ = -v vᵀ`.
//!
//! The spectrum is then rescaled by `c ∈ (0, 1/λ_max)` so that the squeezing
//! strengths `r_m = atanh(c λ_m)` carry a requested mean photon number
//! `n̄ = Σ sinh²(r_m) = Σ (cλ_m)² / (1 - (cλ_m)²)`.

use std::path::Path;
use std::time::Instant;

use faer::{Mat, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default detection threshold for every mode.
pub const DEFAULT_THRESHOLD: f64 = 1.0;
/// Default weight emphasis `α` for the weighted clique encoding.
pub const DEFAULT_ALPHA: f64 = 1.0;
/// Default mean photon number for featurization.
pub const DEFAULT_MEAN_PHOTON: f64 = 5.0;
/// Default photons per mode for graph search, where the target grows with
/// the graph.
pub const DEFAULT_PHOTONS_PER_MODE: f64 = 1.0;

/// Mean photon number target for `modes` modes: `total` when given,
/// otherwise `per_mode · modes`.
pub fn photon_target(total: Option<f64>, per_mode: f64, modes: usize) -> f64 {
    total.unwrap_or(per_mode * modes as f64)
}

const SYMMETRY_TOLERANCE: f64 = 1e-12;
const RESCALE_TOLERANCE: f64 = 1e-10;
const RESCALE_MAX_ITERATIONS: usize = 200;
const SCHEMA: &str = "tgbs.embedded_problem.v1";

#[derive(Clone, Debug)]
pub struct TakagiFactors {
    pub unitary: Mat<Complex64>,
    /// Non-negative, sorted descending; column `m` of `unitary` belongs to
    /// `lambdas[m]`.
    pub lambdas: Vec<f64>,
}

impl TakagiFactors {
    /// `U diag(λ) Uᵀ`.
    pub fn reconstruct(&self) -> Mat<Complex64> {
        let n = self.lambdas.len();
        let scaled = Mat::from_fn(n, n, |i, j| self.unitary[(i, j)] * self.lambdas[j]);
        &scaled * self.unitary.transpose()
    }
}

fn check_square(a: &Mat<f64>) -> Result<usize> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::invalid(format!(
            "expected a non-empty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

pub fn takagi_decompose(a: &Mat<f64>) -> Result<TakagiFactors> {
    let n = check_square(a)?;
    let mut all_zero = true;
    for i in 0..n {
        for j in 0..n {
            let x = a[(i, j)];
            if !x.is_finite() {
                return Err(Error::invalid(format!("non-finite entry at ({i}, {j})")));
            }
            if (x - a[(j, i)]).abs() >= SYMMETRY_TOLERANCE {
                return Err(Error::invalid(format!("matrix not symmetric at ({i}, {j})")));
            }
            all_zero &= x == 0.0;
        }
    }
    if all_zero {
        return Ok(TakagiFactors {
            unitary: Mat::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
            lambdas: vec![0.0; n],
        });
    }

    let eig = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numeric(format!("symmetric eigensolver failed: {e:?}")))?;
    let mu = eig.S().column_vector();
    let v = eig.U();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| mu[y].abs().total_cmp(&mu[x].abs()));
    let lambdas = order.iter().map(|&k| mu[k].abs()).collect();
    let unitary = Mat::from_fn(n, n, |i, j| {
        let k = order[j];
        if mu[k] < 0.0 {
            Complex64::new(0.0, v[(i, k)])
        } else {
            Complex64::new(v[(i, k)], 0.0)
        }
    });
    Ok(TakagiFactors { unitary, lambdas })
}

fn mean_photons_at(scale: f64, lambdas: &[f64]) -> f64 {
    lambdas
        .iter()
        .map(|&l| {
            let x = scale * l;
            x * x / ((1.0 - x) * (1.0 + x))
        })
        .sum()
}

/// Total mean photon number `Σ sinh²(r_m)` of a set of squeezing strengths.
pub fn mean_photon_number(squeeze: &[f64]) -> f64 {
    squeeze.iter().map(|r| r.sinh().powi(2)).sum()
}

/// Finds the scale `c` that puts `target` photons on average into the modes
/// and returns `(c, r)` with `r_m = atanh(c λ_m)`.
///
/// Solved by bisection inside the bracket
/// `sqrt(t / (Σλ² + t λ_max²)) ≤ c ≤ min(sqrt(t / Σλ²), 1/λ_max)`, which
/// holds because `x² ≤ x²/(1-x²) ≤ x²/(1-(cλ_max)²)` for every mode.
pub fn rescale_to_mean_photon(lambdas: &[f64], target: f64) -> Result<(f64, Vec<f64>)> {
    if !(target.is_finite() && target > 0.0) {
        return Err(Error::invalid(format!("mean photon target {target} must be positive")));
    }
    if let Some(l) = lambdas.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
        return Err(Error::invalid(format!("invalid Takagi value {l}")));
    }
    let lambda_max = lambdas.iter().copied().fold(0.0, f64::max);
    if lambda_max == 0.0 {
        return Err(Error::NoSignal("all Takagi values are zero (graph has no edges)".into()));
    }
    let sum_sq: f64 = lambdas.iter().map(|l| l * l).sum();

    let mut lo = (target / (sum_sq + target * lambda_max * lambda_max)).sqrt();
    let mut hi = (target / sum_sq).sqrt().min(1.0 / lambda_max);
    let mut scale = lo;
    let mut converged = false;
    for _ in 0..RESCALE_MAX_ITERATIONS {
        scale = 0.5 * (lo + hi);
        let value = mean_photons_at(scale, lambdas);
        if (value - target).abs() <= 1e-3 * RESCALE_TOLERANCE * target {
            converged = true;
            break;
        }
        if value < target {
            lo = scale;
        } else {
            hi = scale;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    if !converged {
        let value = mean_photons_at(scale, lambdas);
        if !((value - target).abs() <= RESCALE_TOLERANCE * target && scale * lambda_max < 1.0) {
            return Err(Error::Numeric(format!(
                "rescaling stalled at {value} photons for target {target}"
            )));
        }
    }
    let squeeze = lambdas.iter().map(|&l| (scale * l).atanh()).collect();
    Ok((scale, squeeze))
}

/// `Ω (D - A) Ω` with `Ω = diag(1 + α w_i)`, where `D - A` is the
/// combinatorial Laplacian (edge weights ignored) and `w` the node weights.
pub fn weighted_encode(g: &Graph, alpha: f64) -> Result<Mat<f64>> {
    let weights = g
        .node_weights()
        .ok_or_else(|| Error::invalid("weighted encoding needs node weights"))?;
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::invalid(format!("alpha = {alpha} must be non-negative")));
    }
    let omega: Vec<f64> = weights.iter().map(|w| 1.0 + alpha * w).collect();
    let n = g.node_count();
    Ok(Mat::from_fn(n, n, |i, j| {
        let laplacian = if i == j {
            g.degree(i) as f64
        } else if g.has_edge(i, j) {
            -1.0
        } else {
            0.0
        };
        laplacian * (omega[i] * omega[j])
    }))
}

/// A fully programmed sampler: interferometer, squeezing and thresholds.
#[derive(Clone, Debug)]
pub struct EmbeddedProblem {
    unitary: Mat<Complex64>,
    lambdas: Vec<f64>,
    squeeze: Vec<f64>,
    scale: f64,
    thresholds: Vec<f64>,
    mean_photon_target: f64,
    decompose_seconds: f64,
}

fn check_threshold(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::invalid(format!("threshold {gamma} must be finite and ≥ 0")));
    }
    Ok(())
}

/// Takagi factorisation, rescaling to `mean_photon_target`, and uniform
/// thresholds `gamma`.
pub fn embed(a: &Mat<f64>, mean_photon_target: f64, gamma: f64) -> Result<EmbeddedProblem> {
    check_threshold(gamma)?;
    let start = Instant::now();
    let factors = takagi_decompose(a)?;
    let (scale, squeeze) = rescale_to_mean_photon(&factors.lambdas, mean_photon_target)?;
    let decompose_seconds = start.elapsed().as_secs_f64();
    let n = factors.lambdas.len();
    Ok(EmbeddedProblem {
        unitary: factors.unitary,
        lambdas: factors.lambdas,
        squeeze,
        scale,
        thresholds: vec![gamma; n],
        mean_photon_target,
        decompose_seconds,
    })
}

/// Embeds the adjacency matrix of `g`.
pub fn embed_graph(g: &Graph, mean_photon_target: f64, gamma: f64) -> Result<EmbeddedProblem> {
    embed(&g.adjacency_matrix(), mean_photon_target, gamma)
}

/// Embeds the weight-aware encoding of `g`; the encoding time counts towards
/// the decomposition time.
pub fn embed_weighted(
    g: &Graph,
    alpha: f64,
    mean_photon_target: f64,
    gamma: f64,
) -> Result<EmbeddedProblem> {
    let start = Instant::now();
    let encoded = weighted_encode(g, alpha)?;
    let encode_seconds = start.elapsed().as_secs_f64();
    let mut problem = embed(&encoded, mean_photon_target, gamma)?;
    problem.decompose_seconds += encode_seconds;
    Ok(problem)
}

impl EmbeddedProblem {
    pub fn modes(&self) -> usize {
        self.lambdas.len()
    }

    pub fn unitary(&self) -> &Mat<Complex64> {
        &self.unitary
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn squeeze(&self) -> &[f64] {
        &self.squeeze
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn mean_photon_target(&self) -> f64 {
        self.mean_photon_target
    }

    /// Wall-clock time spent encoding, factoring and rescaling.
    pub fn decompose_seconds(&self) -> f64 {
        self.decompose_seconds
    }

    /// Mean photon number actually carried by the stored squeezing.
    pub fn mean_photon_number(&self) -> f64 {
        mean_photon_number(&self.squeeze)
    }

    pub fn with_uniform_threshold(self, gamma: f64) -> Result<Self> {
        let n = self.modes();
        self.with_thresholds(vec![gamma; n])
    }

    pub fn with_thresholds(mut self, thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.len() != self.modes() {
            return Err(Error::invalid(format!(
                "{} thresholds for {} modes",
                thresholds.len(),
                self.modes()
            )));
        }
        thresholds.iter().try_for_each(|&g| check_threshold(g))?;
        self.thresholds = thresholds;
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        let n = self.modes();
        let doc = ProblemDoc {
            schema: SCHEMA.to_string(),
            modes: n,
            unitary: (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let z = self.unitary[(i, j)];
                    [z.re, z.im]
                })
                .collect(),
            lambdas: self.lambdas.clone(),
            squeeze: self.squeeze.clone(),
            scale: self.scale,
            thresholds: self.thresholds.clone(),
            mean_photon_target: self.mean_photon_target,
            decompose_seconds: self.decompose_seconds,
        };
        serde_json::to_string_pretty(&doc).expect("problem document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProblemDoc =
            serde_json::from_str(text).map_err(|e| Error::format(format!("problem JSON: {e}")))?;
        if doc.schema != SCHEMA {
            return Err(Error::format(format!("unknown problem schema {:?}", doc.schema)));
        }
        let n = doc.modes;
        if n == 0
            || doc.unitary.len() != n * n
            || [&doc.lambdas, &doc.squeeze, &doc.thresholds]
                .iter()
                .any(|v| v.len() != n)
        {
            return Err(Error::format("problem JSON has inconsistent dimensions"));
        }
        let unitary = Mat::from_fn(n, n, |i, j| {
            let [re, im] = doc.unitary[i * n + j];
            Complex64::new(re, im)
        });
        let lambda_max = doc.lambdas.iter().copied().fold(0.0, f64::max);
        if !(doc.scale > 0.0 && doc.scale * lambda_max < 1.0) {
            return Err(Error::format("problem scale outside (0, 1/λ_max)"));
        }
        for (l, r) in doc.lambdas.iter().zip(&doc.squeeze) {
            let expected = (doc.scale * l).atanh();
            if (expected - r).abs() > 1e-12 * expected.abs().max(1.0) {
                return Err(Error::format("squeezing does not match atanh(c·λ)"));
            }
        }
        let gram = unitary.adjoint() * &unitary;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                if (gram[(i, j)] - Complex64::new(target, 0.0)).norm() > 1e-8 {
                    return Err(Error::format("stored interferometer is not unitary"));
                }
            }
        }
        Ok(EmbeddedProblem {
            unitary,
            lambdas: doc.lambdas,
            squeeze: doc.squeeze,
            scale: doc.scale,
            thresholds: doc.thresholds,
            mean_photon_target: doc.mean_photon_target,
            decompose_seconds: doc.decompose_seconds,
        }
        .with_thresholds_checked()?)
    }

    fn with_thresholds_checked(self) -> Result<Self> {
        let t = self.thresholds.clone();
        self.with_thresholds(t).map_err(|e| Error::format(e.to_string()))
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct ProblemDoc {
    schema: String,
    modes: usize,
    /// Row-major `[re, im]` pairs.
    unitary: Vec<[f64; 2]>,
    lambdas: Vec<f64>,
    squeeze: Vec<f64>,
    scale: f64,
    thresholds: Vec<f64>,
    mean_photon_target: f64,
    #[serde(default)]
    decompose_seconds: f64,
}
