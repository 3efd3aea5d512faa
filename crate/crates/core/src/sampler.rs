//! Threshold Gaussian boson sampling.
//!
//! Each input mode is a squeezed vacuum modeled classically as
//! `a = cosh(r) σ z + sinh(r) σ z*` with `σ² = 1/2` and `z` a standard complex
//! Gaussian. The amplitude vector is sent through the interferometer
//! (`a' = U a`) and a detector clicks when `|a'_m| > γ_m`.
//!
//! Realization `n` draws its `z` values from ChaCha stream `n` under the batch
//! seed, so a batch is identical however the realizations are split across
//! threads.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;
use std::time::Instant;

use faer::{Mat, MatRef};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddedProblem;
use crate::error::{Error, Result};
use crate::graph::NodeSubset;
use crate::rng;

/// Vacuum amplitude scale, `σ² = 1/2`.
pub const SIGMA: f64 = FRAC_1_SQRT_2;

pub const STAGE_DECOMPOSE: &str = "decompose";
pub const STAGE_GENERATE: &str = "generate";
pub const STAGE_PROPAGATE: &str = "propagate";
pub const STAGE_THRESHOLD: &str = "threshold";

/// `N × M` complex amplitudes, one row per realization.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeBatch {
    values: Vec<Complex64>,
    realizations: usize,
    modes: usize,
}

impl AmplitudeBatch {
    pub fn from_rows(realizations: usize, modes: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != realizations * modes {
            return Err(Error::invalid(format!(
                "{} amplitudes for a {realizations}x{modes} batch",
                values.len()
            )));
        }
        Ok(AmplitudeBatch {
            values,
            realizations,
            modes,
        })
    }

    pub fn realizations(&self) -> usize {
        self.realizations
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn sigma(&self) -> f64 {
        SIGMA
    }

    pub fn row(&self, n: usize) -> &[Complex64] {
        &self.values[n * self.modes..(n + 1) * self.modes]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn as_mat(&self) -> MatRef<'_, Complex64> {
        MatRef::from_row_major_slice(&self.values, self.realizations, self.modes)
    }
}

/// Squeezed-vacuum amplitudes for `realizations` independent draws.
pub fn generate_squeezed(squeeze: &[f64], realizations: usize, seed: u64) -> Result<AmplitudeBatch> {
    if realizations == 0 {
        return Err(Error::invalid("at least one realization is required"));
    }
    if squeeze.is_empty() {
        return Err(Error::invalid("at least one mode is required"));
    }
    if let Some(r) = squeeze.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(Error::invalid(format!("squeezing strength {r} must be finite and ≥ 0")));
    }
    let coefficients: Vec<(f64, f64)> = squeeze
        .iter()
        .map(|&r| (r.cosh() * SIGMA, r.sinh() * SIGMA))
        .collect();
    let modes = squeeze.len();
    let mut values = vec![Complex64::new(0.0, 0.0); realizations * modes];
    values
        .par_chunks_mut(modes)
        .enumerate()
        .for_each(|(n, row)| {
            let mut rng = rng::stream(seed, n as u64);
            for (a, &(c, s)) in row.iter_mut().zip(&coefficients) {
                let x: f64 = StandardNormal.sample(&mut rng);
                let y: f64 = StandardNormal.sample(&mut rng);
                let z = Complex64::new(x, y) * SIGMA;
                *a = z * c + z.conj() * s;
            }
        });
    AmplitudeBatch::from_rows(realizations, modes, values)
}

/// Applies the interferometer to every realization: `a' = U a`.
pub fn propagate(batch: &AmplitudeBatch, unitary: &Mat<Complex64>) -> Result<AmplitudeBatch> {
    let m = batch.modes();
    if unitary.nrows() != m || unitary.ncols() != m {
        return Err(Error::invalid(format!(
            "{}x{} interferometer for {m} modes",
            unitary.nrows(),
            unitary.ncols()
        )));
    }
    // Rows are realizations, so A' = A Uᵀ.
    let out = batch.as_mat() * unitary.transpose();
    let n = batch.realizations();
    let mut values = Vec::with_capacity(n * m);
    for i in 0..n {
        values.extend((0..m).map(|j| out[(i, j)]));
    }
    AmplitudeBatch::from_rows(n, m, values)
}

/// Binary detection outcomes plus per-stage timings.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    clicks: Vec<u8>,
    realizations: usize,
    modes: usize,
    timings: BTreeMap<String, f64>,
}

/// `clicks[n][m] = 1` iff `|a[n][m]| > gamma[m]`.
pub fn threshold_detect(batch: &AmplitudeBatch, gamma: &[f64]) -> Result<SampleBatch> {
    if gamma.len() != batch.modes() {
        return Err(Error::invalid(format!(
            "{} thresholds for {} modes",
            gamma.len(),
            batch.modes()
        )));
    }
    if let Some(g) = gamma.iter().find(|g| g.is_nan() || **g < 0.0) {
        return Err(Error::invalid(format!("threshold {g} must be ≥ 0")));
    }
    let m = batch.modes();
    let clicks = batch
        .values()
        .iter()
        .enumerate()
        .map(|(k, a)| u8::from(a.norm() > gamma[k % m]))
        .collect();
    Ok(SampleBatch {
        clicks,
        realizations: batch.realizations(),
        modes: m,
        timings: BTreeMap::new(),
    })
}

/// Generate, propagate and threshold `realizations` samples from `problem`.
///
/// Timings cover the compute of each stage; the `decompose` entry is copied
/// from the problem.
pub fn sample_graph(problem: &EmbeddedProblem, realizations: usize, seed: u64) -> Result<SampleBatch> {
    let start = Instant::now();
    let input = generate_squeezed(problem.squeeze(), realizations, seed)?;
    let generate = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let output = propagate(&input, problem.unitary())?;
    let propagate_s = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let mut batch = threshold_detect(&output, problem.thresholds())?;
    let threshold = start.elapsed().as_secs_f64();

    batch.timings = BTreeMap::from([
        (STAGE_DECOMPOSE.to_string(), problem.decompose_seconds()),
        (STAGE_GENERATE.to_string(), generate),
        (STAGE_PROPAGATE.to_string(), propagate_s),
        (STAGE_THRESHOLD.to_string(), threshold),
    ]);
    Ok(batch)
}

impl SampleBatch {
    /// Builds a batch from row-major 0/1 values.
    pub fn from_clicks(realizations: usize, modes: usize, clicks: Vec<u8>) -> Result<Self> {
        if clicks.len() != realizations * modes {
            return Err(Error::invalid(format!(
                "{} click values for a {realizations}x{modes} batch",
                clicks.len()
            )));
        }
        if clicks.iter().any(|&c| c > 1) {
            return Err(Error::invalid("click values must be 0 or 1"));
        }
        Ok(SampleBatch {
            clicks,
            realizations,
            modes,
            timings: BTreeMap::new(),
        })
    }

    pub fn realizations(&self) -> usize {
        self.realizations
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn row(&self, n: usize) -> &[u8] {
        &self.clicks[n * self.modes..(n + 1) * self.modes]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.clicks.chunks(self.modes.max(1)).take(self.realizations)
    }

    pub fn clicks(&self) -> &[u8] {
        &self.clicks
    }

    pub fn click_count(&self, n: usize) -> usize {
        self.row(n).iter().map(|&c| c as usize).sum()
    }

    /// Modes that clicked in realization `n`.
    pub fn clicked_nodes(&self, n: usize) -> NodeSubset {
        NodeSubset::new(self.row(n).iter().enumerate().filter(|(_, &c)| c == 1).map(|(m, _)| m))
    }

    pub fn mean_click_count(&self) -> f64 {
        let total: usize = self.clicks.iter().map(|&c| c as usize).sum();
        total as f64 / self.realizations as f64
    }

    pub fn timings(&self) -> &BTreeMap<String, f64> {
        &self.timings
    }

    pub fn timing(&self, stage: &str) -> Option<f64> {
        self.timings.get(stage).copied()
    }

    /// Generate + propagate + threshold time, excluding decomposition.
    pub fn sampling_seconds(&self) -> f64 {
        [STAGE_GENERATE, STAGE_PROPAGATE, STAGE_THRESHOLD]
            .iter()
            .filter_map(|s| self.timing(s))
            .sum()
    }

    /// One line of `0`/`1` characters per realization.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.realizations * (self.modes + 1));
        for row in self.rows() {
            out.extend(row.iter().map(|&c| if c == 1 { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut modes = None;
        let mut clicks = Vec::new();
        let mut realizations = 0;
        for (i, line) in text.lines().map(str::trim).enumerate().filter(|(_, l)| !l.is_empty()) {
            if *modes.get_or_insert(line.len()) != line.len() {
                return Err(Error::format(format!("sample line {} has a different width", i + 1)));
            }
            for ch in line.chars() {
                match ch {
                    '0' => clicks.push(0),
                    '1' => clicks.push(1),
                    _ => return Err(Error::format(format!("sample line {} has {ch:?}", i + 1))),
                }
            }
            realizations += 1;
        }
        let modes = modes.ok_or_else(|| Error::format("no samples"))?;
        Self::from_clicks(realizations, modes, clicks)
    }

    /// Writes the sample text to `path` and a JSON sidecar with timings and
    /// `parameters` next to it (`<path>.json`).
    pub fn write_with_sidecar(&self, path: impl AsRef<Path>, parameters: serde_json::Value) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))?;
        let sidecar = SampleSidecar {
            schema: SAMPLE_SCHEMA.to_string(),
            realizations: self.realizations,
            modes: self.modes,
            mean_clicks: self.mean_click_count(),
            timings: self.timings.clone(),
            parameters,
        };
        let side_path = sidecar_path(path);
        let text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
        std::fs::write(&side_path, text).map_err(|e| Error::io(&side_path, e))
    }

    /// Reads samples written by [`SampleBatch::write_with_sidecar`]; the
    /// sidecar is optional and only supplies timings.
    pub fn read_with_sidecar(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut batch = Self::parse_text(&text)?;
        let side_path = sidecar_path(path);
        if let Ok(side) = std::fs::read_to_string(&side_path) {
            let sidecar: SampleSidecar = serde_json::from_str(&side)
                .map_err(|e| Error::format(format!("{}: {e}", side_path.display())))?;
            batch.timings = sidecar.timings;
        }
        Ok(batch)
    }
}

const SAMPLE_SCHEMA: &str = "tgbs.samples.v1";

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    os.into()
}

#[derive(Serialize, Deserialize)]
struct SampleSidecar {
    schema: String,
    realizations: usize,
    modes: usize,
    mean_clicks: f64,
    timings: BTreeMap<String, f64>,
    parameters: serde_json::Value,
}
