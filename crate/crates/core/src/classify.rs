//! Coarse-grained sample histograms as graph features, RBF Gram matrices and
//! the balanced-accuracy metric.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::LabeledDataset;
use crate::embedding::{self, embed_graph, EmbeddedProblem};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::derive_seed;
use crate::sampler::{sample_graph, SampleBatch};

pub const FEATURES_SCHEMA: &str = "tgbs.features.v1";
pub const GRAM_SCHEMA: &str = "tgbs.gram.v1";
/// Samples per graph used for featurization unless configured otherwise.
pub const DEFAULT_SAMPLES: usize = 6000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Binning {
    /// Histogram of the total number of clicks per sample.
    Count,
    /// Click frequency of each detector.
    Detector,
}

impl std::str::FromStr for Binning {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(Binning::Count),
            "detector" => Ok(Binning::Detector),
            _ => Err(Error::invalid(format!("unknown binning {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub binning: Binning,
    pub n_samples: usize,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Running sum of the entries.
    pub fn cumulative(mut self) -> Self {
        let mut acc = 0.0;
        for v in &mut self.values {
            acc += *v;
            *v = acc;
        }
        self
    }

    pub fn l1_distance(&self, other: &FeatureVector) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).sum()
    }
}

fn check_pad(samples: &SampleBatch, pad_to: usize) -> Result<()> {
    if pad_to < samples.modes() {
        return Err(Error::invalid(format!(
            "pad_to = {pad_to} is below the {} modes of the batch",
            samples.modes()
        )));
    }
    if samples.realizations() == 0 {
        return Err(Error::invalid("cannot bin an empty batch"));
    }
    Ok(())
}

/// Fraction of samples with `0, 1, …, pad_to` clicks (length `pad_to + 1`).
pub fn count_binning(samples: &SampleBatch, pad_to: usize) -> Result<FeatureVector> {
    check_pad(samples, pad_to)?;
    let n = samples.realizations();
    let mut counts = vec![0usize; pad_to + 1];
    for i in 0..n {
        counts[samples.click_count(i)] += 1;
    }
    Ok(FeatureVector {
        values: counts.into_iter().map(|c| c as f64 / n as f64).collect(),
        binning: Binning::Count,
        n_samples: n,
    })
}

/// Fraction of samples in which each detector clicked, zero-padded to
/// `pad_to`. With `sort_descending` the frequencies are sorted first, which
/// makes the vector independent of node labels.
pub fn detector_binning(samples: &SampleBatch, pad_to: usize, sort_descending: bool) -> Result<FeatureVector> {
    check_pad(samples, pad_to)?;
    let n = samples.realizations();
    let mut hits = vec![0usize; samples.modes()];
    for row in samples.rows() {
        for (h, &c) in hits.iter_mut().zip(row) {
            *h += c as usize;
        }
    }
    let mut values: Vec<f64> = hits.into_iter().map(|h| h as f64 / n as f64).collect();
    if sort_descending {
        values.sort_by(|a, b| b.total_cmp(a));
    }
    values.resize(pad_to, 0.0);
    Ok(FeatureVector {
        values,
        binning: Binning::Detector,
        n_samples: n,
    })
}

/// Symmetric Gram matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    values: Vec<f64>,
    size: usize,
    bandwidth: f64,
}

impl KernelMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.size..(i + 1) * self.size]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_lengths(features: &[FeatureVector]) -> Result<usize> {
    let d = features.first().map_or(0, FeatureVector::len);
    if let Some(f) = features.iter().find(|f| f.len() != d) {
        return Err(Error::invalid(format!(
            "feature vectors have different lengths ({d} and {})",
            f.len()
        )));
    }
    Ok(d)
}

/// `σ² = D · Var(all entries)`, or 1 when the features carry no spread.
pub fn default_bandwidth(features: &[FeatureVector]) -> Result<f64> {
    let d = check_lengths(features)?;
    let all: Vec<f64> = features.iter().flat_map(|f| f.values.iter().copied()).collect();
    if all.len() < 2 {
        return Ok(1.0);
    }
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    let var = all.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / all.len() as f64;
    let sigma = (d as f64 * var).sqrt();
    Ok(if sigma > 0.0 { sigma } else { 1.0 })
}

/// `K_ij = exp(−‖x_i − x_j‖² / (2·bandwidth²))`.
pub fn rbf_gram(features: &[FeatureVector], bandwidth: f64) -> Result<KernelMatrix> {
    check_lengths(features)?;
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::invalid(format!("bandwidth = {bandwidth} must be positive")));
    }
    let g = features.len();
    let scale = 1.0 / (2.0 * bandwidth * bandwidth);
    let mut values = vec![0.0; g * g];
    values.par_chunks_mut(g.max(1)).enumerate().for_each(|(i, row)| {
        for (j, k) in row.iter_mut().enumerate() {
            // Same operand order for (i, j) and (j, i) keeps K exactly symmetric.
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            let d2: f64 = features[a]
                .values
                .iter()
                .zip(&features[b].values)
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            *k = (-d2 * scale).exp();
        }
    });
    Ok(KernelMatrix {
        values,
        size: g,
        bandwidth,
    })
}

/// Mean per-class recall over classes `0..k`.
pub fn balanced_accuracy(predicted: &[usize], actual: &[usize], k: usize) -> Result<f64> {
    if predicted.len() != actual.len() {
        return Err(Error::invalid(format!(
            "{} predictions for {} labels",
            predicted.len(),
            actual.len()
        )));
    }
    if k == 0 {
        return Err(Error::invalid("class count must be positive"));
    }
    let mut support = vec![0usize; k];
    let mut correct = vec![0usize; k];
    for (&p, &a) in predicted.iter().zip(actual) {
        if a >= k {
            return Err(Error::invalid(format!("label {a} is outside 0..{k}")));
        }
        support[a] += 1;
        correct[a] += usize::from(p == a);
    }
    if let Some(c) = support.iter().position(|&s| s == 0) {
        return Err(Error::invalid(format!("class {c} has no instances; its recall is undefined")));
    }
    Ok(support
        .iter()
        .zip(&correct)
        .map(|(&s, &c)| c as f64 / s as f64)
        .sum::<f64>()
        / k as f64)
}

fn default_sort() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeaturizeConfig {
    #[serde(default = "default_mean_photon")]
    pub mean_photon: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default = "default_binning")]
    pub binning: Binning,
    /// Detector binning only: sort frequencies before padding.
    #[serde(default = "default_sort")]
    pub sort_descending: bool,
    /// Replace each vector by its running sum.
    #[serde(default)]
    pub cumulative: bool,
    pub seed: u64,
}

fn default_mean_photon() -> f64 {
    embedding::DEFAULT_MEAN_PHOTON
}
fn default_gamma() -> f64 {
    embedding::DEFAULT_THRESHOLD
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}
fn default_binning() -> Binning {
    Binning::Count
}

impl FeaturizeConfig {
    pub fn new(binning: Binning, seed: u64) -> Self {
        FeaturizeConfig {
            mean_photon: default_mean_photon(),
            gamma: default_gamma(),
            n_samples: default_samples(),
            binning,
            sort_descending: true,
            cumulative: false,
            seed,
        }
    }
}

/// Features of the embeddable graphs of a dataset.
#[derive(Clone, Debug)]
pub struct FeaturizedDataset {
    /// Index into the dataset of each feature row.
    pub ids: Vec<usize>,
    pub features: Vec<FeatureVector>,
    pub labels: Vec<usize>,
    /// Graphs that could not be featurized, with the reason.
    pub skipped: Vec<(usize, String)>,
    pub pad_to: usize,
}

/// Feature vector of one already embedded graph.
pub fn featurize_problem(
    problem: &EmbeddedProblem,
    pad_to: usize,
    config: &FeaturizeConfig,
    sample_seed: u64,
) -> Result<FeatureVector> {
    let batch = sample_graph(problem, config.n_samples, sample_seed)?;
    let f = match config.binning {
        Binning::Count => count_binning(&batch, pad_to)?,
        Binning::Detector => detector_binning(&batch, pad_to, config.sort_descending)?,
    };
    Ok(if config.cumulative { f.cumulative() } else { f })
}

fn cache_key(g: &Graph) -> Vec<u64> {
    g.adjacency().iter().map(|x| x.to_bits()).collect()
}

/// Embeds and samples every graph of `d`, padding to the largest graph.
/// Graphs without edges are skipped. Graphs with identical adjacency share
/// one decomposition.
pub fn featurize_dataset(d: &LabeledDataset, config: &FeaturizeConfig) -> Result<FeaturizedDataset> {
    if config.n_samples == 0 {
        return Err(Error::invalid("n_samples must be positive"));
    }
    let pad_to = d.max_node_count();
    let mut cache: HashMap<Vec<u64>, EmbeddedProblem> = HashMap::new();
    let mut out = FeaturizedDataset {
        ids: Vec::new(),
        features: Vec::new(),
        labels: Vec::new(),
        skipped: Vec::new(),
        pad_to,
    };
    for (i, g) in d.graphs.iter().enumerate() {
        if g.edge_count() == 0 {
            out.skipped.push((i, "graph has no edges".into()));
            continue;
        }
        let key = cache_key(g);
        if !cache.contains_key(&key) {
            match embed_graph(g, config.mean_photon, config.gamma) {
                Ok(p) => {
                    cache.insert(key.clone(), p);
                }
                Err(e) => {
                    out.skipped.push((i, e.to_string()));
                    continue;
                }
            }
        }
        let problem = &cache[&key];
        let f = featurize_problem(problem, pad_to, config, derive_seed(config.seed, &[i as u64]))?;
        out.ids.push(i);
        out.features.push(f);
        out.labels.push(d.labels[i]);
    }
    if out.features.is_empty() {
        return Err(Error::EmptyResult(format!("no graph of {} could be featurized", d.name)));
    }
    Ok(out)
}

fn csv_error(e: csv::Error) -> Error {
    Error::format(e.to_string())
}

/// One row per graph: `id, label, f0 … f{D-1}`, after a schema line and the
/// configuration as `#` comments.
pub fn write_features_csv<W: Write>(mut out: W, fd: &FeaturizedDataset, config: &FeaturizeConfig) -> Result<()> {
    let io = |e| Error::io("<features csv>", e);
    writeln!(out, "# schema: {FEATURES_SCHEMA}").map_err(io)?;
    writeln!(out, "# config: {}", serde_json::to_string(config).expect("config serializes")).map_err(io)?;
    let d = fd.features.first().map_or(0, FeatureVector::len);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["id".to_string(), "label".to_string()];
    header.extend((0..d).map(|j| format!("f{j}")));
    w.write_record(&header).map_err(csv_error)?;
    for ((id, label), f) in fd.ids.iter().zip(&fd.labels).zip(&fd.features) {
        let mut row = vec![id.to_string(), label.to_string()];
        row.extend(f.values.iter().map(|v| v.to_string()));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(io)
}

#[derive(Serialize, Deserialize)]
struct GramSidecar {
    schema: String,
    bandwidth: f64,
    binning: Binning,
    n_samples: usize,
    mean_photon: f64,
    gamma: f64,
    seed: u64,
    sort_descending: bool,
    cumulative: bool,
    ids: Vec<usize>,
    labels: Vec<usize>,
}

/// Writes the Gram matrix as CSV (`id` column then one column per graph) and
/// a JSON sidecar `<path>.json` with the bandwidth, sampling settings and
/// labels.
pub fn write_gram(
    path: impl AsRef<Path>,
    kernel: &KernelMatrix,
    fd: &FeaturizedDataset,
    config: &FeaturizeConfig,
) -> Result<()> {
    let path = path.as_ref();
    if kernel.size() != fd.ids.len() {
        return Err(Error::invalid("Gram matrix and dataset sizes differ"));
    }
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    writeln!(out, "# schema: {GRAM_SCHEMA}").map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["id".to_string()];
    header.extend(fd.ids.iter().map(|id| format!("g{id}")));
    w.write_record(&header).map_err(csv_error)?;
    for (i, id) in fd.ids.iter().enumerate() {
        let mut row = vec![id.to_string()];
        row.extend(kernel.row(i).iter().map(|v| v.to_string()));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;

    let sidecar = GramSidecar {
        schema: GRAM_SCHEMA.to_string(),
        bandwidth: kernel.bandwidth(),
        binning: config.binning,
        n_samples: config.n_samples,
        mean_photon: config.mean_photon,
        gamma: config.gamma,
        seed: config.seed,
        sort_descending: config.sort_descending,
        cumulative: config.cumulative,
        ids: fd.ids.clone(),
        labels: fd.labels.clone(),
    };
    let mut side = path.as_os_str().to_owned();
    side.push(".json");
    let text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    std::fs::write(&side, text).map_err(|e| Error::io(side, e))
}
