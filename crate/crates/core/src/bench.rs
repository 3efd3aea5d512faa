//! Timing and seed-quality studies on Erdős–Rényi graphs with
//! `p = ln n / n`.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng as _;
use serde::Serialize;

use crate::embedding::{embed_graph, photon_target, DEFAULT_PHOTONS_PER_MODE, DEFAULT_THRESHOLD};
use crate::error::{Error, Result};
use crate::graph::{density, erdos_renyi, Graph, NodeSubset};
use crate::rng::{self, derive_seed};
use crate::sampler::sample_graph;

pub const DECOMPOSE_BENCH_SCHEMA: &str = "tgbs.decompose_bench.v1";
pub const SEED_DENSITY_SCHEMA: &str = "tgbs.seed_density.v1";

/// Edge probability `ln n / n` (0 for a single node).
pub fn connectivity_probability(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        ((n as f64).ln() / n as f64).min(1.0)
    }
}

fn er_graph(master: u64, n: usize, instance: usize) -> Result<Graph> {
    erdos_renyi(n, connectivity_probability(n), derive_seed(master, &[n as u64, instance as u64]))
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchSettings {
    pub sizes: Vec<usize>,
    pub instances: usize,
    pub realizations: usize,
    /// Total mean photon number; overrides `mean_photon_per_mode`.
    pub mean_photon: Option<f64>,
    pub mean_photon_per_mode: f64,
    pub gamma: f64,
    pub seed: u64,
}

impl BenchSettings {
    pub fn new(sizes: Vec<usize>, instances: usize, seed: u64) -> Self {
        BenchSettings {
            sizes,
            instances,
            realizations: 20,
            mean_photon: None,
            mean_photon_per_mode: DEFAULT_PHOTONS_PER_MODE,
            gamma: DEFAULT_THRESHOLD,
            seed,
        }
    }

    fn target(&self, n: usize) -> f64 {
        photon_target(self.mean_photon, self.mean_photon_per_mode, n)
    }

    fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::invalid("sizes must be a non-empty list of positive node counts"));
        }
        if self.instances == 0 || self.realizations == 0 {
            return Err(Error::invalid("instances and realizations must be positive"));
        }
        for x in self.mean_photon.iter().chain([&self.mean_photon_per_mode]) {
            if !(*x > 0.0 && x.is_finite()) {
                return Err(Error::invalid(format!("mean photon number {x} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecomposeRow {
    pub size: usize,
    pub instances: usize,
    pub decompose_mean: f64,
    pub decompose_std: f64,
    pub sampling_mean: f64,
    pub sampling_std: f64,
    /// `ok`, or the failure that stopped this size.
    pub status: String,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Returns `(decompose seconds, sampling seconds)` for one graph.
fn time_once(g: &Graph, settings: &BenchSettings, sample_seed: u64) -> Result<(f64, f64)> {
    let problem = embed_graph(g, settings.target(g.node_count()), settings.gamma)?;
    let start = Instant::now();
    let batch = sample_graph(&problem, settings.realizations, sample_seed)?;
    let sampling = start.elapsed().as_secs_f64();
    std::hint::black_box(&batch);
    Ok((problem.decompose_seconds(), sampling))
}

fn bench_size(settings: &BenchSettings, n: usize) -> Result<DecomposeRow> {
    // Warm-up run, discarded.
    let warm = er_graph(settings.seed, n, usize::MAX)?;
    time_once(&warm, settings, 0)?;

    let mut decompose = Vec::with_capacity(settings.instances);
    let mut sampling = Vec::with_capacity(settings.instances);
    for instance in 0..settings.instances {
        let g = er_graph(settings.seed, n, instance)?;
        let sample_seed = derive_seed(settings.seed, &[n as u64, instance as u64, 1]);
        let (d, s) = time_once(&g, settings, sample_seed)?;
        decompose.push(d);
        sampling.push(s);
    }
    let (decompose_mean, decompose_std) = mean_std(&decompose);
    let (sampling_mean, sampling_std) = mean_std(&sampling);
    Ok(DecomposeRow {
        size: n,
        instances: settings.instances,
        decompose_mean,
        decompose_std,
        sampling_mean,
        sampling_std,
        status: "ok".into(),
    })
}

/// Mean and standard deviation of the decomposition and sampling times per
/// size. A size that fails (or panics) is reported with its error and the
/// run continues.
pub fn decompose_bench(settings: &BenchSettings) -> Result<Vec<DecomposeRow>> {
    settings.validate()?;
    let mut rows = Vec::new();
    for &n in &settings.sizes {
        let outcome = catch_unwind(AssertUnwindSafe(|| bench_size(settings, n)));
        let row = match outcome {
            Ok(Ok(row)) => row,
            Ok(Err(e)) => failed_row(n, settings.instances, e.to_string()),
            Err(panic) => {
                let msg = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                failed_row(n, settings.instances, msg)
            }
        };
        if row.status != "ok" {
            log::error!("decompose bench, n = {n}: {}", row.status);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn failed_row(size: usize, instances: usize, status: String) -> DecomposeRow {
    DecomposeRow {
        size,
        instances,
        decompose_mean: f64::NAN,
        decompose_std: f64::NAN,
        sampling_mean: f64::NAN,
        sampling_std: f64::NAN,
        status,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedDensityRow {
    pub size: usize,
    pub graphs: usize,
    /// Mean click count over all realizations of all graphs.
    pub mean_clicks: f64,
    pub gbs_density: f64,
    pub gbs_seeds: usize,
    pub random_density: f64,
    pub random_seeds: usize,
    pub status: String,
}

/// Density per size of sampled seeds against a random baseline.
///
/// Each graph is sampled `realizations` times. The baseline draws the same
/// number of subsets per graph, including each node independently with
/// probability `1/j̄`, where `j̄` is the mean click count at that size.
/// Seeds with fewer than two nodes have no density and are left out of both
/// means.
pub fn seed_density(settings: &BenchSettings) -> Result<Vec<SeedDensityRow>> {
    settings.validate()?;
    let mut rows = Vec::new();
    for &n in &settings.sizes {
        let row = match seed_density_size(settings, n) {
            Ok(row) => row,
            Err(e) => {
                log::error!("seed density, n = {n}: {e}");
                SeedDensityRow {
                    size: n,
                    graphs: 0,
                    mean_clicks: f64::NAN,
                    gbs_density: f64::NAN,
                    gbs_seeds: 0,
                    random_density: f64::NAN,
                    random_seeds: 0,
                    status: e.to_string(),
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

fn seed_density_size(settings: &BenchSettings, n: usize) -> Result<SeedDensityRow> {
    let mut graphs = Vec::with_capacity(settings.instances);
    let mut gbs = Vec::new();
    let mut clicks = 0usize;
    let mut realizations = 0usize;
    for instance in 0..settings.instances {
        let g = er_graph(settings.seed, n, instance)?;
        let problem = match embed_graph(&g, settings.target(n), settings.gamma) {
            Ok(p) => p,
            Err(Error::NoSignal(msg)) => {
                log::warn!("seed density, n = {n}, instance {instance}: {msg}");
                continue;
            }
            Err(e) => return Err(e),
        };
        let sample_seed = derive_seed(settings.seed, &[n as u64, instance as u64, 1]);
        let batch = sample_graph(&problem, settings.realizations, sample_seed)?;
        for i in 0..batch.realizations() {
            clicks += batch.click_count(i);
            realizations += 1;
            if let Ok(d) = density(&g, &batch.clicked_nodes(i)) {
                gbs.push(d);
            }
        }
        graphs.push((instance, g));
    }
    if realizations == 0 {
        return Err(Error::NoSignal(format!("no graph of size {n} could be embedded")));
    }
    let mean_clicks = clicks as f64 / realizations as f64;

    let mut random = Vec::new();
    let include = if mean_clicks > 0.0 { (1.0 / mean_clicks).min(1.0) } else { 1.0 };
    for (instance, g) in &graphs {
        let mut rng = rng::seeded(derive_seed(settings.seed, &[n as u64, *instance as u64, 2]));
        for _ in 0..settings.realizations {
            let s: NodeSubset = (0..n).filter(|_| rng.random::<f64>() < include).collect();
            if let Ok(d) = density(g, &s) {
                random.push(d);
            }
        }
    }
    let mean = |xs: &[f64]| if xs.is_empty() { f64::NAN } else { xs.iter().sum::<f64>() / xs.len() as f64 };
    Ok(SeedDensityRow {
        size: n,
        graphs: graphs.len(),
        mean_clicks,
        gbs_density: mean(&gbs),
        gbs_seeds: gbs.len(),
        random_density: mean(&random),
        random_seeds: random.len(),
        status: "ok".into(),
    })
}

/// CSV with a schema line and the settings as `#` comments.
pub fn write_report_csv<W: Write, R: Serialize>(
    mut out: W,
    schema: &str,
    settings: &impl Serialize,
    rows: &[R],
) -> Result<()> {
    let io = |e| Error::io("<report csv>", e);
    writeln!(out, "# schema: {schema}").map_err(io)?;
    writeln!(out, "# config: {}", serde_json::to_string(settings).expect("settings serialize")).map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::format(e.to_string()))?;
    }
    w.flush().map_err(io)
}
