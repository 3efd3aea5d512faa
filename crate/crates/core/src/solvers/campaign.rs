//! Batch experiments: many random graphs per size, every configured seed
//! strategy, several restarts each.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    densest_k_search, dks_score, make_seed, max_clique_search, max_weighted_clique_search, GbsSeeds,
    SearchResult, SeedStrategy,
};
use crate::embedding::{self, embed_graph, embed_weighted, photon_target};
use crate::error::{Error, Result};
use crate::graph::{assign_uniform_weights, erdos_renyi, is_clique, planted_graph, subset_weight, Graph};
use crate::rng::derive_seed;
use crate::sampler::sample_graph;

pub const CAMPAIGN_SCHEMA: &str = "tgbs.campaign.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    DensestK,
    MaxClique,
    MaxWeightedClique,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::DensestK => "densest-k",
            Problem::MaxClique => "max-clique",
            Problem::MaxWeightedClique => "max-weighted-clique",
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Problem::DensestK, Problem::MaxClique, Problem::MaxWeightedClique]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown problem {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphModel {
    /// Dense block in a sparse graph, see [`planted_graph`].
    Planted,
    /// G(n, ln n / n).
    ErdosRenyi,
}

fn default_instances() -> usize {
    10
}
fn default_strategies() -> Vec<SeedStrategy> {
    SeedStrategy::ALL.to_vec()
}
fn default_restarts() -> usize {
    20
}
fn default_per_mode() -> f64 {
    embedding::DEFAULT_PHOTONS_PER_MODE
}
fn default_gamma() -> f64 {
    embedding::DEFAULT_THRESHOLD
}
fn default_alpha() -> f64 {
    embedding::DEFAULT_ALPHA
}
fn default_cycles() -> usize {
    super::DEFAULT_CYCLES
}
fn default_graph() -> GraphModel {
    GraphModel::Planted
}
fn default_p_dense() -> f64 {
    0.75
}
fn default_p_sparse() -> f64 {
    0.1
}
fn default_dense_fraction() -> f64 {
    0.1
}

/// Everything needed to reproduce a campaign. Only `problem`, `sizes` and
/// `seed` are required when reading from a file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub problem: Problem,
    pub sizes: Vec<usize>,
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<SeedStrategy>,
    /// Searches per (instance, strategy); also the number of sampler
    /// realizations drawn per instance.
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    /// Total mean photon number; overrides `mean_photon_per_mode`.
    #[serde(default)]
    pub mean_photon: Option<f64>,
    #[serde(default = "default_per_mode")]
    pub mean_photon_per_mode: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_cycles")]
    pub cycles: usize,
    /// Target size for densest-k; defaults to the planted block size.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default = "default_graph")]
    pub graph: GraphModel,
    #[serde(default = "default_p_dense")]
    pub p_dense: f64,
    #[serde(default = "default_p_sparse")]
    pub p_sparse: f64,
    #[serde(default = "default_dense_fraction")]
    pub dense_fraction: f64,
    pub seed: u64,
}

impl CampaignConfig {
    /// Defaults for everything but the required fields.
    pub fn new(problem: Problem, sizes: Vec<usize>, seed: u64) -> Self {
        CampaignConfig {
            problem,
            sizes,
            instances: default_instances(),
            strategies: default_strategies(),
            restarts: default_restarts(),
            mean_photon: None,
            mean_photon_per_mode: default_per_mode(),
            gamma: default_gamma(),
            alpha: default_alpha(),
            cycles: default_cycles(),
            k: None,
            graph: default_graph(),
            p_dense: default_p_dense(),
            p_sparse: default_p_sparse(),
            dense_fraction: default_dense_fraction(),
            seed,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: CampaignConfig =
            toml::from_str(text).map_err(|e| Error::format(format!("campaign config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::invalid("sizes must be a non-empty list of positive node counts"));
        }
        if self.instances == 0 || self.restarts == 0 || self.cycles == 0 {
            return Err(Error::invalid("instances, restarts and cycles must be positive"));
        }
        if self.strategies.is_empty() {
            return Err(Error::invalid("at least one seed strategy is required"));
        }
        for x in self.mean_photon.iter().chain([&self.mean_photon_per_mode]) {
            if !(*x > 0.0 && x.is_finite()) {
                return Err(Error::invalid(format!("mean photon number {x} must be positive")));
            }
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid(format!("gamma = {} must be non-negative", self.gamma)));
        }
        if self.k == Some(0) {
            return Err(Error::invalid("k must be positive"));
        }
        Ok(())
    }

    /// Densest-k target for graphs of `n` nodes.
    pub fn k_for(&self, n: usize) -> usize {
        self.k
            .unwrap_or_else(|| ((self.dense_fraction * n as f64).round() as usize).max(1))
            .min(n)
    }
}

/// One search run of a campaign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignRecord {
    pub size: usize,
    pub instance: usize,
    pub strategy: SeedStrategy,
    pub restart: usize,
    pub score: f64,
    pub subset_size: usize,
    pub seed_size: usize,
    pub iterations: usize,
    pub pruned: bool,
    pub search_seconds: f64,
    pub seed_seconds: f64,
    pub decompose_seconds: f64,
    pub total_seconds: f64,
}

impl CampaignRecord {
    fn new(size: usize, instance: usize, strategy: SeedStrategy, restart: usize, r: &SearchResult) -> Self {
        CampaignRecord {
            size,
            instance,
            strategy,
            restart,
            score: r.score,
            subset_size: r.subset.len(),
            seed_size: r.seed_subset.len(),
            iterations: r.iterations,
            pruned: r.pruned,
            search_seconds: r.search_seconds,
            seed_seconds: r.seed_seconds,
            decompose_seconds: r.decompose_seconds,
            total_seconds: r.total_seconds(),
        }
    }
}

const KEY_GRAPH: u64 = 0;
const KEY_WEIGHTS: u64 = 1;
const KEY_SAMPLES: u64 = 2;
const KEY_RESTART: u64 = 16;

fn build_graph(config: &CampaignConfig, n: usize, instance: usize) -> Result<Graph> {
    let key = |tag| derive_seed(config.seed, &[n as u64, instance as u64, tag]);
    let g = match config.graph {
        GraphModel::Planted => {
            planted_graph(n, config.p_dense, config.p_sparse, config.dense_fraction, key(KEY_GRAPH))?.0
        }
        GraphModel::ErdosRenyi => {
            let p = if n > 1 { (n as f64).ln() / n as f64 } else { 0.0 };
            erdos_renyi(n, p, key(KEY_GRAPH))?
        }
    };
    Ok(match config.problem {
        Problem::MaxWeightedClique => assign_uniform_weights(&g, key(KEY_WEIGHTS)),
        _ => g,
    })
}

fn search(config: &CampaignConfig, g: &Graph, seed: &crate::graph::NodeSubset, rng_seed: u64) -> Result<SearchResult> {
    let r = match config.problem {
        Problem::DensestK => densest_k_search(g, seed, config.k_for(g.node_count()))?,
        Problem::MaxClique => max_clique_search(g, seed, config.cycles, rng_seed)?,
        Problem::MaxWeightedClique => max_weighted_clique_search(g, seed, config.cycles, rng_seed)?,
    };
    let (recomputed, valid) = match config.problem {
        Problem::DensestK => (dks_score(g, &r.subset), true),
        Problem::MaxClique => (r.subset.len() as f64, is_clique(g, &r.subset)),
        Problem::MaxWeightedClique => (
            subset_weight(g, &r.subset).unwrap_or(f64::NAN),
            is_clique(g, &r.subset),
        ),
    };
    if !valid || (recomputed - r.score).abs() > 1e-9 * recomputed.abs().max(1.0) {
        return Err(Error::Numeric(format!(
            "search result does not verify: score {} vs recomputed {recomputed}, valid = {valid}",
            r.score
        )));
    }
    Ok(r)
}

/// All runs on one graph instance.
pub(crate) fn run_instance(config: &CampaignConfig, n: usize, instance: usize) -> Result<Vec<CampaignRecord>> {
    let g = build_graph(config, n, instance)?;

    let needs_samples = config.strategies.iter().any(|s| s.needs_samples());
    let batch = if needs_samples {
        let target = photon_target(config.mean_photon, config.mean_photon_per_mode, n);
        let problem = match config.problem {
            Problem::MaxWeightedClique => embed_weighted(&g, config.alpha, target, config.gamma)?,
            _ => embed_graph(&g, target, config.gamma)?,
        };
        let sample_seed = derive_seed(config.seed, &[n as u64, instance as u64, KEY_SAMPLES]);
        Some(sample_graph(&problem, config.restarts, sample_seed)?)
    } else {
        None
    };

    let mut records = Vec::new();
    for &strategy in &config.strategies {
        // Peeling the whole graph for densest-k involves no randomness.
        let runs = match (config.problem, strategy) {
            (Problem::DensestK, SeedStrategy::GreedyPeeling) => 1,
            _ => config.restarts,
        };
        let mut seeds = batch.as_ref().map(GbsSeeds::new);
        let mut results = Vec::with_capacity(runs);
        for restart in 0..runs {
            let rng_seed = derive_seed(
                config.seed,
                &[n as u64, instance as u64, KEY_RESTART + strategy.code(), restart as u64],
            );
            let start = Instant::now();
            let seed = match make_seed(&g, strategy, seeds.as_mut(), rng_seed) {
                Ok(seed) => seed,
                Err(Error::EmptySeed(msg)) => {
                    log::info!("n = {n}, instance {instance}, {strategy}: {msg}");
                    break;
                }
                Err(e) => return Err(e),
            };
            let seed_seconds = start.elapsed().as_secs_f64();
            let mut r = search(config, &g, &seed, rng_seed)?;
            r.seed_seconds = seed_seconds;
            results.push((restart, r));
        }

        // The GBS runs share one embedding and one sample batch; each run is
        // charged an equal share.
        if strategy == SeedStrategy::GbsSample && !results.is_empty() {
            let b = batch.as_ref().expect("GBS strategy has samples");
            let share = results.len() as f64;
            for (_, r) in &mut results {
                r.decompose_seconds = b.timing(crate::sampler::STAGE_DECOMPOSE).unwrap_or(0.0) / share;
                r.seed_seconds += b.sampling_seconds() / share;
            }
        }
        records.extend(
            results
                .iter()
                .map(|(restart, r)| CampaignRecord::new(n, instance, strategy, *restart, r)),
        );
    }
    Ok(records)
}

/// Runs every (size, instance, strategy, restart) combination.
///
/// A failing instance is logged and skipped; the campaign only fails if the
/// configuration is invalid or every instance fails.
pub fn run_campaign(config: &CampaignConfig) -> Result<Vec<CampaignRecord>> {
    config.validate()?;
    let mut records = Vec::new();
    let mut failures = 0;
    let mut last_error = None;
    for &n in &config.sizes {
        for instance in 0..config.instances {
            match run_instance(config, n, instance) {
                Ok(r) => records.extend(r),
                Err(e) => {
                    log::error!("n = {n}, instance {instance}: {e}");
                    failures += 1;
                    last_error = Some(e);
                }
            }
        }
    }
    if failures == config.sizes.len() * config.instances {
        return Err(last_error.expect("at least one instance ran"));
    }
    Ok(records)
}

/// CSV with a schema line and the resolved configuration as `#` comments,
/// then one row per record.
pub fn write_campaign_csv<W: Write>(out: W, config: &CampaignConfig, records: &[CampaignRecord]) -> Result<()> {
    let mut out = out;
    let io = |e| Error::io("<campaign csv>", e);
    writeln!(out, "# schema: {CAMPAIGN_SCHEMA}").map_err(io)?;
    writeln!(out, "# config: {}", config.to_json()).map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::format(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record([
            "size", "instance", "strategy", "restart", "score", "subset_size", "seed_size", "iterations",
            "pruned", "search_seconds", "seed_seconds", "decompose_seconds", "total_seconds",
        ])
        .map_err(|e| Error::format(e.to_string()))?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(problem: Problem) -> CampaignConfig {
        let mut c = CampaignConfig::new(problem, vec![16], 7);
        c.instances = 2;
        c.restarts = 3;
        c.cycles = 5;
        c
    }

    #[test]
    fn one_strategy_counts() {
        let mut c = small(Problem::DensestK);
        c.strategies = vec![SeedStrategy::GreedyPeeling];
        let records = run_campaign(&c).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.subset_size == 2 && r.decompose_seconds == 0.0));
    }

    #[test]
    fn every_problem_runs_and_verifies() {
        for problem in [Problem::DensestK, Problem::MaxClique, Problem::MaxWeightedClique] {
            let records = run_campaign(&small(problem)).unwrap();
            assert!(!records.is_empty());
            for s in SeedStrategy::ALL {
                assert!(records.iter().any(|r| r.strategy == s), "{problem:?} {s}");
            }
            for r in &records {
                let gbs = r.strategy == SeedStrategy::GbsSample;
                assert_eq!(gbs, r.decompose_seconds > 0.0);
                assert!((r.total_seconds - r.search_seconds - r.seed_seconds - r.decompose_seconds).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn deterministic_apart_from_timings() {
        let strip = |rs: Vec<CampaignRecord>| {
            rs.into_iter()
                .map(|r| (r.strategy, r.restart, r.score.to_bits(), r.subset_size, r.seed_size, r.iterations))
                .collect::<Vec<_>>()
        };
        let c = small(Problem::MaxClique);
        assert_eq!(strip(run_campaign(&c).unwrap()), strip(run_campaign(&c).unwrap()));
    }

    #[test]
    fn toml_defaults_and_validation() {
        let c = CampaignConfig::from_toml("problem = \"densest-k\"\nsizes = [16, 32]\nseed = 3\n").unwrap();
        assert_eq!(c, CampaignConfig::new(Problem::DensestK, vec![16, 32], 3));
        assert_eq!(c.k_for(100), 10);
        assert!(CampaignConfig::from_toml("problem = \"densest-k\"\nsizes = [16]\n").is_err());
        assert!(CampaignConfig::from_toml("problem = \"densest-k\"\nsizes = []\nseed = 1\n").is_err());
        assert!(CampaignConfig::from_toml("problem = \"dks\"\nsizes = [16]\nseed = 1\n").is_err());
        assert!(CampaignConfig::from_toml("problem = \"densest-k\"\nsizes = [16]\nseed = 1\nbogus = 2\n").is_err());
        let c = CampaignConfig::from_toml(
            "problem = \"max-clique\"\nsizes = [8]\nseed = 1\nstrategies = [\"gbs-sample\", \"random-j-node\"]\n",
        )
        .unwrap();
        assert_eq!(c.strategies, vec![SeedStrategy::GbsSample, SeedStrategy::RandomJNode]);
    }

    #[test]
    fn csv_has_schema_and_config_lines() {
        let c = small(Problem::DensestK);
        let records = run_campaign(&c).unwrap();
        let mut buf = Vec::new();
        write_campaign_csv(&mut buf, &c, &records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), format!("# schema: {CAMPAIGN_SCHEMA}"));
        let config_line = lines.next().unwrap().strip_prefix("# config: ").unwrap();
        let parsed: CampaignConfig = serde_json::from_str(config_line).unwrap();
        assert_eq!(parsed, c);
        assert!(lines.next().unwrap().starts_with("size,instance,strategy,restart,score"));
        assert_eq!(lines.count(), records.len());
    }
}
