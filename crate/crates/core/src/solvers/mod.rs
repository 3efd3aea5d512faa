//! Seed-and-search heuristics: densest k-subgraph, maximum clique and
//! maximum weighted clique, each started from one of four seed strategies.

mod campaign;
mod clique;
mod dks;
mod state;

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSubset};
use crate::rng;
use crate::sampler::SampleBatch;

pub use campaign::{
    run_campaign, write_campaign_csv, CampaignConfig, CampaignRecord, GraphModel, Problem, CAMPAIGN_SCHEMA,
};
pub use clique::{max_clique_search, max_weighted_clique_search, DEFAULT_CYCLES, STALL_CYCLES};
pub use dks::{densest_k_search, dks_score};

/// Where a search starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedStrategy {
    /// Nodes that clicked in the next unused sampler realization.
    GbsSample,
    /// One uniformly random node.
    RandomSingleNode,
    /// `J` distinct uniform nodes, `J` the rounded mean click count of the
    /// graph's sample batch.
    RandomJNode,
    /// The whole graph.
    GreedyPeeling,
}

impl SeedStrategy {
    pub const ALL: [SeedStrategy; 4] = [
        SeedStrategy::GbsSample,
        SeedStrategy::RandomSingleNode,
        SeedStrategy::RandomJNode,
        SeedStrategy::GreedyPeeling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeedStrategy::GbsSample => "gbs-sample",
            SeedStrategy::RandomSingleNode => "random-single-node",
            SeedStrategy::RandomJNode => "random-j-node",
            SeedStrategy::GreedyPeeling => "greedy-peeling",
        }
    }

    /// Stable numeric tag used when deriving RNG streams.
    pub fn code(self) -> u64 {
        match self {
            SeedStrategy::GbsSample => 1,
            SeedStrategy::RandomSingleNode => 2,
            SeedStrategy::RandomJNode => 3,
            SeedStrategy::GreedyPeeling => 4,
        }
    }

    /// Whether the strategy needs a sample batch from the embedded graph.
    pub fn needs_samples(self) -> bool {
        matches!(self, SeedStrategy::GbsSample | SeedStrategy::RandomJNode)
    }
}

impl fmt::Display for SeedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeedStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeedStrategy::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown seed strategy {s:?}")))
    }
}

/// Output of one search run.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub subset: NodeSubset,
    /// Density for densest-k, size for max clique, weight sum for weighted
    /// clique.
    pub score: f64,
    pub seed_subset: NodeSubset,
    pub iterations: usize,
    /// The densest-k frontier ran dry before reaching `k` nodes.
    pub pruned: bool,
    pub search_seconds: f64,
    pub seed_seconds: f64,
    /// Share of the embedding cost charged to this run; 0 unless GBS seeded.
    pub decompose_seconds: f64,
}

impl SearchResult {
    pub fn total_seconds(&self) -> f64 {
        self.search_seconds + self.seed_seconds + self.decompose_seconds
    }
}

/// Hands out the click patterns of a batch in realization order, skipping
/// rows where nothing clicked.
#[derive(Debug)]
pub struct GbsSeeds<'a> {
    batch: &'a SampleBatch,
    next: usize,
}

impl<'a> GbsSeeds<'a> {
    pub fn new(batch: &'a SampleBatch) -> Self {
        GbsSeeds { batch, next: 0 }
    }

    pub fn batch(&self) -> &'a SampleBatch {
        self.batch
    }

    /// Realizations not yet looked at.
    pub fn remaining(&self) -> usize {
        self.batch.realizations() - self.next
    }

    pub fn next_seed(&mut self) -> Result<NodeSubset> {
        while self.next < self.batch.realizations() {
            let n = self.next;
            self.next += 1;
            if self.batch.click_count(n) > 0 {
                return Ok(self.batch.clicked_nodes(n));
            }
        }
        Err(Error::EmptySeed(format!(
            "no non-empty click pattern left in {} realizations",
            self.batch.realizations()
        )))
    }

    /// `J` for [`SeedStrategy::RandomJNode`]: the rounded mean click count,
    /// clamped to `1..=M`.
    pub fn mean_seed_size(&self) -> usize {
        let m = self.batch.modes().max(1);
        (self.batch.mean_click_count().round() as usize).clamp(1, m)
    }
}

/// Builds the starting set for `strategy`.
///
/// `GbsSample` consumes the next row of `samples`; `RandomJNode` reads its
/// size from it. The other strategies ignore it.
pub fn make_seed(
    g: &Graph,
    strategy: SeedStrategy,
    samples: Option<&mut GbsSeeds>,
    rng_seed: u64,
) -> Result<NodeSubset> {
    let m = g.node_count();
    if m == 0 {
        return Err(Error::EmptySeed("graph has no nodes".into()));
    }
    let need = || Error::invalid(format!("strategy {strategy} needs a sample batch"));
    let mut rng = rng::seeded(rng_seed);
    match strategy {
        SeedStrategy::GbsSample => {
            let seeds = samples.ok_or_else(need)?;
            if seeds.batch().modes() != m {
                return Err(Error::invalid(format!(
                    "sample batch has {} modes, graph has {m} nodes",
                    seeds.batch().modes()
                )));
            }
            seeds.next_seed()
        }
        SeedStrategy::RandomSingleNode => Ok(NodeSubset::new([rng.random_range(0..m)])),
        SeedStrategy::RandomJNode => {
            let j = samples.ok_or_else(need)?.mean_seed_size().min(m);
            Ok(NodeSubset::new(index::sample(&mut rng, m, j)))
        }
        SeedStrategy::GreedyPeeling => Ok(NodeSubset::all(m)),
    }
}
