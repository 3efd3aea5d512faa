//! Shrink / grow / swap local search for maximum (weighted) cliques.
//!
//! 1. Shrink: drop the member with the fewest neighbors in the set until the
//!    set is a clique.
//! 2. Repeat up to `cycles` times: grow by nodes adjacent to the whole clique,
//!    then try to swap a random member `v` for an outside node adjacent to
//!    everything except `v`, then grow again.
//!
//! The largest clique seen is returned. Cycling stops early once the best
//! score has not improved for [`STALL_CYCLES`] cycles or no swap is possible
//! at all.

use std::cmp::Ordering;
use std::time::Instant;

use rand::Rng as _;

use super::state::Subgraph;
use super::SearchResult;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSubset};
use crate::rng;

pub const DEFAULT_CYCLES: usize = 50;
pub const STALL_CYCLES: usize = 10;

/// How nodes are ranked during the search.
#[derive(Clone, Copy)]
enum Ranking<'a> {
    /// Grow and swap prefer high full-graph degree.
    Cardinality,
    /// Shrink breaks degree ties by lower weight; grow and swap prefer heavy
    /// nodes, and swaps may not lose weight.
    Weighted(&'a [f64]),
}

impl Ranking<'_> {
    /// Preference for adding `v`; larger is better.
    fn gain(&self, g: &Graph, v: usize) -> f64 {
        match self {
            Ranking::Cardinality => g.degree(v) as f64,
            Ranking::Weighted(w) => w[v],
        }
    }

    fn shrink_key(&self, s: &Subgraph, a: usize, b: usize) -> Ordering {
        let by_degree = s.inner_degree(a).cmp(&s.inner_degree(b));
        let by_weight = match self {
            Ranking::Cardinality => Ordering::Equal,
            Ranking::Weighted(w) => w[a].total_cmp(&w[b]),
        };
        by_degree.then(by_weight).then(a.cmp(&b))
    }

    fn score(&self, members: &[usize]) -> f64 {
        match self {
            Ranking::Cardinality => members.len() as f64,
            Ranking::Weighted(w) => {
                let mut sorted = members.to_vec();
                sorted.sort_unstable();
                sorted.iter().map(|&v| w[v]).sum()
            }
        }
    }
}

/// Best candidate by `gain`, ties to the lowest index.
fn pick(g: &Graph, ranking: Ranking, candidates: impl Iterator<Item = usize>) -> Option<usize> {
    candidates.fold(None, |best: Option<usize>, v| match best {
        Some(b) if ranking.gain(g, b) >= ranking.gain(g, v) => Some(b),
        _ => Some(v),
    })
}

fn grow(g: &Graph, s: &mut Subgraph, ranking: Ranking) -> usize {
    let mut added = 0;
    loop {
        let k = s.len();
        let candidate = pick(g, ranking, s.outside().filter(|&v| s.inner_degree(v) == k));
        match candidate {
            Some(v) => {
                s.add(v);
                added += 1;
            }
            None => return added,
        }
    }
}

enum Swap {
    Done,
    /// The chosen member had no legal replacement.
    Missed,
    /// No outside node is adjacent to all but one member.
    Impossible,
}

fn swap(g: &Graph, s: &mut Subgraph, ranking: Ranking, rng: &mut rng::Rng) -> Swap {
    let k = s.len();
    let near: Vec<usize> = s.outside().filter(|&u| s.inner_degree(u) + 1 == k).collect();
    if near.is_empty() {
        return Swap::Impossible;
    }
    let v = s.members()[rng.random_range(0..k)];
    let replacement = pick(g, ranking, near.into_iter().filter(|&u| !g.has_edge(u, v)));
    let Some(u) = replacement else {
        return Swap::Missed;
    };
    if let Ranking::Weighted(w) = ranking {
        if w[u] < w[v] {
            return Swap::Missed;
        }
    }
    s.remove(v);
    s.add(u);
    Swap::Done
}

fn clique_search(
    g: &Graph,
    seed: &NodeSubset,
    cycles: usize,
    rng_seed: u64,
    ranking: Ranking,
) -> Result<SearchResult> {
    if seed.is_empty() {
        return Err(Error::EmptySeed("clique search needs a non-empty seed".into()));
    }
    if cycles == 0 {
        return Err(Error::invalid("at least one grow/swap cycle is required"));
    }
    seed.check_within(g.node_count())?;

    let start = Instant::now();
    let mut rng = rng::seeded(rng_seed);
    let mut s = Subgraph::new(g, seed);
    let mut iterations = 0;

    while !s.is_clique() {
        let worst = *s
            .members()
            .iter()
            .min_by(|&&a, &&b| ranking.shrink_key(&s, a, b))
            .expect("a non-clique has members");
        s.remove(worst);
        iterations += 1;
    }

    iterations += grow(g, &mut s, ranking);
    let mut best = s.members().to_vec();
    let mut best_score = ranking.score(&best);
    let mut stale = 0;
    for _ in 0..cycles {
        match swap(g, &mut s, ranking, &mut rng) {
            Swap::Impossible => break,
            Swap::Missed => {}
            Swap::Done => iterations += 1,
        }
        iterations += grow(g, &mut s, ranking);
        let score = ranking.score(s.members());
        if score > best_score {
            best = s.members().to_vec();
            best_score = score;
            stale = 0;
        } else {
            stale += 1;
            if stale >= STALL_CYCLES {
                break;
            }
        }
    }

    let subset = NodeSubset::new(best);
    let search_seconds = start.elapsed().as_secs_f64();
    Ok(SearchResult {
        score: ranking.score(subset.as_slice()),
        subset,
        seed_subset: seed.clone(),
        iterations,
        pruned: false,
        search_seconds,
        seed_seconds: 0.0,
        decompose_seconds: 0.0,
    })
}

/// Largest clique found from `seed`; the score is its size.
pub fn max_clique_search(g: &Graph, seed: &NodeSubset, cycles: usize, rng_seed: u64) -> Result<SearchResult> {
    clique_search(g, seed, cycles, rng_seed, Ranking::Cardinality)
}

/// Heaviest clique found from `seed`; the score is its node-weight sum.
pub fn max_weighted_clique_search(
    g: &Graph,
    seed: &NodeSubset,
    cycles: usize,
    rng_seed: u64,
) -> Result<SearchResult> {
    let weights = g
        .node_weights()
        .ok_or_else(|| Error::invalid("weighted clique search needs node weights"))?;
    clique_search(g, seed, cycles, rng_seed, Ranking::Weighted(weights))
}
