use std::time::Instant;

use super::state::Subgraph;
use super::SearchResult;
use crate::error::{Error, Result};
use crate::graph::{density, Graph, NodeSubset};

/// Density of `s`, or 0 for sets too small to have one.
pub fn dks_score(g: &Graph, s: &NodeSubset) -> f64 {
    density(g, s).unwrap_or(0.0)
}

/// Grows or peels `seed` to exactly `k` nodes.
///
/// Below `k`, adds the outside node with the most edges into the current set;
/// above `k`, removes the member with the fewest. Ties go to the lowest node
/// index. If the set is below `k` and no outside node touches it, the search
/// stops early and the result is marked `pruned`.
pub fn densest_k_search(g: &Graph, seed: &NodeSubset, k: usize) -> Result<SearchResult> {
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("k = {k} must be in 1..={n}")));
    }
    if seed.is_empty() {
        return Err(Error::EmptySeed("densest-k search needs a non-empty seed".into()));
    }
    seed.check_within(n)?;

    let start = Instant::now();
    let mut s = Subgraph::new(g, seed);
    let mut iterations = 0;
    let mut pruned = false;
    while s.len() != k {
        if s.len() < k {
            let best = s
                .outside()
                .filter(|&v| s.inner_degree(v) > 0)
                .max_by(|&a, &b| s.inner_degree(a).cmp(&s.inner_degree(b)).then(b.cmp(&a)));
            match best {
                Some(v) => s.add(v),
                None => {
                    pruned = true;
                    break;
                }
            }
        } else {
            let worst = *s
                .members()
                .iter()
                .min_by(|&&a, &&b| s.inner_degree(a).cmp(&s.inner_degree(b)).then(a.cmp(&b)))
                .expect("set is non-empty above k");
            s.remove(worst);
        }
        iterations += 1;
    }
    let subset = s.to_subset();
    let search_seconds = start.elapsed().as_secs_f64();
    Ok(SearchResult {
        score: dks_score(g, &subset),
        subset,
        seed_subset: seed.clone(),
        iterations,
        pruned,
        search_seconds,
        seed_seconds: 0.0,
        decompose_seconds: 0.0,
    })
}
