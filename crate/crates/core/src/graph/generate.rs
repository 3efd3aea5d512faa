//! Random graph generators. All are pure functions of their parameters and
//! seed.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Graph, NodeSubset};
use crate::error::{Error, Result};
use crate::rng;

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("{name} = {p} is not in [0, 1]")));
    }
    Ok(())
}

/// G(n, p): every unordered pair gets a unit edge independently with
/// probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability("p", p)?;
    if n == 0 {
        return Err(Error::invalid("graph must have at least one node"));
    }
    let mut rng = rng::seeded(seed);
    let mut adjacency = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                adjacency[i * n + j] = 1.0;
                adjacency[j * n + i] = 1.0;
            }
        }
    }
    Graph::from_adjacency(n, adjacency)
}

/// A dense G(d, p_dense) block planted in a sparse graph.
///
/// The dense block has `d = round(dense_fraction · n_total)` nodes placed at
/// random labels. Pairs inside the block get an edge with probability
/// `p_dense`; every other pair (sparse–sparse and cross pairs) with
/// `p_sparse`. Returns the graph and the planted block.
pub fn planted_graph(
    n_total: usize,
    p_dense: f64,
    p_sparse: f64,
    dense_fraction: f64,
    seed: u64,
) -> Result<(Graph, NodeSubset)> {
    check_probability("p_dense", p_dense)?;
    check_probability("p_sparse", p_sparse)?;
    if p_dense <= p_sparse {
        return Err(Error::invalid(format!(
            "p_dense = {p_dense} must exceed p_sparse = {p_sparse}"
        )));
    }
    if !(dense_fraction > 0.0 && dense_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "dense_fraction = {dense_fraction} is not in (0, 1)"
        )));
    }
    let dense = (dense_fraction * n_total as f64).round() as usize;
    if dense < 2 {
        return Err(Error::invalid(format!(
            "dense block of {dense} nodes is too small (n_total = {n_total})"
        )));
    }

    let mut rng = rng::seeded(seed);
    let mut labels: Vec<usize> = (0..n_total).collect();
    labels.shuffle(&mut rng);
    let planted = NodeSubset::new(labels[..dense].iter().copied());
    let mut in_block = vec![false; n_total];
    for v in planted.iter() {
        in_block[v] = true;
    }

    let n = n_total;
    let mut adjacency = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if in_block[i] && in_block[j] { p_dense } else { p_sparse };
            if rng.random::<f64>() < p {
                adjacency[i * n + j] = 1.0;
                adjacency[j * n + i] = 1.0;
            }
        }
    }
    Ok((Graph::from_adjacency(n, adjacency)?, planted))
}

/// Copy of `g` with i.i.d. uniform `[0, 1)` node weights.
pub fn assign_uniform_weights(g: &Graph, seed: u64) -> Graph {
    let mut rng = rng::seeded(seed);
    let weights = (0..g.node_count()).map(|_| rng.random::<f64>()).collect();
    g.clone()
        .with_node_weights(weights)
        .expect("uniform draws are valid weights")
}
