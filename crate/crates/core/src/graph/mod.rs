//! Undirected graphs, node subsets and the subgraph metrics shared by the
//! embedding, sampler and solver modules.
//!
//! Adjacency is stored dense and row-major; an adjacency-list view is built at
//! construction for the solvers' inner loops. A [`Graph`] is immutable once
//! built.

mod edgelist;
mod generate;
mod metrics;

pub use edgelist::{parse_edge_list, read_edge_list, to_edge_list, write_edge_list};
pub use generate::{assign_uniform_weights, erdos_renyi, planted_graph};
pub use metrics::{density, edges_within, is_clique, subgraph_degree, subset_weight};

use faer::Mat;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<f64>,
    neighbors: Vec<Vec<usize>>,
    node_weights: Option<Vec<f64>>,
}

impl Graph {
    /// Edgeless graph on `n ≥ 1` nodes.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph must have at least one node"));
        }
        Ok(Self::from_parts(n, vec![0.0; n * n], None))
    }

    /// Builds a graph from `(u, v, weight)` triples. A weight of zero means no
    /// edge; a repeated pair keeps the last weight seen.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::invalid("graph must have at least one node"));
        }
        let mut adjacency = vec![0.0; n * n];
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop on node {u}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) has invalid weight {w}"
                )));
            }
            adjacency[u * n + v] = w;
            adjacency[v * n + u] = w;
        }
        Ok(Self::from_parts(n, adjacency, None))
    }

    /// Unweighted edges (weight 1).
    pub fn from_unit_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    /// Builds a graph from a row-major `n × n` adjacency matrix, which must be
    /// exactly symmetric with a zero diagonal and non-negative finite entries.
    pub fn from_adjacency(n: usize, adjacency: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph must have at least one node"));
        }
        if adjacency.len() != n * n {
            return Err(Error::invalid(format!(
                "adjacency has {} entries, expected {}",
                adjacency.len(),
                n * n
            )));
        }
        for i in 0..n {
            if adjacency[i * n + i] != 0.0 {
                return Err(Error::invalid(format!("non-zero diagonal at node {i}")));
            }
            for j in (i + 1)..n {
                let w = adjacency[i * n + j];
                if w != adjacency[j * n + i] {
                    return Err(Error::invalid(format!("adjacency not symmetric at ({i}, {j})")));
                }
                if !(w.is_finite() && w >= 0.0) {
                    return Err(Error::invalid(format!("invalid edge weight {w} at ({i}, {j})")));
                }
            }
        }
        Ok(Self::from_parts(n, adjacency, None))
    }

    fn from_parts(n: usize, adjacency: Vec<f64>, node_weights: Option<Vec<f64>>) -> Self {
        let neighbors = (0..n)
            .map(|i| {
                let row = &adjacency[i * n..(i + 1) * n];
                (0..n).filter(|&j| row[j] > 0.0).collect()
            })
            .collect();
        Graph {
            n,
            adjacency,
            neighbors,
            node_weights,
        }
    }

    /// Attaches node weights (length `M`, all finite and ≥ 0).
    pub fn with_node_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n {
            return Err(Error::invalid(format!(
                "{} node weights for {} nodes",
                weights.len(),
                self.n
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::invalid(format!("node {i} has invalid weight {w}")));
        }
        self.node_weights = Some(weights);
        Ok(self)
    }

    pub fn without_node_weights(mut self) -> Self {
        self.node_weights = None;
        self
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> f64 {
        self.adjacency[u * self.n + v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.n + v] > 0.0
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Number of neighbors, ignoring edge weights.
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v, weight)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors[u]
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v, self.edge_weight(u, v)))
        })
    }

    pub fn node_weights(&self) -> Option<&[f64]> {
        self.node_weights.as_deref()
    }

    /// Row-major `M × M` adjacency.
    pub fn adjacency(&self) -> &[f64] {
        &self.adjacency
    }

    pub fn adjacency_matrix(&self) -> Mat<f64> {
        Mat::from_fn(self.n, self.n, |i, j| self.adjacency[i * self.n + j])
    }

    /// Relabels nodes so that old node `i` becomes `perm[i]`. Node weights move
    /// with their nodes.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::invalid("relabeling is not a permutation of the nodes"));
        }
        let mut adjacency = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                adjacency[perm[i] * n + perm[j]] = self.adjacency[i * n + j];
            }
        }
        let weights = self.node_weights.as_ref().map(|w| {
            let mut out = vec![0.0; n];
            for (i, &p) in perm.iter().enumerate() {
                out[p] = w[i];
            }
            out
        });
        Ok(Self::from_parts(n, adjacency, weights))
    }
}

/// A sorted, duplicate-free set of node indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NodeSubset(Vec<usize>);

impl NodeSubset {
    /// Sorts and deduplicates `members`.
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        NodeSubset(v)
    }

    /// Accepts an already strictly increasing list.
    pub fn from_sorted(members: Vec<usize>) -> Result<Self> {
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("node subset is not strictly increasing"));
        }
        Ok(NodeSubset(members))
    }

    /// Every node of a graph with `n` nodes.
    pub fn all(n: usize) -> Self {
        NodeSubset((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Checks every member against a graph of `n` nodes.
    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&max) if max >= n => Err(Error::invalid(format!(
                "node {max} out of range for {n} nodes"
            ))),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for NodeSubset {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        NodeSubset::new(iter)
    }
}

impl std::fmt::Display for NodeSubset {
    /// Space separated member list, as used in CSV reports.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
