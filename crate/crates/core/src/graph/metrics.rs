use super::{Graph, NodeSubset};
use crate::error::{Error, Result};

/// Number of edges with both endpoints in `s`. Edge weights are ignored.
pub fn edges_within(g: &Graph, s: &NodeSubset) -> usize {
    let members = s.as_slice();
    let mut count = 0;
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            if g.has_edge(u, v) {
                count += 1;
            }
        }
    }
    count
}

/// Edge density `2ε / (k(k-1))` of the subgraph induced by `s`.
pub fn density(g: &Graph, s: &NodeSubset) -> Result<f64> {
    let k = s.len();
    if k < 2 {
        return Err(Error::invalid(format!(
            "density needs at least two nodes, got {k}"
        )));
    }
    s.check_within(g.node_count())?;
    let edges = edges_within(g, s) as f64;
    Ok(2.0 * edges / (k as f64 * (k as f64 - 1.0)))
}

/// True iff every pair of members is adjacent. Sets with fewer than two
/// members are cliques.
pub fn is_clique(g: &Graph, s: &NodeSubset) -> bool {
    let members = s.as_slice();
    members
        .iter()
        .enumerate()
        .all(|(i, &u)| members[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// Neighbors of `v` inside `s`, not counting `v` itself.
pub fn subgraph_degree(g: &Graph, s: &NodeSubset, v: usize) -> usize {
    s.iter().filter(|&u| u != v && g.has_edge(u, v)).count()
}

/// Sum of node weights over `s`; `None` when the graph carries no weights.
pub fn subset_weight(g: &Graph, s: &NodeSubset) -> Option<f64> {
    g.node_weights().map(|w| s.iter().map(|v| w[v]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::erdos_renyi;
    use proptest::prelude::*;

    fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
        Graph::from_unit_edges(n, edges).unwrap()
    }

    fn path3() -> Graph {
        Graph::from_unit_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn density_examples() {
        assert_eq!(density(&complete(4), &NodeSubset::all(4)).unwrap(), 1.0);
        let d = density(&path3(), &NodeSubset::all(3)).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn density_rejects_small_or_foreign_sets() {
        let g = path3();
        assert!(matches!(
            density(&g, &NodeSubset::new([1])),
            Err(Error::InvalidParameter(_))
        ));
        assert!(density(&g, &NodeSubset::new([1, 7])).is_err());
    }

    #[test]
    fn density_ignores_edge_weights() {
        let g = Graph::from_edges(3, [(0, 1, 5.0), (1, 2, 0.25)]).unwrap();
        let d = density(&g, &NodeSubset::all(3)).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn clique_examples() {
        let k4 = complete(4);
        assert!(is_clique(&k4, &NodeSubset::new([0, 2, 3])));
        assert!(!is_clique(&path3(), &NodeSubset::all(3)));
        assert!(is_clique(&path3(), &NodeSubset::new([2])));
    }

    #[test]
    fn subgraph_degree_examples() {
        let k4 = complete(4);
        assert_eq!(subgraph_degree(&k4, &NodeSubset::new([0, 1, 2]), 3), 3);
        assert_eq!(subgraph_degree(&k4, &NodeSubset::new([0, 1, 2]), 1), 2);
        let empty = Graph::empty(5).unwrap();
        for v in 0..5 {
            assert_eq!(subgraph_degree(&empty, &NodeSubset::all(5), v), 0);
        }
    }

    #[test]
    fn weight_sum() {
        let g = path3().with_node_weights(vec![0.5, 0.25, 1.0]).unwrap();
        assert_eq!(subset_weight(&g, &NodeSubset::new([0, 2])), Some(1.5));
        assert_eq!(subset_weight(&path3(), &NodeSubset::new([0])), None);
    }

    proptest! {
        #[test]
        fn handshake_and_clique_identity(
            n in 2usize..24,
            p in 0.0f64..=1.0,
            seed in any::<u64>(),
            mask in any::<u32>(),
        ) {
            let g = erdos_renyi(n, p, seed).unwrap();
            let s: NodeSubset = (0..n).filter(|v| mask >> (v % 32) & 1 == 1).collect();
            prop_assume!(!s.is_empty());
            let degree_sum: usize = s.iter().map(|v| subgraph_degree(&g, &s, v)).sum();
            prop_assert_eq!(degree_sum, 2 * edges_within(&g, &s));
            if s.len() >= 2 {
                let d = density(&g, &s).unwrap();
                prop_assert!((0.0..=1.0).contains(&d));
                prop_assert_eq!(is_clique(&g, &s), d == 1.0);
            } else {
                prop_assert!(is_clique(&g, &s));
            }
        }
    }
}
