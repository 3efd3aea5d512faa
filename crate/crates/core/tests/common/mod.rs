#![allow(dead_code)]

use tgbs::graph::{erdos_renyi, planted_graph, Graph};

/// Triangle 0-1-2 with node 3 hanging off node 2.
pub fn triangle_pendant() -> Graph {
    Graph::from_unit_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
}

/// Two disjoint triangles.
pub fn two_triangles() -> Graph {
    Graph::from_unit_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::from_unit_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_unit_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn star(n: usize) -> Graph {
    Graph::from_unit_edges(n, (1..n).map(|i| (0, i))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_unit_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
}

/// K4 on 0..4 with a pendant path 3-4-5.
pub fn k4_tail() -> Graph {
    Graph::from_unit_edges(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]).unwrap()
}

/// Every small fixture graph, named, each with at most 10 nodes.
pub fn small_fixtures() -> Vec<(String, Graph)> {
    let mut out = vec![
        ("triangle-pendant".to_string(), triangle_pendant()),
        ("two-triangles".to_string(), two_triangles()),
        ("k4-tail".to_string(), k4_tail()),
        ("path8".to_string(), path(8)),
        ("cycle7".to_string(), cycle(7)),
        ("star6".to_string(), star(6)),
        ("k5".to_string(), complete(5)),
    ];
    for seed in 0..12 {
        let n = 6 + (seed as usize % 5);
        out.push((format!("er{n}-{seed}"), erdos_renyi(n, 0.45, seed).unwrap()));
    }
    for seed in 0..6 {
        let (g, _) = planted_graph(10, 0.9, 0.2, 0.4, 100 + seed).unwrap();
        out.push((format!("planted10-{seed}"), g));
    }
    out
}

/// A deterministic permutation of `0..n` built from `seed`.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut tgbs::rng::seeded(seed));
    p
}
