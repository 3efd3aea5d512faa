use crate::graph::{Graph, NodeSubset};

/// A mutable vertex set with, for every node of the graph, the number of its
/// neighbors inside the set.
pub(crate) struct Subgraph<'g> {
    g: &'g Graph,
    in_set: Vec<bool>,
    inner_degree: Vec<usize>,
    members: Vec<usize>,
}

impl<'g> Subgraph<'g> {
    pub fn new(g: &'g Graph, seed: &NodeSubset) -> Self {
        let mut s = Subgraph {
            g,
            in_set: vec![false; g.node_count()],
            inner_degree: vec![0; g.node_count()],
            members: Vec::with_capacity(seed.len()),
        };
        for v in seed.iter() {
            s.add(v);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Neighbors of `v` inside the set (excluding `v`).
    pub fn inner_degree(&self, v: usize) -> usize {
        self.inner_degree[v]
    }

    pub fn add(&mut self, v: usize) {
        debug_assert!(!self.in_set[v]);
        self.in_set[v] = true;
        self.members.push(v);
        for &u in self.g.neighbors(v) {
            self.inner_degree[u] += 1;
        }
    }

    pub fn remove(&mut self, v: usize) {
        debug_assert!(self.in_set[v]);
        self.in_set[v] = false;
        let pos = self.members.iter().position(|&u| u == v).expect("member present");
        self.members.swap_remove(pos);
        for &u in self.g.neighbors(v) {
            self.inner_degree[u] -= 1;
        }
    }

    /// Every member is adjacent to every other member.
    pub fn is_clique(&self) -> bool {
        let k = self.members.len();
        self.members.iter().all(|&v| self.inner_degree[v] + 1 == k)
    }

    /// Nodes outside the set, in increasing index order.
    pub fn outside(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.in_set.len()).filter(move |&v| !self.in_set[v])
    }

    pub fn to_subset(&self) -> NodeSubset {
        NodeSubset::new(self.members.iter().copied())
    }
}
