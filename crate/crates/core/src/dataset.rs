//! Reader for graph-classification datasets in the TUDataset plain-text
//! layout.
//!
//! A dataset `NAME` lives in one directory as
//!
//! * `NAME_A.txt`: one `u, v` pair per line, 1-indexed global node ids;
//! * `NAME_graph_indicator.txt`: line `i` holds the graph id of node `i`;
//! * `NAME_graph_labels.txt`: line `g` holds the label of graph `g`.
//!
//! Node labels, node attributes and edge labels are not read.

use std::collections::HashMap;
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct LabeledDataset {
    pub name: String,
    pub graphs: Vec<Graph>,
    /// Class labels in `0..K`.
    pub labels: Vec<usize>,
    /// Raw label for each class index, in first-occurrence order.
    pub raw_labels: Vec<i64>,
    /// Self-loops present in the input and dropped while parsing.
    pub self_loops_dropped: usize,
}

impl LabeledDataset {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.raw_labels.len()
    }

    pub fn max_node_count(&self) -> usize {
        self.graphs.iter().map(Graph::node_count).max().unwrap_or(0)
    }
}

fn read(dir: &Path, name: &str, suffix: &str) -> Result<(String, String)> {
    let file = format!("{name}_{suffix}.txt");
    let path = dir.join(&file);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    Ok((file, text))
}

fn parse_int<T: std::str::FromStr>(token: &str, file: &str, lineno: usize) -> Result<T> {
    token.trim().parse().map_err(|_| {
        Error::format(format!("{file}:{lineno}: expected an integer, got {token:?}"))
    })
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_tudataset(dir: impl AsRef<Path>, name: &str) -> Result<LabeledDataset> {
    let dir = dir.as_ref();
    let (a_file, a_text) = read(dir, name, "A")?;
    let (ind_file, ind_text) = read(dir, name, "graph_indicator")?;
    let (lab_file, lab_text) = read(dir, name, "graph_labels")?;

    let raw: Vec<i64> = data_lines(&lab_text)
        .map(|(i, l)| parse_int(l, &lab_file, i))
        .collect::<Result<_>>()?;
    let graph_count = raw.len();
    if graph_count == 0 {
        return Err(Error::format(format!("{lab_file}: no graph labels")));
    }

    // Global node i (0-based) -> (graph index, local index).
    let mut placement: Vec<(usize, usize)> = Vec::new();
    let mut sizes = vec![0usize; graph_count];
    for (lineno, line) in data_lines(&ind_text) {
        let gid: usize = parse_int(line, &ind_file, lineno)?;
        if gid == 0 || gid > graph_count {
            return Err(Error::format(format!(
                "{ind_file}:{lineno}: graph id {gid} outside 1..={graph_count}"
            )));
        }
        placement.push((gid - 1, sizes[gid - 1]));
        sizes[gid - 1] += 1;
    }
    if let Some(g) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::format(format!("graph {} has no nodes", g + 1)));
    }

    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); graph_count];
    let mut self_loops = 0;
    for (lineno, line) in data_lines(&a_text) {
        let mut parts = line.split(',');
        let (Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::format(format!(
                "{a_file}:{lineno}: expected `u, v`, got {line:?}"
            )));
        };
        let u: usize = parse_int(u, &a_file, lineno)?;
        let v: usize = parse_int(v, &a_file, lineno)?;
        let locate = |x: usize| {
            x.checked_sub(1)
                .and_then(|i| placement.get(i).copied())
                .ok_or_else(|| {
                    Error::format(format!("{a_file}:{lineno}: node {x} has no graph indicator"))
                })
        };
        let (gu, lu) = locate(u)?;
        let (gv, lv) = locate(v)?;
        if gu != gv {
            return Err(Error::format(format!(
                "{a_file}:{lineno}: edge ({u}, {v}) joins graphs {} and {}",
                gu + 1,
                gv + 1
            )));
        }
        if lu == lv {
            self_loops += 1;
            continue;
        }
        edges[gu].push((lu, lv));
    }
    if self_loops > 0 {
        warn!("{name}: dropped {self_loops} self-loop line(s)");
    }

    let graphs = edges
        .into_iter()
        .zip(&sizes)
        .map(|(e, &n)| Graph::from_unit_edges(n, e))
        .collect::<Result<Vec<_>>>()?;

    let mut classes: HashMap<i64, usize> = HashMap::new();
    let mut raw_labels = Vec::new();
    let labels = raw
        .iter()
        .map(|&r| {
            *classes.entry(r).or_insert_with(|| {
                raw_labels.push(r);
                raw_labels.len() - 1
            })
        })
        .collect();

    Ok(LabeledDataset {
        name: name.to_string(),
        graphs,
        labels,
        raw_labels,
        self_loops_dropped: self_loops,
    })
}

/// Keeps graphs with `min_nodes ≤ M ≤ max_nodes`. Class indices are left as
/// they were.
pub fn filter_by_size(d: &LabeledDataset, min_nodes: usize, max_nodes: usize) -> Result<LabeledDataset> {
    if min_nodes > max_nodes {
        return Err(Error::invalid(format!(
            "min_nodes {min_nodes} exceeds max_nodes {max_nodes}"
        )));
    }
    let (graphs, labels): (Vec<_>, Vec<_>) = d
        .graphs
        .iter()
        .zip(&d.labels)
        .filter(|(g, _)| (min_nodes..=max_nodes).contains(&g.node_count()))
        .map(|(g, &l)| (g.clone(), l))
        .unzip();
    if graphs.is_empty() {
        return Err(Error::EmptyResult(format!(
            "no graph of {} has between {min_nodes} and {max_nodes} nodes",
            d.name
        )));
    }
    Ok(LabeledDataset {
        name: d.name.clone(),
        graphs,
        labels,
        raw_labels: d.raw_labels.clone(),
        self_loops_dropped: d.self_loops_dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write_fixture(dir: &Path, name: &str, a: &str, indicator: &str, labels: &str) {
        fs::write(dir.join(format!("{name}_A.txt")), a).unwrap();
        fs::write(dir.join(format!("{name}_graph_indicator.txt")), indicator).unwrap();
        fs::write(dir.join(format!("{name}_graph_labels.txt")), labels).unwrap();
    }

    const TRIANGLES_A: &str = "1, 2\n2, 1\n2, 3\n3, 2\n1, 3\n3, 1\n4, 5\n5, 4\n5, 6\n6, 5\n4, 6\n6, 4\n";

    #[test]
    fn two_triangles() {
        let dir = tempfile::tempdir().unwrap();
        write_fixture(dir.path(), "T", TRIANGLES_A, "1\n1\n1\n2\n2\n2\n", "1\n-1\n");
        let d = parse_tudataset(dir.path(), "T").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.labels, vec![0, 1]);
        assert_eq!(d.raw_labels, vec![1, -1]);
        for g in &d.graphs {
            assert_eq!(g.node_count(), 3);
            assert_eq!(g.edge_count(), 3);
        }
    }

    #[test]
    fn single_directions_and_order_are_tolerated() {
        let dir = tempfile::tempdir().unwrap();
        write_fixture(dir.path(), "T", TRIANGLES_A, "1\n1\n1\n2\n2\n2\n", "1\n-1\n");
        let full = parse_tudataset(dir.path(), "T").unwrap();
        let one_way = "6, 4\n1, 2\n3, 2\n5, 6\n1, 3\n4, 5\n";
        write_fixture(dir.path(), "U", one_way, "1\n1\n1\n2\n2\n2\n", "1\n-1\n");
        let partial = parse_tudataset(dir.path(), "U").unwrap();
        assert_eq!(full.graphs, partial.graphs);
    }

    #[test]
    fn single_isolated_node() {
        let dir = tempfile::tempdir().unwrap();
        write_fixture(dir.path(), "S", "", "1\n", "7\n");
        let d = parse_tudataset(dir.path(), "S").unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.graphs[0].node_count(), 1);
        assert_eq!(d.graphs[0].edge_count(), 0);
        assert_eq!(d.labels, vec![0]);
    }

    #[test]
    fn self_loops_are_dropped_and_counted() {
        let dir = tempfile::tempdir().unwrap();
        write_fixture(dir.path(), "L", "1, 1\n1, 2\n", "1\n1\n", "3\n");
        let d = parse_tudataset(dir.path(), "L").unwrap();
        assert_eq!(d.self_loops_dropped, 1);
        assert_eq!(d.graphs[0].edge_count(), 1);
    }

    #[test]
    fn errors() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(parse_tudataset(dir.path(), "NONE"), Err(Error::Io { .. })));

        write_fixture(dir.path(), "X", "1, 4\n", "1\n1\n2\n2\n", "0\n1\n");
        assert!(matches!(parse_tudataset(dir.path(), "X"), Err(Error::Format(_))));

        write_fixture(dir.path(), "Y", "1, 9\n", "1\n1\n", "0\n");
        assert!(matches!(parse_tudataset(dir.path(), "Y"), Err(Error::Format(_))));

        write_fixture(dir.path(), "Z", "1, two\n", "1\n1\n", "0\n");
        assert!(matches!(parse_tudataset(dir.path(), "Z"), Err(Error::Format(_))));

        write_fixture(dir.path(), "W", "", "1\n3\n", "0\n1\n0\n");
        assert!(matches!(parse_tudataset(dir.path(), "W"), Err(Error::Format(_))));
    }

    fn sized(sizes: &[usize]) -> LabeledDataset {
        LabeledDataset {
            name: "sized".into(),
            graphs: sizes.iter().map(|&n| Graph::empty(n).unwrap()).collect(),
            labels: (0..sizes.len()).map(|i| i % 2).collect(),
            raw_labels: vec![10, 20],
            self_loops_dropped: 0,
        }
    }

    #[test]
    fn filter_examples() {
        let d = sized(&[5, 10]);
        let same = filter_by_size(&d, 1, usize::MAX).unwrap();
        assert_eq!(same.graphs, d.graphs);
        assert_eq!(same.labels, d.labels);

        let f = filter_by_size(&d, 6, 25).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.graphs[0].node_count(), 10);
        assert_eq!(f.labels, vec![1]);

        assert!(matches!(filter_by_size(&d, 30, 40), Err(Error::EmptyResult(_))));
        assert!(matches!(filter_by_size(&d, 4, 3), Err(Error::InvalidParameter(_))));
    }
}
