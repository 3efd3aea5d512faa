//! Plain-text edge-list format.
//!
//! ```text
//! 4
//! 0 1
//! 1 2 0.5
//! # weights
//! 0.1
//! 0.2
//! 0.3
//! 0.4
//! ```
//!
//! The first line is the node count `M`. Each following line is an edge
//! `u v [w]`, with `w` defaulting to 1. An optional `# weights` line starts a
//! block of exactly `M` node weights, one per line. Blank lines and any other
//! `#` lines are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

const WEIGHTS_MARKER: &str = "# weights";

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", g.node_count());
    for (u, v, w) in g.edges() {
        if w == 1.0 {
            let _ = writeln!(out, "{u} {v}");
        } else {
            let _ = writeln!(out, "{u} {v} {w}");
        }
    }
    if let Some(weights) = g.node_weights() {
        out.push_str(WEIGHTS_MARKER);
        out.push('\n');
        for w in weights {
            let _ = writeln!(out, "{w}");
        }
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::format("edge list is empty"))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::format(format!("line 1: expected node count, got {header:?}")))?;

    let mut edges = Vec::new();
    let mut weights: Option<Vec<f64>> = None;
    for (lineno, line) in lines {
        if line == WEIGHTS_MARKER {
            if weights.is_some() {
                return Err(Error::format(format!("line {lineno}: repeated weight block")));
            }
            weights = Some(Vec::with_capacity(n));
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if let Some(w) = weights.as_mut() {
            let value: f64 = line
                .parse()
                .map_err(|_| Error::format(format!("line {lineno}: bad node weight {line:?}")))?;
            w.push(value);
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_node = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::format(format!("line {lineno}: bad node index {s:?}")))
        };
        let (u, v, w) = match fields.as_slice() {
            [u, v] => (parse_node(u)?, parse_node(v)?, 1.0),
            [u, v, w] => {
                let w = w
                    .parse::<f64>()
                    .map_err(|_| Error::format(format!("line {lineno}: bad edge weight {w:?}")))?;
                (parse_node(u)?, parse_node(v)?, w)
            }
            _ => {
                return Err(Error::format(format!(
                    "line {lineno}: expected `u v [w]`, got {line:?}"
                )))
            }
        };
        edges.push((u, v, w));
    }

    let g = Graph::from_edges(n, edges).map_err(|e| Error::format(e.to_string()))?;
    match weights {
        Some(w) => g.with_node_weights(w).map_err(|e| Error::format(e.to_string())),
        None => Ok(g),
    }
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text)
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_edge_list(g)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{assign_uniform_weights, erdos_renyi};
    use proptest::prelude::*;

    #[test]
    fn parses_documented_example() {
        let g = parse_edge_list("4\n0 1\n1 2 0.5\n# weights\n0.1\n0.2\n0.3\n0.4\n").unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge_weight(2, 1), 0.5);
        assert_eq!(g.node_weights().unwrap(), &[0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_edge_list(""), Err(Error::Format(_))));
        assert!(parse_edge_list("x\n").is_err());
        assert!(parse_edge_list("3\n0\n").is_err());
        assert!(parse_edge_list("3\n0 5\n").is_err());
        assert!(parse_edge_list("3\n0 1 z\n").is_err());
        assert!(parse_edge_list("2\n# weights\n0.5\n").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let g = assign_uniform_weights(&erdos_renyi(12, 0.4, 1).unwrap(), 2);
        write_edge_list(&g, &path).unwrap();
        assert_eq!(read_edge_list(&path).unwrap(), g);
        assert!(matches!(
            read_edge_list(dir.path().join("missing.txt")),
            Err(Error::Io { .. })
        ));
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 1usize..30, p in 0.0f64..=1.0, seed in any::<u64>(), weighted in any::<bool>()) {
            let mut g = erdos_renyi(n, p, seed).unwrap();
            if weighted {
                g = assign_uniform_weights(&g, seed ^ 1);
            }
            prop_assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
        }
    }
}
