//! Edge-list text format: a header line `n m`, then `m` lines `u v`.
//! `#` starts a comment; blank lines are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{Graph, NodeId};
use crate::error::{Error, Result};

fn parse_pair(line: &str, lineno: usize, what: &str) -> Result<(usize, usize)> {
    let mut fields = line.split_whitespace();
    let mut next = |name: &str| -> Result<usize> {
        let field = fields.next().ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("missing {name} in {what}"),
        })?;
        field.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("{name} `{field}` is not a non-negative integer"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if let Some(extra) = fields.next() {
        return Err(Error::Parse {
            line: lineno,
            message: format!("unexpected trailing field `{extra}` in {what}"),
        });
    }
    Ok((a, b))
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n m` header".into(),
    })?;
    let (n, m) = parse_pair(header, header_line, "header")?;
    if n == 0 {
        return Err(Error::Parse {
            line: header_line,
            message: "node count must be positive".into(),
        });
    }

    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    let mut last_line = header_line;
    for (lineno, line) in lines {
        last_line = lineno;
        let (u, v) = parse_pair(line, lineno, "edge")?;
        let bad = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        if u >= n || v >= n {
            return Err(bad(format!("edge ({u}, {v}) outside node range [0, {n})")));
        }
        if u == v {
            return Err(bad(format!("self-loop at node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(bad(format!("duplicate edge ({u}, {v})")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {m} edges but {} were found", edges.len()),
        });
    }
    let graph = Graph::from_edges(n, edges)?;
    graph.validate()?;
    Ok(graph)
}

/// Normalized form: header, then edges `u < v` in lexicographic order.
pub fn write_edge_list(graph: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", graph.node_count(), graph.edge_count());
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::make_pair_chain;

    #[test]
    fn reads_k2() {
        let g = read_edge_list("2 1\n0 1\n").unwrap();
        assert_eq!(g.node_count(), 2);
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn disconnected_is_validation_error() {
        let err = read_edge_list("3 1\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
    }

    #[test]
    fn comments_and_reversed_edges_normalize() {
        let text = "# triangle-ish\n3 2 # header\n\n2 1\n0 1 # first\n";
        let g = read_edge_list(text).unwrap();
        assert_eq!(write_edge_list(&g), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("2 1\n0 x\n", 2),
            ("2 1\n0 1 2\n", 2),
            ("2 2\n0 1\n1 0\n", 3),
            ("2 1\n0 5\n", 2),
            ("3 3\n0 1\n1 2\n", 3),
            ("", 1),
            ("# only a comment\n", 1),
        ];
        for (text, line) in cases {
            match read_edge_list(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn round_trip_pair_chain() {
        let g = make_pair_chain(5).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(read_edge_list(&text).unwrap(), g);
    }
}
