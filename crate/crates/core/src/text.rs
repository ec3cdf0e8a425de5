//! Plain-text edge-list format.
//!
//! ```text
//! n m
//! u v      (m lines; 0 <= u < v < n for graphs, u != v for digraphs)
//! ```
//!
//! Writers emit edges in lexicographic order with `\n` line endings, so a
//! read/write round trip is byte-identical for canonical input. Readers
//! accept trailing blank lines and surrounding whitespace but nothing else.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

/// Refuse headers announcing more vertices than this; protects callers from
/// allocating on hostile input.
pub const MAX_VERTICES: usize = 1 << 20;

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let a = it
        .next()
        .ok_or_else(|| Error::parse(lineno, "expected two integers"))?;
    let b = it
        .next()
        .ok_or_else(|| Error::parse(lineno, "expected two integers"))?;
    if it.next().is_some() {
        return Err(Error::parse(lineno, "trailing tokens"));
    }
    let num = |s: &str| {
        if !s.bytes().all(|c| c.is_ascii_digit()) {
            return Err(Error::parse(
                lineno,
                format!("not a decimal integer: {s:?}"),
            ));
        }
        s.parse::<usize>()
            .map_err(|_| Error::parse(lineno, format!("integer out of range: {s:?}")))
    };
    Ok((num(a)?, num(b)?))
}

fn parse_body(text: &str, directed: bool) -> Result<(usize, Vec<(usize, usize)>)> {
    let lines: Vec<&str> = text.lines().collect();
    let mut end = lines.len();
    while end > 0 && lines[end - 1].trim().is_empty() {
        end -= 1;
    }
    if end == 0 {
        return Err(Error::parse(1, "missing header"));
    }
    let (n, m) = parse_pair(lines[0], 1)?;
    if n > MAX_VERTICES {
        return Err(Error::Capacity {
            what: "vertices in header",
            limit: MAX_VERTICES,
            got: n,
        });
    }
    let max_edges = if directed {
        n.saturating_mul(n.saturating_sub(1))
    } else {
        n.saturating_mul(n.saturating_sub(1)) / 2
    };
    if m > max_edges {
        return Err(Error::parse(
            1,
            format!("{m} edges impossible on {n} vertices"),
        ));
    }
    if end - 1 != m {
        return Err(Error::parse(
            end.min(m + 1).max(1),
            format!("header announces {m} edges, found {}", end - 1),
        ));
    }
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines[1..end].iter().enumerate() {
        let lineno = i + 2;
        let (u, v) = parse_pair(line, lineno)?;
        if u >= n || v >= n {
            return Err(Error::parse(
                lineno,
                format!("vertex out of range for n = {n}"),
            ));
        }
        if directed {
            if u == v {
                return Err(Error::parse(lineno, "self-loop"));
            }
        } else if u >= v {
            return Err(Error::parse(lineno, "edges must satisfy u < v"));
        }
        edges.push((u, v));
    }
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::parse(1, "duplicate edge"));
    }
    Ok((n, edges))
}

impl Graph {
    pub fn parse(text: &str) -> Result<Graph> {
        let (n, edges) = parse_body(text, false)?;
        Graph::from_edges(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

impl Digraph {
    pub fn parse(text: &str) -> Result<Digraph> {
        let (n, arcs) = parse_body(text, true)?;
        Digraph::from_arcs(n, arcs)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.arc_count());
        for (u, v) in self.arcs() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

/// Parses endpoint pairs written as `x:y` separated by commas or whitespace,
/// e.g. `0:1,2:3`.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(|c: char| c == ',' || c.is_ascii_whitespace())
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, tok)| {
            let (a, b) = tok
                .split_once(':')
                .ok_or_else(|| Error::parse(i + 1, format!("expected x:y, got {tok:?}")))?;
            let a = a.parse().map_err(|_| Error::parse(i + 1, "bad integer"))?;
            let b = b.parse().map_err(|_| Error::parse(i + 1, "bad integer"))?;
            Ok((a, b))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip_is_byte_identical() {
        let g = Graph::petersen();
        let text = g.to_text();
        let back = Graph::parse(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn digraph_round_trip() {
        let d = Digraph::from_arcs(3, [(2, 0), (0, 2), (1, 2)]).unwrap();
        let text = d.to_text();
        assert_eq!(text, "3 3\n0 2\n1 2\n2 0\n");
        assert_eq!(Digraph::parse(&text).unwrap(), d);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "3",
            "3 1\n1 0\n",
            "3 1\n0 3\n",
            "3 2\n0 1\n",
            "3 1\n0 1\n1 2\n",
            "3 2\n0 1\n0 1\n",
            "3 1\n0 +1\n",
            "3 1\n0 1 2\n",
            "2 5\n",
        ] {
            assert!(Graph::parse(bad).is_err(), "{bad:?} accepted");
        }
        assert!(Digraph::parse("2 1\n1 1\n").is_err());
    }

    #[test]
    fn tolerates_trailing_blank_lines() {
        let g = Graph::parse("3 1\n0 2\n\n\n").unwrap();
        assert!(g.has_edge(2, 0));
    }

    #[test]
    fn pair_lists() {
        assert_eq!(parse_pairs("0:1, 2:3").unwrap(), vec![(0, 1), (2, 3)]);
        assert!(parse_pairs("0-1").is_err());
    }
}
