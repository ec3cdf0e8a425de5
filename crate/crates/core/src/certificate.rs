//! Witness types and their independent verifier.
//!
//! The verifier only reads the host adjacency; it never trusts anything the
//! solver that produced the certificate knew.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Digraph, Graph};

/// A cycle given by its vertex sequence; the closing edge is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleCertificate {
    pub vertices: Vec<usize>,
}

impl CycleCertificate {
    pub fn new(vertices: Vec<usize>) -> Self {
        CycleCertificate { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Rotates so the smallest label comes first, and picks the direction
    /// whose second vertex is smaller.
    pub fn canonical(mut self) -> Self {
        let v = &mut self.vertices;
        if let Some(i) = (0..v.len()).min_by_key(|&i| v[i]) {
            v.rotate_left(i);
            if v.len() > 2 && v[v.len() - 1] < v[1] {
                v[1..].reverse();
            }
        }
        self
    }
}

/// A path given by its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathCertificate {
    pub vertices: Vec<usize>,
}

impl PathCertificate {
    pub fn new(vertices: Vec<usize>) -> Self {
        PathCertificate { vertices }
    }
}

/// Vertex-disjoint paths with pinned endpoints. `paths[i]` runs from
/// `endpoint_pairs[i].0` to `endpoint_pairs[i].1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub paths: Vec<Vec<usize>>,
    pub endpoint_pairs: Vec<(usize, usize)>,
}

impl PathSystem {
    pub fn covered(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }
}

/// Everything [`verify_certificate`] knows how to check against a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Cycle(CycleCertificate),
    HamiltonCycle(CycleCertificate),
    Path(PathCertificate),
    HamiltonPath(PathCertificate),
    PathSystem(PathSystem),
    SpanningPathSystem(PathSystem),
}

/// First invariant a certificate breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    TooShort {
        len: usize,
        min: usize,
    },
    VertexOutOfRange {
        vertex: usize,
    },
    Repeated {
        vertex: usize,
    },
    NonEdge {
        from: usize,
        to: usize,
    },
    NotSpanning {
        missing: usize,
    },
    EndpointMismatch {
        path: usize,
        expected: (usize, usize),
    },
    PathCount {
        paths: usize,
        pairs: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooShort { len, min } => write!(f, "length {len} below {min}"),
            Violation::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            Violation::Repeated { vertex } => write!(f, "vertex {vertex} used twice"),
            Violation::NonEdge { from, to } => write!(f, "{from}-{to} is not an edge"),
            Violation::NotSpanning { missing } => write!(f, "vertex {missing} not covered"),
            Violation::EndpointMismatch { path, expected } => write!(
                f,
                "path {path} does not join {} and {}",
                expected.0, expected.1
            ),
            Violation::PathCount { paths, pairs } => {
                write!(f, "{paths} paths for {pairs} endpoint pairs")
            }
        }
    }
}

fn check_walk(
    n: usize,
    seq: &[usize],
    used: &mut [bool],
    adjacent: impl Fn(usize, usize) -> bool,
) -> Result<(), Violation> {
    for &v in seq {
        if v >= n {
            return Err(Violation::VertexOutOfRange { vertex: v });
        }
        if used[v] {
            return Err(Violation::Repeated { vertex: v });
        }
        used[v] = true;
    }
    for w in seq.windows(2) {
        if !adjacent(w[0], w[1]) {
            return Err(Violation::NonEdge {
                from: w[0],
                to: w[1],
            });
        }
    }
    Ok(())
}

fn check_cycle(
    n: usize,
    seq: &[usize],
    min: usize,
    adjacent: impl Fn(usize, usize) -> bool + Copy,
) -> Result<Vec<bool>, Violation> {
    if seq.len() < min {
        return Err(Violation::TooShort {
            len: seq.len(),
            min,
        });
    }
    let mut used = vec![false; n];
    check_walk(n, seq, &mut used, adjacent)?;
    let (last, first) = (seq[seq.len() - 1], seq[0]);
    if !adjacent(last, first) {
        return Err(Violation::NonEdge {
            from: last,
            to: first,
        });
    }
    Ok(used)
}

fn spanning(used: &[bool]) -> Result<(), Violation> {
    match used.iter().position(|&u| !u) {
        Some(missing) => Err(Violation::NotSpanning { missing }),
        None => Ok(()),
    }
}

fn check_system(host: &Graph, sys: &PathSystem) -> Result<Vec<bool>, Violation> {
    if sys.paths.len() != sys.endpoint_pairs.len() {
        return Err(Violation::PathCount {
            paths: sys.paths.len(),
            pairs: sys.endpoint_pairs.len(),
        });
    }
    let mut used = vec![false; host.n()];
    for (i, (path, &(x, y))) in sys.paths.iter().zip(&sys.endpoint_pairs).enumerate() {
        let ends_ok = match path.as_slice() {
            [] => false,
            [only] => x == y && *only == x,
            [a, .., b] => *a == x && *b == y,
        };
        if !ends_ok {
            return Err(Violation::EndpointMismatch {
                path: i,
                expected: (x, y),
            });
        }
        check_walk(host.n(), path, &mut used, |u, v| host.has_edge(u, v))?;
    }
    Ok(used)
}

/// Re-checks every invariant of `cert` against `host`.
pub fn verify_certificate(host: &Graph, cert: &Certificate) -> Result<(), Violation> {
    let n = host.n();
    let adj = |u, v| host.has_edge(u, v);
    match cert {
        Certificate::Cycle(c) => check_cycle(n, &c.vertices, 3, adj).map(drop),
        Certificate::HamiltonCycle(c) => spanning(&check_cycle(n, &c.vertices, 3, adj)?),
        Certificate::Path(p) | Certificate::HamiltonPath(p) => {
            if p.vertices.is_empty() {
                return Err(Violation::TooShort { len: 0, min: 1 });
            }
            let mut used = vec![false; n];
            check_walk(n, &p.vertices, &mut used, adj)?;
            if matches!(cert, Certificate::HamiltonPath(_)) {
                spanning(&used)?;
            }
            Ok(())
        }
        Certificate::PathSystem(s) => check_system(host, s).map(drop),
        Certificate::SpanningPathSystem(s) => spanning(&check_system(host, s)?),
    }
}

/// Directed counterpart: consecutive pairs and the closing pair must be arcs.
/// Directed cycles may have length 2.
pub fn verify_directed_cycle(
    host: &Digraph,
    cycle: &CycleCertificate,
    spanning_required: bool,
) -> Result<(), Violation> {
    let used = check_cycle(host.n(), &cycle.vertices, 2, |u, v| host.has_arc(u, v))?;
    if spanning_required {
        spanning(&used)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_cycle_of_k5() {
        let k5 = Graph::complete(5);
        let c = CycleCertificate::new(vec![0, 2, 4, 1, 3]);
        assert_eq!(
            verify_certificate(&k5, &Certificate::HamiltonCycle(c)),
            Ok(())
        );
    }

    #[test]
    fn non_edge_reported() {
        let c5 = Graph::cycle(5);
        let c = CycleCertificate::new(vec![0, 1, 3, 4]);
        assert_eq!(
            verify_certificate(&c5, &Certificate::Cycle(c)),
            Err(Violation::NonEdge { from: 1, to: 3 })
        );
    }

    #[test]
    fn overlapping_paths_rejected() {
        let k6 = Graph::complete(6);
        let sys = PathSystem {
            paths: vec![vec![0, 2, 1], vec![3, 2, 4]],
            endpoint_pairs: vec![(0, 1), (3, 4)],
        };
        assert_eq!(
            verify_certificate(&k6, &Certificate::PathSystem(sys)),
            Err(Violation::Repeated { vertex: 2 })
        );
    }

    #[test]
    fn spanning_and_endpoints() {
        let k4 = Graph::complete(4);
        let sys = PathSystem {
            paths: vec![vec![0, 1], vec![2, 3]],
            endpoint_pairs: vec![(0, 1), (3, 2)],
        };
        assert!(matches!(
            verify_certificate(&k4, &Certificate::SpanningPathSystem(sys)),
            Err(Violation::EndpointMismatch { path: 1, .. })
        ));
        let short = PathCertificate::new(vec![0, 1, 2]);
        assert_eq!(
            verify_certificate(&k4, &Certificate::HamiltonPath(short)),
            Err(Violation::NotSpanning { missing: 3 })
        );
    }

    #[test]
    fn directed() {
        let d = Digraph::directed_cycle(4);
        assert!(verify_directed_cycle(&d, &CycleCertificate::new(vec![0, 1, 2, 3]), true).is_ok());
        assert!(verify_directed_cycle(&d, &CycleCertificate::new(vec![0, 3, 2, 1]), true).is_err());
    }

    #[test]
    fn canonical_rotation() {
        let c = CycleCertificate::new(vec![3, 1, 4, 0, 2]).canonical();
        assert_eq!(c.vertices, vec![0, 2, 3, 1, 4]);
    }
}
