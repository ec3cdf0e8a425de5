//! Deterministic generators for the extremal seed graphs and their predicted
//! invariants.
//!
//! Canonical labelling: blocks occupy consecutive labels, smallest block
//! first. For [`FamilySpec::IAB`] the order is `I`, then `A`, then `B`; for
//! the bipartite kinds the smaller side comes first.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum FamilySpec {
    /// `K_{⌊n/2⌋} ⊔ K_{⌈n/2⌉}`.
    TwoCliques { n: usize },
    /// `round(1/delta)` cliques of near-equal size, each of size at least
    /// `delta·n + 1`.
    BalancedCliques { n: usize, delta: f64 },
    /// `k - 1` copies of `K_{d+1}` plus one clique on the remaining vertices.
    CliqueForest { n: usize, d: usize, k: usize },
    /// `min(⌊ck⌋, ⌊n/(k+1)⌋) - 1` copies of `K_{k+1}` plus one clique on the
    /// rest.
    ToughnessCliques { n: usize, k: usize, c: f64 },
    /// `I` independent (`|I| = k - 1`) and complete to `A` (`|A| = ⌈k/2⌉`),
    /// with `A ∪ B` a clique.
    IAB { n: usize, k: usize },
    /// `K_{n/3, 2n/3}`.
    UnbalancedBipartite { n: usize },
    /// `m` disjoint cliques with sizes differing by at most one.
    MCliques { n: usize, m: usize },
    /// `K_{n/2, n/2}`.
    DiracBipartite { n: usize },
}

/// Closed-form invariants of a family member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedProperties {
    pub min_degree: usize,
    pub independence_number: usize,
    pub component_count: usize,
    pub notes: String,
}

/// Vertex layout of a family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Layout {
    /// Disjoint cliques on consecutive label ranges, ascending sizes.
    Cliques(Vec<usize>),
    Iab {
        i: usize,
        a: usize,
        b: usize,
    },
    Bipartite {
        small: usize,
        large: usize,
    },
}

impl Layout {
    /// Clique sizes when the layout is a clique union.
    pub fn clique_sizes(&self) -> Option<&[usize]> {
        match self {
            Layout::Cliques(s) => Some(s),
            _ => None,
        }
    }

    /// Consecutive label blocks of the layout.
    pub fn blocks(&self) -> Vec<VertexSet> {
        let sizes: Vec<usize> = match self {
            Layout::Cliques(s) => s.clone(),
            Layout::Iab { i, a, b } => vec![*i, *a, *b],
            Layout::Bipartite { small, large } => vec![*small, *large],
        };
        let mut start = 0;
        sizes
            .into_iter()
            .map(|s| {
                let b = (start..start + s).collect();
                start += s;
                b
            })
            .collect()
    }
}

fn infeasible(msg: impl Into<String>) -> Error {
    Error::Infeasible(msg.into())
}

fn near_equal(n: usize, parts: usize) -> Vec<usize> {
    let (q, r) = (n / parts, n % parts);
    (0..parts)
        .map(|i| if i < parts - r { q } else { q + 1 })
        .collect()
}

impl FamilySpec {
    pub fn n(&self) -> usize {
        match *self {
            FamilySpec::TwoCliques { n }
            | FamilySpec::BalancedCliques { n, .. }
            | FamilySpec::CliqueForest { n, .. }
            | FamilySpec::ToughnessCliques { n, .. }
            | FamilySpec::IAB { n, .. }
            | FamilySpec::UnbalancedBipartite { n }
            | FamilySpec::MCliques { n, .. }
            | FamilySpec::DiracBipartite { n } => n,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FamilySpec::TwoCliques { .. } => "TwoCliques",
            FamilySpec::BalancedCliques { .. } => "BalancedCliques",
            FamilySpec::CliqueForest { .. } => "CliqueForest",
            FamilySpec::ToughnessCliques { .. } => "ToughnessCliques",
            FamilySpec::IAB { .. } => "IAB",
            FamilySpec::UnbalancedBipartite { .. } => "UnbalancedBipartite",
            FamilySpec::MCliques { .. } => "MCliques",
            FamilySpec::DiracBipartite { .. } => "DiracBipartite",
        }
    }

    /// Validates parameters and returns the vertex layout.
    pub fn layout(&self) -> Result<Layout> {
        match *self {
            FamilySpec::TwoCliques { n } => {
                if n < 2 {
                    return Err(infeasible("TwoCliques requires n >= 2"));
                }
                Ok(Layout::Cliques(vec![n / 2, n - n / 2]))
            }
            FamilySpec::BalancedCliques { n, delta } => {
                if !(delta > 0.0 && delta < 1.0) {
                    return Err(infeasible("BalancedCliques requires 0 < delta < 1"));
                }
                let k = (1.0 / delta).round() as usize;
                if k == 0 || k > n {
                    return Err(infeasible(format!(
                        "BalancedCliques: k = {k} cliques on n = {n}"
                    )));
                }
                let sizes = near_equal(n, k);
                if (sizes[0] as f64) < delta * n as f64 + 1.0 {
                    return Err(infeasible(format!(
                        "BalancedCliques: smallest clique {} < delta*n + 1 = {}",
                        sizes[0],
                        delta * n as f64 + 1.0
                    )));
                }
                Ok(Layout::Cliques(sizes))
            }
            FamilySpec::CliqueForest { n, d, k } => {
                if d == 0 || k == 0 {
                    return Err(infeasible("CliqueForest requires d >= 1 and k >= 1"));
                }
                if k * (d + 1) > n {
                    return Err(infeasible(format!(
                        "CliqueForest requires k(d+1) <= n, got {}·{} > {n}",
                        k,
                        d + 1
                    )));
                }
                let mut sizes = vec![d + 1; k - 1];
                sizes.push(n - (k - 1) * (d + 1));
                Ok(Layout::Cliques(sizes))
            }
            FamilySpec::ToughnessCliques { n, k, c } => {
                if !(c > 0.0 && c < 1.0) || k == 0 {
                    return Err(infeasible("ToughnessCliques requires k >= 1 and 0 < c < 1"));
                }
                let ck = (c * k as f64).floor() as usize;
                let r = ck.min(n / (k + 1)).saturating_sub(1);
                if r == 0 {
                    return Err(infeasible(format!(
                        "ToughnessCliques: r = min(⌊ck⌋, ⌊n/(k+1)⌋) - 1 = 0 for n={n}, k={k}, c={c}"
                    )));
                }
                let mut sizes = vec![k + 1; r];
                sizes.push(n - r * (k + 1));
                Ok(Layout::Cliques(sizes))
            }
            FamilySpec::IAB { n, k } => {
                if k < 2 {
                    return Err(infeasible("IAB requires k >= 2"));
                }
                let (i, a) = (k - 1, k.div_ceil(2));
                if i + a >= n {
                    return Err(infeasible(format!(
                        "IAB requires |B| >= 1: |I| + |A| = {} >= n = {n}",
                        i + a
                    )));
                }
                Ok(Layout::Iab { i, a, b: n - i - a })
            }
            FamilySpec::UnbalancedBipartite { n } => {
                if n == 0 || n % 3 != 0 {
                    return Err(infeasible("UnbalancedBipartite requires 3 | n, n > 0"));
                }
                Ok(Layout::Bipartite {
                    small: n / 3,
                    large: 2 * n / 3,
                })
            }
            FamilySpec::MCliques { n, m } => {
                if m == 0 || m > n {
                    return Err(infeasible("MCliques requires 1 <= m <= n"));
                }
                Ok(Layout::Cliques(near_equal(n, m)))
            }
            FamilySpec::DiracBipartite { n } => {
                if n == 0 || n % 2 != 0 {
                    return Err(infeasible("DiracBipartite requires even n > 0"));
                }
                Ok(Layout::Bipartite {
                    small: n / 2,
                    large: n / 2,
                })
            }
        }
    }

    /// Returns a copy with the named integer/real parameter replaced. Used by
    /// scaling sweeps (`k=8,16`).
    pub fn with_param(&self, name: &str, value: f64) -> Result<FamilySpec> {
        let mut s = self.clone();
        let as_count = || {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::input(format!(
                    "{name} must be a non-negative integer"
                )))
            }
        };
        let ok = match (&mut s, name) {
            (FamilySpec::TwoCliques { n }, "n")
            | (FamilySpec::BalancedCliques { n, .. }, "n")
            | (FamilySpec::CliqueForest { n, .. }, "n")
            | (FamilySpec::ToughnessCliques { n, .. }, "n")
            | (FamilySpec::IAB { n, .. }, "n")
            | (FamilySpec::UnbalancedBipartite { n }, "n")
            | (FamilySpec::MCliques { n, .. }, "n")
            | (FamilySpec::DiracBipartite { n }, "n") => {
                *n = as_count()?;
                true
            }
            (FamilySpec::BalancedCliques { delta, .. }, "delta") => {
                *delta = value;
                true
            }
            (FamilySpec::CliqueForest { d, .. }, "d") => {
                *d = as_count()?;
                true
            }
            (FamilySpec::CliqueForest { k, .. }, "k")
            | (FamilySpec::ToughnessCliques { k, .. }, "k")
            | (FamilySpec::IAB { k, .. }, "k") => {
                *k = as_count()?;
                true
            }
            (FamilySpec::ToughnessCliques { c, .. }, "c") => {
                *c = value;
                true
            }
            (FamilySpec::MCliques { m, .. }, "m") => {
                *m = as_count()?;
                true
            }
            _ => false,
        };
        if ok {
            Ok(s)
        } else {
            Err(Error::input(format!(
                "{} has no parameter {name:?}",
                self.kind_name()
            )))
        }
    }
}

pub fn build_family(spec: &FamilySpec) -> Result<Graph> {
    let n = spec.n();
    let layout = spec.layout()?;
    let mut edges = Vec::new();
    match &layout {
        Layout::Cliques(_) => {
            for block in layout.blocks() {
                let b = block.as_slice();
                for (i, &u) in b.iter().enumerate() {
                    for &v in &b[i + 1..] {
                        edges.push((u, v));
                    }
                }
            }
        }
        Layout::Iab { i, a, .. } => {
            let (i, a) = (*i, *a);
            for x in 0..i {
                for y in i..i + a {
                    edges.push((x, y));
                }
            }
            for u in i..n {
                for v in u + 1..n {
                    edges.push((u, v));
                }
            }
        }
        Layout::Bipartite { small, large } => {
            for u in 0..*small {
                for v in *small..small + large {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::from_edges(n, edges)
}

pub fn predicted_properties(spec: &FamilySpec) -> Result<PredictedProperties> {
    let layout = spec.layout()?;
    let p = match (&layout, spec) {
        (Layout::Cliques(sizes), _) => PredictedProperties {
            min_degree: sizes[0] - 1,
            independence_number: sizes.len(),
            component_count: sizes.len(),
            notes: format!(
                "{} disjoint cliques of sizes {:?}; disconnected unless a single clique",
                sizes.len(),
                sizes
            ),
        },
        (Layout::Iab { i, a, b }, _) => PredictedProperties {
            min_degree: *a,
            independence_number: i + 1,
            component_count: 1,
            notes: format!(
                "|I|={i}, |A|={a}, |B|={b}; deleting A leaves {} components",
                i + 1
            ),
        },
        (Layout::Bipartite { small, large }, _) => PredictedProperties {
            min_degree: *small,
            independence_number: *large,
            component_count: 1,
            notes: format!("K_{{{small},{large}}}"),
        },
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cliques_n9() {
        let spec = FamilySpec::TwoCliques { n: 9 };
        let g = build_family(&spec).unwrap();
        assert_eq!(g.m(), 6 + 10);
        assert_eq!(g.min_degree(), 3);
        let p = predicted_properties(&spec).unwrap();
        assert_eq!(
            (p.min_degree, p.independence_number, p.component_count),
            (3, 2, 2)
        );
    }

    #[test]
    fn iab_n10_k4() {
        let spec = FamilySpec::IAB { n: 10, k: 4 };
        assert_eq!(spec.layout().unwrap(), Layout::Iab { i: 3, a: 2, b: 5 });
        let g = build_family(&spec).unwrap();
        assert_eq!(g.min_degree(), 2);
        let p = predicted_properties(&spec).unwrap();
        assert_eq!(
            (p.min_degree, p.independence_number, p.component_count),
            (2, 4, 1)
        );
        // Deleting A = {3, 4} leaves k = 4 components.
        let rest = g.remove(&VertexSet::new(vec![3, 4])).unwrap();
        assert_eq!(rest.graph.connected_components().len(), 4);
    }

    #[test]
    fn clique_forest_layout() {
        let spec = FamilySpec::CliqueForest { n: 20, d: 3, k: 4 };
        assert_eq!(spec.layout().unwrap(), Layout::Cliques(vec![4, 4, 4, 8]));
        let g = build_family(&spec).unwrap();
        assert_eq!(g.min_degree(), 3);
        assert!(FamilySpec::CliqueForest { n: 10, d: 3, k: 4 }
            .layout()
            .is_err());
    }

    #[test]
    fn mcliques_sizes() {
        let spec = FamilySpec::MCliques { n: 10, m: 3 };
        assert_eq!(spec.layout().unwrap(), Layout::Cliques(vec![3, 3, 4]));
        let p = predicted_properties(&spec).unwrap();
        assert_eq!(
            (p.min_degree, p.independence_number, p.component_count),
            (2, 3, 3)
        );
    }

    #[test]
    fn toughness_cliques() {
        let spec = FamilySpec::ToughnessCliques {
            n: 40,
            k: 5,
            c: 0.9,
        };
        // r = min(4, 6) - 1 = 3 copies of K_6 plus K_22.
        assert_eq!(spec.layout().unwrap(), Layout::Cliques(vec![6, 6, 6, 22]));
    }

    #[test]
    fn balanced_rejects_too_small_cliques() {
        let err = FamilySpec::BalancedCliques { n: 30, delta: 0.2 }.layout();
        assert!(matches!(err, Err(Error::Infeasible(_))));
        // k = 10 cliques of 12 < 0.1·120 + 1.
        assert!(FamilySpec::BalancedCliques { n: 120, delta: 0.1 }
            .layout()
            .is_err());
        let ok = FamilySpec::BalancedCliques { n: 100, delta: 0.3 }
            .layout()
            .unwrap();
        assert_eq!(ok, Layout::Cliques(vec![33, 33, 34]));
    }

    #[test]
    fn bipartite_kinds() {
        let g = build_family(&FamilySpec::UnbalancedBipartite { n: 9 }).unwrap();
        assert_eq!(g, Graph::complete_bipartite(3, 6));
        assert!(build_family(&FamilySpec::DiracBipartite { n: 7 }).is_err());
    }

    #[test]
    fn json_shape() {
        let spec: FamilySpec =
            serde_json::from_str(r#"{"kind":"CliqueForest","n":20,"d":3,"k":4}"#).unwrap();
        assert_eq!(spec, FamilySpec::CliqueForest { n: 20, d: 3, k: 4 });
        assert_eq!(
            serde_json::to_string(&FamilySpec::TwoCliques { n: 9 }).unwrap(),
            r#"{"kind":"TwoCliques","n":9}"#
        );
        assert!(
            serde_json::from_str::<FamilySpec>(r#"{"kind":"TwoCliques","n":9,"x":1}"#).is_err()
        );
    }

    #[test]
    fn with_param_rewrites() {
        let s = FamilySpec::CliqueForest { n: 96, d: 5, k: 8 };
        assert_eq!(
            s.with_param("k", 16.0).unwrap(),
            FamilySpec::CliqueForest { n: 96, d: 5, k: 16 }
        );
        assert!(s.with_param("m", 2.0).is_err());
    }
}
