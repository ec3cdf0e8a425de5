use std::collections::VecDeque;

use serde::Serialize;

use crate::certificate::PathSystem;
use crate::checkers::{
    connectivity_at_least, hamilton_path_between, independence_number, vertex_connectivity,
};
use crate::checkers::{Limits, Verdict};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::random::{mix, Seed};

use super::Refusal;

const STREAM_BISECT: u64 = 0x6269_7365_6374_0005;

/// Two halves of a vertex set that both keep a fraction of the
/// connectivity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bisection {
    pub s1: VertexSet,
    pub s2: VertexSet,
    /// Zero-based attempt that succeeded.
    pub attempt: usize,
    pub kappa: usize,
}

/// Statistics of the best failed bisection attempt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BisectionFailure {
    pub attempts: usize,
    pub kappa: usize,
    /// Largest, over attempts, of the smallest degree into either half.
    pub best_min_degree_into_half: usize,
    /// Attempts whose halves both reached the connectivity target.
    pub connected_attempts: usize,
}

fn half_of(seed: Seed, attempt: usize, v: usize) -> bool {
    mix(seed.0, STREAM_BISECT, attempt as u64, v as u64) & 1 == 1
}

/// Random bisection of `g` such that both halves are `κ/8`-connected and
/// every vertex has at least `κ/4` neighbours in each half. Each vertex picks
/// its half with an independent fair coin; up to `retries` attempts.
pub fn connectivity_bisection(
    g: &Graph,
    retries: usize,
    seed: Seed,
) -> std::result::Result<Bisection, BisectionFailure> {
    let n = g.n();
    let kappa = vertex_connectivity(g).kappa;
    let conn_target = kappa.div_ceil(8);
    let deg_target = kappa.div_ceil(4);
    let mut best_deg = 0;
    let mut connected_attempts = 0;
    for attempt in 0..retries {
        let side: Vec<bool> = (0..n).map(|v| half_of(seed, attempt, v)).collect();
        let s1: VertexSet = (0..n).filter(|&v| side[v]).collect();
        let s2: VertexSet = (0..n).filter(|&v| !side[v]).collect();
        if s1.is_empty() || s2.is_empty() {
            continue;
        }
        let min_into = (0..n)
            .map(|v| {
                let inside = g.neighbors(v).iter().filter(|&&u| side[u]).count();
                inside.min(g.degree(v) - inside)
            })
            .min()
            .unwrap_or(0);
        best_deg = best_deg.max(min_into);
        let halves_ok = [&s1, &s2]
            .iter()
            .all(|s| connectivity_at_least(&g.induced(s).expect("subset").graph, conn_target));
        if halves_ok {
            connected_attempts += 1;
        }
        if halves_ok && min_into >= deg_target {
            return Ok(Bisection {
                s1,
                s2,
                attempt,
                kappa,
            });
        }
    }
    Err(BisectionFailure {
        attempts: retries,
        kappa,
        best_min_degree_into_half: best_deg,
        connected_attempts,
    })
}

fn check_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<()> {
    let mut seen = vec![false; n];
    for &(x, y) in pairs {
        for v in [x, y] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if seen[v] {
                return Err(Error::input(format!("endpoint {v} used twice")));
            }
            seen[v] = true;
        }
    }
    Ok(())
}

/// BFS distances to `t` through vertices allowed by `free` (plus `t`).
fn distances_to(g: &Graph, t: usize, free: &[bool]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[t] = 0;
    let mut q = VecDeque::from([t]);
    while let Some(v) = q.pop_front() {
        for &u in g.neighbors(v) {
            if dist[u] == usize::MAX && free[u] {
                dist[u] = dist[v] + 1;
                q.push_back(u);
            }
        }
    }
    dist
}

struct Linker<'a> {
    g: &'a Graph,
    pairs: &'a [(usize, usize)],
    /// `free[v]`: v may be used by the path currently being routed.
    used: Vec<bool>,
    endpoint_of: Vec<usize>,
    paths: Vec<Vec<usize>>,
    budget: u64,
    /// When set, the final pair must also cover every unused vertex; it is
    /// then solved by a Hamilton path search on the remainder.
    last_spanning: Option<Limits>,
}

impl Linker<'_> {
    fn tick(&mut self) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        true
    }

    /// Vertices usable for pair `i`: unused and not an endpoint of another pair.
    fn free_for(&self, i: usize) -> Vec<bool> {
        (0..self.g.n())
            .map(|v| {
                !self.used[v] && (self.endpoint_of[v] == usize::MAX || self.endpoint_of[v] == i)
            })
            .collect()
    }

    /// Every pair from `i` on can still be joined.
    fn still_linkable(&self, i: usize) -> bool {
        (i..self.pairs.len()).all(|j| {
            let (x, y) = self.pairs[j];
            distances_to(self.g, y, &self.free_for(j))[x] != usize::MAX
        })
    }

    fn route(&mut self, i: usize) -> Result<Option<bool>> {
        if i == self.pairs.len() {
            return Ok(Some(true));
        }
        let (x, y) = self.pairs[i];
        if i + 1 == self.pairs.len() {
            if let Some(limits) = self.last_spanning {
                let rest: VertexSet = (0..self.g.n()).filter(|&v| !self.used[v]).collect();
                let sub = self.g.induced(&rest)?;
                let (lx, ly) = (sub.local(x).unwrap(), sub.local(y).unwrap());
                let inner = Limits {
                    node_budget: self.budget.max(1),
                    ..limits
                };
                return Ok(match hamilton_path_between(&sub.graph, lx, ly, &inner)? {
                    Verdict::Yes(p) => {
                        self.paths.push(sub.lift(&p.vertices));
                        Some(true)
                    }
                    Verdict::No(()) => Some(false),
                    Verdict::Indeterminate => None,
                });
            }
        }
        let free = self.free_for(i);
        let dist = distances_to(self.g, y, &free);
        if dist[x] == usize::MAX {
            return Ok(Some(false));
        }
        let mut path = vec![x];
        self.used[x] = true;
        let r = self.extend(i, &mut path, &dist);
        self.used[x] = false;
        r
    }

    fn extend(&mut self, i: usize, path: &mut Vec<usize>, dist: &[usize]) -> Result<Option<bool>> {
        if !self.tick() {
            return Ok(None);
        }
        let (_, y) = self.pairs[i];
        let cur = *path.last().unwrap();
        if cur == y {
            if !self.still_linkable(i + 1) {
                return Ok(Some(false));
            }
            self.paths.push(path.clone());
            match self.route(i + 1)? {
                Some(true) => return Ok(Some(true)),
                None => return Ok(None),
                Some(false) => {
                    self.paths.pop();
                    return Ok(Some(false));
                }
            }
        }
        let mut next: Vec<usize> = self
            .g
            .neighbors(cur)
            .iter()
            .copied()
            .filter(|&u| {
                !self.used[u]
                    && dist[u] != usize::MAX
                    && (self.endpoint_of[u] == usize::MAX || u == y)
            })
            .collect();
        next.sort_by_key(|&u| (dist[u], u));
        for u in next {
            self.used[u] = true;
            path.push(u);
            let r = self.extend(i, path, dist);
            path.pop();
            self.used[u] = false;
            match r? {
                Some(true) => return Ok(Some(true)),
                None => return Ok(None),
                Some(false) => {}
            }
        }
        Ok(Some(false))
    }
}

fn link(
    g: &Graph,
    pairs: &[(usize, usize)],
    budget: u64,
    last_spanning: Option<Limits>,
) -> Result<Verdict<PathSystem>> {
    check_pairs(g.n(), pairs)?;
    let mut endpoint_of = vec![usize::MAX; g.n()];
    for (i, &(x, y)) in pairs.iter().enumerate() {
        endpoint_of[x] = i;
        endpoint_of[y] = i;
    }
    let mut l = Linker {
        g,
        pairs,
        used: vec![false; g.n()],
        endpoint_of,
        paths: Vec::new(),
        budget,
        last_spanning,
    };
    if pairs.is_empty() {
        return Ok(Verdict::Yes(PathSystem {
            paths: Vec::new(),
            endpoint_pairs: Vec::new(),
        }));
    }
    if !l.still_linkable(0) {
        return Ok(Verdict::No(()));
    }
    Ok(match l.route(0)? {
        Some(true) => Verdict::Yes(PathSystem {
            paths: l.paths,
            endpoint_pairs: pairs.to_vec(),
        }),
        Some(false) => Verdict::No(()),
        None => Verdict::Indeterminate,
    })
}

/// Vertex-disjoint paths joining each `(x_i, y_i)`, found by backtracking
/// over pairs in order with paths tried shortest-first.
pub fn disjoint_paths(
    g: &Graph,
    pairs: &[(usize, usize)],
    limits: &Limits,
) -> Result<Verdict<PathSystem>> {
    link(g, pairs, limits.node_budget, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpanningStage {
    /// Bisect, link all but the last pair inside one half, Hamilton path on
    /// the rest.
    Bisection,
    /// Link all but the last pair anywhere, Hamilton path on the rest.
    Direct,
    /// Exhaustive search, only for small graphs.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageFailure {
    pub stage: SpanningStage,
    pub reason: String,
    pub indeterminate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanningConfig {
    /// Factor `c` in the precondition `κ >= c·max(α, ln n, r)`.
    pub c_factor: f64,
    pub bisection_retries: usize,
    pub seed: Seed,
    pub limits: Limits,
    /// Largest `n` for the exhaustive fallback.
    pub exhaustive_max: usize,
}

impl Default for SpanningConfig {
    fn default() -> Self {
        SpanningConfig {
            c_factor: 1.0,
            bisection_retries: 64,
            seed: Seed(0),
            limits: Limits::default(),
            exhaustive_max: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanningOutcome {
    pub result: Verdict<(SpanningStage, PathSystem), Vec<StageFailure>>,
    /// Whether `κ >= c·max(α, ln n, r)` held; reported, not enforced.
    pub precondition_met: bool,
}

fn failure(stage: SpanningStage, v: &Verdict<PathSystem>, what: &str) -> StageFailure {
    StageFailure {
        stage,
        reason: match v {
            Verdict::Indeterminate => format!("{what}: search budget exhausted"),
            _ => format!("{what}: no path system"),
        },
        indeterminate: v.is_indeterminate(),
    }
}

/// Pairwise disjoint paths with the given endpoints covering every vertex.
pub fn spanning_path_system(
    g: &Graph,
    pairs: &[(usize, usize)],
    cfg: &SpanningConfig,
) -> Result<SpanningOutcome> {
    let n = g.n();
    check_pairs(n, pairs)?;
    if pairs.is_empty() {
        return Err(Error::input("at least one endpoint pair is required"));
    }
    let r = pairs.len();
    let precondition_met = {
        let kappa = vertex_connectivity(g).kappa as f64;
        let alpha = if n <= cfg.limits.alpha_max {
            independence_number(g, &cfg.limits)?.alpha as f64
        } else {
            f64::INFINITY
        };
        let need = alpha.max((n.max(1) as f64).ln()).max(r as f64) * cfg.c_factor;
        kappa >= need
    };
    let done = |stage, sys| {
        Ok(SpanningOutcome {
            result: Verdict::Yes((stage, sys)),
            precondition_met,
        })
    };
    let mut failures = Vec::new();

    if r == 1 {
        let (x, y) = pairs[0];
        if x == y {
            return Ok(SpanningOutcome {
                result: if n == 1 {
                    Verdict::Yes((
                        SpanningStage::Direct,
                        PathSystem {
                            paths: vec![vec![x]],
                            endpoint_pairs: pairs.to_vec(),
                        },
                    ))
                } else {
                    Verdict::No(vec![StageFailure {
                        stage: SpanningStage::Direct,
                        reason: "a single-vertex path cannot span".into(),
                        indeterminate: false,
                    }])
                },
                precondition_met,
            });
        }
        let v = hamilton_path_between(g, x, y, &cfg.limits)?;
        return Ok(SpanningOutcome {
            result: match v {
                Verdict::Yes(p) => Verdict::Yes((
                    SpanningStage::Direct,
                    PathSystem {
                        paths: vec![p.vertices],
                        endpoint_pairs: pairs.to_vec(),
                    },
                )),
                Verdict::No(()) => Verdict::No(vec![StageFailure {
                    stage: SpanningStage::Direct,
                    reason: "no Hamilton path between the endpoints".into(),
                    indeterminate: false,
                }]),
                Verdict::Indeterminate => Verdict::Indeterminate,
            },
            precondition_met,
        });
    }

    let endpoints: VertexSet = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
    let (head, last) = pairs.split_at(r - 1);
    let spanning_last = |prefix: &PathSystem| -> Result<Verdict<PathSystem>> {
        let used: VertexSet = prefix.paths.iter().flatten().copied().collect();
        let rest = VertexSet::full(n).difference(&used);
        let sub = g.induced(&rest)?;
        let (x, y) = last[0];
        let (lx, ly) = (sub.local(x).unwrap(), sub.local(y).unwrap());
        Ok(
            match hamilton_path_between(&sub.graph, lx, ly, &cfg.limits)? {
                Verdict::Yes(p) => {
                    let mut sys = prefix.clone();
                    sys.paths.push(sub.lift(&p.vertices));
                    sys.endpoint_pairs.push((x, y));
                    Verdict::Yes(sys)
                }
                Verdict::No(()) => Verdict::No(()),
                Verdict::Indeterminate => Verdict::Indeterminate,
            },
        )
    };

    // Stage 1: bisection of G - endpoints, linkage inside S1 ∪ endpoints.
    let inner = g.remove(&endpoints)?;
    match connectivity_bisection(&inner.graph, cfg.bisection_retries, cfg.seed) {
        Ok(b) => {
            let head_ends: VertexSet = head.iter().flat_map(|&(x, y)| [x, y]).collect();
            let g1_set = inner.lift_set(&b.s1).union(&head_ends);
            let g1 = g.induced(&g1_set)?;
            let local: Vec<(usize, usize)> = head
                .iter()
                .map(|&(x, y)| (g1.local(x).unwrap(), g1.local(y).unwrap()))
                .collect();
            let v = disjoint_paths(&g1.graph, &local, &cfg.limits)?;
            match v {
                Verdict::Yes(sys) => {
                    let prefix = PathSystem {
                        paths: sys.paths.iter().map(|p| g1.lift(p)).collect(),
                        endpoint_pairs: head.to_vec(),
                    };
                    let fin = spanning_last(&prefix)?;
                    match fin {
                        Verdict::Yes(sys) => return done(SpanningStage::Bisection, sys),
                        other => failures.push(failure(
                            SpanningStage::Bisection,
                            &other,
                            "Hamilton path on remainder",
                        )),
                    }
                }
                other => failures.push(failure(
                    SpanningStage::Bisection,
                    &other,
                    "linkage inside first half",
                )),
            }
        }
        Err(f) => failures.push(StageFailure {
            stage: SpanningStage::Bisection,
            reason: format!(
                "no admissible bisection in {} attempts (kappa {}, best min degree into a half {})",
                f.attempts, f.kappa, f.best_min_degree_into_half
            ),
            indeterminate: false,
        }),
    }

    // Stage 2: link the first r - 1 pairs anywhere.
    let v = disjoint_paths(g, head, &cfg.limits)?;
    match v {
        Verdict::Yes(prefix) => match spanning_last(&prefix)? {
            Verdict::Yes(sys) => return done(SpanningStage::Direct, sys),
            other => failures.push(failure(
                SpanningStage::Direct,
                &other,
                "Hamilton path on remainder",
            )),
        },
        other => failures.push(failure(
            SpanningStage::Direct,
            &other,
            "linkage in whole graph",
        )),
    }

    // Stage 3: exhaustive search over all linkages of the first r - 1 pairs.
    if n <= cfg.exhaustive_max {
        let v = link(g, pairs, cfg.limits.node_budget, Some(cfg.limits))?;
        match v {
            Verdict::Yes(sys) => return done(SpanningStage::Exhaustive, sys),
            Verdict::Indeterminate => {
                return Ok(SpanningOutcome {
                    result: Verdict::Indeterminate,
                    precondition_met,
                })
            }
            other => failures.push(failure(
                SpanningStage::Exhaustive,
                &other,
                "exhaustive search",
            )),
        }
    }
    Ok(SpanningOutcome {
        result: Verdict::No(failures),
        precondition_met,
    })
}

impl From<BisectionFailure> for Refusal {
    fn from(f: BisectionFailure) -> Self {
        Refusal {
            stage: "bisection".into(),
            reason: format!(
                "{} attempts failed (kappa {}, {} with both halves connected enough, best min degree into a half {})",
                f.attempts, f.kappa, f.connected_attempts, f.best_min_degree_into_half
            ),
            vertex: None,
            block: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{verify_certificate, Certificate};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn bisection_examples() {
        let b = connectivity_bisection(&Graph::complete(20), 64, Seed(1)).unwrap();
        assert_eq!(b.s1.len() + b.s2.len(), 20);
        assert!(connectivity_bisection(&Graph::cycle(6), 64, Seed(1)).is_err());
        let k = Graph::complete_bipartite(10, 10);
        assert!(connectivity_bisection(&k, 64, Seed(3)).is_ok());
    }

    #[test]
    fn disjoint_examples() {
        let k6 = Graph::complete(6);
        let sys = disjoint_paths(&k6, &[(0, 1), (2, 3)], &lim())
            .unwrap()
            .into_yes()
            .unwrap();
        assert_eq!(
            verify_certificate(&k6, &Certificate::PathSystem(sys)),
            Ok(())
        );
        assert!(disjoint_paths(&Graph::cycle(4), &[(0, 2), (1, 3)], &lim())
            .unwrap()
            .is_no());
        // 4x4 grid, vertex (r, c) = 4r + c; top corners and bottom corners.
        let mut edges = Vec::new();
        for r in 0..4 {
            for c in 0..4 {
                let v = 4 * r + c;
                if c < 3 {
                    edges.push((v, v + 1));
                }
                if r < 3 {
                    edges.push((v, v + 4));
                }
            }
        }
        let grid = Graph::from_edges(16, edges).unwrap();
        let sys = disjoint_paths(&grid, &[(0, 3), (12, 15)], &lim())
            .unwrap()
            .into_yes()
            .unwrap();
        assert_eq!(
            verify_certificate(&grid, &Certificate::PathSystem(sys)),
            Ok(())
        );
        assert!(disjoint_paths(&k6, &[(0, 1), (1, 2)], &lim()).is_err());
    }

    #[test]
    fn spanning_examples() {
        let cfg = SpanningConfig::default();
        let k8 = Graph::complete(8);
        for pairs in [vec![(0, 1)], vec![(0, 1), (2, 3)]] {
            let out = spanning_path_system(&k8, &pairs, &cfg).unwrap();
            let (_, sys) = out.result.into_yes().unwrap();
            assert_eq!(
                verify_certificate(&k8, &Certificate::SpanningPathSystem(sys)),
                Ok(())
            );
        }
        let out = spanning_path_system(&Graph::cycle(5), &[(0, 2)], &cfg).unwrap();
        assert!(out.result.is_no());
    }

    #[test]
    fn spanning_refusal_is_tagged() {
        // Two triangles joined by an edge cannot be split into two spanning
        // paths pairing vertices across the bridge.
        let g =
            Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
        let out = spanning_path_system(&g, &[(0, 4), (1, 5)], &SpanningConfig::default()).unwrap();
        let Verdict::No(f) = out.result else {
            panic!("expected refusal")
        };
        assert!(f.iter().any(|s| s.stage == SpanningStage::Exhaustive));
    }
}
