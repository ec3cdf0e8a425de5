use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::{Graph, VertexSet};

/// Vertex connectivity with a minimum separator. `cut` is `None` for complete
/// graphs, whose connectivity is `n - 1` by convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub kappa: usize,
    pub cut: Option<VertexSet>,
}

/// Split-vertex flow network: `2v` is the entry copy of `v`, `2v + 1` the
/// exit copy, joined by a unit arc.
struct SplitNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap0: Vec<u32>,
    cap: Vec<u32>,
}

impl SplitNetwork {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut net = SplitNetwork {
            head: vec![Vec::new(); 2 * n],
            to: Vec::new(),
            cap0: Vec::new(),
            cap: Vec::new(),
        };
        for v in 0..n {
            net.arc(2 * v, 2 * v + 1, 1);
        }
        let big = n as u32 + 1;
        for (u, v) in g.edges() {
            net.arc(2 * u + 1, 2 * v, big);
            net.arc(2 * v + 1, 2 * u, big);
        }
        net.cap = net.cap0.clone();
        net
    }

    fn arc(&mut self, a: usize, b: usize, c: u32) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap0.push(c);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap0.push(0);
    }

    /// Number of internally disjoint `s`-`t` paths, stopping at `limit`.
    fn local(&mut self, s: usize, t: usize, limit: usize) -> usize {
        self.cap.copy_from_slice(&self.cap0);
        let (src, sink) = (2 * s + 1, 2 * t);
        let nodes = self.head.len();
        let mut flow = 0;
        let mut pred = vec![usize::MAX; nodes];
        while flow < limit {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            let mut queue = VecDeque::from([src]);
            let mut found = false;
            'bfs: while let Some(x) = queue.pop_front() {
                for &e in &self.head[x] {
                    let y = self.to[e];
                    if self.cap[e] > 0 && y != src && pred[y] == usize::MAX {
                        pred[y] = e;
                        if y == sink {
                            found = true;
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            if !found {
                break;
            }
            let mut y = sink;
            while y != src {
                let e = pred[y];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                y = self.to[e ^ 1];
            }
            flow += 1;
        }
        flow
    }

    /// Minimum separator read off the residual network of the last
    /// saturated [`SplitNetwork::local`] call.
    fn cut(&self, s: usize) -> VertexSet {
        let nodes = self.head.len();
        let mut seen = vec![false; nodes];
        let src = 2 * s + 1;
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            for &e in &self.head[x] {
                let y = self.to[e];
                if self.cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..nodes / 2)
            .filter(|&v| seen[2 * v] && !seen[2 * v + 1])
            .collect()
    }
}

fn min_degree_vertex(g: &Graph) -> usize {
    (0..g.n()).min_by_key(|&v| (g.degree(v), v)).unwrap()
}

/// Even's scheme: with current bound `k`, only sources among the first `k + 1`
/// labels need to be tried against larger non-adjacent labels.
fn search(
    g: &Graph,
    mut bound: usize,
    mut cut: Option<VertexSet>,
    stop_below: bool,
) -> (usize, Option<VertexSet>) {
    let n = g.n();
    let mut net = SplitNetwork::new(g);
    let mut i = 0;
    while i < n && i <= bound {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                continue;
            }
            let f = net.local(i, j, bound);
            if f < bound {
                bound = f;
                cut = Some(net.cut(i));
                if stop_below {
                    return (bound, cut);
                }
            }
        }
        i += 1;
    }
    (bound, cut)
}

pub fn vertex_connectivity(g: &Graph) -> Connectivity {
    let n = g.n();
    if g.is_complete() {
        return Connectivity {
            kappa: n.saturating_sub(1),
            cut: None,
        };
    }
    if !g.is_connected() {
        return Connectivity {
            kappa: 0,
            cut: Some(VertexSet::empty()),
        };
    }
    let v = min_degree_vertex(g);
    let start = g.neighbors(v).iter().copied().collect::<VertexSet>();
    let (kappa, cut) = search(g, g.degree(v), Some(start), false);
    Connectivity { kappa, cut }
}

/// A separator of size below `k`, if the graph has one. Complete graphs have
/// no separator at all and yield `None`.
pub(crate) fn separator_below(g: &Graph, k: usize) -> Option<VertexSet> {
    if k == 0 || g.is_complete() {
        return None;
    }
    if !g.is_connected() {
        return Some(VertexSet::empty());
    }
    let v = min_degree_vertex(g);
    if g.degree(v) < k {
        return Some(g.neighbors(v).iter().copied().collect());
    }
    // Only sources 0..k matter for a separator of size <= k - 1.
    let n = g.n();
    let mut net = SplitNetwork::new(g);
    for i in 0..k.min(n) {
        for j in i + 1..n {
            if !g.has_edge(i, j) && net.local(i, j, k) < k {
                return Some(net.cut(i));
            }
        }
    }
    None
}

/// Whether `κ(g) >= k`.
pub fn connectivity_at_least(g: &Graph, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if g.n() < k + 1 {
        return false;
    }
    separator_below(g, k).is_none()
}
