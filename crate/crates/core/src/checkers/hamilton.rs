use crate::bits::{self, Bits, MAX_BITS};
use crate::certificate::{CycleCertificate, PathCertificate};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

use super::{Budget, Limits, Verdict};

/// Hard ceiling for the bitmask program regardless of [`Limits::dp_max`]:
/// its table has `2^(n-1)` words.
pub(super) const DP_CEILING: usize = 25;

fn capacity(n: usize) -> Result<()> {
    if n > MAX_BITS {
        return Err(Error::Capacity {
            what: "vertices for exact Hamiltonicity search",
            limit: MAX_BITS,
            got: n,
        });
    }
    Ok(())
}

/// Bitmask table of Hamilton-path endpoints from a fixed start.
///
/// `pred[i]` holds the (re-indexed) vertices that may precede `i`, `first`
/// the vertices reachable in one step from the start. `table[mask]` is the
/// set of `i` such that some path from the start visits exactly `mask` and
/// ends at `i`.
pub(super) struct PathTable {
    pred: Vec<u32>,
    table: Vec<u32>,
}

impl PathTable {
    pub(super) fn build(pred: Vec<u32>, first: u32) -> Self {
        let k = pred.len();
        let mut table = vec![0u32; 1 << k];
        for i in 0..k {
            if first >> i & 1 == 1 {
                table[1 << i] = 1 << i;
            }
        }
        for mask in 1u32..(1 << k) {
            if mask & (mask - 1) == 0 {
                continue;
            }
            let mut ends = 0u32;
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if table[(mask ^ (1 << i)) as usize] & pred[i] != 0 {
                    ends |= 1 << i;
                }
            }
            table[mask as usize] = ends;
        }
        PathTable { pred, table }
    }

    fn full(&self) -> u32 {
        ((1u64 << self.pred.len()) - 1) as u32
    }

    fn ends(&self) -> u32 {
        self.table[self.full() as usize]
    }

    pub(super) fn ends_of(&self, mask: u32) -> u32 {
        self.table[mask as usize]
    }

    /// Path (re-indexed, excluding the start) over all vertices ending at `end`.
    fn walk_back(&self, end: usize) -> Vec<usize> {
        self.walk(self.full(), end)
    }

    /// Path (re-indexed, excluding the start) visiting exactly `mask` and
    /// ending at `end`, which must be recorded in the table.
    pub(super) fn walk(&self, mut mask: u32, end: usize) -> Vec<usize> {
        let mut cur = end;
        let mut seq = vec![cur];
        while mask.count_ones() > 1 {
            let prev = mask ^ (1 << cur);
            let options = self.table[prev as usize] & self.pred[cur];
            let p = options.trailing_zeros() as usize;
            seq.push(p);
            mask = prev;
            cur = p;
        }
        seq.reverse();
        seq
    }
}

/// Re-indexing that removes `start` from `0..n`.
fn others(n: usize, start: usize) -> Vec<usize> {
    (0..n).filter(|&v| v != start).collect()
}

fn mask_of(pos: &[usize], set: impl Iterator<Item = usize>) -> u32 {
    set.filter(|&v| pos[v] != usize::MAX)
        .fold(0u32, |m, v| m | 1 << pos[v])
}

fn positions(n: usize, idx: &[usize]) -> Vec<usize> {
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in idx.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// Undirected table from `start`.
fn graph_table(g: &Graph, start: usize) -> (Vec<usize>, PathTable) {
    let idx = others(g.n(), start);
    let pos = positions(g.n(), &idx);
    let pred = idx
        .iter()
        .map(|&v| mask_of(&pos, g.neighbors(v).iter().copied()))
        .collect();
    let first = mask_of(&pos, g.neighbors(start).iter().copied());
    (idx, PathTable::build(pred, first))
}

fn digraph_table(d: &Digraph, start: usize) -> (Vec<usize>, PathTable) {
    let idx = others(d.n(), start);
    let pos = positions(d.n(), &idx);
    let pred = idx
        .iter()
        .map(|&v| mask_of(&pos, d.in_neighbors(v).iter().copied()))
        .collect();
    let first = mask_of(&pos, d.out_neighbors(start).iter().copied());
    (idx, PathTable::build(pred, first))
}

enum Search {
    Found(Vec<usize>),
    Exhausted,
    OutOfBudget,
}

/// Depth-first Hamilton path/cycle search with degree, forcing and
/// reachability pruning. Undirected graphs pass the same array twice.
struct Dfs<'a> {
    out: &'a [Bits],
    inn: &'a [Bits],
    start: usize,
    /// Fixed final vertex for path mode; `None` searches for a cycle.
    end: Option<usize>,
    undirected: bool,
    budget: Budget,
    path: Vec<usize>,
    left: Bits,
}

impl Dfs<'_> {
    fn run(mut self) -> Search {
        self.left.remove(self.start);
        self.path.push(self.start);
        match self.step() {
            Some(true) => Search::Found(self.path),
            Some(false) => Search::Exhausted,
            None => Search::OutOfBudget,
        }
    }

    /// `Some(true)` when found, `Some(false)` when this subtree is empty,
    /// `None` when the budget ran out.
    fn step(&mut self) -> Option<bool> {
        if !self.budget.tick() {
            return None;
        }
        let cur = *self.path.last().unwrap();
        if self.left.is_empty() {
            return Some(match self.end {
                Some(t) => cur == t,
                None => self.out[cur].contains(self.start),
            });
        }
        let Some(forced) = self.feasible(cur) else {
            return Some(false);
        };
        let mut cand: Vec<(usize, usize)> = match forced {
            Some(w) => vec![(0, w)],
            None => {
                let mut c = self.out[cur].and(&self.left);
                if let Some(t) = self.end {
                    if self.left.len() > 1 {
                        c.remove(t);
                    }
                }
                c.iter()
                    .map(|w| (self.out[w].and_len(&self.left), w))
                    .collect()
            }
        };
        cand.sort_unstable();
        for (_, w) in cand {
            self.left.remove(w);
            self.path.push(w);
            match self.step() {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.path.pop();
            self.left.insert(w);
        }
        Some(false)
    }

    /// `None` if the partial path cannot be completed; otherwise a vertex
    /// the next step is forced to take, if any.
    fn feasible(&self, cur: usize) -> Option<Option<usize>> {
        let left = self.left;
        let mut from = left;
        from.insert(cur);
        let mut into = left;
        if self.end.is_none() {
            into.insert(self.start);
        }
        let mut forced = None;
        for w in left.iter() {
            let is_end = self.end == Some(w);
            let ins = self.inn[w].and(&from);
            let outs = if is_end {
                Bits::EMPTY
            } else {
                self.out[w].and(&into)
            };
            if ins.is_empty() || (!is_end && outs.is_empty()) {
                return None;
            }
            if self.undirected && !is_end {
                // Available neighbours in `left ∪ {cur, closing vertex}`.
                let avail = ins.or(&outs);
                let cnt = avail.len();
                if cnt < 2 {
                    return None;
                }
                // At the root the start doubles as the closing vertex, so a
                // neighbour of it may come last instead of next.
                let pinned = self.end.is_some() || cur != self.start;
                if cnt == 2 && pinned && avail.contains(cur) {
                    if forced.is_some() {
                        return None;
                    }
                    forced = Some(w);
                }
            } else if ins.len() == 1 && ins.contains(cur) {
                if forced.is_some() {
                    return None;
                }
                forced = Some(w);
            }
        }
        if let Some(w) = forced {
            if self.end == Some(w) && left.len() > 1 {
                return None;
            }
        }
        let mut within = left;
        if self.end.is_none() {
            within.insert(self.start);
        }
        within.insert(cur);
        let seen = bits::reach(self.out, &within, cur);
        if !left.minus(&seen).is_empty() {
            return None;
        }
        if self.end.is_none() && !seen.contains(self.start) {
            return None;
        }
        Some(forced)
    }
}

fn has_cut_vertex(g: &Graph) -> bool {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    // Iterative DFS from vertex 0 (graph assumed connected).
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    let mut root_children = 0;
    while let Some(&mut (v, parent, ref mut i)) = stack.last_mut() {
        if *i < g.degree(v) {
            let u = g.neighbors(v)[*i];
            *i += 1;
            if disc[u] == usize::MAX {
                disc[u] = timer;
                low[u] = timer;
                timer += 1;
                if v == 0 {
                    root_children += 1;
                }
                stack.push((u, v, 0));
            } else if u != parent {
                low[v] = low[v].min(disc[u]);
            }
        } else {
            stack.pop();
            if parent != usize::MAX {
                low[parent] = low[parent].min(low[v]);
                if parent != 0 && low[v] >= disc[parent] {
                    return true;
                }
            }
        }
    }
    root_children > 1
}

/// Decides whether `g` has a Hamilton cycle.
pub fn is_hamiltonian(g: &Graph, limits: &Limits) -> Result<Verdict<CycleCertificate>> {
    let n = g.n();
    if n < 3 {
        return Err(Error::input(format!("Hamiltonicity needs n >= 3, got {n}")));
    }
    capacity(n)?;
    if g.min_degree() < 2 || !g.is_connected() || has_cut_vertex(g) {
        return Ok(Verdict::No(()));
    }
    if n <= limits.dp_max.min(DP_CEILING) {
        let (idx, t) = graph_table(g, 0);
        let close = mask_of(&positions(n, &idx), g.neighbors(0).iter().copied());
        let ends = t.ends() & close;
        if ends == 0 {
            return Ok(Verdict::No(()));
        }
        let mut cycle = vec![0];
        cycle.extend(
            t.walk_back(ends.trailing_zeros() as usize)
                .into_iter()
                .map(|i| idx[i]),
        );
        return Ok(Verdict::Yes(CycleCertificate::new(cycle)));
    }
    let adj = bits::graph_bits(g);
    let start = (0..n).min_by_key(|&v| (g.degree(v), v)).unwrap();
    let dfs = Dfs {
        out: &adj,
        inn: &adj,
        start,
        end: None,
        undirected: true,
        budget: Budget::new(limits.node_budget),
        path: Vec::with_capacity(n),
        left: Bits::full(n),
    };
    Ok(match dfs.run() {
        Search::Found(p) => Verdict::Yes(CycleCertificate::new(p)),
        Search::Exhausted => Verdict::No(()),
        Search::OutOfBudget => Verdict::Indeterminate,
    })
}

/// Decides whether `g` has a Hamilton path from `u` to `v`.
pub fn hamilton_path_between(
    g: &Graph,
    u: usize,
    v: usize,
    limits: &Limits,
) -> Result<Verdict<PathCertificate>> {
    let n = g.n();
    for x in [u, v] {
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Err(Error::input("Hamilton path endpoints must differ"));
    }
    capacity(n)?;
    if !g.is_connected() {
        return Ok(Verdict::No(()));
    }
    if n == 2 {
        return Ok(Verdict::Yes(PathCertificate::new(vec![u, v])));
    }
    if (0..n).any(|w| w != u && w != v && g.degree(w) < 2) {
        return Ok(Verdict::No(()));
    }
    if n <= limits.dp_max.min(DP_CEILING) {
        let (idx, t) = graph_table(g, u);
        let target = idx.iter().position(|&x| x == v).unwrap();
        if t.ends() >> target & 1 == 0 {
            return Ok(Verdict::No(()));
        }
        let mut path = vec![u];
        path.extend(t.walk_back(target).into_iter().map(|i| idx[i]));
        return Ok(Verdict::Yes(PathCertificate::new(path)));
    }
    let adj = bits::graph_bits(g);
    let dfs = Dfs {
        out: &adj,
        inn: &adj,
        start: u,
        end: Some(v),
        undirected: true,
        budget: Budget::new(limits.node_budget),
        path: Vec::with_capacity(n),
        left: Bits::full(n),
    };
    Ok(match dfs.run() {
        Search::Found(p) => Verdict::Yes(PathCertificate::new(p)),
        Search::Exhausted => Verdict::No(()),
        Search::OutOfBudget => Verdict::Indeterminate,
    })
}

/// Whether every pair of vertices is joined by a Hamilton path. `No` carries
/// the first failing pair in lexicographic order.
pub fn is_hamilton_connected(g: &Graph, limits: &Limits) -> Result<Verdict<(), (usize, usize)>> {
    let n = g.n();
    if n < 3 {
        return Err(Error::input(format!(
            "Hamilton-connectedness needs n >= 3, got {n}"
        )));
    }
    capacity(n)?;
    let mut undecided = false;
    for u in 0..n - 1 {
        if n <= limits.dp_max.min(DP_CEILING) {
            let (idx, t) = graph_table(g, u);
            let ends = t.ends();
            for (i, &v) in idx.iter().enumerate() {
                if v > u && ends >> i & 1 == 0 {
                    return Ok(Verdict::No((u, v)));
                }
            }
            continue;
        }
        for v in u + 1..n {
            match hamilton_path_between(g, u, v, limits)? {
                Verdict::Yes(_) => {}
                Verdict::No(()) => return Ok(Verdict::No((u, v))),
                Verdict::Indeterminate => undecided = true,
            }
        }
    }
    Ok(if undecided {
        Verdict::Indeterminate
    } else {
        Verdict::Yes(())
    })
}

/// Decides whether `d` has a directed Hamilton cycle.
pub fn directed_hamilton_cycle(d: &Digraph, limits: &Limits) -> Result<Verdict<CycleCertificate>> {
    let n = d.n();
    if n < 2 {
        return Err(Error::input(format!(
            "directed Hamiltonicity needs n >= 2, got {n}"
        )));
    }
    capacity(n)?;
    if (0..n).any(|v| d.out_neighbors(v).is_empty() || d.in_neighbors(v).is_empty()) {
        return Ok(Verdict::No(()));
    }
    if n <= limits.dp_max.min(DP_CEILING) {
        let (idx, t) = digraph_table(d, 0);
        let close = mask_of(&positions(n, &idx), d.in_neighbors(0).iter().copied());
        let ends = t.ends() & close;
        if ends == 0 {
            return Ok(Verdict::No(()));
        }
        let mut cycle = vec![0];
        cycle.extend(
            t.walk_back(ends.trailing_zeros() as usize)
                .into_iter()
                .map(|i| idx[i]),
        );
        return Ok(Verdict::Yes(CycleCertificate::new(cycle)));
    }
    let out = bits::out_bits(d);
    let inn = bits::in_bits(d);
    let start = (0..n)
        .min_by_key(|&v| (d.out_neighbors(v).len(), v))
        .unwrap();
    let dfs = Dfs {
        out: &out,
        inn: &inn,
        start,
        end: None,
        undirected: false,
        budget: Budget::new(limits.node_budget),
        path: Vec::with_capacity(n),
        left: Bits::full(n),
    };
    Ok(match dfs.run() {
        Search::Found(p) => Verdict::Yes(CycleCertificate::new(p)),
        Search::Exhausted => Verdict::No(()),
        Search::OutOfBudget => Verdict::Indeterminate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{verify_certificate, verify_directed_cycle, Certificate};

    fn dp() -> Limits {
        Limits::default()
    }

    fn bnb() -> Limits {
        Limits {
            dp_max: 0,
            ..Limits::default()
        }
    }

    #[test]
    fn examples_both_engines() {
        for lim in [dp(), bnb()] {
            for n in 3..12 {
                let c = Graph::cycle(n);
                let cert = is_hamiltonian(&c, &lim).unwrap().into_yes().unwrap();
                assert_eq!(
                    verify_certificate(&c, &Certificate::HamiltonCycle(cert)),
                    Ok(())
                );
            }
            assert!(is_hamiltonian(&Graph::complete_bipartite(3, 4), &lim)
                .unwrap()
                .is_no());
            assert!(is_hamiltonian(&Graph::petersen(), &lim).unwrap().is_no());
            assert!(is_hamiltonian(&Graph::complete_bipartite(4, 4), &lim)
                .unwrap()
                .is_yes());
        }
    }

    #[test]
    fn small_n_is_input_error() {
        assert!(is_hamiltonian(&Graph::complete(2), &dp()).is_err());
    }

    #[test]
    fn paths_between() {
        for lim in [dp(), bnb()] {
            let p4 = Graph::path(4);
            assert!(hamilton_path_between(&p4, 0, 3, &lim).unwrap().is_yes());
            assert!(hamilton_path_between(&p4, 1, 2, &lim).unwrap().is_no());
            let k4 = Graph::complete(4);
            for u in 0..4 {
                for v in 0..4 {
                    if u != v {
                        let p = hamilton_path_between(&k4, u, v, &lim)
                            .unwrap()
                            .into_yes()
                            .unwrap();
                        assert_eq!((p.vertices[0], p.vertices[3]), (u, v));
                    }
                }
            }
        }
    }

    #[test]
    fn hamilton_connected_examples() {
        for lim in [dp(), bnb()] {
            assert!(is_hamilton_connected(&Graph::complete(4), &lim)
                .unwrap()
                .is_yes());
            assert_eq!(
                is_hamilton_connected(&Graph::cycle(5), &lim).unwrap(),
                Verdict::No((0, 2))
            );
            assert!(
                is_hamilton_connected(&Graph::complete_bipartite(3, 3), &lim)
                    .unwrap()
                    .is_no()
            );
        }
    }

    #[test]
    fn directed_examples() {
        for lim in [dp(), bnb()] {
            let c = Digraph::directed_cycle(7);
            let cert = directed_hamilton_cycle(&c, &lim)
                .unwrap()
                .into_yes()
                .unwrap();
            assert!(verify_directed_cycle(&c, &cert, true).is_ok());
            assert!(directed_hamilton_cycle(&Digraph::complete(5), &lim)
                .unwrap()
                .is_yes());
            let dag = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
            assert!(directed_hamilton_cycle(&dag, &lim).unwrap().is_no());
            // Two directed triangles joined one way only.
            let d = Digraph::from_arcs(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
                .unwrap();
            assert!(directed_hamilton_cycle(&d, &lim).unwrap().is_no());
        }
    }

    #[test]
    fn budget_exhaustion_is_indeterminate() {
        // Large hypohamiltonian-ish refutation with a tiny budget.
        let g = Graph::complete_bipartite(14, 15);
        let lim = Limits {
            dp_max: 0,
            node_budget: 10,
            ..Limits::default()
        };
        assert!(is_hamiltonian(&g, &lim).unwrap().is_indeterminate());
    }

    #[test]
    fn cut_vertex_detection() {
        let two_triangles =
            Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(has_cut_vertex(&two_triangles));
        assert!(!has_cut_vertex(&Graph::cycle(5)));
        assert!(!has_cut_vertex(&Graph::petersen()));
    }
}
