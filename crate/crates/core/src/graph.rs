//! Immutable simple graphs and digraphs on dense labels `0..n`.
//!
//! Neighbour lists are kept sorted so every traversal in the crate is
//! deterministic, and every tie is broken towards the smallest label.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::Ratio;

/// Sorted, duplicate-free set of vertex labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        VertexSet::new(v)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    /// Fails if any member is `>= n`.
    pub fn check(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }

    pub(crate) fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for v in self.iter() {
            m[v] = true;
        }
        m
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// Exact degree summary; the average is kept as a reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub average: Ratio,
}

/// An induced subgraph together with its relabelling (`map[new] = old`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induced {
    pub graph: Graph,
    pub map: Vec<usize>,
}

impl Induced {
    /// Translate a sequence of local labels back to host labels.
    pub fn lift(&self, local: &[usize]) -> Vec<usize> {
        local.iter().map(|&v| self.map[v]).collect()
    }

    pub fn lift_set(&self, local: &VertexSet) -> VertexSet {
        local.iter().map(|v| self.map[v]).collect()
    }

    /// Local label of a host vertex, if it is present.
    pub fn local(&self, host: usize) -> Option<usize> {
        self.map.binary_search(&host).ok()
    }
}

/// Outcome of [`Graph::degeneracy_ordering`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degeneracy {
    /// Every vertex has at most `bound` neighbours later in the order.
    Ordering(Vec<usize>),
    /// A non-empty vertex set inducing minimum degree greater than `bound`.
    Refusal { witness: VertexSet },
}

/// Simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged; loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::input(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_raw_adj(adj))
    }

    pub(crate) fn from_raw_adj(mut adj: Vec<Vec<usize>>) -> Self {
        let mut total = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            total += list.len();
        }
        Graph { adj, m: total / 2 }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Self::from_raw_adj(adj)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    /// `K_{a,b}` with the `a` side on labels `0..a`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Self::from_edges(a + b, edges).unwrap()
    }

    /// Outer 5-cycle on 0..5, inner pentagram on 5..10, spokes i -- i+5.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        Self::from_edges(10, edges).unwrap()
    }

    /// Hub 0 joined to a rim cycle on `1..=rim`.
    pub fn wheel(rim: usize) -> Self {
        let mut edges: Vec<_> = (1..=rim).map(|i| (0, i)).collect();
        edges.extend((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
        Self::from_edges(rim + 1, edges).unwrap()
    }

    /// Disjoint union, `other` relabelled after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|l| l.iter().map(|&v| v + off).collect()),
        );
        Graph {
            adj,
            m: self.m + other.m,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.adj.iter().all(|l| l.len() + 1 == n)
    }

    /// Panics on the empty graph.
    pub fn degree_stats(&self) -> DegreeStats {
        assert!(self.n() >= 1, "degree_stats needs at least one vertex");
        let min = self.adj.iter().map(Vec::len).min().unwrap();
        let max = self.adj.iter().map(Vec::len).max().unwrap();
        DegreeStats {
            min,
            max,
            average: Ratio::new(2 * self.m as u64, self.n() as u64),
        }
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn induced(&self, s: &VertexSet) -> Result<Induced> {
        s.check(self.n())?;
        let map = s.as_slice().to_vec();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&u| (local[u] != usize::MAX).then_some(local[u]))
                    .collect()
            })
            .collect();
        Ok(Induced {
            graph: Self::from_raw_adj(adj),
            map,
        })
    }

    /// `self` with the vertices of `s` deleted.
    pub fn remove(&self, s: &VertexSet) -> Result<Induced> {
        s.check(self.n())?;
        let keep: VertexSet = (0..self.n()).filter(|&v| !s.contains(v)).collect();
        self.induced(&keep)
    }

    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let adj = self
            .adj
            .iter()
            .zip(&other.adj)
            .map(|(a, b)| merge_sorted(a, b))
            .collect();
        Ok(Self::from_raw_adj(adj))
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|v| {
                (0..n)
                    .filter(|&u| u != v && self.adj[v].binary_search(&u).is_err())
                    .collect()
            })
            .collect();
        Self::from_raw_adj(adj)
    }

    /// Vertices outside `s` adjacent to some member of `s`.
    pub fn neighborhood(&self, s: &VertexSet) -> Result<VertexSet> {
        s.check(self.n())?;
        let inside = s.mask(self.n());
        let mut seen = vec![false; self.n()];
        for v in s.iter() {
            for &u in &self.adj[v] {
                if !inside[u] {
                    seen[u] = true;
                }
            }
        }
        Ok((0..self.n()).filter(|&v| seen[v]).collect())
    }

    /// Components sorted by their smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            queue.push_back(s);
            let mut members = vec![s];
            while let Some(v) = queue.pop_front() {
                for &u in &self.adj[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = id;
                        members.push(u);
                        queue.push_back(u);
                    }
                }
            }
            out.push(VertexSet::new(members));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// Smallest-first removal order. Succeeds iff the graph is
    /// `bound`-degenerate; otherwise the surviving `bound`-core is returned.
    pub fn degeneracy_ordering(&self, bound: usize) -> Degeneracy {
        let order = self.smallest_last_order();
        let n = self.n();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let ok = order
            .iter()
            .all(|&v| self.adj[v].iter().filter(|&&u| pos[u] > pos[v]).count() <= bound);
        if ok {
            Degeneracy::Ordering(order)
        } else {
            Degeneracy::Refusal {
                witness: self.core(bound + 1),
            }
        }
    }

    /// Order produced by repeatedly removing a vertex of minimum remaining
    /// degree, smallest label first among ties.
    pub fn smallest_last_order(&self) -> Vec<usize> {
        let n = self.n();
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let maxd = deg.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<std::collections::BTreeSet<usize>> =
            vec![Default::default(); maxd + 1];
        for v in 0..n {
            buckets[deg[v]].insert(v);
        }
        for _ in 0..n {
            let d = buckets.iter().position(|b| !b.is_empty()).unwrap();
            let v = *buckets[d].iter().next().unwrap();
            buckets[d].remove(&v);
            removed[v] = true;
            order.push(v);
            for &u in &self.adj[v] {
                if !removed[u] {
                    buckets[deg[u]].remove(&u);
                    deg[u] -= 1;
                    buckets[deg[u]].insert(u);
                }
            }
        }
        order
    }

    /// Vertices surviving repeated deletion of vertices with degree `< k`.
    pub fn core(&self, k: usize) -> VertexSet {
        self.core_within(&VertexSet::full(self.n()), k)
    }

    /// [`Graph::core`] computed inside `G[within]`.
    pub fn core_within(&self, within: &VertexSet, k: usize) -> VertexSet {
        let n = self.n();
        let mut alive = within.mask(n);
        let mut deg = vec![0usize; n];
        let mut stack = Vec::new();
        for v in within.iter() {
            deg[v] = self.adj[v].iter().filter(|&&u| alive[u]).count();
            if deg[v] < k {
                stack.push(v);
            }
        }
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &u in &self.adj[v] {
                if alive[u] {
                    deg[u] -= 1;
                    if deg[u] + 1 == k {
                        stack.push(u);
                    }
                }
            }
        }
        (0..n).filter(|&v| alive[v]).collect()
    }

    /// Number of neighbours of `v` inside `s` (given as a membership mask).
    pub(crate) fn degree_into(&self, v: usize, mask: &[bool]) -> usize {
        self.adj[v].iter().filter(|&&u| mask[u]).count()
    }
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Simple directed graph; `(u, v)` and `(v, u)` are independent arcs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph {
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out_adj = vec![Vec::new(); n];
        for (u, v) in arcs {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::input(format!("self-loop at {u}")));
            }
            out_adj[u].push(v);
        }
        Ok(Self::from_raw_out(out_adj))
    }

    pub(crate) fn from_raw_out(mut out_adj: Vec<Vec<usize>>) -> Self {
        let n = out_adj.len();
        let mut in_adj = vec![Vec::new(); n];
        for (u, list) in out_adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for &v in list.iter() {
                in_adj[v].push(u);
            }
        }
        Digraph { out_adj, in_adj }
    }

    pub fn complete(n: usize) -> Self {
        let out = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Self::from_raw_out(out)
    }

    pub fn directed_cycle(n: usize) -> Self {
        Self::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.out_adj[u].binary_search(&v).is_ok()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
    }
}
