use std::collections::BTreeMap;

use serde::Serialize;

use crate::bits::{self, Bits, MAX_BITS};
use crate::certificate::CycleCertificate;
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph, VertexSet};

use super::hamilton::{directed_hamilton_cycle, is_hamiltonian, PathTable, DP_CEILING};
use super::{Budget, Limits, Verdict};

/// Cycle lengths `3..=n` split into achieved, impossible and undecided.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PancyclicityReport {
    pub present_lengths: BTreeMap<usize, CycleCertificate>,
    pub missing_lengths: Vec<usize>,
    pub indeterminate_lengths: Vec<usize>,
}

impl PancyclicityReport {
    pub fn is_pancyclic(&self) -> bool {
        self.missing_lengths.is_empty() && self.indeterminate_lengths.is_empty()
    }

    pub fn verdict(&self) -> Verdict<(), Vec<usize>> {
        if !self.missing_lengths.is_empty() {
            Verdict::No(self.missing_lengths.clone())
        } else if !self.indeterminate_lengths.is_empty() {
            Verdict::Indeterminate
        } else {
            Verdict::Yes(())
        }
    }
}

/// Longest cycle found. `exact` is false when the search budget ran out, in
/// which case `length` is only a lower bound. Length 0 with no witness means
/// acyclic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circumference {
    pub length: usize,
    pub witness: Option<CycleCertificate>,
    pub exact: bool,
}

pub type LongestDirected = Circumference;

/// Vertex-disjoint cycles and the leftover vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleCover {
    pub cycles: Vec<CycleCertificate>,
    pub uncovered: VertexSet,
}

impl CycleCover {
    /// Number of cycles plus number of uncovered vertices.
    pub fn quantity(&self) -> usize {
        self.cycles.len() + self.uncovered.len()
    }
}

fn capacity(n: usize) -> Result<()> {
    if n > MAX_BITS {
        return Err(Error::Capacity {
            what: "vertices for exact cycle search",
            limit: MAX_BITS,
            got: n,
        });
    }
    Ok(())
}

/// For every length, the first cycle found with that many vertices, using
/// one bitmask table per minimum vertex. `out[v]`/`inn[v]` are successor and
/// predecessor lists.
fn all_lengths(
    n: usize,
    out: &dyn Fn(usize) -> Vec<usize>,
    inn: &dyn Fn(usize) -> Vec<usize>,
    min_len: usize,
) -> Vec<Option<Vec<usize>>> {
    let mut found: Vec<Option<Vec<usize>>> = vec![None; n + 1];
    for s in 0..n {
        let k = n - 1 - s;
        if k + 1 < min_len {
            break;
        }
        let local = |v: usize| v.checked_sub(s + 1);
        let mask = |vs: Vec<usize>| {
            vs.into_iter()
                .filter_map(local)
                .fold(0u32, |m, i| m | 1 << i)
        };
        let pred: Vec<u32> = (s + 1..n).map(|v| mask(inn(v))).collect();
        let first = mask(out(s));
        let close = mask(inn(s));
        if first == 0 || close == 0 {
            continue;
        }
        let table = PathTable::build(pred, first);
        for m in 1u32..(1u32 << k) {
            let len = m.count_ones() as usize + 1;
            if len < min_len || found[len].is_some() {
                continue;
            }
            let ends = table.ends_of(m) & close;
            if ends != 0 {
                let mut cyc = vec![s];
                cyc.extend(
                    table
                        .walk(m, ends.trailing_zeros() as usize)
                        .into_iter()
                        .map(|i| i + s + 1),
                );
                found[len] = Some(cyc);
            }
        }
    }
    found
}

fn graph_lengths(g: &Graph) -> Vec<Option<Vec<usize>>> {
    let nb = |v: usize| g.neighbors(v).to_vec();
    all_lengths(g.n(), &nb, &nb, 3)
}

fn digraph_lengths(d: &Digraph) -> Vec<Option<Vec<usize>>> {
    all_lengths(
        d.n(),
        &|v| d.out_neighbors(v).to_vec(),
        &|v| d.in_neighbors(v).to_vec(),
        2,
    )
}

#[derive(Clone, Copy)]
enum Goal {
    Exact(usize),
    Longest,
}

/// Cycle search through a fixed minimum vertex `s` over vertices `> s`.
struct CycleDfs<'a> {
    out: &'a [Bits],
    s: usize,
    goal: Goal,
    min_len: usize,
    budget: &'a mut Budget,
    path: Vec<usize>,
    left: Bits,
    best: Vec<usize>,
}

impl CycleDfs<'_> {
    /// `None` when the budget ran out. For `Exact`, `Some(true)` stops the
    /// search as soon as a cycle is found.
    fn step(&mut self) -> Option<bool> {
        if !self.budget.tick() {
            return None;
        }
        let cur = *self.path.last().unwrap();
        let len = self.path.len();
        if len >= self.min_len && self.out[cur].contains(self.s) {
            match self.goal {
                Goal::Exact(l) if l == len => {
                    self.best = self.path.clone();
                    return Some(true);
                }
                Goal::Longest if len > self.best.len() => self.best = self.path.clone(),
                _ => {}
            }
        }
        if let Goal::Exact(l) = self.goal {
            if len >= l {
                return Some(false);
            }
        }
        let mut within = self.left;
        within.insert(self.s);
        within.insert(cur);
        let reach = bits::reach(self.out, &within, cur);
        if !reach.contains(self.s) {
            return Some(false);
        }
        let bound = len + reach.and_len(&self.left);
        match self.goal {
            Goal::Longest if bound <= self.best.len() => return Some(false),
            Goal::Exact(l) => {
                if bound < l {
                    return Some(false);
                }
                // Arcs still needed: l - len to reach the last vertex, one more to close.
                match bits::distance(self.out, &self.left, cur, self.s) {
                    Some(d) if d <= l - len + 1 => {}
                    _ => return Some(false),
                }
            }
            _ => {}
        }
        let next = self.out[cur].and(&self.left);
        let mut cand: Vec<(usize, usize)> = next
            .iter()
            .map(|w| (self.out[w].and_len(&self.left), w))
            .collect();
        cand.sort_unstable();
        for (_, w) in cand {
            self.left.remove(w);
            self.path.push(w);
            let r = self.step();
            self.path.pop();
            self.left.insert(w);
            match r {
                None => return None,
                Some(true) => return Some(true),
                Some(false) => {}
            }
        }
        Some(false)
    }
}

/// Runs the cycle search for every minimum vertex. `allowed` restricts the
/// vertices considered. Returns the best cycle and whether the search
/// completed.
fn search_cycles(
    out: &[Bits],
    allowed: &Bits,
    goal: Goal,
    min_len: usize,
    node_budget: u64,
) -> (Vec<usize>, bool) {
    let mut budget = Budget::new(node_budget);
    let mut best: Vec<usize> = Vec::new();
    for s in allowed.iter() {
        let mut left = *allowed;
        for v in 0..=s {
            left.remove(v);
        }
        let room = left.len() + 1;
        match goal {
            Goal::Exact(l) if room < l => break,
            Goal::Longest if room <= best.len() => break,
            _ => {}
        }
        let mut dfs = CycleDfs {
            out,
            s,
            goal,
            min_len,
            budget: &mut budget,
            path: vec![s],
            left,
            best: best.clone(),
        };
        let r = dfs.step();
        let got = std::mem::take(&mut dfs.best);
        if got.len() > best.len() && got.first() == Some(&s) {
            best = got;
        }
        match r {
            None => return (best, false),
            Some(true) => return (best, true),
            Some(false) => {}
        }
    }
    (best, true)
}

/// Searches for a cycle with exactly `len` vertices.
pub fn cycle_of_length(
    g: &Graph,
    len: usize,
    limits: &Limits,
) -> Result<Verdict<CycleCertificate>> {
    let n = g.n();
    capacity(n)?;
    if len < 3 || len > n {
        return Ok(Verdict::No(()));
    }
    if len == n {
        return is_hamiltonian(g, limits);
    }
    if n <= limits.all_lengths_max.min(DP_CEILING) {
        return Ok(match graph_lengths(g).swap_remove(len) {
            Some(c) => Verdict::Yes(CycleCertificate::new(c)),
            None => Verdict::No(()),
        });
    }
    let core = Bits::from_iter(g.core(2).iter());
    let adj = bits::graph_bits(g);
    let (c, complete) = search_cycles(&adj, &core, Goal::Exact(len), 3, limits.node_budget);
    Ok(if c.len() == len {
        Verdict::Yes(CycleCertificate::new(c))
    } else if complete {
        Verdict::No(())
    } else {
        Verdict::Indeterminate
    })
}

fn two_coloring(g: &Graph) -> Option<Vec<u8>> {
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                if color[u] == u8::MAX {
                    color[u] = 1 - color[v];
                    stack.push(u);
                } else if color[u] == color[v] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

/// Records every cycle obtained from `cycle` and one chord.
fn harvest_chords(g: &Graph, cycle: &[usize], present: &mut BTreeMap<usize, CycleCertificate>) {
    let l = cycle.len();
    for i in 0..l {
        for j in i + 2..l {
            if (i == 0 && j == l - 1) || !g.has_edge(cycle[i], cycle[j]) {
                continue;
            }
            let inner = j - i + 1;
            present
                .entry(inner)
                .or_insert_with(|| CycleCertificate::new(cycle[i..=j].to_vec()));
            let outer = l - (j - i) + 1;
            present.entry(outer).or_insert_with(|| {
                let mut c = cycle[j..].to_vec();
                c.extend_from_slice(&cycle[..=i]);
                CycleCertificate::new(c)
            });
        }
    }
}

/// Cycle lengths present in `g`, one certificate per length.
pub fn pancyclicity_report(g: &Graph, limits: &Limits) -> Result<PancyclicityReport> {
    let n = g.n();
    capacity(n)?;
    let mut report = PancyclicityReport {
        present_lengths: BTreeMap::new(),
        missing_lengths: Vec::new(),
        indeterminate_lengths: Vec::new(),
    };
    if n < 3 {
        return Ok(report);
    }
    if n <= limits.all_lengths_max.min(DP_CEILING) {
        for (len, c) in graph_lengths(g).into_iter().enumerate().skip(3) {
            match c {
                Some(c) => {
                    report.present_lengths.insert(len, CycleCertificate::new(c));
                }
                None => report.missing_lengths.push(len),
            }
        }
        return Ok(report);
    }
    let bipartite = two_coloring(g).is_some();
    let mut present = BTreeMap::new();
    let ham = is_hamiltonian(g, limits)?;
    if let Verdict::Yes(c) = &ham {
        harvest_chords(g, &c.vertices, &mut present);
        present.insert(n, c.clone());
    }
    for len in (3..=n).rev() {
        if present.contains_key(&len) {
            continue;
        }
        if bipartite && len % 2 == 1 {
            report.missing_lengths.push(len);
            continue;
        }
        let v = if len == n {
            ham.clone()
        } else {
            cycle_of_length(g, len, limits)?
        };
        match v {
            Verdict::Yes(c) => {
                harvest_chords(g, &c.vertices, &mut present);
                present.insert(len, c);
            }
            Verdict::No(()) => report.missing_lengths.push(len),
            Verdict::Indeterminate => report.indeterminate_lengths.push(len),
        }
    }
    report.missing_lengths.sort_unstable();
    report.indeterminate_lengths.sort_unstable();
    report.present_lengths = present;
    Ok(report)
}

/// Length of a longest cycle with a witness.
pub fn circumference(g: &Graph, limits: &Limits) -> Result<Circumference> {
    let n = g.n();
    capacity(n)?;
    let core = g.core(2);
    if core.is_empty() {
        return Ok(Circumference {
            length: 0,
            witness: None,
            exact: true,
        });
    }
    if n <= limits.all_lengths_max.min(DP_CEILING) {
        let lengths = graph_lengths(g);
        let (len, c) = lengths
            .into_iter()
            .enumerate()
            .filter_map(|(l, c)| c.map(|c| (l, c)))
            .next_back()
            .expect("a non-empty 2-core contains a cycle");
        return Ok(Circumference {
            length: len,
            witness: Some(CycleCertificate::new(c)),
            exact: true,
        });
    }
    let mut complete = true;
    if core.len() == n {
        match is_hamiltonian(g, limits)? {
            Verdict::Yes(c) => {
                return Ok(Circumference {
                    length: n,
                    witness: Some(c),
                    exact: true,
                })
            }
            Verdict::No(()) => {}
            Verdict::Indeterminate => complete = false,
        }
    }
    let adj = bits::graph_bits(g);
    let allowed = Bits::from_iter(core.iter());
    let (c, done) = search_cycles(&adj, &allowed, Goal::Longest, 3, limits.node_budget);
    Ok(Circumference {
        length: c.len(),
        witness: (c.len() >= 3).then(|| CycleCertificate::new(c)),
        exact: complete && done,
    })
}

/// Longest directed cycle (length 2 counts: a pair of opposite arcs).
pub fn longest_directed_cycle(d: &Digraph, limits: &Limits) -> Result<LongestDirected> {
    let n = d.n();
    capacity(n)?;
    if n <= limits.all_lengths_max.min(DP_CEILING) {
        let best = digraph_lengths(d)
            .into_iter()
            .enumerate()
            .filter_map(|(l, c)| c.map(|c| (l, c)))
            .next_back();
        return Ok(match best {
            Some((len, c)) => Circumference {
                length: len,
                witness: Some(CycleCertificate::new(c)),
                exact: true,
            },
            None => Circumference {
                length: 0,
                witness: None,
                exact: true,
            },
        });
    }
    let mut complete = true;
    if n >= 2 {
        match directed_hamilton_cycle(d, limits)? {
            Verdict::Yes(c) => {
                return Ok(Circumference {
                    length: n,
                    witness: Some(c),
                    exact: true,
                })
            }
            Verdict::No(()) => {}
            Verdict::Indeterminate => complete = false,
        }
    }
    let out = bits::out_bits(d);
    let (c, done) = search_cycles(&out, &Bits::full(n), Goal::Longest, 2, limits.node_budget);
    Ok(Circumference {
        length: c.len(),
        witness: (c.len() >= 2).then(|| CycleCertificate::new(c)),
        exact: complete && done,
    })
}

fn any_cycle(g: &Graph, within: &VertexSet) -> Option<Vec<usize>> {
    let n = g.n();
    let mask = within.mask(n);
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for s in within.iter() {
        if depth[s] != usize::MAX {
            continue;
        }
        depth[s] = 0;
        let mut stack = vec![(s, 0usize)];
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            let nb = g.neighbors(v);
            if *i == nb.len() {
                stack.pop();
                continue;
            }
            let u = nb[*i];
            *i += 1;
            if !mask[u] || u == parent[v] {
                continue;
            }
            if depth[u] == usize::MAX {
                depth[u] = depth[v] + 1;
                parent[u] = v;
                stack.push((u, 0));
            } else if depth[u] < depth[v] {
                let mut cyc = vec![v];
                let mut x = v;
                while x != u {
                    x = parent[x];
                    cyc.push(x);
                }
                return Some(cyc);
            }
        }
    }
    None
}

/// Greedy vertex-disjoint cycles: repeatedly remove a longest cycle found
/// within the budget (any cycle if none is found in time).
pub fn cycle_cover_greedy(g: &Graph, limits: &Limits) -> Result<CycleCover> {
    let n = g.n();
    capacity(n)?;
    let mut remaining = VertexSet::full(n);
    let mut cycles = Vec::new();
    loop {
        let core = g.core_within(&remaining, 2);
        if core.is_empty() {
            break;
        }
        let sub = g.induced(&core)?;
        let longest = circumference(&sub.graph, limits)?;
        let cyc = match longest.witness {
            Some(c) => sub.lift(&c.vertices),
            None => any_cycle(g, &core).expect("2-core has a cycle"),
        };
        remaining = remaining.difference(&cyc.iter().copied().collect());
        cycles.push(CycleCertificate::new(cyc));
    }
    Ok(CycleCover {
        cycles,
        uncovered: remaining,
    })
}
