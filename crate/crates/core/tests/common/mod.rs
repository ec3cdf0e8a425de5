//! Brute-force reference computations and instance generators shared by the
//! integration tests. Everything here enumerates; nothing calls the solvers.

#![allow(dead_code)]

use perturbed::{Graph, Ratio};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Calls `f` on every permutation of `items`; stops when `f` returns true.
fn any_permutation(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == items.len() {
        return f(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        if any_permutation(items, k + 1, f) {
            items.swap(k, i);
            return true;
        }
        items.swap(k, i);
    }
    false
}

/// Whether the vertices in `set` (at least 3) can be ordered into a cycle.
pub fn has_cycle_through(g: &Graph, set: &[usize]) -> bool {
    if set.len() < 3 {
        return false;
    }
    let first = set[0];
    let mut rest = set[1..].to_vec();
    any_permutation(&mut rest, 0, &mut |perm| {
        let mut prev = first;
        for &v in perm {
            if !g.has_edge(prev, v) {
                return false;
            }
            prev = v;
        }
        g.has_edge(prev, first)
    })
}

pub fn brute_hamiltonian(g: &Graph) -> bool {
    let all: Vec<usize> = (0..g.n()).collect();
    has_cycle_through(g, &all)
}

fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Longest cycle length, 0 when acyclic.
pub fn brute_circumference(g: &Graph) -> usize {
    let n = g.n();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let s = members(mask, n);
        if s.len() > best && has_cycle_through(g, &s) {
            best = s.len();
        }
    }
    best
}

pub fn brute_cycle_lengths(g: &Graph) -> Vec<bool> {
    let n = g.n();
    let mut has = vec![false; n + 1];
    for mask in 0u32..(1 << n) {
        let s = members(mask, n);
        if !has[s.len()] && has_cycle_through(g, &s) {
            has[s.len()] = true;
        }
    }
    has
}

pub fn brute_alpha(g: &Graph) -> usize {
    let n = g.n();
    (0u32..(1 << n))
        .filter(|&mask| {
            let s = members(mask, n);
            s.iter()
                .all(|&u| s.iter().all(|&v| u == v || !g.has_edge(u, v)))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Components of `g` after deleting the vertices in `removed`.
pub fn components_without(g: &Graph, removed: u32) -> usize {
    let n = g.n();
    let mut seen = removed;
    let mut count = 0;
    for s in 0..n {
        if seen >> s & 1 == 1 {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen |= 1 << s;
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if seen >> v & 1 == 0 {
                    seen |= 1 << v;
                    stack.push(v);
                }
            }
        }
    }
    count
}

/// Smallest separating set size, `n - 1` for complete graphs.
pub fn brute_kappa(g: &Graph) -> usize {
    let n = g.n();
    (0u32..(1 << n))
        .filter(|&m| components_without(g, m) >= 2)
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap_or(n.saturating_sub(1))
}

/// `min |S| / c(G - S)` over sets leaving at least two components; `None`
/// when no set does.
pub fn brute_toughness(g: &Graph) -> Option<Ratio> {
    let n = g.n();
    (0u32..(1 << n))
        .filter_map(|m| {
            let c = components_without(g, m);
            (c >= 2).then(|| Ratio::new(m.count_ones() as u64, c as u64))
        })
        .min()
}

pub fn random_graph(n: usize, p: f64, r: &mut ChaCha8Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| r.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

/// Random graph on `n` vertices with minimum degree at least `⌈n/2⌉`:
/// `G(n, p)` topped up with random non-edges at deficient vertices.
pub fn dirac_graph(n: usize, p: f64, r: &mut ChaCha8Rng) -> Graph {
    let need = n.div_ceil(2);
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))) {
        if r.gen_bool(p) {
            adj[u][v] = true;
            adj[v][u] = true;
        }
    }
    #[allow(clippy::needless_range_loop)]
    for u in 0..n {
        let mut missing: Vec<usize> = (0..n).filter(|&v| v != u && !adj[u][v]).collect();
        missing.shuffle(r);
        let mut deg = adj[u].iter().filter(|&&b| b).count();
        while deg < need {
            let v = missing.pop().expect("enough non-neighbours");
            adj[u][v] = true;
            adj[v][u] = true;
            deg += 1;
        }
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| adj[u][v])
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

/// Whether `g` is exactly `K_{n/2, n/2}`.
pub fn is_balanced_complete_bipartite(g: &Graph) -> bool {
    let n = g.n();
    if !n.is_multiple_of(2) || g.m() != n * n / 4 {
        return false;
    }
    // 2-colour from vertex 0 and check both sides have n/2 vertices.
    let mut side = vec![usize::MAX; n];
    side[0] = 0;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if side[v] == usize::MAX {
                side[v] = 1 - side[u];
                stack.push(v);
            } else if side[v] == side[u] {
                return false;
            }
        }
    }
    side.iter().all(|&s| s != usize::MAX) && side.iter().filter(|&&s| s == 0).count() == n / 2
}

/// `K_n` minus a uniformly random perfect matching (`n` even).
pub fn complete_minus_matching(n: usize, r: &mut ChaCha8Rng) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    let mut matched = vec![usize::MAX; n];
    for pair in order.chunks(2) {
        matched[pair[0]] = pair[1];
        matched[pair[1]] = pair[0];
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| matched[u] != v)
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

/// `r` pairs on `2r` distinct random vertices.
pub fn random_pairs(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut vs: Vec<usize> = (0..n).collect();
    vs.shuffle(rng);
    vs[..2 * r].chunks(2).map(|c| (c[0], c[1])).collect()
}
