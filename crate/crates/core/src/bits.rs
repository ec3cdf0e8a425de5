//! Fixed-width vertex bitsets used by the exact solvers.

use crate::graph::{Digraph, Graph};

pub(crate) const WORDS: usize = 4;
/// Largest vertex count the bitset solvers accept.
pub(crate) const MAX_BITS: usize = WORDS * 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub(crate) struct Bits([u64; WORDS]);

impl Bits {
    pub const EMPTY: Bits = Bits([0; WORDS]);

    pub fn full(n: usize) -> Bits {
        let mut b = Bits::EMPTY;
        for v in 0..n {
            b.insert(v);
        }
        b
    }

    pub fn from_iter(it: impl IntoIterator<Item = usize>) -> Bits {
        let mut b = Bits::EMPTY;
        for v in it {
            b.insert(v);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0[v >> 6] |= 1 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0[v >> 6] &= !(1 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.0[v >> 6] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn and(&self, o: &Bits) -> Bits {
        let mut r = *self;
        for i in 0..WORDS {
            r.0[i] &= o.0[i];
        }
        r
    }

    #[inline]
    pub fn or(&self, o: &Bits) -> Bits {
        let mut r = *self;
        for i in 0..WORDS {
            r.0[i] |= o.0[i];
        }
        r
    }

    #[inline]
    pub fn minus(&self, o: &Bits) -> Bits {
        let mut r = *self;
        for i in 0..WORDS {
            r.0[i] &= !o.0[i];
        }
        r
    }

    #[inline]
    pub fn and_len(&self, o: &Bits) -> usize {
        (0..WORDS)
            .map(|i| (self.0[i] & o.0[i]).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn first(&self) -> Option<usize> {
        for (i, &w) in self.0.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> BitsIter {
        BitsIter {
            words: self.0,
            idx: 0,
        }
    }
}

pub(crate) struct BitsIter {
    words: [u64; WORDS],
    idx: usize,
}

impl Iterator for BitsIter {
    type Item = usize;
    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.idx < WORDS {
            let w = self.words[self.idx];
            if w != 0 {
                self.words[self.idx] = w & (w - 1);
                return Some(self.idx * 64 + w.trailing_zeros() as usize);
            }
            self.idx += 1;
        }
        None
    }
}

pub(crate) fn graph_bits(g: &Graph) -> Vec<Bits> {
    (0..g.n())
        .map(|v| Bits::from_iter(g.neighbors(v).iter().copied()))
        .collect()
}

pub(crate) fn out_bits(d: &Digraph) -> Vec<Bits> {
    (0..d.n())
        .map(|v| Bits::from_iter(d.out_neighbors(v).iter().copied()))
        .collect()
}

pub(crate) fn in_bits(d: &Digraph) -> Vec<Bits> {
    (0..d.n())
        .map(|v| Bits::from_iter(d.in_neighbors(v).iter().copied()))
        .collect()
}

/// Vertices of `within` reachable from `from` (which must lie in `within`).
pub(crate) fn reach(adj: &[Bits], within: &Bits, from: usize) -> Bits {
    let mut seen = Bits::EMPTY;
    seen.insert(from);
    let mut frontier = seen;
    while !frontier.is_empty() {
        let mut next = Bits::EMPTY;
        for v in frontier.iter() {
            next = next.or(&adj[v]);
        }
        next = next.and(within).minus(&seen);
        seen = seen.or(&next);
        frontier = next;
    }
    seen
}

/// BFS distance from `from` to `to` inside `within ∪ {from, to}`, if finite.
pub(crate) fn distance(adj: &[Bits], within: &Bits, from: usize, to: usize) -> Option<usize> {
    if from == to {
        return Some(0);
    }
    let mut allowed = *within;
    allowed.insert(to);
    let mut seen = Bits::EMPTY;
    seen.insert(from);
    let mut frontier = seen;
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Bits::EMPTY;
        for v in frontier.iter() {
            next = next.or(&adj[v]);
        }
        next = next.and(&allowed).minus(&seen);
        if next.contains(to) {
            return Some(d);
        }
        seen = seen.or(&next);
        frontier = next;
    }
    None
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns `false`. Returns `false` if stopped early.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return true;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Number of connected components of the subgraph induced by `within`.
pub(crate) fn component_count(adj: &[Bits], within: &Bits) -> usize {
    let mut rest = *within;
    let mut count = 0;
    while let Some(v) = rest.first() {
        let comp = reach(adj, &rest, v);
        rest = rest.minus(&comp);
        count += 1;
    }
    count
}
