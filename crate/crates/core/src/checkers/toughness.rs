use serde::Serialize;

use crate::bits::{self, Bits, MAX_BITS};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::ratio::Ratio;

use super::{independence_number, Budget, Limits, Verdict};

/// Exact toughness with a minimising separator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToughnessReport {
    /// `None` when no vertex set disconnects the graph, i.e. toughness is
    /// infinite (complete graphs).
    pub toughness: Option<Ratio>,
    pub witness_set: Option<VertexSet>,
    /// Components left by removing the witness.
    pub components: usize,
}

fn separated(adj: &[Bits], n: usize, s: &[usize]) -> usize {
    let rest = Bits::full(n).minus(&Bits::from_iter(s.iter().copied()));
    bits::component_count(adj, &rest)
}

/// Minimum of `|S| / c(G - S)` over all `S` with `c(G - S) >= 2`, by full
/// enumeration. Ties go to the smaller, then lexicographically first, set.
pub fn toughness(g: &Graph, limits: &Limits) -> Result<ToughnessReport> {
    let n = g.n();
    let cap = limits.toughness_max.min(MAX_BITS);
    if n > cap {
        return Err(Error::Capacity {
            what: "vertices for exact toughness",
            limit: cap,
            got: n,
        });
    }
    let adj = bits::graph_bits(g);
    let mut best: Option<(Ratio, Vec<usize>, usize)> = None;
    for k in 0..n.saturating_sub(1) {
        bits::for_each_subset(n, k, |s| {
            let c = separated(&adj, n, s);
            if c >= 2 {
                let r = Ratio::new(k as u64, c as u64);
                if best.as_ref().is_none_or(|(b, _, _)| r < *b) {
                    best = Some((r, s.to_vec(), c));
                }
            }
            true
        });
    }
    Ok(match best {
        Some((r, s, c)) => ToughnessReport {
            toughness: Some(r),
            witness_set: Some(VertexSet::new(s)),
            components: c,
        },
        None => ToughnessReport {
            toughness: None,
            witness_set: None,
            components: usize::from(n > 0),
        },
    })
}

/// Decides whether `g` is `t`-tough: every `S` leaves at most
/// `max(1, |S|/t)` components. `No` carries a smallest violating set.
///
/// Only sets with `|S| < t·α(G)` can violate the condition, which bounds the
/// enumeration; beyond [`Limits::toughness_max`] the enumeration is also
/// charged against the node budget.
pub fn is_t_tough(g: &Graph, t: Ratio, limits: &Limits) -> Result<Verdict<(), VertexSet>> {
    let n = g.n();
    if n > MAX_BITS {
        return Err(Error::Capacity {
            what: "vertices for toughness",
            limit: MAX_BITS,
            got: n,
        });
    }
    if t.num == 0 || n < 2 {
        return Ok(Verdict::Yes(()));
    }
    let alpha = independence_number(g, limits)?.alpha as u64;
    let adj = bits::graph_bits(g);
    let bounded = n > limits.toughness_max;
    let mut budget = Budget::new(limits.node_budget);
    let mut out_of_budget = false;
    let mut violation = None;
    for k in 0..n - 1 {
        if (k as u64) * t.den >= t.num * alpha {
            break;
        }
        let done = bits::for_each_subset(n, k, |s| {
            if bounded && !budget.tick() {
                out_of_budget = true;
                return false;
            }
            let c = separated(&adj, n, s) as u64;
            if c >= 2 && (k as u64) * t.den < t.num * c {
                violation = Some(VertexSet::new(s.to_vec()));
                return false;
            }
            true
        });
        if !done {
            break;
        }
    }
    Ok(match violation {
        Some(s) => Verdict::No(s),
        None if out_of_budget => Verdict::Indeterminate,
        None => Verdict::Yes(()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, FamilySpec};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn exact_examples() {
        let c6 = toughness(&Graph::cycle(6), &lim()).unwrap();
        assert_eq!(c6.toughness, Some(Ratio::integer(1)));
        let kb = toughness(&Graph::complete_bipartite(3, 4), &lim()).unwrap();
        assert_eq!(kb.toughness, Some(Ratio::new(3, 4)));
        assert_eq!(kb.witness_set, Some(VertexSet::new(vec![0, 1, 2])));
        assert_eq!(kb.components, 4);
        let k5 = toughness(&Graph::complete(5), &lim()).unwrap();
        assert_eq!((k5.toughness, k5.witness_set), (None, None));
        let disc = toughness(&Graph::empty(3), &lim()).unwrap();
        assert_eq!(disc.toughness, Some(Ratio::integer(0)));
    }

    #[test]
    fn bounded_examples() {
        assert!(is_t_tough(&Graph::complete(10), Ratio::integer(1), &lim())
            .unwrap()
            .is_yes());
        assert!(is_t_tough(&Graph::cycle(12), Ratio::integer(1), &lim())
            .unwrap()
            .is_yes());
        assert!(is_t_tough(&Graph::cycle(12), Ratio::new(11, 10), &lim())
            .unwrap()
            .is_no());
        let iab = build_family(&FamilySpec::IAB { n: 14, k: 6 }).unwrap();
        // I = 0..5, A = 5..8.
        assert_eq!(
            is_t_tough(&iab, Ratio::integer(1), &lim()).unwrap(),
            Verdict::No(VertexSet::new(vec![5, 6, 7]))
        );
    }

    #[test]
    fn capacity() {
        assert!(toughness(&Graph::cycle(21), &lim()).is_err());
    }
}
