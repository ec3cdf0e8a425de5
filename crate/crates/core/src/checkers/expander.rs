use crate::bits::{self, Bits, MAX_BITS};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::ratio::Ratio;

use super::Verdict;

/// Subsets the exhaustive check is willing to visit.
const SUBSET_CAP: u128 = 1 << 24;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Whether `|N(S)| >= d·|S|` for every non-empty `S` with `|S| <= k`.
/// `No` carries a violating set, smallest size first then lexicographic.
pub fn expander_check(g: &Graph, k: usize, d: Ratio) -> Result<Verdict<(), VertexSet>> {
    let n = g.n();
    if n > MAX_BITS {
        return Err(Error::Capacity {
            what: "vertices for expander check",
            limit: MAX_BITS,
            got: n,
        });
    }
    let k = k.min(n);
    let total: u128 = (1..=k).map(|s| binomial(n, s)).sum();
    if total > SUBSET_CAP {
        return Err(Error::Capacity {
            what: "subsets for expander check",
            limit: SUBSET_CAP as usize,
            got: total.min(usize::MAX as u128) as usize,
        });
    }
    let adj = bits::graph_bits(g);
    let mut witness = None;
    for size in 1..=k {
        let done = bits::for_each_subset(n, size, |s| {
            let set = Bits::from_iter(s.iter().copied());
            let nb = s
                .iter()
                .fold(Bits::EMPTY, |acc, &v| acc.or(&adj[v]))
                .minus(&set);
            if (nb.len() as u64) * d.den < d.num * size as u64 {
                witness = Some(VertexSet::new(s.to_vec()));
                return false;
            }
            true
        });
        if !done {
            break;
        }
    }
    Ok(match witness {
        Some(s) => Verdict::No(s),
        None => Verdict::Yes(()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let two = Ratio::integer(2);
        assert!(expander_check(&Graph::complete(9), 3, two)
            .unwrap()
            .is_yes());
        assert!(expander_check(&Graph::complete(9), 4, two).unwrap().is_no());
        let k4 = Graph::complete(4);
        let pair = k4.disjoint_union(&k4);
        assert!(expander_check(&pair, 1, two).unwrap().is_yes());
        let Verdict::No(s) = expander_check(&pair, 4, two).unwrap() else {
            panic!("two disjoint K4 are not (4,2)-expanding");
        };
        let nb = pair.neighborhood(&s).unwrap();
        assert!(nb.len() < 2 * s.len());
        // A whole K4 has empty external neighbourhood.
        let block = VertexSet::new(vec![0, 1, 2, 3]);
        assert!(pair.neighborhood(&block).unwrap().is_empty());
    }

    #[test]
    fn capacity() {
        assert!(expander_check(&Graph::empty(100), 10, Ratio::integer(1)).is_err());
        assert_eq!(binomial(10, 3), 120);
    }
}
