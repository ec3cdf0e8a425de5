use serde::Serialize;

use crate::error::{Error, Result};

/// Maximum matching of an explicit bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub size: usize,
    /// `(left, right)` pairs, sorted by left vertex.
    pub pairs: Vec<(usize, usize)>,
}

fn augment(v: usize, adj: &[Vec<usize>], seen: &mut [bool], mate: &mut [usize]) -> bool {
    for &r in &adj[v] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if mate[r] == usize::MAX || augment(mate[r], adj, seen, mate) {
            mate[r] = v;
            return true;
        }
    }
    false
}

/// Augmenting-path matching. Edges are `(left, right)` with
/// `left < left_size` and `right < right_size`.
pub fn bipartite_max_matching(
    left_size: usize,
    right_size: usize,
    edges: &[(usize, usize)],
) -> Result<Matching> {
    let mut adj = vec![Vec::new(); left_size];
    for &(l, r) in edges {
        if l >= left_size || r >= right_size {
            return Err(Error::input(format!(
                "edge ({l}, {r}) outside {left_size}x{right_size} bipartition"
            )));
        }
        adj[l].push(r);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let mut mate = vec![usize::MAX; right_size];
    let mut seen = vec![false; right_size];
    for v in 0..left_size {
        seen.iter_mut().for_each(|s| *s = false);
        augment(v, &adj, &mut seen, &mut mate);
    }
    let mut pairs: Vec<(usize, usize)> = mate
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l != usize::MAX)
        .map(|(r, &l)| (l, r))
        .collect();
    pairs.sort_unstable();
    Ok(Matching {
        size: pairs.len(),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let all: Vec<_> = (0..3).flat_map(|l| (0..5).map(move |r| (l, r))).collect();
        assert_eq!(bipartite_max_matching(3, 5, &all).unwrap().size, 3);
        assert_eq!(bipartite_max_matching(4, 4, &[]).unwrap().size, 0);
        assert!(bipartite_max_matching(2, 2, &[(2, 0)]).is_err());
    }

    #[test]
    fn needs_augmentation() {
        // Greedy would match 0-0 and leave 1 stranded.
        let m = bipartite_max_matching(2, 2, &[(0, 0), (0, 1), (1, 0)]).unwrap();
        assert_eq!(m.pairs, vec![(0, 1), (1, 0)]);
    }
}
