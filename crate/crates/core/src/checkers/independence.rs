use serde::Serialize;

use crate::bits::{Bits, MAX_BITS};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

use super::Limits;

/// Independence number with a maximum independent set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Independence {
    pub alpha: usize,
    pub witness: VertexSet,
}

/// Maximum clique search in the complement with greedy-colouring bounds.
struct CliqueSearch {
    adj: Vec<Bits>,
    current: Vec<usize>,
    best: Vec<usize>,
}

impl CliqueSearch {
    /// Candidates of `p` in colour order, paired with their colour number.
    fn colour(&self, p: &Bits) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(p.len());
        let mut uncoloured = *p;
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut q = uncoloured;
            while let Some(v) = q.first() {
                q.remove(v);
                uncoloured.remove(v);
                q = q.minus(&self.adj[v]);
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, mut p: Bits) {
        let order = self.colour(&p);
        for &(v, c) in order.iter().rev() {
            if self.current.len() + c <= self.best.len() {
                return;
            }
            self.current.push(v);
            let np = p.and(&self.adj[v]);
            if np.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(np);
            }
            self.current.pop();
            p.remove(v);
        }
    }
}

pub fn independence_number(g: &Graph, limits: &Limits) -> Result<Independence> {
    let n = g.n();
    let cap = limits.alpha_max.min(MAX_BITS);
    if n > cap {
        return Err(Error::Capacity {
            what: "vertices for independence number",
            limit: cap,
            got: n,
        });
    }
    let all = Bits::full(n);
    let adj = (0..n)
        .map(|v| {
            let mut c = all.minus(&Bits::from_iter(g.neighbors(v).iter().copied()));
            c.remove(v);
            c
        })
        .collect();
    let mut s = CliqueSearch {
        adj,
        current: Vec::new(),
        best: Vec::new(),
    };
    if n > 0 {
        s.expand(all);
    }
    Ok(Independence {
        alpha: s.best.len(),
        witness: VertexSet::new(s.best),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(g: &Graph) -> usize {
        let r = independence_number(g, &Limits::default()).unwrap();
        for (i, &u) in r.witness.as_slice().iter().enumerate() {
            for &v in &r.witness.as_slice()[i + 1..] {
                assert!(!g.has_edge(u, v));
            }
        }
        assert_eq!(r.witness.len(), r.alpha);
        r.alpha
    }

    #[test]
    fn examples() {
        assert_eq!(alpha(&Graph::cycle(5)), 2);
        assert_eq!(alpha(&Graph::complete_bipartite(3, 5)), 5);
        assert_eq!(alpha(&Graph::petersen()), 4);
        assert_eq!(alpha(&Graph::empty(7)), 7);
        assert_eq!(alpha(&Graph::complete(7)), 1);
        assert_eq!(alpha(&Graph::empty(0)), 0);
    }

    #[test]
    fn capacity() {
        let lim = Limits {
            alpha_max: 10,
            ..Limits::default()
        };
        assert!(independence_number(&Graph::empty(11), &lim).is_err());
    }
}
