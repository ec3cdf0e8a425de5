//! Seeded samplers for `G(n,p)`, `D(n,p)`, perturbation and two-round
//! exposure.
//!
//! Every potential edge owns a uniform in `[0, 1)` obtained by hashing
//! `(seed, stream, u, v)`; the edge is present iff that uniform is below
//! `p`. Samples therefore do not depend on evaluation order, and for a fixed
//! seed the sample at `p` is a subgraph of the sample at any `p' >= p`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

/// 64-bit experiment seed. Parses from decimal or `0x`-prefixed hex.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl FromStr for Seed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let parsed = if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            u64::from_str_radix(hex, 16)
        } else {
            t.parse::<u64>()
        };
        parsed
            .map(Seed)
            .map_err(|_| Error::input(format!("invalid seed {s:?}")))
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Seed {
    /// Child seed for a labelled sub-experiment.
    pub fn derive(self, a: u64, b: u64) -> Seed {
        Seed(mix(self.0, STREAM_DERIVE, a, b))
    }
}

/// Edge probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EdgeProbability(f64);

impl EdgeProbability {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(EdgeProbability(p))
        } else {
            Err(Error::input(format!("probability {p} outside [0, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for EdgeProbability {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        EdgeProbability::new(p)
    }
}

impl From<EdgeProbability> for f64 {
    fn from(p: EdgeProbability) -> f64 {
        p.0
    }
}

impl FromStr for EdgeProbability {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let v = if let Some((a, b)) = s.split_once('/') {
            let a: f64 = a
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad p {s:?}")))?;
            let b: f64 = b
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad p {s:?}")))?;
            a / b
        } else {
            s.parse()
                .map_err(|_| Error::input(format!("bad p {s:?}")))?
        };
        EdgeProbability::new(v)
    }
}

const STREAM_GRAPH: u64 = 0x6772_6170_6800_0001;
const STREAM_DIGRAPH: u64 = 0x6469_6772_6100_0002;
const STREAM_DERIVE: u64 = 0x6465_7269_7600_0003;
const STREAM_ROUND: u64 = 0x726f_756e_6400_0004;

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based 64-bit hash of four words.
#[inline]
pub(crate) fn mix(seed: u64, stream: u64, a: u64, b: u64) -> u64 {
    let mut h = splitmix(seed ^ splitmix(stream));
    h = splitmix(h ^ a);
    splitmix(h ^ b.rotate_left(32))
}

#[inline]
fn to_unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The uniform attached to the unordered pair `{u, v}` under `seed`.
#[inline]
pub fn pair_uniform(seed: Seed, u: usize, v: usize) -> f64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    to_unit(mix(seed.0, STREAM_GRAPH, a as u64, b as u64))
}

/// Whether `{u, v}` is an edge of `sample_gnp(_, p, seed)`.
#[inline]
pub fn pair_present(seed: Seed, p: EdgeProbability, u: usize, v: usize) -> bool {
    pair_uniform(seed, u, v) < p.0
}

#[inline]
fn arc_uniform(seed: Seed, u: usize, v: usize) -> f64 {
    to_unit(mix(seed.0, STREAM_DIGRAPH, u as u64, v as u64))
}

/// Binomial random graph `G(n, p)`.
pub fn sample_gnp(n: usize, p: EdgeProbability, seed: Seed) -> Graph {
    let mut adj = vec![Vec::new(); n];
    if p.0 > 0.0 {
        for u in 0..n {
            for v in u + 1..n {
                if pair_present(seed, p, u, v) {
                    adj[u].push(v);
                    adj[v].push(u);
                }
            }
        }
    }
    Graph::from_raw_adj(adj)
}

/// Random digraph `D(n, p)` over all `n(n-1)` ordered pairs.
pub fn sample_dnp(n: usize, p: EdgeProbability, seed: Seed) -> Digraph {
    let mut out = vec![Vec::new(); n];
    if p.0 > 0.0 {
        for (u, list) in out.iter_mut().enumerate() {
            for v in 0..n {
                if u != v && arc_uniform(seed, u, v) < p.0 {
                    list.push(v);
                }
            }
        }
    }
    Digraph::from_raw_out(out)
}

/// `g ∪ G(n, p)`.
pub fn perturb(g: &Graph, p: EdgeProbability, seed: Seed) -> Graph {
    g.union(&sample_gnp(g.n(), p, seed))
        .expect("sizes agree by construction")
}

/// Per-round probability `q` with `(1 - q)^2 = 1 - p`.
pub fn split_two_rounds(p: EdgeProbability) -> (EdgeProbability, EdgeProbability) {
    let q = if p.0 >= 1.0 {
        1.0
    } else {
        // 1 - sqrt(1 - p), computed without cancellation for small p.
        -(0.5 * (-p.0).ln_1p()).exp_m1()
    };
    let q = EdgeProbability(q.clamp(0.0, 1.0));
    (q, q)
}

/// Two independent rounds at the split probability; their union has the law
/// of `G(n, p)`.
pub fn sample_two_rounds(n: usize, p: EdgeProbability, seed: Seed) -> (Graph, Graph) {
    let (q1, q2) = split_two_rounds(p);
    let s1 = Seed(mix(seed.0, STREAM_ROUND, 1, 0));
    let s2 = Seed(mix(seed.0, STREAM_ROUND, 2, 0));
    (sample_gnp(n, q1, s1), sample_gnp(n, q2, s2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> EdgeProbability {
        EdgeProbability::new(v).unwrap()
    }

    #[test]
    fn extremes() {
        assert_eq!(sample_gnp(7, p(0.0), Seed(3)), Graph::empty(7));
        assert_eq!(sample_gnp(7, p(1.0), Seed(3)), Graph::complete(7));
        assert_eq!(sample_dnp(5, p(1.0), Seed(3)), Digraph::complete(5));
        assert_eq!(sample_dnp(5, p(0.0), Seed(3)).arc_count(), 0);
    }

    #[test]
    fn perturb_identities() {
        let k = Graph::complete(8);
        assert_eq!(perturb(&k, p(0.3), Seed(1)), k);
        let c = Graph::cycle(9);
        assert_eq!(perturb(&c, p(0.0), Seed(1)), c);
        assert_eq!(
            perturb(&Graph::empty(10), p(1.0), Seed(1)),
            Graph::complete(10)
        );
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_two_rounds(p(0.0)).0.value(), 0.0);
        assert_eq!(split_two_rounds(p(1.0)).0.value(), 1.0);
        assert!((split_two_rounds(p(0.75)).0.value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_round_identity_and_lower_bound() {
        for i in 0..=1000 {
            let pv = i as f64 / 1000.0;
            let (q, _) = split_two_rounds(p(pv));
            let q = q.value();
            assert!(
                (1.0 - (1.0 - q) * (1.0 - q) - pv).abs() <= 1e-12,
                "p = {pv}"
            );
            assert!(q >= pv / 2.0);
        }
        let (q, _) = split_two_rounds(p(1e-9));
        assert!((q.value() - 5.000000001250e-10).abs() < 1e-22);
    }

    #[test]
    fn seeds_parse() {
        assert_eq!("42".parse::<Seed>().unwrap(), Seed(42));
        assert_eq!("0xff".parse::<Seed>().unwrap(), Seed(255));
        assert!("-1".parse::<Seed>().is_err());
        assert!("0xzz".parse::<Seed>().is_err());
    }

    #[test]
    fn probability_rejects_out_of_range() {
        assert!(EdgeProbability::new(1.5).is_err());
        assert!(EdgeProbability::new(f64::NAN).is_err());
        assert!("1/400".parse::<EdgeProbability>().is_ok());
    }
}
