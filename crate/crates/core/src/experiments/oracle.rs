use std::collections::BTreeMap;

use serde::Serialize;

use crate::families::{FamilySpec, Layout};
use crate::random::EdgeProbability;

use super::Property;

/// Exact (or, where marked, approximate) probability of a property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleValue {
    pub probability: f64,
    pub exact: bool,
    pub method: String,
}

/// Largest number of block-count states the block-level sums visit.
const MAX_STATES: usize = 1 << 20;

/// `(1 - p)^e` without loss for small `p`.
fn absent(p: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if p >= 1.0 {
        0.0
    } else {
        (e * (-p).ln_1p()).exp()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Block sizes grouped as `(size, count)`.
fn size_types(sizes: &[usize]) -> Vec<(usize, usize)> {
    let mut m = BTreeMap::new();
    for &s in sizes {
        *m.entry(s).or_insert(0) += 1;
    }
    m.into_iter().collect()
}

/// Every count vector `b` with `b[t] <= c[t]`, in mixed-radix order.
fn count_vectors(types: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let states = types.iter().try_fold(1usize, |acc, &(_, c)| {
        acc.checked_mul(c + 1).filter(|&x| x <= MAX_STATES)
    })?;
    let mut out = Vec::with_capacity(states);
    let mut cur = vec![0; types.len()];
    loop {
        out.push(cur.clone());
        let mut t = 0;
        loop {
            if t == types.len() {
                return Some(out);
            }
            if cur[t] < types[t].1 {
                cur[t] += 1;
                break;
            }
            cur[t] = 0;
            t += 1;
        }
    }
}

/// `P(some block has no random edge leaving it)` by inclusion–exclusion
/// over sets of blocks, grouped by block size. A set of blocks with total
/// size `w` and sum of squared sizes `Q` has `wn - (w² + Q)/2` pairs leaving
/// it.
fn isolation(sizes: &[usize], p: f64) -> Option<f64> {
    let n: usize = sizes.iter().sum();
    let types = size_types(sizes);
    let mut total = 0.0;
    for b in count_vectors(&types)? {
        let k: usize = b.iter().sum();
        if k == 0 {
            continue;
        }
        let (mut w, mut q, mut ways) = (0.0, 0.0, 1.0);
        for (&bt, &(s, c)) in b.iter().zip(&types) {
            w += (bt * s) as f64;
            q += (bt * s * s) as f64;
            ways *= binomial(c, bt);
        }
        let e = w * n as f64 - (w * w + q) / 2.0;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * ways * absent(p, e);
    }
    Some(total.clamp(0.0, 1.0))
}

/// `P(the union of disjoint cliques with random edges is connected)`.
///
/// Contract each clique to a vertex; two groups of total sizes `w1, w2` see
/// no edge with probability `(1-p)^{w1·w2}`. The usual recurrence
/// `C(S) = 1 - Σ_{T ∋ s0, T ⊊ S} C(T)·(1-p)^{w(T)w(S∖T)}` runs over count
/// vectors, with `s0` a fixed block of the first nonempty size type.
fn connected(sizes: &[usize], p: f64) -> Option<f64> {
    let types = size_types(sizes);
    let states = count_vectors(&types)?;
    let radix: Vec<usize> = types.iter().map(|&(_, c)| c + 1).collect();
    let index = |b: &[usize]| {
        b.iter()
            .zip(&radix)
            .rev()
            .fold(0, |acc, (&x, &r)| acc * r + x)
    };
    let weight = |b: &[usize]| -> f64 {
        b.iter()
            .zip(&types)
            .map(|(&x, &(s, _))| (x * s) as f64)
            .sum()
    };
    let mut c = vec![0.0; states.len()];
    // Mixed-radix order lists every sub-vector before its super-vectors.
    for a in &states {
        let ia = index(a);
        let Some(t0) = a.iter().position(|&x| x > 0) else {
            c[ia] = 1.0;
            continue;
        };
        let wa = weight(a);
        let mut acc = 0.0;
        let sub_types: Vec<(usize, usize)> =
            a.iter().zip(&types).map(|(&x, &(s, _))| (s, x)).collect();
        for b in count_vectors(&sub_types)? {
            if b[t0] == 0 || b == *a {
                continue;
            }
            let mut ways = binomial(a[t0] - 1, b[t0] - 1);
            for t in 0..a.len() {
                if t != t0 {
                    ways *= binomial(a[t], b[t]);
                }
            }
            let wb = weight(&b);
            acc += ways * c[index(&b)] * absent(p, wb * (wa - wb));
        }
        c[ia] = 1.0 - acc;
    }
    Some(c[index(&states[states.len() - 1])].clamp(0.0, 1.0))
}

fn binomial_cdf_below(m: usize, q: f64, bound: usize) -> f64 {
    if bound == 0 {
        return 0.0;
    }
    if bound > m {
        return 1.0;
    }
    if q >= 1.0 {
        return 0.0;
    }
    let mut pmf = (m as f64 * (-q).ln_1p()).exp();
    let mut total = pmf;
    for j in 0..bound - 1 {
        pmf *= (m - j) as f64 / (j + 1) as f64 * q / (1.0 - q);
        total += pmf;
    }
    total.min(1.0)
}

/// Closed form for a structural event or for connectivity of a clique union.
/// `None` when the family/property pair has none, or the block-level sums
/// would exceed their state cap.
pub fn closed_form_oracle(
    spec: &FamilySpec,
    p: EdgeProbability,
    property: &Property,
) -> Option<OracleValue> {
    let layout = spec.layout().ok()?;
    let p = p.value();
    let sizes: Vec<usize> = layout.blocks().iter().map(|b| b.len()).collect();
    let exact = |probability: f64, method: &str| {
        Some(OracleValue {
            probability,
            exact: true,
            method: method.to_string(),
        })
    };
    match property {
        Property::NoCrossingEdge => {
            let n: usize = sizes.iter().sum();
            let inside: usize = sizes.iter().map(|s| s * s).sum();
            exact(
                absent(p, ((n * n - inside) / 2) as f64),
                "no-crossing-closed-form",
            )
        }
        Property::SomeCliqueIsolated => exact(isolation(&sizes, p)?, "inclusion-exclusion"),
        Property::Connected => match layout {
            Layout::Cliques(s) => exact(connected(&s, p)?, "quotient-recurrence"),
            // These seed graphs are connected already.
            Layout::Iab { .. } | Layout::Bipartite { .. } => exact(1.0, "connected-seed"),
        },
        &Property::IabLinkedBelow { bound } => {
            let Layout::Iab { i, b, .. } = layout else {
                return None;
            };
            let q = 1.0 - absent(p, (i + b - 1) as f64);
            Some(OracleValue {
                probability: binomial_cdf_below(i, q, bound),
                exact: false,
                method: "binomial-tail".to_string(),
            })
        }
        _ => None,
    }
}

/// `p` at which the closed form equals `target`, by bisection on `[0, 1]`.
/// `None` without a closed form or when the target is not crossed.
pub fn closed_form_threshold(spec: &FamilySpec, property: &Property, target: f64) -> Option<f64> {
    let f = |p: f64| {
        closed_form_oracle(spec, EdgeProbability::new(p).ok()?, property).map(|v| v.probability)
    };
    let (f0, f1) = (f(0.0)?, f(1.0)?);
    let increasing = f1 >= f0;
    let below = |v: f64| if increasing { v < target } else { v > target };
    if !below(f0) || below(f1) {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(f(mid)?) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64) -> EdgeProbability {
        EdgeProbability::new(x).unwrap()
    }

    /// Subset sums over individual cliques, no grouping.
    fn isolation_by_subsets(sizes: &[usize], p: f64) -> f64 {
        let n: usize = sizes.iter().sum();
        let k = sizes.len();
        let mut total = 0.0;
        for mask in 1u32..(1 << k) {
            let set: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let mut e = 0usize;
            for &i in &set {
                e += sizes[i] * (n - sizes[i]);
            }
            for (x, &i) in set.iter().enumerate() {
                for &j in &set[x + 1..] {
                    e -= sizes[i] * sizes[j];
                }
            }
            let sign = if set.len() % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * (1.0 - p).powi(e as i32);
        }
        total
    }

    /// Brute force over all edge subsets of the clique quotient.
    fn connected_by_enumeration(sizes: &[usize], p: f64) -> f64 {
        let k = sizes.len();
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        let mut total = 0.0;
        for mask in 0u32..(1 << pairs.len()) {
            let mut prob = 1.0;
            let mut parent: Vec<usize> = (0..k).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            for (e, &(i, j)) in pairs.iter().enumerate() {
                let q = 1.0 - (1.0 - p).powi((sizes[i] * sizes[j]) as i32);
                if mask >> e & 1 == 1 {
                    prob *= q;
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                } else {
                    prob *= 1.0 - q;
                }
            }
            let root = find(&mut parent, 0);
            if (0..k).all(|v| find(&mut parent, v) == root) {
                total += prob;
            }
        }
        total
    }

    #[test]
    fn two_cliques_crossing_edge() {
        let spec = FamilySpec::TwoCliques { n: 40 };
        let v = closed_form_oracle(&spec, p(1.0 / 400.0), &Property::NoCrossingEdge).unwrap();
        assert!((v.probability - 0.367419).abs() < 1e-6, "{}", v.probability);
        let c = closed_form_oracle(&spec, p(1.0 / 400.0), &Property::Connected).unwrap();
        assert!((c.probability - (1.0 - 0.9975f64.powi(400))).abs() < 1e-12);
        let m = FamilySpec::MCliques { n: 40, m: 2 };
        for prop in [
            Property::NoCrossingEdge,
            Property::Connected,
            Property::SomeCliqueIsolated,
        ] {
            let a = closed_form_oracle(&spec, p(0.003), &prop)
                .unwrap()
                .probability;
            let b = closed_form_oracle(&m, p(0.003), &prop).unwrap().probability;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn isolation_at_zero_and_one() {
        let spec = FamilySpec::CliqueForest { n: 20, d: 3, k: 4 };
        assert_eq!(
            closed_form_oracle(&spec, p(0.0), &Property::SomeCliqueIsolated)
                .unwrap()
                .probability,
            1.0
        );
        assert_eq!(
            closed_form_oracle(&spec, p(1.0), &Property::SomeCliqueIsolated)
                .unwrap()
                .probability,
            0.0
        );
        assert_eq!(
            closed_form_oracle(&spec, p(0.0), &Property::Connected)
                .unwrap()
                .probability,
            0.0
        );
        assert_eq!(
            closed_form_oracle(&spec, p(1.0), &Property::Connected)
                .unwrap()
                .probability,
            1.0
        );
    }

    #[test]
    fn grouped_sums_match_plain_subsets() {
        for sizes in [
            vec![4, 4, 4, 8],
            vec![2, 3, 5, 7, 11],
            vec![6; 10],
            vec![3, 3, 30],
        ] {
            for x in [0.001, 0.01, 0.05] {
                let a = isolation(&sizes, x).unwrap();
                let b = isolation_by_subsets(&sizes, x);
                assert!((a - b).abs() < 1e-9, "{sizes:?} {x}: {a} vs {b}");
            }
        }
        for sizes in [
            vec![4, 4, 4, 8],
            vec![2, 3, 5, 7],
            vec![5, 5, 5, 5, 5],
            vec![1, 2],
        ] {
            for x in [0.005, 0.02, 0.1] {
                let a = connected(&sizes, x).unwrap();
                let b = connected_by_enumeration(&sizes, x);
                assert!((a - b).abs() < 1e-9, "{sizes:?} {x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn thresholds() {
        let spec = FamilySpec::TwoCliques { n: 40 };
        let t = closed_form_threshold(&spec, &Property::Connected, 0.5).unwrap();
        // (1-p)^400 = 1/2.
        let exact = 1.0 - 0.5f64.powf(1.0 / 400.0);
        assert!((t - exact).abs() < 1e-12);
        assert!((t - 4.0 * 2f64.ln() / 1600.0).abs() / t < 0.01);
        let d = closed_form_threshold(&spec, &Property::NoCrossingEdge, 0.5).unwrap();
        assert!((d - exact).abs() < 1e-12);
        assert!(closed_form_threshold(&spec, &Property::Hamiltonian, 0.5).is_none());
    }

    #[test]
    fn iab_tail() {
        let spec = FamilySpec::IAB { n: 2000, k: 100 };
        let v = closed_form_oracle(
            &spec,
            p(1.0 / 6000.0),
            &Property::IabLinkedBelow { bound: 50 },
        )
        .unwrap();
        assert!(!v.exact);
        assert!(v.probability > 0.99);
        assert!((binomial_cdf_below(4, 0.5, 3) - 11.0 / 16.0).abs() < 1e-12);
        assert_eq!(binomial_cdf_below(4, 0.5, 0), 0.0);
        assert_eq!(binomial_cdf_below(4, 0.5, 5), 1.0);
    }

    #[test]
    fn unsupported_pairs() {
        let spec = FamilySpec::TwoCliques { n: 10 };
        assert!(closed_form_oracle(&spec, p(0.1), &Property::Hamiltonian).is_none());
        assert!(
            closed_form_oracle(&spec, p(0.1), &Property::IabLinkedBelow { bound: 2 }).is_none()
        );
    }
}
