use serde::Serialize;

use crate::checkers::connectivity::separator_below;
use crate::checkers::vertex_connectivity;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

use super::Refusal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "bfkm")]
    Bfkm,
    #[serde(rename = "lemma29")]
    Lemma29,
}

/// Vertex partition with per-block connectivity measured on the output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionResult {
    pub blocks: Vec<VertexSet>,
    /// `κ(G[V_i])`, computed after the fact.
    pub per_block_connectivity: Vec<usize>,
    /// Connectivity every block was required to reach.
    pub target: usize,
    pub method: Method,
}

fn better(cand: &VertexSet, best: &Option<VertexSet>) -> bool {
    match best {
        None => true,
        Some(b) => cand.len() > b.len() || (cand.len() == b.len() && cand.min() < b.min()),
    }
}

/// Largest set found inside `within` whose induced subgraph is
/// `target`-connected; ties go to the smaller minimum label.
///
/// Peels vertices of degree below `target`, then splits each surviving
/// component along minimum separators until the pieces are certified.
pub(crate) fn extract_within(g: &Graph, within: &VertexSet, target: usize) -> Option<VertexSet> {
    if target == 0 {
        return (!within.is_empty()).then(|| within.clone());
    }
    let mut best: Option<VertexSet> = None;
    let mut stack = vec![within.clone()];
    while let Some(set) = stack.pop() {
        let core = g.core_within(&set, target);
        if core.is_empty() {
            continue;
        }
        let induced = g.induced(&core).expect("subset of host");
        for comp in induced.graph.connected_components() {
            let comp = induced.lift_set(&comp);
            if comp.len() <= target || !better(&comp, &best) {
                continue;
            }
            let sub = g.induced(&comp).expect("subset of host");
            match separator_below(&sub.graph, target) {
                None => best = Some(comp),
                Some(cut) => {
                    let rest = sub.graph.remove(&cut).expect("subset");
                    for piece in rest.graph.connected_components() {
                        let local: VertexSet = rest.lift_set(&piece).union(&cut);
                        stack.push(sub.lift_set(&local));
                    }
                }
            }
        }
    }
    best
}

/// A large vertex set inducing a `target`-connected subgraph, or `None`
/// when the search finds none.
pub fn extract_highly_connected(g: &Graph, target: usize) -> Option<VertexSet> {
    extract_within(g, &VertexSet::full(g.n()), target)
}

/// Moves every vertex of `rest` with at least `need` neighbours in some block
/// into the first such block, repeating until nothing moves.
fn attach(g: &Graph, blocks: &mut [VertexSet], rest: &mut VertexSet, need: usize) {
    let n = g.n();
    let mut masks: Vec<Vec<bool>> = blocks.iter().map(|b| b.mask(n)).collect();
    loop {
        let mut moved = Vec::new();
        for v in rest.iter() {
            if let Some(i) = masks.iter().position(|m| g.degree_into(v, m) >= need) {
                masks[i][v] = true;
                moved.push((i, v));
            }
        }
        if moved.is_empty() {
            break;
        }
        for (i, v) in moved {
            blocks[i] = blocks[i].union(&VertexSet::new(vec![v]));
        }
        let gone: VertexSet = blocks.iter().flat_map(|b| b.iter()).collect();
        *rest = rest.difference(&gone);
    }
}

fn connectivities(g: &Graph, blocks: &[VertexSet]) -> Vec<usize> {
    blocks
        .iter()
        .map(|b| vertex_connectivity(&g.induced(b).expect("block").graph).kappa)
        .collect()
}

fn require_min_degree(g: &Graph) -> Result<usize> {
    let d = if g.n() == 0 { 0 } else { g.min_degree() };
    if d == 0 {
        return Err(Error::input("partition requires minimum degree at least 1"));
    }
    Ok(d)
}

/// Partition into blocks of connectivity at least `⌈k²/16n⌉` and size at
/// least `k/8`, where `k = δ(g)`.
///
/// Blocks are first extracted at the stronger target `max(⌈k²/16n⌉,
/// ⌈k/4⌉)`, leftovers are attached to the first block where they have
/// enough neighbours, and whatever remains is extracted at the weaker target.
pub fn partition_bfkm(g: &Graph) -> Result<std::result::Result<PartitionResult, Refusal>> {
    let k = require_min_degree(g)?;
    let n = g.n();
    let c = (k * k).div_ceil(16 * n).max(1);
    let high = c.max(k.div_ceil(4));
    let mut blocks = Vec::new();
    let mut rest = VertexSet::full(n);
    while let Some(a) = extract_within(g, &rest, high) {
        rest = rest.difference(&a);
        blocks.push(a);
    }
    attach(g, &mut blocks, &mut rest, c);
    while !rest.is_empty() {
        let Some(a) = extract_within(g, &rest, c) else {
            let v = rest.as_slice()[0];
            return Ok(Err(Refusal::vertex(
                "attach",
                format!("vertex {v} has fewer than {c} neighbours in every block"),
                v,
            )));
        };
        rest = rest.difference(&a);
        blocks.push(a);
        attach(g, &mut blocks, &mut rest, c);
    }
    let kappas = connectivities(g, &blocks);
    for (i, (b, &kappa)) in blocks.iter().zip(&kappas).enumerate() {
        if kappa < c || 8 * b.len() < k {
            return Ok(Err(Refusal::block(
                "verify",
                format!(
                    "block {i}: size {} (need >= {k}/8), connectivity {kappa} (need >= {c})",
                    b.len()
                ),
                i,
            )));
        }
    }
    Ok(Ok(PartitionResult {
        blocks,
        per_block_connectivity: kappas,
        target: c,
        method: Method::Bfkm,
    }))
}

/// Thresholds derived from `δ`, the independence bound and natural `ln n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma29Params {
    pub delta: usize,
    pub alpha: usize,
    pub logn: f64,
    /// `δ / (20 α ln n)`.
    pub block_conn_target: f64,
    /// `δ / ln n`.
    pub extraction_conn: f64,
    /// `δ / (20 α ln n)`.
    pub attach_threshold: f64,
    /// `4 δ / ln n`.
    pub degeneracy_bound: f64,
}

impl Lemma29Params {
    pub fn new(n: usize, delta: usize, alpha: usize) -> Self {
        let logn = (n as f64).ln();
        let d = delta as f64;
        let a = alpha as f64;
        Lemma29Params {
            delta,
            alpha,
            logn,
            block_conn_target: d / (20.0 * a * logn),
            extraction_conn: d / logn,
            attach_threshold: d / (20.0 * a * logn),
            degeneracy_bound: 4.0 * d / logn,
        }
    }
}

/// Smallest integer at least `x` (integers only compare against reals
/// through their ceiling).
fn at_least(x: f64) -> usize {
    x.ceil().max(0.0) as usize
}

/// The four checked conclusions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma29Conclusions {
    /// `t <= 19 α ln n`.
    pub block_count: bool,
    /// Blocks with `|V_i| >= 0.1 n/α` cover at least `n/2` vertices.
    pub large_blocks_cover_half: bool,
    /// Every `|V_i| >= δ/ln n`.
    pub block_sizes: bool,
    /// Every `κ(G[V_i]) >= δ/(20 α ln n)`.
    pub block_connectivity: bool,
}

impl Lemma29Conclusions {
    pub fn all_hold(&self) -> bool {
        self.block_count
            && self.large_blocks_cover_half
            && self.block_sizes
            && self.block_connectivity
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma29Outcome {
    pub partition: PartitionResult,
    /// Indices of blocks with `|V_i| >= 0.1 n/α`.
    pub j: Vec<usize>,
    pub params: Lemma29Params,
    pub conclusions: Lemma29Conclusions,
    /// Whether the leftover set respected the degeneracy bound; the
    /// smallest-last order is used either way.
    pub leftover_degenerate: bool,
    pub leftover: usize,
}

/// Repeated extraction at `δ/ln n`, smallest-last ordering of the leftover,
/// and reattachment of each leftover vertex to the first block where it has
/// at least `δ/(20 α ln n)` neighbours.
pub fn partition_lemma29(
    g: &Graph,
    alpha_bound: usize,
) -> Result<std::result::Result<Lemma29Outcome, Refusal>> {
    let n = g.n();
    if n < 2 {
        return Err(Error::input("partition requires n >= 2"));
    }
    if alpha_bound == 0 {
        return Err(Error::input("alpha bound must be positive"));
    }
    let delta = require_min_degree(g)?;
    let params = Lemma29Params::new(n, delta, alpha_bound);
    let extract_at = at_least(params.extraction_conn).max(1);
    let attach_at = at_least(params.attach_threshold).max(1);

    let mut blocks: Vec<VertexSet> = Vec::new();
    let mut rest = VertexSet::full(n);
    while let Some(u) = extract_within(g, &rest, extract_at) {
        rest = rest.difference(&u);
        blocks.push(u);
    }

    let leftover = rest.len();
    let w = g.induced(&rest)?;
    let order = w.lift(&w.graph.smallest_last_order());
    let bound = params.degeneracy_bound.floor() as usize;
    let leftover_degenerate = matches!(
        w.graph.degeneracy_ordering(bound),
        crate::graph::Degeneracy::Ordering(_)
    );

    let mut masks: Vec<Vec<bool>> = blocks.iter().map(|b| b.mask(n)).collect();
    let mut members: Vec<Vec<usize>> = blocks.iter().map(|b| b.as_slice().to_vec()).collect();
    for &wj in &order {
        match masks.iter().position(|m| g.degree_into(wj, m) >= attach_at) {
            Some(i) => {
                masks[i][wj] = true;
                members[i].push(wj);
            }
            None => {
                return Ok(Err(Refusal::vertex(
                    "reattach",
                    format!("vertex {wj} has fewer than {attach_at} neighbours in every block"),
                    wj,
                )))
            }
        }
    }
    let blocks: Vec<VertexSet> = members.into_iter().map(VertexSet::new).collect();
    let kappas = connectivities(g, &blocks);

    let a = alpha_bound as f64;
    let t = blocks.len();
    let large = 0.1 * n as f64 / a;
    let j: Vec<usize> = (0..t)
        .filter(|&i| blocks[i].len() as f64 >= large)
        .collect();
    let covered: usize = j.iter().map(|&i| blocks[i].len()).sum();
    let conclusions = Lemma29Conclusions {
        block_count: t as f64 <= 19.0 * a * params.logn,
        large_blocks_cover_half: 2 * covered >= n,
        block_sizes: blocks
            .iter()
            .all(|b| b.len() as f64 >= params.extraction_conn),
        block_connectivity: kappas
            .iter()
            .all(|&k| k >= at_least(params.block_conn_target)),
    };
    Ok(Ok(Lemma29Outcome {
        partition: PartitionResult {
            blocks,
            per_block_connectivity: kappas,
            target: at_least(params.block_conn_target),
            method: Method::Lemma29,
        },
        j,
        params,
        conclusions,
        leftover_degenerate,
        leftover,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, FamilySpec};

    #[test]
    fn extract_examples() {
        assert_eq!(
            extract_highly_connected(&Graph::complete(10), 9),
            Some(VertexSet::full(10))
        );
        let k6 = Graph::complete(6);
        let two = k6.disjoint_union(&k6);
        assert_eq!(extract_highly_connected(&two, 5), Some(VertexSet::full(6)));
        assert_eq!(
            extract_highly_connected(&Graph::petersen(), 3),
            Some(VertexSet::full(10))
        );
        assert_eq!(extract_highly_connected(&Graph::cycle(8), 3), None);
    }

    #[test]
    fn extract_splits_along_cuts() {
        // Two K5 sharing one vertex: 1-connected overall, each K5 4-connected.
        let mut edges = Vec::new();
        for block in [[0, 1, 2, 3, 4], [4, 5, 6, 7, 8]] {
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((block[i], block[j]));
                }
            }
        }
        let g = Graph::from_edges(9, edges).unwrap();
        assert_eq!(
            extract_highly_connected(&g, 4),
            Some(VertexSet::new(vec![0, 1, 2, 3, 4]))
        );
    }

    #[test]
    fn bfkm_examples() {
        let k8 = Graph::complete(8);
        let g = k8.disjoint_union(&k8).disjoint_union(&k8);
        let p = partition_bfkm(&g).unwrap().unwrap();
        assert_eq!(p.blocks.len(), 3);
        assert_eq!(p.per_block_connectivity, vec![7, 7, 7]);
        assert_eq!(p.target, 1);
        let p = partition_bfkm(&Graph::complete(20)).unwrap().unwrap();
        assert_eq!(p.blocks, vec![VertexSet::full(20)]);
        let m = build_family(&FamilySpec::MCliques { n: 30, m: 5 }).unwrap();
        let p = partition_bfkm(&m).unwrap().unwrap();
        assert_eq!(p.per_block_connectivity, vec![5; 5]);
        assert!(partition_bfkm(&Graph::empty(3)).is_err());
    }

    #[test]
    fn lemma29_examples() {
        let out = partition_lemma29(&Graph::complete(8), 1).unwrap().unwrap();
        assert_eq!(out.partition.blocks.len(), 1);
        assert!(out.conclusions.all_hold());
        let k10 = Graph::complete(10);
        let out = partition_lemma29(&k10.disjoint_union(&k10), 2)
            .unwrap()
            .unwrap();
        assert_eq!(out.partition.blocks.len(), 2);
        assert!(out.conclusions.all_hold());
        let cf = build_family(&FamilySpec::CliqueForest { n: 60, d: 9, k: 5 }).unwrap();
        let out = partition_lemma29(&cf, 5).unwrap().unwrap();
        let sizes: Vec<usize> = out.partition.blocks.iter().map(VertexSet::len).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 60);
        assert_eq!(out.partition.blocks.len(), 5);
        assert!(out.conclusions.all_hold());
    }

    #[test]
    fn params() {
        let p = Lemma29Params::new(100, 20, 2);
        assert!((p.extraction_conn - 20.0 / 100f64.ln()).abs() < 1e-12);
        assert_eq!(at_least(p.attach_threshold), 1);
    }
}
