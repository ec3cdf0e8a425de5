//! Constructive Hamiltonicity and long-cycle algorithms on `G ∪ R`.
//!
//! Each pipeline partitions the seed graph, builds an auxiliary digraph whose
//! arcs are realised by concrete edges, finds a cycle there and translates it
//! back through spanning path systems. Stage failures are values recorded in
//! the [`PipelineTrace`]; only malformed input is an `Err`.

mod thm1;
mod thm2;
mod thm4;

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{verify_certificate, Certificate, CycleCertificate};
use crate::checkers::{is_t_tough, Limits, PancyclicityReport, Verdict};
use crate::decompose::{spanning_path_system, SpanningConfig};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph, VertexSet};
use crate::random::Seed;
use crate::ratio::Ratio;

pub use thm1::hamiltonicity_pipeline_thm1;
pub use thm2::hamiltonicity_pipeline_thm2;
pub use thm4::long_cycle_pipeline_thm4;

const STREAM_LINK: u64 = 0x6c69_6e6b;

/// Unnamed constants of the underlying statements, all defaulting to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstantOverrides {
    /// Factor `c` in the linkage precondition `κ >= c·max(α, ln n, r)`.
    pub linkage: f64,
    /// Pancyclicity is checked on the long cycle when `α(G ∪ R) <= c3·√n`.
    pub c3: f64,
}

impl Default for ConstantOverrides {
    fn default() -> Self {
        ConstantOverrides {
            linkage: 1.0,
            c3: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// `δ` as a fraction of `n`; `δ(G)/n` when absent.
    pub delta_ratio: Option<f64>,
    pub epsilon: f64,
    /// Upper bound on `α(G)`; computed exactly when absent.
    pub alpha_bound: Option<usize>,
    /// Blocks smaller than `n / (factor·α·ln n)` are treated as small.
    pub small_block_factor: f64,
    pub constants: ConstantOverrides,
    /// Half-splits tried per run; attempt 0 splits in label order, later
    /// attempts shuffle each part first.
    pub split_retries: usize,
    /// Parts smaller than this are never formed.
    pub min_part_size: usize,
    pub limits: Limits,
    pub seed: Seed,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            delta_ratio: None,
            epsilon: 0.25,
            alpha_bound: None,
            small_block_factor: 100.0,
            constants: ConstantOverrides::default(),
            split_retries: 16,
            min_part_size: 2,
            limits: Limits::default(),
            seed: Seed(0),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.delta_ratio {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::input(format!("delta ratio {d} not in (0, 1)")));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::input(format!(
                "epsilon {} not in (0, 1)",
                self.epsilon
            )));
        }
        if self.split_retries == 0 {
            return Err(Error::input("split retries must be positive"));
        }
        if self.min_part_size < 2 {
            return Err(Error::input("minimum part size must be at least 2"));
        }
        if !(self.small_block_factor > 0.0) {
            return Err(Error::input("small block factor must be positive"));
        }
        Ok(())
    }
}

/// Which graph an edge comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeSource {
    Seed,
    Random,
    Both,
}

/// One node of the auxiliary digraph: the vertex sets its arcs leave from
/// (`exits`) and enter into (`entries`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AuxNode {
    /// `(i, j)`: part `j` of block `i`, split into `B¹` (exits) and `B²`
    /// (entries).
    SubBlock {
        block: usize,
        sub_block: usize,
        b1: VertexSet,
        b2: VertexSet,
    },
    /// `Z_i` with entry side `L_i` and exit side `R_i`.
    Composite {
        index: usize,
        z: VertexSet,
        l: VertexSet,
        r: VertexSet,
    },
    /// A harvested path; arcs leave from its tail window `Y` and enter its
    /// head window `X`.
    Path {
        index: usize,
        path: Vec<usize>,
        x: VertexSet,
        y: VertexSet,
    },
}

impl AuxNode {
    fn exits(&self) -> &VertexSet {
        match self {
            AuxNode::SubBlock { b1, .. } => b1,
            AuxNode::Composite { r, .. } => r,
            AuxNode::Path { y, .. } => y,
        }
    }

    fn entries(&self) -> &VertexSet {
        match self {
            AuxNode::SubBlock { b2, .. } => b2,
            AuxNode::Composite { l, .. } => l,
            AuxNode::Path { x, .. } => x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxArc {
    pub from: usize,
    pub to: usize,
    /// Realising edge `(exit vertex of from, entry vertex of to)`.
    pub witness: (usize, usize),
    pub source: EdgeSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuxDigraphMap {
    #[serde(skip)]
    pub aux: Digraph,
    pub nodes: Vec<AuxNode>,
    pub arcs: Vec<AuxArc>,
}

impl AuxDigraphMap {
    /// Arc `u -> v` (u != v) whenever some edge of `g ∪ r` joins an exit
    /// vertex of `u` to an entry vertex of `v`; the witness is the
    /// lexicographically smallest such edge.
    fn build(g: &Graph, r: &Graph, nodes: Vec<AuxNode>) -> Self {
        let n = g.n();
        let mut arcs = Vec::new();
        let entry_masks: Vec<Vec<bool>> = nodes.iter().map(|x| x.entries().mask(n)).collect();
        for (u, nu) in nodes.iter().enumerate() {
            for (v, mask) in entry_masks.iter().enumerate() {
                if u == v {
                    continue;
                }
                if let Some((a, b, source)) = smallest_edge(g, r, nu.exits(), mask) {
                    arcs.push(AuxArc {
                        from: u,
                        to: v,
                        witness: (a, b),
                        source,
                    });
                }
            }
        }
        let aux = Digraph::from_arcs(nodes.len(), arcs.iter().map(|a| (a.from, a.to)))
            .expect("arcs between existing nodes");
        AuxDigraphMap { aux, nodes, arcs }
    }

    fn witness(&self, from: usize, to: usize) -> &AuxArc {
        let i = self
            .arcs
            .binary_search_by_key(&(from, to), |a| (a.from, a.to))
            .expect("arc of the auxiliary digraph");
        &self.arcs[i]
    }

    /// Witness edges of the arcs of a directed cycle, in cycle order.
    fn cycle_witnesses(&self, cycle: &[usize]) -> Vec<AuxArc> {
        (0..cycle.len())
            .map(|i| self.witness(cycle[i], cycle[(i + 1) % cycle.len()]).clone())
            .collect()
    }
}

fn smallest_edge(
    g: &Graph,
    r: &Graph,
    from: &VertexSet,
    to_mask: &[bool],
) -> Option<(usize, usize, EdgeSource)> {
    let mut best: Option<(usize, usize)> = None;
    for a in from.iter() {
        for &b in g.neighbors(a).iter().chain(r.neighbors(a)) {
            if to_mask[b] && best.is_none_or(|(x, y)| (a, b) < (x, y)) {
                best = Some((a, b));
            }
        }
        if best.is_some() {
            break;
        }
    }
    best.map(|(a, b)| {
        let source = match (g.has_edge(a, b), r.has_edge(a, b)) {
            (true, true) => EdgeSource::Both,
            (true, false) => EdgeSource::Seed,
            _ => EdgeSource::Random,
        };
        (a, b, source)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub stage: String,
    pub ok: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PipelineOutcome {
    Success {
        certificate: CycleCertificate,
        length: usize,
    },
    Failure {
        stage: String,
        reason: String,
    },
}

/// Cycle length as the sum of sub-path lengths plus the arcs used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LengthAccounting {
    pub subpath_edges: usize,
    pub arcs: usize,
    pub cycle_length: usize,
}

impl LengthAccounting {
    pub fn holds(&self) -> bool {
        self.subpath_edges + self.arcs == self.cycle_length
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineTrace {
    pub pipeline: String,
    pub n: usize,
    pub stages: Vec<StageRecord>,
    pub warnings: Vec<String>,
    /// Split attempts used (1-based).
    pub attempts: usize,
    pub aux: Option<AuxDigraphMap>,
    pub outcome: PipelineOutcome,
    pub accounting: Option<LengthAccounting>,
    pub pancyclicity: Option<PancyclicityReport>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PipelineTrace {
    fn new(pipeline: &str, n: usize) -> Self {
        PipelineTrace {
            pipeline: pipeline.into(),
            n,
            stages: Vec::new(),
            warnings: Vec::new(),
            attempts: 0,
            aux: None,
            outcome: PipelineOutcome::Failure {
                stage: "start".into(),
                reason: "not run".into(),
            },
            accounting: None,
            pancyclicity: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn succeeded(&self) -> bool {
        matches!(self.outcome, PipelineOutcome::Success { .. })
    }

    pub fn certificate(&self) -> Option<&CycleCertificate> {
        match &self.outcome {
            PipelineOutcome::Success { certificate, .. } => Some(certificate),
            PipelineOutcome::Failure { .. } => None,
        }
    }

    pub fn failed_stage(&self) -> Option<&str> {
        match &self.outcome {
            PipelineOutcome::Failure { stage, .. } => Some(stage),
            PipelineOutcome::Success { .. } => None,
        }
    }

    fn record(&mut self, stage: &str, ok: bool, detail: impl Into<String>, started: Instant) {
        self.stages.push(StageRecord {
            stage: stage.into(),
            ok,
            detail: detail.into(),
            elapsed: started.elapsed(),
        });
    }

    fn fail(mut self, stage: &str, reason: impl Into<String>, started: Instant) -> Self {
        let reason = reason.into();
        self.record(stage, false, reason.clone(), started);
        self.outcome = PipelineOutcome::Failure {
            stage: stage.into(),
            reason,
        };
        self
    }
}

/// A stage failure inside one split attempt.
pub(crate) struct StageError {
    stage: &'static str,
    reason: String,
}

impl StageError {
    fn new(stage: &'static str, reason: impl Into<String>) -> Self {
        StageError {
            stage,
            reason: reason.into(),
        }
    }
}

fn check_pair(g: &Graph, r: &Graph) -> Result<Graph> {
    if g.n() != r.n() {
        return Err(Error::SizeMismatch {
            left: g.n(),
            right: r.n(),
        });
    }
    g.union(r)
}

/// Splits `part` into halves with `|first| <= |second| <= |first| + 1`,
/// after a seeded shuffle when `attempt > 0`.
fn halves(part: &VertexSet, seed: Seed, attempt: usize, tag: u64) -> (VertexSet, VertexSet) {
    let mut v = part.as_slice().to_vec();
    if attempt > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.derive(attempt as u64, tag).0);
        v.shuffle(&mut rng);
    }
    let k = v.len() / 2;
    let second = v.split_off(k);
    (VertexSet::new(v), VertexSet::new(second))
}

/// Consecutive chunks of `block` (label order) with sizes as even as
/// possible, `count` of them.
fn equal_chunks(block: &VertexSet, count: usize) -> Vec<VertexSet> {
    let s = block.as_slice();
    let (q, rem) = (s.len() / count, s.len() % count);
    let mut out = Vec::with_capacity(count);
    let mut at = 0;
    for i in 0..count {
        let len = q + usize::from(i >= count - rem);
        out.push(VertexSet::new(s[at..at + len].to_vec()));
        at += len;
    }
    out
}

/// Path inside `host` from `from` to `to` through exactly the listed
/// segment, reversed if needed so it starts at `from`.
fn oriented(mut path: Vec<usize>, from: usize) -> Vec<usize> {
    if path.first() != Some(&from) {
        path.reverse();
    }
    path
}

fn verify_cycle(
    union: &Graph,
    cycle: &[usize],
    spanning: bool,
) -> std::result::Result<CycleCertificate, StageError> {
    let cert = CycleCertificate::new(cycle.to_vec());
    let wrapped = if spanning {
        Certificate::HamiltonCycle(cert.clone())
    } else {
        Certificate::Cycle(cert.clone())
    };
    verify_certificate(union, &wrapped)
        .map(|()| cert)
        .map_err(|v| StageError::new("verify", format!("assembled cycle rejected: {v}")))
}

/// Node order around an auxiliary cycle with the witness edge of each arc.
type AuxCycle = (Vec<usize>, Vec<(usize, usize)>);

/// Directed Hamilton cycle of the auxiliary digraph and, for each arc in
/// cycle order, its witness edge `(exit, entry)`. A single node closes on
/// itself through an edge between its own exit and entry sets.
fn aux_hamilton_cycle(
    map: &AuxDigraphMap,
    g: &Graph,
    r: &Graph,
    limits: &Limits,
) -> Result<std::result::Result<AuxCycle, StageError>> {
    let k = map.nodes.len();
    if k == 0 {
        return Ok(Err(StageError::new(
            "aux-not-hamiltonian",
            "empty auxiliary digraph",
        )));
    }
    if k == 1 {
        let node = &map.nodes[0];
        return Ok(
            match smallest_edge(g, r, node.exits(), &node.entries().mask(g.n())) {
                Some((a, b, _)) => Ok((vec![0], vec![(a, b)])),
                None => Err(StageError::new(
                    "aux-not-hamiltonian",
                    "single node without an edge between its halves",
                )),
            },
        );
    }
    Ok(
        match crate::checkers::directed_hamilton_cycle(&map.aux, limits)? {
            Verdict::Yes(c) => {
                let w = map
                    .cycle_witnesses(&c.vertices)
                    .iter()
                    .map(|a| a.witness)
                    .collect();
                Ok((c.vertices, w))
            }
            Verdict::No(()) => Err(StageError::new(
                "aux-not-hamiltonian",
                format!("auxiliary digraph on {k} nodes has no directed Hamilton cycle"),
            )),
            Verdict::Indeterminate => Err(StageError::new(
                "aux-not-hamiltonian",
                "search budget exhausted on the auxiliary digraph",
            )),
        },
    )
}

/// Spanning path system of `G[block]` joining each pair, in host labels and
/// oriented from the first to the second endpoint of each pair.
fn link_block(
    g: &Graph,
    block: &VertexSet,
    pairs: &[(usize, usize)],
    cfg: &PipelineConfig,
    tag: u64,
) -> Result<std::result::Result<Vec<Vec<usize>>, StageError>> {
    let sub = g.induced(block)?;
    let local: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(x, y)| {
            (
                sub.local(x).expect("endpoint in block"),
                sub.local(y).expect("endpoint in block"),
            )
        })
        .collect();
    let scfg = SpanningConfig {
        c_factor: cfg.constants.linkage,
        seed: cfg.seed.derive(STREAM_LINK, tag),
        limits: cfg.limits,
        ..SpanningConfig::default()
    };
    let out = spanning_path_system(&sub.graph, &local, &scfg)?;
    Ok(match out.result {
        Verdict::Yes((_, sys)) => Ok(sys
            .paths
            .iter()
            .zip(pairs)
            .map(|(p, &(x, _))| oriented(sub.lift(p), x))
            .collect()),
        Verdict::No(f) => Err(StageError::new(
            "linkage",
            format!(
                "block of {} vertices with {} pairs: {}",
                block.len(),
                pairs.len(),
                f.iter()
                    .map(|s| s.reason.as_str())
                    .collect::<Vec<_>>()
                    .join("; ")
            ),
        )),
        Verdict::Indeterminate => Err(StageError::new(
            "linkage",
            format!("block of {} vertices: search budget exhausted", block.len()),
        )),
    })
}

fn alpha_of(g: &Graph, cfg: &PipelineConfig) -> Result<usize> {
    Ok(match cfg.alpha_bound {
        Some(a) => a.max(1),
        None => crate::checkers::independence_number(g, &cfg.limits)?
            .alpha
            .max(1),
    })
}

/// Decides whether `G ∪ R` is `t`-tough; a violating set is the witness.
pub fn toughness_experiment_thm3(
    g: &Graph,
    r: &Graph,
    t: Ratio,
    limits: &Limits,
) -> Result<Verdict<(), VertexSet>> {
    let union = check_pair(g, r)?;
    is_t_tough(&union, t, limits)
}
