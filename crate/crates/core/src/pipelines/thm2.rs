use std::time::Instant;

use crate::certificate::CycleCertificate;
use crate::checkers::{bipartite_max_matching, hamilton_path_between, Verdict};
use crate::decompose::partition_lemma29;
use crate::error::Result;
use crate::graph::{Graph, VertexSet};

use super::{
    alpha_of, aux_hamilton_cycle, check_pair, equal_chunks, halves, link_block, oriented,
    smallest_edge, verify_cycle, AuxDigraphMap, AuxNode, PipelineConfig, PipelineOutcome,
    PipelineTrace, StageError,
};

const TAG_SMALL: u64 = 1 << 32;
const TAG_Z: u64 = 2 << 32;

/// Small blocks, and the equipartition parts `Y` of the large ones with the
/// block each part came from.
struct Layout {
    small: Vec<usize>,
    ys: Vec<VertexSet>,
    y_block: Vec<usize>,
}

fn layout(
    blocks: &[VertexSet],
    threshold: f64,
    min_part: usize,
    warnings: &mut Vec<String>,
) -> Layout {
    let mut small = Vec::new();
    let mut ys = Vec::new();
    let mut y_block = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        if (b.len() as f64) < threshold {
            small.push(i);
            continue;
        }
        // Smallest m with parts of at most `threshold` vertices, but parts of
        // fewer than `min_part` vertices are never formed.
        let cap = (threshold.floor() as usize).max(min_part);
        let m = b.len().div_ceil(cap).min(b.len() / min_part).max(1);
        if cap > threshold.floor() as usize {
            warnings.push(format!(
                "block {i}: part cap {threshold:.3} below {min_part}, using parts of {min_part}+ vertices"
            ));
        }
        for p in equal_chunks(b, m) {
            ys.push(p);
            y_block.push(i);
        }
    }
    Layout { small, ys, y_block }
}

struct Built {
    map: AuxDigraphMap,
    cycle: Vec<usize>,
}

#[allow(clippy::too_many_arguments)]
fn attempt(
    g: &Graph,
    r: &Graph,
    union: &Graph,
    blocks: &[VertexSet],
    lay: &Layout,
    cfg: &PipelineConfig,
    k: usize,
    trace: &mut PipelineTrace,
) -> Result<std::result::Result<Built, (Option<AuxDigraphMap>, StageError)>> {
    let n = g.n();
    let s = lay.small.len();
    let q = 2 * s;
    // X_{2i-1}, X_{2i}: halves of small block i.
    let mut xs = Vec::with_capacity(q);
    for (i, &b) in lay.small.iter().enumerate() {
        if blocks[b].len() < 2 {
            return Ok(Err((
                None,
                StageError::new(
                    "small-block-path",
                    format!("small block {b} has a single vertex"),
                ),
            )));
        }
        let (x1, x2) = halves(&blocks[b], cfg.seed, k, TAG_SMALL + i as u64);
        xs.push(x1);
        xs.push(x2);
    }
    // Matching of every X into a distinct Y along edges of the union.
    let mut order: Vec<usize> = (0..lay.ys.len()).collect();
    let mut uv = Vec::with_capacity(q);
    if q > 0 {
        let y_masks: Vec<Vec<bool>> = lay.ys.iter().map(|y| y.mask(n)).collect();
        let mut edges = Vec::new();
        for (i, x) in xs.iter().enumerate() {
            for (j, m) in y_masks.iter().enumerate() {
                if smallest_edge(g, r, x, m).is_some() {
                    edges.push((i, j));
                }
            }
        }
        let matching = bipartite_max_matching(q, lay.ys.len(), &edges)?;
        if matching.size < q {
            return Ok(Err((
                None,
                StageError::new(
                    "matching",
                    format!("matching of size {} < {q}", matching.size),
                ),
            )));
        }
        let mut pairs = matching.pairs.clone();
        pairs.sort_unstable();
        let matched: Vec<usize> = pairs.iter().map(|&(_, j)| j).collect();
        order = matched.clone();
        order.extend((0..lay.ys.len()).filter(|j| !matched.contains(j)));
        for (i, &j) in matched.iter().enumerate() {
            let (u, v, _) =
                smallest_edge(g, r, &xs[i], &y_masks[j]).expect("matched along an edge");
            uv.push((u, v));
        }
        trace.record(
            "matching",
            true,
            format!("{q} small halves matched"),
            Instant::now(),
        );
    }
    let ys: Vec<&VertexSet> = order.iter().map(|&j| &lay.ys[j]).collect();
    let y_block: Vec<usize> = order.iter().map(|&j| lay.y_block[j]).collect();
    let qp = ys.len();
    if qp == 0 {
        return Ok(Err((None, StageError::new("matching", "no large blocks"))));
    }
    // Nodes z_0..z_{l-1}.
    let l = qp - s;
    let mut nodes = Vec::with_capacity(l);
    for i in 0..l {
        if i < s {
            let (y1, y2) = (ys[2 * i], ys[2 * i + 1]);
            let z = y1.union(y2).union(&xs[2 * i]).union(&xs[2 * i + 1]);
            nodes.push(AuxNode::Composite {
                index: i,
                z,
                l: y1.difference(&VertexSet::new(vec![uv[2 * i].1])),
                r: y2.difference(&VertexSet::new(vec![uv[2 * i + 1].1])),
            });
        } else {
            let y = ys[i + s];
            let (lo, hi) = halves(y, cfg.seed, k, TAG_Z + i as u64);
            nodes.push(AuxNode::Composite {
                index: i,
                z: y.clone(),
                l: lo,
                r: hi,
            });
        }
    }
    let map = AuxDigraphMap::build(g, r, nodes);
    let (cycle, witnesses) = match aux_hamilton_cycle(&map, g, r, &cfg.limits)? {
        Ok(c) => c,
        Err(e) => return Ok(Err((Some(map), e))),
    };
    let len = cycle.len();
    let mut a = vec![0; l];
    let mut b = vec![0; l];
    for (pos, &z) in cycle.iter().enumerate() {
        a[z] = witnesses[pos].0;
        b[z] = witnesses[(pos + len - 1) % len].1;
    }
    // Endpoint pairs of every Y part, oriented along the final cycle.
    let pair_of = |rj: usize| -> (usize, usize) {
        if rj < q {
            let i = rj / 2;
            if rj.is_multiple_of(2) {
                (b[i], uv[rj].1)
            } else {
                (uv[rj].1, a[i])
            }
        } else {
            (b[rj - s], a[rj - s])
        }
    };
    let mut y_path: Vec<Vec<usize>> = vec![Vec::new(); qp];
    for (bi, block) in blocks.iter().enumerate() {
        let rs: Vec<usize> = (0..qp).filter(|&rj| y_block[rj] == bi).collect();
        if rs.is_empty() {
            continue;
        }
        let pairs: Vec<(usize, usize)> = rs.iter().map(|&rj| pair_of(rj)).collect();
        match link_block(g, block, &pairs, cfg, (k * blocks.len() + bi) as u64)? {
            Ok(paths) => {
                for (&rj, p) in rs.iter().zip(paths) {
                    y_path[rj] = p;
                }
            }
            Err(e) => return Ok(Err((Some(map), e))),
        }
    }
    let mut q_path: Vec<Vec<usize>> = Vec::with_capacity(s);
    for (i, &bi) in lay.small.iter().enumerate() {
        let sub = g.induced(&blocks[bi])?;
        let (u1, u2) = (uv[2 * i].0, uv[2 * i + 1].0);
        let (l1, l2) = (sub.local(u1).unwrap(), sub.local(u2).unwrap());
        match hamilton_path_between(&sub.graph, l1, l2, &cfg.limits)? {
            Verdict::Yes(p) => q_path.push(oriented(sub.lift(&p.vertices), u1)),
            _ => {
                return Ok(Err((
                    Some(map),
                    StageError::new(
                        "small-block-path",
                        format!("no Hamilton path between {u1} and {u2} in small block {bi}"),
                    ),
                )))
            }
        }
    }
    let mut seq = Vec::with_capacity(n);
    for &z in &cycle {
        if z < s {
            seq.extend(&y_path[2 * z]);
            seq.extend(&q_path[z]);
            seq.extend(&y_path[2 * z + 1]);
        } else {
            seq.extend(&y_path[z + s]);
        }
    }
    match verify_cycle(union, &seq, true) {
        Ok(c) => Ok(Ok(Built {
            map,
            cycle: c.vertices,
        })),
        Err(e) => Ok(Err((Some(map), e))),
    }
}

/// Hamilton cycle of `G ∪ R` through the small-independence partition:
/// small blocks are threaded through matched parts of the large ones, the
/// rest follows the same auxiliary digraph scheme.
pub fn hamiltonicity_pipeline_thm2(
    g: &Graph,
    r: &Graph,
    cfg: &PipelineConfig,
) -> Result<PipelineTrace> {
    cfg.validate()?;
    let union = check_pair(g, r)?;
    let n = g.n();
    let started = Instant::now();
    let mut trace = PipelineTrace::new("thm2", n);
    if n < 3 {
        return Ok(trace.fail("partition", "fewer than 3 vertices", started));
    }
    let alpha = alpha_of(g, cfg)?;
    let t = Instant::now();
    let outcome = match partition_lemma29(g, alpha)? {
        Ok(o) => o,
        Err(refusal) => return Ok(trace.fail("partition", refusal.to_string(), t)),
    };
    let blocks = outcome.partition.blocks.clone();
    trace.record(
        "partition",
        true,
        format!(
            "{} blocks, sizes {:?}, alpha bound {alpha}, conclusions hold: {}",
            blocks.len(),
            blocks.iter().map(VertexSet::len).collect::<Vec<_>>(),
            outcome.conclusions.all_hold()
        ),
        t,
    );
    let threshold = n as f64 / (cfg.small_block_factor * alpha as f64 * (n as f64).ln());
    let lay = layout(&blocks, threshold, cfg.min_part_size, &mut trace.warnings);
    trace.record(
        "sub-blocks",
        true,
        format!(
            "{} small blocks, {} large parts",
            lay.small.len(),
            lay.ys.len()
        ),
        t,
    );
    let mut last = StageError::new("aux-not-hamiltonian", "no attempt made");
    for k in 0..cfg.split_retries {
        trace.attempts = k + 1;
        let t = Instant::now();
        match attempt(g, r, &union, &blocks, &lay, cfg, k, &mut trace)? {
            Ok(built) => {
                trace.record("assembly", true, format!("attempt {}", k + 1), t);
                trace.aux = Some(built.map);
                trace.outcome = PipelineOutcome::Success {
                    length: built.cycle.len(),
                    certificate: CycleCertificate::new(built.cycle),
                };
                trace.elapsed = started.elapsed();
                return Ok(trace);
            }
            Err((map, e)) => {
                if map.is_some() {
                    trace.aux = map;
                }
                trace
                    .warnings
                    .push(format!("attempt {}: {}: {}", k + 1, e.stage, e.reason));
                last = e;
            }
        }
    }
    let mut trace = trace.fail(last.stage, last.reason, started);
    trace.elapsed = started.elapsed();
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{verify_certificate, Certificate};
    use crate::random::{sample_gnp, EdgeProbability, Seed};

    fn cliques(sizes: &[usize]) -> Graph {
        sizes.iter().fold(Graph::empty(0), |acc, &s| {
            acc.disjoint_union(&Graph::complete(s))
        })
    }

    #[test]
    fn no_small_blocks() {
        let g = cliques(&[20, 20, 20]);
        let r = sample_gnp(60, EdgeProbability::new(0.03).unwrap(), Seed(5));
        let t = hamiltonicity_pipeline_thm2(&g, &r, &PipelineConfig::default()).unwrap();
        assert!(t.succeeded(), "{:?} {:?}", t.outcome, t.warnings);
        let union = g.union(&r).unwrap();
        let c = t.certificate().unwrap().clone();
        assert_eq!(
            verify_certificate(&union, &Certificate::HamiltonCycle(c)),
            Ok(())
        );
    }

    #[test]
    fn small_block_is_threaded_through_matching() {
        let g = cliques(&[20, 20, 8]);
        let r = sample_gnp(48, EdgeProbability::new(0.08).unwrap(), Seed(3));
        let cfg = PipelineConfig {
            small_block_factor: 0.5,
            ..PipelineConfig::default()
        };
        let t = hamiltonicity_pipeline_thm2(&g, &r, &cfg).unwrap();
        assert!(
            t.stages.iter().any(|s| s.stage == "matching"),
            "{:?}",
            t.warnings
        );
        assert!(t.succeeded(), "{:?} {:?}", t.outcome, t.warnings);
        let union = g.union(&r).unwrap();
        let c = t.certificate().unwrap().clone();
        assert_eq!(
            verify_certificate(&union, &Certificate::HamiltonCycle(c)),
            Ok(())
        );
    }

    #[test]
    fn disconnected_without_random_edges_fails() {
        let g = cliques(&[10, 10]);
        let t =
            hamiltonicity_pipeline_thm2(&g, &Graph::empty(20), &PipelineConfig::default()).unwrap();
        assert!(matches!(
            t.failed_stage(),
            Some("aux-not-hamiltonian") | Some("matching")
        ));
    }
}
