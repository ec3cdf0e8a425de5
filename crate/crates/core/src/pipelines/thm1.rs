use std::time::Instant;

use crate::decompose::partition_bfkm;
use crate::error::Result;
use crate::graph::{Graph, VertexSet};

use super::{
    aux_hamilton_cycle, check_pair, equal_chunks, halves, link_block, verify_cycle, AuxDigraphMap,
    AuxNode, PipelineConfig, PipelineOutcome, PipelineTrace, StageError,
};

/// Parts of each block in label order, about `δn/8` vertices each and never
/// fewer than `min_part`.
fn sub_blocks(
    blocks: &[VertexSet],
    dn: f64,
    min_part: usize,
    warnings: &mut Vec<String>,
) -> std::result::Result<Vec<Vec<VertexSet>>, StageError> {
    let size = ((dn / 8.0).floor() as usize).max(min_part);
    let mut out = Vec::with_capacity(blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        if b.len() < min_part {
            return Err(StageError::new(
                "sub-blocks",
                format!("block {i} has {} vertices, fewer than {min_part}", b.len()),
            ));
        }
        let count = (b.len() / size).max(1);
        let parts = equal_chunks(b, count);
        let (lo, hi) = (dn / 16.0, dn / 8.0);
        if parts
            .iter()
            .any(|p| (p.len() as f64) < lo || (p.len() as f64) > hi)
        {
            warnings.push(format!(
                "block {i}: part sizes {}..{} outside [{lo:.2}, {hi:.2}]",
                parts.iter().map(VertexSet::len).min().unwrap_or(0),
                parts.iter().map(VertexSet::len).max().unwrap_or(0)
            ));
        }
        out.push(parts);
    }
    Ok(out)
}

/// One split attempt: halves, auxiliary digraph, its Hamilton cycle, block
/// linkages and assembly.
fn attempt(
    g: &Graph,
    r: &Graph,
    union: &Graph,
    blocks: &[VertexSet],
    parts: &[Vec<VertexSet>],
    cfg: &PipelineConfig,
    k: usize,
) -> Result<(AuxDigraphMap, std::result::Result<Vec<usize>, StageError>)> {
    let mut nodes = Vec::new();
    let mut owner = Vec::new();
    for (i, ps) in parts.iter().enumerate() {
        for (j, p) in ps.iter().enumerate() {
            let (b1, b2) = halves(p, cfg.seed, k, nodes.len() as u64);
            nodes.push(AuxNode::SubBlock {
                block: i,
                sub_block: j,
                b1,
                b2,
            });
            owner.push(i);
        }
    }
    let map = AuxDigraphMap::build(g, r, nodes);
    let (cycle, witnesses) = match aux_hamilton_cycle(&map, g, r, &cfg.limits)? {
        Ok(c) => c,
        Err(e) => return Ok((map, Err(e))),
    };
    let len = cycle.len();
    // Entry and exit vertex of every node on the cycle.
    let mut entry = vec![0; map.nodes.len()];
    let mut exit = vec![0; map.nodes.len()];
    for (pos, &v) in cycle.iter().enumerate() {
        exit[v] = witnesses[pos].0;
        entry[v] = witnesses[(pos + len - 1) % len].1;
    }
    let mut segment: Vec<Vec<usize>> = vec![Vec::new(); map.nodes.len()];
    for (i, block) in blocks.iter().enumerate() {
        let members: Vec<usize> = (0..map.nodes.len()).filter(|&v| owner[v] == i).collect();
        let pairs: Vec<(usize, usize)> = members.iter().map(|&v| (entry[v], exit[v])).collect();
        match link_block(g, block, &pairs, cfg, (k * blocks.len() + i) as u64)? {
            Ok(paths) => {
                for (&v, p) in members.iter().zip(paths) {
                    segment[v] = p;
                }
            }
            Err(e) => return Ok((map, Err(e))),
        }
    }
    let seq: Vec<usize> = cycle
        .iter()
        .flat_map(|&v| segment[v].iter().copied())
        .collect();
    let verified = verify_cycle(union, &seq, true).map(|c| c.vertices);
    Ok((map, verified))
}

/// Hamilton cycle of `G ∪ R` through a connectivity partition of `G`, an
/// auxiliary digraph on half-split parts and spanning linkages per block.
pub fn hamiltonicity_pipeline_thm1(
    g: &Graph,
    r: &Graph,
    cfg: &PipelineConfig,
) -> Result<PipelineTrace> {
    cfg.validate()?;
    let union = check_pair(g, r)?;
    let n = g.n();
    let started = Instant::now();
    let mut trace = PipelineTrace::new("thm1", n);
    if n < 3 {
        return Ok(trace.fail("partition", "fewer than 3 vertices", started));
    }
    if g.min_degree() == 0 {
        return Ok(trace.fail("partition", "seed graph has an isolated vertex", started));
    }
    let delta = cfg.delta_ratio.unwrap_or(g.min_degree() as f64 / n as f64);
    let t = Instant::now();
    let partition = match partition_bfkm(g)? {
        Ok(p) => p,
        Err(refusal) => return Ok(trace.fail("partition", refusal.to_string(), t)),
    };
    trace.record(
        "partition",
        true,
        format!(
            "{} blocks, sizes {:?}, connectivity {:?}",
            partition.blocks.len(),
            partition
                .blocks
                .iter()
                .map(VertexSet::len)
                .collect::<Vec<_>>(),
            partition.per_block_connectivity
        ),
        t,
    );
    let t = Instant::now();
    let parts = match sub_blocks(
        &partition.blocks,
        delta * n as f64,
        cfg.min_part_size,
        &mut trace.warnings,
    ) {
        Ok(p) => p,
        Err(e) => return Ok(trace.fail(e.stage, e.reason, t)),
    };
    trace.record(
        "sub-blocks",
        true,
        format!("{} parts", parts.iter().map(Vec::len).sum::<usize>()),
        t,
    );
    let mut last = StageError::new("aux-not-hamiltonian", "no attempt made");
    for k in 0..cfg.split_retries {
        let t = Instant::now();
        trace.attempts = k + 1;
        let (map, res) = attempt(g, r, &union, &partition.blocks, &parts, cfg, k)?;
        let arcs = map.arcs.len();
        trace.aux = Some(map);
        match res {
            Ok(cycle) => {
                trace.record("aux-digraph", true, format!("{arcs} arcs"), t);
                trace.record("assembly", true, format!("attempt {}", k + 1), t);
                trace.outcome = PipelineOutcome::Success {
                    length: cycle.len(),
                    certificate: crate::certificate::CycleCertificate::new(cycle),
                };
                trace.elapsed = started.elapsed();
                return Ok(trace);
            }
            Err(e) => {
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

    #[test]
    fn complete_graph_without_random_edges() {
        for n in [3, 5, 12, 20] {
            let g = Graph::complete(n);
            let t = hamiltonicity_pipeline_thm1(&g, &Graph::empty(n), &PipelineConfig::default())
                .unwrap();
            assert!(t.succeeded(), "n = {n}: {:?}", t.outcome);
            let c = t.certificate().unwrap().clone();
            assert_eq!(
                verify_certificate(&g, &Certificate::HamiltonCycle(c)),
                Ok(())
            );
        }
    }

    #[test]
    fn two_cliques_without_random_edges_fail_on_aux() {
        let g = Graph::complete(10).disjoint_union(&Graph::complete(10));
        let t =
            hamiltonicity_pipeline_thm1(&g, &Graph::empty(20), &PipelineConfig::default()).unwrap();
        assert_eq!(t.failed_stage(), Some("aux-not-hamiltonian"));
    }

    #[test]
    fn three_cliques_with_random_edges() {
        let g = Graph::complete(20)
            .disjoint_union(&Graph::complete(20))
            .disjoint_union(&Graph::complete(20));
        let r = sample_gnp(60, EdgeProbability::new(0.02).unwrap(), Seed(11));
        let t = hamiltonicity_pipeline_thm1(&g, &r, &PipelineConfig::default()).unwrap();
        assert!(t.succeeded(), "{:?} {:?}", t.outcome, t.warnings);
        let union = g.union(&r).unwrap();
        let c = t.certificate().unwrap().clone();
        assert_eq!(
            verify_certificate(&union, &Certificate::HamiltonCycle(c)),
            Ok(())
        );
    }

    #[test]
    fn mismatched_sizes_are_errors() {
        assert!(hamiltonicity_pipeline_thm1(
            &Graph::complete(4),
            &Graph::empty(5),
            &PipelineConfig::default()
        )
        .is_err());
    }
}
