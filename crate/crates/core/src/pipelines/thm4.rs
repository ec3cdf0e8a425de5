use std::time::Instant;

use crate::certificate::CycleCertificate;
use crate::checkers::{independence_number, longest_directed_cycle, pancyclicity_report};
use crate::error::Result;
use crate::graph::{Graph, VertexSet};

use super::{
    alpha_of, check_pair, verify_cycle, AuxDigraphMap, AuxNode, LengthAccounting, PipelineConfig,
    PipelineOutcome, PipelineTrace,
};

/// Path length parameters: `ℓ = max(2, ⌊εn/(4m)⌋)` vertices per path, a
/// target of `⌈4(1-ε/3)m/ε⌉` paths and windows of `max(1, ⌊εℓ/6⌋)` vertices
/// (at most `ℓ/2`).
fn sizes(n: usize, m: usize, eps: f64) -> (usize, usize, usize) {
    let l = ((eps * n as f64 / (4.0 * m as f64)).floor() as usize).max(2);
    let r = (4.0 * (1.0 - eps / 3.0) * m as f64 / eps).ceil() as usize;
    let w = ((eps * l as f64 / 6.0).floor() as usize).clamp(1, l / 2);
    (l, r, w)
}

/// Vertex-disjoint paths on `l` vertices: repeatedly peel vertices of degree
/// below `l` from what is left and walk greedily inside the core.
fn harvest(g: &Graph, l: usize, target: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut left = VertexSet::full(n);
    let mut paths = Vec::new();
    while paths.len() < target {
        let core = g.core_within(&left, l);
        let Some(start) = core.iter().next() else {
            break;
        };
        let mask = core.mask(n);
        let mut on_path = vec![false; n];
        let mut path = vec![start];
        on_path[start] = true;
        while path.len() < l {
            let cur = *path.last().unwrap();
            let next = g
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&u| mask[u] && !on_path[u]);
            match next {
                Some(u) => {
                    on_path[u] = true;
                    path.push(u);
                }
                None => break,
            }
        }
        if path.len() < l {
            break;
        }
        left = left.difference(&VertexSet::new(path.clone()));
        paths.push(path);
    }
    paths
}

/// Cycle of length at least `(1-ε)n` in `G ∪ R`: harvest disjoint paths in
/// `G`, join tail windows to head windows in an auxiliary digraph, take a
/// longest directed cycle there and splice the sub-paths along it.
pub fn long_cycle_pipeline_thm4(
    g: &Graph,
    r: &Graph,
    cfg: &PipelineConfig,
) -> Result<PipelineTrace> {
    cfg.validate()?;
    let union = check_pair(g, r)?;
    let n = g.n();
    let eps = cfg.epsilon;
    let started = Instant::now();
    let mut trace = PipelineTrace::new("thm4", n);
    trace.attempts = 1;
    let target_len = ((1.0 - eps) * n as f64).ceil() as usize;
    if n < 3 {
        return Ok(trace.fail("harvest", "fewer than 3 vertices", started));
    }
    let m = alpha_of(g, cfg)?;
    let (l, r_target, w) = sizes(n, m, eps);
    let t = Instant::now();
    let paths = harvest(g, l, r_target);
    if paths.is_empty() {
        return Ok(trace.fail(
            "harvest",
            format!("no path on {l} vertices in the {l}-core"),
            t,
        ));
    }
    trace.record(
        "harvest",
        true,
        format!(
            "m = {m}, path length {l}, {} of {r_target} paths, window {w}",
            paths.len()
        ),
        t,
    );
    let nodes: Vec<AuxNode> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| AuxNode::Path {
            index: i,
            path: p.clone(),
            x: VertexSet::new(p[..w].to_vec()),
            y: VertexSet::new(p[p.len() - w..].to_vec()),
        })
        .collect();
    let t = Instant::now();
    let map = AuxDigraphMap::build(g, r, nodes);
    trace.record(
        "aux-digraph",
        true,
        format!("{} nodes, {} arcs", paths.len(), map.arcs.len()),
        t,
    );
    let t = Instant::now();
    let longest = longest_directed_cycle(&map.aux, &cfg.limits)?;
    let Some(cycle) = longest.witness.clone().filter(|c| c.len() >= 2) else {
        trace.aux = Some(map);
        return Ok(trace.fail("aux-cycle", "auxiliary digraph has no directed cycle", t));
    };
    trace.record(
        "aux-cycle",
        true,
        format!(
            "length {} ({})",
            cycle.len(),
            if longest.exact {
                "longest"
            } else {
                "best found"
            }
        ),
        t,
    );
    let witnesses: Vec<(usize, usize)> = map
        .cycle_witnesses(&cycle.vertices)
        .iter()
        .map(|a| a.witness)
        .collect();
    let len = cycle.len();
    let mut seq = Vec::new();
    let mut subpath_edges = 0;
    for (pos, &u) in cycle.vertices.iter().enumerate() {
        let entry = witnesses[(pos + len - 1) % len].1;
        let exit = witnesses[pos].0;
        let p = &paths[u];
        let i = p
            .iter()
            .position(|&v| v == entry)
            .expect("entry in head window");
        let j = p
            .iter()
            .position(|&v| v == exit)
            .expect("exit in tail window");
        seq.extend_from_slice(&p[i..=j]);
        subpath_edges += j - i;
    }
    let accounting = LengthAccounting {
        subpath_edges,
        arcs: len,
        cycle_length: seq.len(),
    };
    trace.accounting = Some(accounting);
    trace.aux = Some(map);
    let t = Instant::now();
    let cert = match verify_cycle(&union, &seq, false) {
        Ok(c) => c,
        Err(e) => return Ok(trace.fail(e.stage, e.reason, t)),
    };
    if cert.len() < target_len {
        return Ok(trace.fail(
            "length",
            format!("cycle of length {} below {target_len}", cert.len()),
            t,
        ));
    }
    trace.record(
        "assembly",
        true,
        format!("cycle of length {}", cert.len()),
        t,
    );
    let t = Instant::now();
    if union.n() <= cfg.limits.alpha_max {
        let alpha_union = independence_number(&union, &cfg.limits)?.alpha;
        if alpha_union as f64 <= cfg.constants.c3 * (n as f64).sqrt() {
            let on_cycle = VertexSet::new(cert.vertices.clone());
            let sub = union.induced(&on_cycle)?;
            let report = pancyclicity_report(&sub.graph, &cfg.limits)?;
            trace.record(
                "pancyclicity",
                true,
                format!(
                    "{} lengths present, {} missing, {} undecided",
                    report.present_lengths.len(),
                    report.missing_lengths.len(),
                    report.indeterminate_lengths.len()
                ),
                t,
            );
            trace.pancyclicity = Some(report);
        }
    }
    trace.outcome = PipelineOutcome::Success {
        length: cert.len(),
        certificate: CycleCertificate::new(cert.vertices),
    };
    trace.elapsed = started.elapsed();
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, FamilySpec};
    use crate::random::{sample_gnp, EdgeProbability, Seed};

    #[test]
    fn parameters() {
        assert_eq!(sizes(60, 4, 0.25), (2, 59, 1));
        assert_eq!(sizes(600, 2, 0.5), (37, 14, 3));
    }

    #[test]
    fn harvest_is_disjoint() {
        let g = build_family(&FamilySpec::MCliques { n: 60, m: 4 }).unwrap();
        let paths = harvest(&g, 2, 100);
        assert_eq!(paths.len(), 28);
        let all: VertexSet = paths.iter().flatten().copied().collect();
        assert_eq!(all.len(), 56);
    }

    #[test]
    fn complete_graph_succeeds() {
        let g = Graph::complete(12);
        let t =
            long_cycle_pipeline_thm4(&g, &Graph::empty(12), &PipelineConfig::default()).unwrap();
        assert!(t.succeeded(), "{:?}", t.outcome);
        assert!(t.accounting.unwrap().holds());
        assert!(t.pancyclicity.is_some());
    }

    #[test]
    fn cliques_without_random_edges_fail() {
        let g = build_family(&FamilySpec::MCliques { n: 60, m: 4 }).unwrap();
        let t =
            long_cycle_pipeline_thm4(&g, &Graph::empty(60), &PipelineConfig::default()).unwrap();
        assert!(!t.succeeded());
        assert!(matches!(
            t.failed_stage(),
            Some("length") | Some("aux-cycle")
        ));
    }

    #[test]
    fn cliques_with_random_edges() {
        let g = build_family(&FamilySpec::MCliques { n: 60, m: 4 }).unwrap();
        let p = 64.0 * 4.0 / 3600.0;
        let r = sample_gnp(60, EdgeProbability::new(p).unwrap(), Seed(2));
        let t = long_cycle_pipeline_thm4(&g, &r, &PipelineConfig::default()).unwrap();
        assert!(t.succeeded(), "{:?} {:?}", t.outcome, t.stages);
        assert!(t.certificate().unwrap().len() >= 45);
        assert!(t.accounting.unwrap().holds());
    }
}
