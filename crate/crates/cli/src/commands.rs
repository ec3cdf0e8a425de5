use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use perturbed::checkers::{
    circumference, expander_check, independence_number, is_hamiltonian, is_t_tough,
    pancyclicity_report, toughness, vertex_connectivity,
};
use perturbed::decompose::{
    connectivity_bisection, disjoint_paths, partition_bfkm, partition_lemma29,
    spanning_path_system, SpanningConfig,
};
use perturbed::experiments::{estimate_probability, find_threshold, scaling_report, SweepConfig};
use perturbed::pipelines::{
    hamiltonicity_pipeline_thm1, hamiltonicity_pipeline_thm2, long_cycle_pipeline_thm4,
    PipelineConfig,
};
use perturbed::{build_family, parse_pairs, sample_gnp, FamilySpec, Graph, Limits, Seed, Verdict};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::manifest::Manifest;

/// What a subcommand prints and how it exits.
pub struct Report {
    pub stdout: String,
    pub code: i32,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report { stdout, code: 0 }
    }
}

/// Raised for flag combinations clap cannot express; maps to exit 64.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn read_text(path: &Path, m: &mut Manifest) -> Result<String> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    m.input(path, text.as_bytes());
    Ok(text)
}

fn read_graph(path: &Path, m: &mut Manifest) -> Result<Graph> {
    let text = read_text(path, m)?;
    Graph::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(out: &Option<std::path::PathBuf>, text: String) -> Result<Report> {
    match out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            Ok(Report::ok(String::new()))
        }
        None => Ok(Report::ok(text)),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn vertex_list(vs: &[usize]) -> String {
    vs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn no_csv(format: Format, what: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(usage(format!("csv output is not available for {what}")));
    }
    Ok(())
}

fn limits(budget: Option<u64>) -> Limits {
    budget.map(Limits::with_budget).unwrap_or_default()
}

pub fn generate(a: &GenerateArgs, format: Format, m: &mut Manifest) -> Result<Report> {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(a.family));
    obj.insert("n".into(), json!(a.n));
    for (name, v) in [("k", a.k), ("d", a.d), ("m", a.m)] {
        if let Some(v) = v {
            obj.insert(name.into(), json!(v));
        }
    }
    for (name, v) in [("delta", a.delta), ("c", a.c)] {
        if let Some(v) = v {
            obj.insert(name.into(), json!(v));
        }
    }
    let spec: FamilySpec = serde_json::from_value(Value::Object(obj))
        .map_err(|e| usage(format!("family {}: {e}", a.family)))?;
    let g = build_family(&spec)?;
    m.extra("family", serde_json::to_value(&spec)?);
    let text = match format {
        Format::Json => to_json(&json!({"family": spec, "graph": g.to_text()})),
        Format::Csv => return Err(usage("csv output is not available for generate")),
        Format::Text => g.to_text(),
    };
    write_or_print(&a.out, text)
}

pub fn perturb(a: &PerturbArgs, seed: Seed, m: &mut Manifest) -> Result<Report> {
    let g = read_graph(&a.input, m)?;
    let r = sample_gnp(g.n(), a.p, seed);
    let out = if a.random_only { r } else { g.union(&r)? };
    write_or_print(&a.out, out.to_text())
}

fn verdict_report<Y: Serialize, N: Serialize>(
    v: &Verdict<Y, N>,
    format: Format,
    certificate: Option<Vec<usize>>,
) -> Report {
    let stdout = match format {
        Format::Json => to_json(v),
        _ => match certificate {
            Some(c) => format!("{}\n{}\n", v.label(), vertex_list(&c)),
            None => format!("{}\n", v.label()),
        },
    };
    Report {
        stdout,
        code: v.exit_code(),
    }
}

pub fn check(a: &CheckArgs, format: Format, m: &mut Manifest) -> Result<Report> {
    no_csv(format, "check")?;
    let g = read_graph(&a.input, m)?;
    let lim = limits(a.budget);
    Ok(match a.property {
        CheckProperty::Hamiltonian => {
            let v = is_hamiltonian(&g, &lim)?;
            let cert = v.yes().map(|c| c.vertices.clone());
            verdict_report(&v, format, cert)
        }
        CheckProperty::Pancyclic => {
            let report = pancyclicity_report(&g, &lim)?;
            let v = report.verdict();
            match format {
                Format::Json => Report {
                    stdout: to_json(&report),
                    code: v.exit_code(),
                },
                _ => {
                    let mut s = format!("{}\n", v.label());
                    for (len, c) in &report.present_lengths {
                        s.push_str(&format!("{len}: {}\n", vertex_list(&c.vertices)));
                    }
                    Report {
                        stdout: s,
                        code: v.exit_code(),
                    }
                }
            }
        }
        CheckProperty::Toughness => match a.t {
            Some(t) => {
                let v = is_t_tough(&g, t, &lim)?;
                let witness = match &v {
                    Verdict::No(s) => Some(s.as_slice().to_vec()),
                    _ => None,
                };
                verdict_report(&v, format, witness)
            }
            None => {
                let r = toughness(&g, &lim)?;
                let stdout = match format {
                    Format::Json => to_json(&r),
                    _ => match (&r.toughness, &r.witness_set) {
                        (Some(t), Some(w)) => format!("{t}\n{}\n", vertex_list(w.as_slice())),
                        _ => "infinite\n".to_string(),
                    },
                };
                Report::ok(stdout)
            }
        },
        CheckProperty::Alpha => {
            let r = independence_number(&g, &lim)?;
            Report::ok(match format {
                Format::Json => to_json(&r),
                _ => format!("{}\n{}\n", r.alpha, vertex_list(r.witness.as_slice())),
            })
        }
        CheckProperty::Kappa => {
            let r = vertex_connectivity(&g);
            Report::ok(match format {
                Format::Json => to_json(&r),
                _ => match &r.cut {
                    Some(c) => format!("{}\n{}\n", r.kappa, vertex_list(c.as_slice())),
                    None => format!("{}\n", r.kappa),
                },
            })
        }
        CheckProperty::Circumference => {
            let r = circumference(&g, &lim)?;
            let code = if r.exact { 0 } else { 2 };
            let stdout = match format {
                Format::Json => to_json(&r),
                _ => match &r.witness {
                    Some(c) => format!("{}\n{}\n", r.length, vertex_list(&c.vertices)),
                    None => format!("{}\n", r.length),
                },
            };
            Report { stdout, code }
        }
        CheckProperty::Expander => {
            let (Some(k), Some(d)) = (a.k, a.d) else {
                return Err(usage("expander check needs --k and --d"));
            };
            let v = expander_check(&g, k, d)?;
            let witness = match &v {
                Verdict::No(s) => Some(s.as_slice().to_vec()),
                _ => None,
            };
            verdict_report(&v, format, witness)
        }
    })
}

pub fn decompose(
    a: &DecomposeArgs,
    format: Format,
    seed: Seed,
    m: &mut Manifest,
) -> Result<Report> {
    no_csv(format, "decompose")?;
    let g = read_graph(&a.input, m)?;
    let blocks_text = |blocks: &[perturbed::VertexSet], conn: &[usize]| {
        blocks
            .iter()
            .zip(conn)
            .enumerate()
            .map(|(i, (b, k))| format!("block {i} (kappa {k}): {}\n", vertex_list(b.as_slice())))
            .collect::<String>()
    };
    let (value, text, code) = match a.method {
        DecomposeMethod::Bfkm => match partition_bfkm(&g)? {
            Ok(p) => {
                let t = blocks_text(&p.blocks, &p.per_block_connectivity);
                (serde_json::to_value(&p)?, t, 0)
            }
            Err(r) => (serde_json::to_value(&r)?, format!("refused: {r}\n"), 1),
        },
        DecomposeMethod::Lemma29 => {
            let alpha = match a.alpha_bound {
                Some(x) => x,
                None => independence_number(&g, &Limits::default())?.alpha,
            };
            match partition_lemma29(&g, alpha)? {
                Ok(o) => {
                    let mut t =
                        blocks_text(&o.partition.blocks, &o.partition.per_block_connectivity);
                    t.push_str(&format!("conclusions hold: {}\n", o.conclusions.all_hold()));
                    let code = if o.conclusions.all_hold() { 0 } else { 1 };
                    (serde_json::to_value(&o)?, t, code)
                }
                Err(r) => (serde_json::to_value(&r)?, format!("refused: {r}\n"), 1),
            }
        }
        DecomposeMethod::Bisect => match connectivity_bisection(&g, a.retries, seed) {
            Ok(b) => {
                let t = format!(
                    "s1: {}\ns2: {}\n",
                    vertex_list(b.s1.as_slice()),
                    vertex_list(b.s2.as_slice())
                );
                (serde_json::to_value(&b)?, t, 0)
            }
            Err(f) => (
                serde_json::to_value(&f)?,
                format!("refused after {} attempts\n", f.attempts),
                1,
            ),
        },
    };
    Ok(Report {
        stdout: if format == Format::Json {
            to_json(&value)
        } else {
            text
        },
        code,
    })
}

pub fn link(a: &LinkArgs, format: Format, seed: Seed, m: &mut Manifest) -> Result<Report> {
    no_csv(format, "link")?;
    let g = read_graph(&a.input, m)?;
    let pairs = parse_pairs(&a.pairs).map_err(|e| usage(format!("--pairs: {e}")))?;
    let lim = limits(a.budget);
    let paths_text =
        |ps: &[Vec<usize>]| ps.iter().map(|p| vertex_list(p) + "\n").collect::<String>();
    if a.spanning {
        let cfg = SpanningConfig {
            c_factor: a.c_factor,
            seed,
            limits: lim,
            ..SpanningConfig::default()
        };
        let out = spanning_path_system(&g, &pairs, &cfg)?;
        let code = out.result.exit_code();
        let stdout = match format {
            Format::Json => to_json(&out),
            _ => match &out.result {
                Verdict::Yes((stage, sys)) => {
                    format!("yes ({stage:?})\n{}", paths_text(&sys.paths))
                }
                Verdict::No(fails) => fails
                    .iter()
                    .map(|f| format!("{:?}: {}\n", f.stage, f.reason))
                    .fold("no\n".to_string(), |acc, l| acc + &l),
                Verdict::Indeterminate => "indeterminate\n".into(),
            },
        };
        Ok(Report { stdout, code })
    } else {
        let v = disjoint_paths(&g, &pairs, &lim)?;
        let stdout = match (&v, format) {
            (_, Format::Json) => to_json(&v),
            (Verdict::Yes(sys), _) => format!("yes\n{}", paths_text(&sys.paths)),
            _ => format!("{}\n", v.label()),
        };
        Ok(Report {
            stdout,
            code: v.exit_code(),
        })
    }
}

pub fn construct(
    a: &ConstructArgs,
    format: Format,
    seed: Seed,
    m: &mut Manifest,
) -> Result<Report> {
    no_csv(format, "construct")?;
    let g = read_graph(&a.graph, m)?;
    let mut cfg = match &a.config {
        Some(path) => {
            let text = read_text(path, m)?;
            serde_json::from_str::<PipelineConfig>(&text)
                .map_err(|e| usage(format!("pipeline config: {e}")))?
        }
        None => PipelineConfig::default(),
    };
    cfg.seed = seed;
    if let Some(e) = a.epsilon {
        cfg.epsilon = e;
    }
    if let Some(x) = a.alpha_bound {
        cfg.alpha_bound = Some(x);
    }
    if let Some(d) = a.delta {
        cfg.delta_ratio = Some(d);
    }
    if let Some(b) = a.budget {
        cfg.limits.node_budget = b;
    }
    let r = match (&a.random, a.p) {
        (Some(path), _) => read_graph(path, m)?,
        (None, Some(p)) => sample_gnp(g.n(), p, seed),
        (None, None) => bail!(usage("construct needs --p or --random")),
    };
    let trace = match a.pipeline {
        PipelineKind::Thm1 => hamiltonicity_pipeline_thm1(&g, &r, &cfg)?,
        PipelineKind::Thm2 => hamiltonicity_pipeline_thm2(&g, &r, &cfg)?,
        PipelineKind::Thm4 => long_cycle_pipeline_thm4(&g, &r, &cfg)?,
    };
    if let Some(path) = &a.trace {
        fs::write(path, to_json(&trace)).with_context(|| format!("writing {}", path.display()))?;
    }
    let code = if trace.succeeded() { 0 } else { 1 };
    let stdout = match format {
        Format::Json => to_json(&trace),
        _ => match trace.certificate() {
            Some(c) => format!("success {}\n{}\n", c.len(), vertex_list(&c.vertices)),
            None => format!("failure\n{}\n", serde_json::to_string(&trace.outcome)?),
        },
    };
    Ok(Report { stdout, code })
}

fn sweep_config(path: &Path, seed: Option<Seed>, m: &mut Manifest) -> Result<SweepConfig> {
    let text = read_text(path, m)?;
    let mut cfg = SweepConfig::from_json(&text).map_err(|e| usage(e.to_string()))?;
    if let Some(s) = seed {
        cfg.base_seed = s;
    }
    m.extra("config_hash", json!(cfg.hash()));
    Ok(cfg)
}

pub fn sweep(
    a: &SweepArgs,
    format: Format,
    seed: Option<Seed>,
    m: &mut Manifest,
) -> Result<Report> {
    let cfg = sweep_config(&a.config, seed, m)?;
    let result = estimate_probability(&cfg)?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let csv = result.to_csv();
    let json = result.to_json() + "\n";
    fs::write(a.out.join("sweep.csv"), &csv)?;
    fs::write(a.out.join("sweep.json"), &json)?;
    m.output(&a.out.join("sweep.csv"), csv.as_bytes());
    m.output(&a.out.join("sweep.json"), json.as_bytes());
    m.write_to = Some(a.out.join("manifest.json"));
    Ok(Report::ok(match format {
        Format::Json => json,
        _ => csv,
    }))
}

pub fn threshold(
    a: &ThresholdArgs,
    format: Format,
    seed: Option<Seed>,
    m: &mut Manifest,
) -> Result<Report> {
    no_csv(format, "threshold")?;
    let cfg = sweep_config(&a.config, seed, m)?;
    let est = find_threshold(&cfg, a.target)?;
    Ok(Report::ok(match format {
        Format::Text => format!(
            "p* = {}\nbracket = [{}, {}]\nprobes = {}\nconverged = {}\n",
            est.p_star,
            est.bracket.0,
            est.bracket.1,
            est.probes.len(),
            est.converged
        ),
        _ => to_json(&est),
    }))
}

pub fn scaling(
    a: &ScalingArgs,
    format: Format,
    seed: Option<Seed>,
    m: &mut Manifest,
) -> Result<Report> {
    let (axis, values) = parse_axis(&a.axis).map_err(usage)?;
    let cfg = sweep_config(&a.config, seed, m)?;
    let report = scaling_report(&cfg, &axis, &values, a.target)?;
    Ok(Report::ok(match format {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv(),
        Format::Text => {
            let mut s = format!("form {}\n", report.form);
            for r in &report.rows {
                s.push_str(&format!(
                    "{}={}: p* = {}, predicted = {}, ratio = {}\n",
                    report.axis, r.value, r.p_star, r.predicted, r.ratio
                ));
            }
            s.push_str(&format!("spread = {}\n", report.spread));
            s
        }
    }))
}
