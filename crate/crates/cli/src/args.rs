use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use perturbed::{EdgeProbability, Ratio, Seed};

#[derive(Debug, Parser)]
#[command(
    name = "perturbed",
    version,
    about = "Randomly perturbed graphs at desk scale"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed, decimal or 0x-prefixed hex.
    #[arg(long, global = true)]
    pub seed: Option<Seed>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for sweep, threshold and scaling.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write the run manifest here instead of standard error.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a member of an extremal family.
    Generate(GenerateArgs),
    /// Add G(n, p) edges to a graph.
    Perturb(PerturbArgs),
    /// Decide or compute a property of a graph.
    Check(CheckArgs),
    /// Partition a graph into highly connected blocks, or bisect it.
    Decompose(DecomposeArgs),
    /// Vertex-disjoint paths between given endpoint pairs.
    Link(LinkArgs),
    /// Run a constructive cycle pipeline on G ∪ G(n, p).
    Construct(ConstructArgs),
    /// Monte Carlo estimates over a p grid.
    Sweep(SweepArgs),
    /// Locate the p where the success probability crosses a target.
    Threshold(ThresholdArgs),
    /// Thresholds along one family parameter against the predicted form.
    Scaling(ScalingArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Family kind, e.g. TwoCliques, CliqueForest, IAB.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Edge probability, decimal or a/b.
    #[arg(long)]
    pub p: EdgeProbability,
    /// Emit only the random edges.
    #[arg(long)]
    pub random_only: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckProperty {
    Hamiltonian,
    Pancyclic,
    Toughness,
    Alpha,
    Kappa,
    Circumference,
    Expander,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub property: CheckProperty,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Search node budget.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Toughness to test against, e.g. 3/2.
    #[arg(long)]
    pub t: Option<Ratio>,
    /// Largest set size for the expander check.
    #[arg(long)]
    pub k: Option<usize>,
    /// Expansion ratio for the expander check.
    #[arg(long)]
    pub d: Option<Ratio>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecomposeMethod {
    Bfkm,
    Lemma29,
    Bisect,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, value_enum)]
    pub method: DecomposeMethod,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Upper bound on the independence number; computed when absent.
    #[arg(long)]
    pub alpha_bound: Option<usize>,
    /// Attempts for the random bisection.
    #[arg(long, default_value_t = 64)]
    pub retries: usize,
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Endpoint pairs, e.g. 0:5,2:7.
    #[arg(long)]
    pub pairs: String,
    /// Require the paths to cover every vertex.
    #[arg(long)]
    pub spanning: bool,
    /// Factor c of the connectivity precondition.
    #[arg(long, default_value_t = 1.0)]
    pub c_factor: f64,
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PipelineKind {
    Thm1,
    Thm2,
    Thm4,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub pipeline: PipelineKind,
    /// Seed graph G.
    #[arg(long)]
    pub graph: PathBuf,
    /// Probability of the random edges, sampled from --seed.
    #[arg(long, required_unless_present = "random")]
    pub p: Option<EdgeProbability>,
    /// Read the random graph R from a file instead of sampling it.
    #[arg(long, conflicts_with = "p")]
    pub random: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub alpha_bound: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Pipeline configuration as JSON; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub budget: Option<u64>,
    /// Also write the full trace as JSON.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for sweep.csv, sweep.json and manifest.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub target: f64,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Parameter and values, e.g. k=8,16,32.
    #[arg(long)]
    pub axis: String,
    #[arg(long, default_value_t = 0.5)]
    pub target: f64,
}

/// Splits `name=v1,v2,...`.
pub fn parse_axis(s: &str) -> Result<(String, Vec<f64>), String> {
    let (name, values) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=v1,v2,..., got {s:?}"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err("empty axis name".into());
    }
    let values = values
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad axis value {v:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("axis has no values".into());
    }
    Ok((name.to_string(), values))
}
