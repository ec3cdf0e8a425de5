mod args;
mod commands;
mod manifest;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::{Report, Usage};
use manifest::Manifest;

const EXIT_USAGE: u8 = 64;
const EXIT_INDETERMINATE: u8 = 2;

fn name(c: &Command) -> &'static str {
    match c {
        Command::Generate(_) => "generate",
        Command::Perturb(_) => "perturb",
        Command::Check(_) => "check",
        Command::Decompose(_) => "decompose",
        Command::Link(_) => "link",
        Command::Construct(_) => "construct",
        Command::Sweep(_) => "sweep",
        Command::Threshold(_) => "threshold",
        Command::Scaling(_) => "scaling",
    }
}

fn run(cli: &Cli, m: &mut Manifest) -> anyhow::Result<Report> {
    let g = &cli.global;
    let seed = g.seed.unwrap_or_default();
    if let Some(w) = g.workers {
        if w == 0 {
            return Err(Usage("--workers must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()?;
    }
    match &cli.command {
        Command::Generate(a) => commands::generate(a, g.format, m),
        Command::Perturb(a) => commands::perturb(a, seed, m),
        Command::Check(a) => commands::check(a, g.format, m),
        Command::Decompose(a) => commands::decompose(a, g.format, seed, m),
        Command::Link(a) => commands::link(a, g.format, seed, m),
        Command::Construct(a) => commands::construct(a, g.format, seed, m),
        Command::Sweep(a) => commands::sweep(a, g.format, g.seed, m),
        Command::Threshold(a) => commands::threshold(a, g.format, g.seed, m),
        Command::Scaling(a) => commands::scaling(a, g.format, g.seed, m),
    }
}

/// Usage problems exit 64, capacity limits exit 2 like undecided searches,
/// anything else 64 as well since it stems from the given inputs.
fn error_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match e.downcast_ref::<perturbed::Error>() {
        Some(perturbed::Error::Capacity { .. }) => EXIT_INDETERMINATE,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut m = Manifest::new(
        name(&cli.command),
        argv[1..].to_vec(),
        cli.global.seed.map(|s| s.0),
    );
    let code = match run(&cli, &mut m) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.stdout.as_bytes());
            let _ = out.flush();
            report.code as u8
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            error_code(&e)
        }
    };
    m.exit_code = code as i32;
    let json = m.to_json();
    let dest = cli.global.manifest.clone().or(m.write_to.clone());
    match dest {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, json + "\n") {
                eprintln!("error: writing manifest {}: {e}", path.display());
            }
        }
        None => eprintln!("{json}"),
    }
    ExitCode::from(code)
}
