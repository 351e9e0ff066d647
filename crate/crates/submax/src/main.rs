use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use submax::{
    csv_report, generate_instance, run_experiment, sweep_eps, Error, ExperimentConfig,
    InstanceKind, OptMode,
};

#[derive(Parser)]
#[command(
    name = "submax",
    about = "Benchmark runner for parallel submodular maximization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OptFlag {
    Auto,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    FatPath,
    FatTail,
    RandomCoverage,
    RandomPartition,
    RandomCut,
    BipartiteMatchoid,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and report values, rounds and oracle calls.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = OptFlag::Auto)]
        opt: OptFlag,
    },
    /// Generate a benchmark instance file.
    Gen {
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        legs: Option<usize>,
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        universe: Option<usize>,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        blocks: Option<usize>,
        #[arg(long)]
        edge_prob: Option<f64>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        edges: Option<usize>,
    },
    /// Re-run one config over a list of parameter values.
    Sweep {
        config: PathBuf,
        #[arg(long, default_value = "eps")]
        param: String,
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = OptFlag::Off)]
        opt: OptFlag,
    },
}

fn load_config(path: &PathBuf) -> Result<ExperimentConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Incompatible(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            config,
            out,
            csv,
            workers,
            opt,
        } => {
            let cfg = load_config(&config)?;
            let mode = match opt {
                OptFlag::Auto => OptMode::Auto,
                OptFlag::Off => OptMode::Off,
            };
            let report = run_experiment(&cfg, workers, mode)?;
            eprintln!(
                "{}: mean value {:.6} over {} reps, mean rounds {:.1}{}",
                report.instance,
                report.mean_value,
                report.rows.len(),
                report.mean_rounds,
                report
                    .ratio
                    .map(|r| format!(", ratio {r:.4}"))
                    .unwrap_or_default()
            );
            if let Some(csv_path) = &csv {
                std::fs::write(csv_path, csv_report(&report))?;
            }
            let json =
                serde_json::to_string_pretty(&report).map_err(|e| Error::Config(e.to_string()))?;
            write_or_print(&out, &format!("{json}\n"))?;
            Ok(())
        }
        Command::Gen {
            kind,
            seed,
            out,
            legs,
            copies,
            n,
            universe,
            density,
            rank,
            blocks,
            edge_prob,
            a,
            b,
            edges,
        } => {
            let missing = |what: &str| Error::Config(format!("--{what} is required for this kind"));
            let kind = match kind {
                GenKind::FatPath => InstanceKind::FatPath {
                    legs: legs.ok_or_else(|| missing("legs"))?,
                    copies: copies.ok_or_else(|| missing("copies"))?,
                },
                GenKind::FatTail => InstanceKind::FatTail {
                    n: n.ok_or_else(|| missing("n"))?,
                    copies: copies.ok_or_else(|| missing("copies"))?,
                },
                GenKind::RandomCoverage => InstanceKind::RandomCoverage {
                    n: n.ok_or_else(|| missing("n"))?,
                    universe: universe.ok_or_else(|| missing("universe"))?,
                    density: density.ok_or_else(|| missing("density"))?,
                    rank,
                },
                GenKind::RandomPartition => InstanceKind::RandomPartition {
                    n: n.ok_or_else(|| missing("n"))?,
                    blocks: blocks.ok_or_else(|| missing("blocks"))?,
                },
                GenKind::RandomCut => InstanceKind::RandomCut {
                    n: n.ok_or_else(|| missing("n"))?,
                    edge_prob: edge_prob.ok_or_else(|| missing("edge-prob"))?,
                },
                GenKind::BipartiteMatchoid => InstanceKind::BipartiteMatchoid {
                    a: a.ok_or_else(|| missing("a"))?,
                    b: b.ok_or_else(|| missing("b"))?,
                    edges: edges.ok_or_else(|| missing("edges"))?,
                },
            };
            let inst = generate_instance(&kind, seed)?;
            let json =
                serde_json::to_string_pretty(&inst).map_err(|e| Error::Config(e.to_string()))?;
            write_or_print(&out, &format!("{json}\n"))
        }
        Command::Sweep {
            config,
            param,
            values,
            csv,
            workers,
            opt,
        } => {
            if param != "eps" {
                return Err(Error::Config(format!(
                    "unsupported sweep parameter {param:?}"
                )));
            }
            let cfg = load_config(&config)?;
            let mode = match opt {
                OptFlag::Auto => OptMode::Auto,
                OptFlag::Off => OptMode::Off,
            };
            let (reports, table) = sweep_eps(&cfg, &values, workers, mode)?;
            for r in &reports {
                eprintln!(
                    "eps {:>6}: mean value {:.6}, mean rounds {:.1}",
                    r.eps, r.mean_value, r.mean_rounds
                );
            }
            write_or_print(&csv, &table)
        }
    }
}
