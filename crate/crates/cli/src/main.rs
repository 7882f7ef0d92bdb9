use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use su11_walk::PhaseMode;
use su11_walk_cli::commands;
use su11_walk_cli::config::{
    self, ChartKind, ChartSpec, CrossCheckSuite, ExperimentConfig, OverlapConfig,
};
use su11_walk_cli::table::Format;
use su11_walk_cli::{CliError, Result};

#[derive(Parser)]
#[command(
    name = "su11walk",
    version,
    about = "Quantum walks over SU(1,1) and Heisenberg-Weyl coherent-state frames"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Table format.
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run one walk experiment and write its tables.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's phase mode.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<PhaseMode>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate |overlap| of SU(1,1) coherent states on a theta grid.
    Overlap {
        /// JSON grid `{name, k, r, points}`; flags below are used otherwise.
        #[arg(long, conflicts_with_all = ["k", "r"])]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        k: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        r: Vec<f64>,
        #[arg(long, default_value_t = 361)]
        points: usize,
        #[arg(long, default_value = "overlap")]
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the coherent-frame engine with the ladder-basis oracle.
    Crosscheck {
        /// JSON suite; the built-in desk-scale grid is used otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Restrict the suite to one phase mode.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<PhaseMode>,
        #[command(flatten)]
        common: Common,
    },
    /// Render one or more tables as an SVG chart.
    Chart {
        /// Tables written by `run`, `overlap` or `crosscheck`.
        #[arg(required = true)]
        tables: Vec<PathBuf>,
        /// JSON chart spec; flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_parser = parse_kind)]
        kind: Option<ChartKind>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Vec<String>,
        #[arg(long)]
        title: Option<String>,
        /// Output file stem.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse()
}

fn parse_mode(s: &str) -> std::result::Result<PhaseMode, String> {
    s.parse()
}

fn parse_kind(s: &str) -> std::result::Result<ChartKind, String> {
    s.parse()
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn validated<T: config::Validate>(value: T, origin: &Path) -> Result<T> {
    value.validate().map_err(|message| CliError::Config {
        path: origin.to_owned(),
        message,
    })?;
    Ok(value)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            mode,
            common,
        } => {
            let mut cfg: ExperimentConfig = config::load(&config)?;
            if let Some(mode) = mode {
                cfg.phase_mode = mode;
            }
            let paths = commands::cmd_run(&cfg, &common.out, common.format)?;
            print_paths(&paths);
        }
        Command::Overlap {
            config,
            k,
            r,
            points,
            name,
            common,
        } => {
            let cfg: OverlapConfig = match config {
                Some(path) => config::load(&path)?,
                None => validated(OverlapConfig { name, k, r, points }, Path::new("<flags>"))
                    .map_err(|e| CliError::Usage(e.to_string()))?,
            };
            let path = commands::cmd_overlap(&cfg, &common.out, common.format)?;
            print_paths(&[path]);
        }
        Command::Crosscheck {
            config,
            mode,
            common,
        } => {
            let mut suite: CrossCheckSuite = match config {
                Some(path) => config::load(&path)?,
                None => CrossCheckSuite::default(),
            };
            if let Some(mode) = mode {
                suite.modes = vec![mode];
            }
            let outcome = commands::cmd_crosscheck(&suite, &common.out, common.format)?;
            for rep in &outcome.reports {
                let c = &rep.config;
                let status = match (rep.passed, rep.expected_divergence) {
                    (true, _) => "pass",
                    (false, true) => "expected-divergence",
                    (false, false) => "FAIL",
                };
                println!(
                    "{status:<20} k={} r={} L={} steps={} mode={} max|dP|={:.3e} max|dS|={:.3e}",
                    c.k,
                    c.r,
                    c.sites,
                    c.steps,
                    c.phase_mode,
                    rep.max_probability_deviation,
                    rep.max_entropy_deviation
                );
            }
            print_paths(std::slice::from_ref(&outcome.path));
            let failures = outcome.failures();
            for rep in &failures {
                if let Some(d) = rep.first_divergence {
                    eprintln!(
                        "failed: k={} r={} diverged in {:?} at step {} by {:.3e}",
                        rep.config.k, rep.config.r, d.quantity, d.step, d.deviation
                    );
                }
            }
            if !failures.is_empty() {
                return Err(CliError::CrossCheck {
                    failed: failures.len(),
                    total: outcome
                        .reports
                        .iter()
                        .filter(|r| r.config.phase_mode == PhaseMode::Physical)
                        .count(),
                });
            }
        }
        Command::Chart {
            tables,
            config,
            kind,
            x,
            y,
            title,
            name,
            out,
        } => {
            let mut spec: ChartSpec = match config {
                Some(path) => config::load(&path)?,
                None => ChartSpec::default(),
            };
            spec.kind = kind.or(spec.kind);
            spec.x = x.or(spec.x);
            if !y.is_empty() {
                spec.y = y;
            }
            spec.title = title.or(spec.title);
            spec.name = name.or(spec.name);
            let spec = validated(spec, Path::new("<flags>"))?;
            let path = commands::cmd_chart(&tables, &spec, &out)?;
            print_paths(&[path]);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
