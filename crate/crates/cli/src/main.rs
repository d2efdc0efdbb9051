use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use parrondo::qlga::PhaseOrder;
use parrondo_cli::analyze::analyze;
use parrondo_cli::calibrate::calibrate;
use parrondo_cli::calibrate::SearchSpace;
use parrondo_cli::error::CliError;
use parrondo_cli::params::{load_config, parse_assignment, Params};
use parrondo_cli::presets::{run_preset, write_tables, RunOptions, ScenarioPreset, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "parrondo", version, about = "Classical and quantum Parrondo game simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Pre,
    Mid,
    Post,
}

impl From<Order> for PhaseOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Pre => PhaseOrder::Pre,
            Order::Mid => PhaseOrder::Mid,
            Order::Post => PhaseOrder::Post,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a figure preset and write its tables.
    Run {
        #[arg(long)]
        preset: String,
        /// Parameter override `key=value`; repeatable, applied after --config.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Output directory; tables are printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Fix the quantum phase position instead of calibrating it.
        #[arg(long, value_enum)]
        phase_order: Option<Order>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// File of `key=value` lines loaded before --set.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Search quantum step conventions for the losing/losing/winning pattern.
    Calibrate {
        #[arg(long, value_enum)]
        phase_order: Option<Order>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Markov-chain analysis of game B.
    Analyze {
        #[arg(long, allow_hyphen_values = true)]
        p0: f64,
        #[arg(long, allow_hyphen_values = true)]
        p1: f64,
    },
}

fn params_from(config: Option<&PathBuf>, set: &[String]) -> Result<Params, CliError> {
    let mut assignments = match config {
        Some(path) => load_config(path)?,
        None => Vec::new(),
    };
    for s in set {
        assignments.push(parse_assignment(s)?);
    }
    Params::from_assignments(&assignments)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            preset,
            set,
            out,
            seed,
            phase_order,
            format: Format::Csv,
            config,
        } => {
            let preset: ScenarioPreset = preset.parse()?;
            let opts = RunOptions {
                params: params_from(config.as_ref(), &set)?,
                seed,
                phase_order: phase_order.map(Into::into),
            };
            let tables = run_preset(preset, &opts)?;
            match out {
                Some(dir) => {
                    for path in write_tables(&dir, &tables)? {
                        println!("{}", path.display());
                    }
                }
                None => {
                    for t in &tables {
                        print!("{}", t.table.to_csv_string());
                    }
                }
            }
        }
        Command::Calibrate { phase_order, set } => {
            let params = params_from(None, &set)?;
            let space = SearchSpace {
                order: phase_order.map(Into::into),
                init: params.init_phase,
                start: params.schedule_start,
            };
            let theta = params.theta.unwrap_or(std::f64::consts::FRAC_PI_4);
            print!("{}", calibrate(space, theta));
        }
        Command::Analyze { p0, p1 } => print!("{}", analyze(p0, p1)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
