//! `zeno`: data files for the box-trap release experiments.

mod commands;
mod config;
mod error;
mod output;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::RunConfig;
use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Cmd {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Zeno,
    Units,
}

impl Cmd {
    pub fn name(self) -> &'static str {
        match self {
            Cmd::Fig1 => "fig1",
            Cmd::Fig2 => "fig2",
            Cmd::Fig3 => "fig3",
            Cmd::Fig4 => "fig4",
            Cmd::Zeno => "zeno",
            Cmd::Units => "units",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Analytic,
    Tdse,
    Both,
}

#[derive(Debug, Args)]
struct Common {
    /// Config file of `key = value` lines (`#` starts a comment)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one config key; may be repeated, applied after --config
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Shorthand for --set engine=...
    #[arg(long, value_enum)]
    engine: Option<EngineArg>,
}

/// Simulations of atoms released from a one-dimensional box trap.
///
/// Times are in units of t0 = M a^2 (hbar = 1), lengths in units of a.
/// Every output starts with `#` lines holding the resolved config and fitted values.
/// Exit status: 0 success, 2 usage or config error, 3 numerical failure.
#[derive(Debug, Parser)]
#[command(name = "zeno", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emitted wave near the trap edge at time t.
    ///
    /// Columns: x_over_a, re_analytic, im_analytic, abs_analytic, re_numeric,
    /// im_numeric, abs_numeric. The numeric wave is psi(t) - exp(-iEt) psi(0)
    /// from the Crank-Nicolson solver.
    Fig1(Common),
    /// Momentum distribution of escaped atoms.
    ///
    /// Columns: kind, m, k_times_a, w_analytic, w_numeric, transition,
    /// transition_numeric, ratio. Rows of kind 0 are exterior box modes,
    /// rows of kind 1 are transitions to other trap levels.
    Fig2(Common),
    /// Survival S and non-escape P after release (default: one atom, finite step).
    ///
    /// Columns: t_over_t0, s_numeric, p_numeric, s_closed, p_closed.
    Fig3(Common),
    /// As fig3 for four fermionized atoms.
    ///
    /// Columns: t_over_t0, s_numeric, p_numeric, s_closed, p_closed.
    Fig4(Common),
    /// Decay rate under repeated measurement over a sweep of intervals tau.
    ///
    /// Columns: tau_over_t0, gamma_analytic, gamma_tdse, gamma_anomalous,
    /// gamma_conventional (rates in units of 1/t0).
    Zeno(Common),
    /// Time scales in seconds for a species and trap width.
    ///
    /// Columns: t0_s, t_z_s, t_z_n_s, horizon_s, observability_window_s.
    Units(Common),
    /// Print the resolved configuration of a command with every default.
    PrintConfig {
        #[arg(value_enum)]
        target: Cmd,
        #[command(flatten)]
        common: Common,
    },
}

fn resolve(cmd: Cmd, common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::defaults(cmd);
    if let Some(path) = &common.config {
        cfg.apply_file(path)?;
    }
    if let Some(engine) = common.engine {
        let value = engine.to_possible_value().expect("no skipped variants");
        cfg.set("engine", value.get_name())?;
    }
    for pair in &common.set {
        cfg.set_pair(pair)?;
    }
    Ok(cfg)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (cmd, common, print_only) = match cli.command {
        Command::Fig1(c) => (Cmd::Fig1, c, false),
        Command::Fig2(c) => (Cmd::Fig2, c, false),
        Command::Fig3(c) => (Cmd::Fig3, c, false),
        Command::Fig4(c) => (Cmd::Fig4, c, false),
        Command::Zeno(c) => (Cmd::Zeno, c, false),
        Command::Units(c) => (Cmd::Units, c, false),
        Command::PrintConfig { target, common } => (target, common, true),
    };
    let cfg = resolve(cmd, &common)?;
    if print_only {
        let text = match common.format {
            Format::Csv => cfg.render(),
            Format::Json => {
                let map: serde_json::Map<String, serde_json::Value> =
                    cfg.pairs().map(|(k, v)| (k.to_string(), v.into())).collect();
                serde_json::to_string_pretty(&map).expect("serializable") + "\n"
            }
        };
        return emit(&text, common.out.as_ref());
    }
    let table = commands::run(&cfg)?;
    let text = match common.format {
        Format::Csv => table.csv(),
        Format::Json => table.json(),
    };
    emit(&text, common.out.as_ref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zeno: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
