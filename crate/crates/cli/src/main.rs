//! `nomic` command-line entry point.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::{Emit, Format};

#[derive(Debug, Parser)]
#[command(name = "nomic", version)]
#[command(about = "exact checks for toy phase spaces, measurements and the epistemic horizon")]
struct Cli {
    /// Output format. Text is for people and is never parsed back.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write the result here (atomically) instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for enumeration sweeps.
    #[arg(long, global = true, env = "NOMIC_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Leading,
    Trailing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    #[value(name = "appendix-a")]
    AppendixA,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that exactly the Poisson variables are measurable
    VerifyHorizon {
        /// z<p> or q
        #[arg(long, default_value = "z2")]
        field: String,
        #[arg(long, default_value_t = 1)]
        ns: usize,
        #[arg(long, default_value_t = 1)]
        na: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        /// Required in sample mode.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 12)]
        word_length: usize,
        /// How free manifest directions are chosen.
        #[arg(long, value_enum, default_value = "leading")]
        rule: RuleArg,
        /// Largest joint dimension to enumerate.
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },

    /// Replay a sequence of interactions and record pointer readings
    RunScenario {
        /// Scenario JSON file.
        file: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "file")]
        builtin: Option<Builtin>,
        /// Field for the built-in scenario, or an override for the file.
        #[arg(long)]
        field: Option<String>,
        /// Comma-separated initial state, e.g. "1,2,3,1/2,0,6".
        #[arg(long, conflicts_with_all = ["all_initial", "symbolic"])]
        initial: Option<String>,
        /// Run every initial state (finite fields).
        #[arg(long, conflicts_with = "symbolic")]
        all_initial: bool,
        /// Track states as affine forms in the initial coordinates.
        #[arg(long)]
        symbolic: bool,
    },

    /// Build the standard measurement of a Poisson variable
    BuildMeasurement {
        /// Variable JSON file: {"space": ..., "rows": [[...], ...]}.
        file: PathBuf,
    },

    /// Marginal of an epistemic state on one factor
    Marginalize {
        /// State JSON file: {"space": ..., "known": [...], "value_point": [...]}.
        file: PathBuf,
        /// Factor name or 1-based index.
        #[arg(long)]
        factor: String,
    },

    /// Gate an affine map: MᵀΩM = Ω
    CheckSymplectic {
        /// Transform JSON file: {"space": ..., "matrix": [...], "shift": [...]}.
        file: PathBuf,
    },

    /// Classify a subspace as isotropic, Lagrangian, symplectic or neither
    ClassifySubspace {
        /// Subspace JSON file: {"space": ..., "basis": [...]}.
        file: PathBuf,
    },

    /// Look for interactions that prepare the object in a fixed state
    SearchPreparation {
        #[arg(long, default_value = "z2")]
        field: String,
        #[arg(long, default_value_t = 1)]
        ns: usize,
        #[arg(long, default_value_t = 1)]
        na: usize,
        /// Also condition on each final pointer reading.
        #[arg(long)]
        postselect: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads.filter(|&n| n > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::VerifyHorizon {
            field,
            ns,
            na,
            mode,
            seed,
            samples,
            word_length,
            rule,
            max_dim,
        } => commands::verify_horizon(&field, ns, na, mode, seed, samples, word_length, rule, max_dim),
        Command::RunScenario {
            file,
            builtin,
            field,
            initial,
            all_initial,
            symbolic,
        } => commands::run_scenario(file.as_deref(), builtin, field.as_deref(), initial.as_deref(), all_initial, symbolic),
        Command::BuildMeasurement { file } => commands::build_measurement(&file),
        Command::Marginalize { file, factor } => commands::marginalize(&file, &factor),
        Command::CheckSymplectic { file } => commands::check_symplectic(&file),
        Command::ClassifySubspace { file } => commands::classify_subspace(&file),
        Command::SearchPreparation { field, ns, na, postselect } => {
            commands::search_preparation(&field, ns, na, postselect)
        }
    };
    match result {
        Ok(emit) => finish(emit, cli.format, cli.output.as_deref()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn finish(emit: Emit, format: Format, output: Option<&std::path::Path>) -> ExitCode {
    let text = emit.render(format);
    if let Err(e) = output::write(output, &text) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if let Some(msg) = &emit.failure {
        eprintln!("failure: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
