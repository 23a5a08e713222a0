use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use deltaplane::commands::{emit_dalf, emit_predict, run_dalf, run_predict};
use deltaplane::config::{parse_config_with_env, RunConfig};
use deltaplane::converge::{emit_converge, run_converge};
use deltaplane::report::{emit_report, Format};
use deltaplane::sweep::run_sweep;
use deltaplane::verify::{run_verify, Fault};
use deltaplane::{write_atomic, CliError, Result};

/// Bound state of a delta-interaction on a weakly deformed plane.
#[derive(Debug, Parser)]
#[command(name = "deltaplane", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (flat TOML); defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file, written atomically; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Numeric bound state, lower bound and asymptotics per beta.
    Sweep,
    /// The constant D by both representations.
    Dalf,
    /// Leading-order prediction of delta per beta.
    Predict,
    /// Run the verification suite; exit code 1 if any check fails.
    Verify {
        #[arg(long, value_enum, hide = true)]
        fault: Option<Fault>,
    },
    /// Grid-refinement study at converge.beta.
    Converge,
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let text = match &cli.config {
        Some(p) => std::fs::read_to_string(p).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        })?,
        None => String::new(),
    };
    parse_config_with_env(&text, std::env::vars())
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = load(cli)?;
    let format = cli.format.unwrap_or(cfg.output.format);
    let (bytes, ok) = match &cli.command {
        Command::Sweep => (emit_report(&run_sweep(&cfg)?, format)?, true),
        Command::Dalf => (emit_dalf(&run_dalf(&cfg)?, format)?, true),
        Command::Predict => (emit_predict(&run_predict(&cfg)?, format)?, true),
        Command::Converge => (emit_converge(&run_converge(&cfg)?, format)?, true),
        Command::Verify { fault } => {
            let report = run_verify(&cfg, *fault)?;
            (serde_json::to_vec_pretty(&report)?, report.passed)
        }
    };
    match cli.out.clone().or_else(|| cfg.output.path.clone().map(PathBuf::from)) {
        Some(path) => write_atomic(&path, &bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            })?;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
