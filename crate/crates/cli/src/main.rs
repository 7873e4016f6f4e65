use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use singular_bie::commands::{cmd_convergence, cmd_solve};
use singular_bie::error::{CliError, CliResult};
use singular_bie::suites::run_suite;

/// Boundary integral solver for u_xx + u_yy + u_zz + (2α/x) u_x = 0.
#[derive(Parser)]
#[command(name = "singular-bie", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured problem and write `x,y,z,u` rows.
    Solve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a verification suite: specfun, gauss-flux, jumps, eigen, plane-identity.
    Verify {
        #[arg(long)]
        suite: String,
    },
    /// Solve a manufactured problem on refined grids and tabulate the error.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        levels: usize,
        /// Table path, overriding `output.convergence`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("SINGULAR_BIE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::config(format!("SINGULAR_BIE_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(format!("cannot configure {n} threads: {e}")))
}

fn verify(suite: &str) -> CliResult<()> {
    let checks = run_suite(suite)?;
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    println!("{suite}: {} checks, {failed} failed", checks.len());
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Solve { config } => cmd_solve(&config),
        Command::Verify { suite } => verify(&suite),
        Command::Convergence { config, levels, output } => cmd_convergence(&config, levels, output.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
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
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
