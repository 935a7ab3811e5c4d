//! `ffk`: special fibers of Fermat curves and bounds for the self-intersection
//! of the relative dualizing sheaf.

mod commands;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use commands::{CliError, Format, Suite, Table, Target, EXIT_PARAMETER};

#[derive(Parser)]
#[command(name = "ffk", version, about = "Exact special-fiber intersection theory for Fermat curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
#[command(group(ArgGroup::new("target").required(true).args(["n", "p"])))]
struct TargetArgs {
    /// Exponent N (odd, squarefree, composite); one fiber per prime factor.
    #[arg(long = "N", visible_alias = "n", conflicts_with_all = ["p", "m"])]
    n: Option<u64>,
    /// Prime of the fiber.
    #[arg(long, requires = "m")]
    p: Option<u64>,
    /// Cofactor m = N/p.
    #[arg(long, requires = "p")]
    m: Option<u64>,
}

impl TargetArgs {
    fn target(self) -> Target {
        match (self.n, self.p, self.m) {
            (Some(n), _, _) => Target::N(n),
            (None, Some(p), Some(m)) => Target::Pm { p, m },
            _ => unreachable!("clap enforces the target group"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Double roots of Psi mod p.
    Rho {
        #[arg(long)]
        p: u64,
    },
    /// Build and validate the special fiber.
    Fiber {
        #[command(flatten)]
        target: TargetArgs,
        /// Override the double-root count.
        #[arg(long)]
        s: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// CSV table to print.
        #[arg(long, value_enum, default_value = "components")]
        table: Table,
        /// Also write the configuration as JSON for `ffk validate`.
        #[arg(long)]
        emit_config: Option<PathBuf>,
    },
    /// Run the divisor identity suite at one cusp.
    Divisors {
        #[command(flatten)]
        target: TargetArgs,
        /// Cusp as `i,k`: the section meeting Chain(1, k, i).
        #[arg(long, default_value = "1,1", value_parser = parse_cusp)]
        cusp: (u64, u64),
    },
    /// Upper and lower bounds for one N.
    Bounds {
        #[arg(long = "N", visible_alias = "n")]
        n: u64,
        #[arg(long)]
        kappa1: Option<f64>,
        #[arg(long)]
        kappa2: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Lower bounds for every admissible N up to a limit, as CSV.
    Scan {
        #[arg(long = "max-N", visible_alias = "max-n")]
        max_n: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Validate a configuration written by `ffk fiber --emit-config`.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_cusp(s: &str) -> Result<(u64, u64), String> {
    let (i, k) = s.split_once(',').ok_or("expected i,k")?;
    let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(i)?, parse(k)?))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rho { p } => commands::rho(p),
        Command::Fiber { target, s, format, table, emit_config } => {
            commands::fiber(target.target(), s, format, table, emit_config.as_deref())
        }
        Command::Divisors { target, cusp } => commands::divisors(target.target(), cusp),
        Command::Bounds { n, kappa1, kappa2, format } => commands::bounds(n, kappa1, kappa2, format),
        Command::Scan { max_n, out } => commands::scan_cmd(max_n, &out),
        Command::Verify { suite } => commands::verify(suite),
        Command::Validate { config } => commands::validate(&config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMETER } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
