use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use syra::{run, CliError, Command, Format, RunConfig, Suite};
use syracuse_core::sweep::default_workers;
use syracuse_core::{IncDecPattern, PermPattern};

#[derive(Parser, Debug)]
#[command(name = "syra", version, about = "Permutation patterns of Syracuse iterates")]
struct Cli {
    /// Worker threads for range sweeps.
    #[arg(long, global = true, env = "SYRA_WORKERS")]
    workers: Option<usize>,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Write the report to PATH instead of stdout.
    #[arg(long = "out", global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Lemmas,
    Partitions,
    Classifier,
    Goldens,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classify one odd m by the residue rules.
    Classify {
        #[arg(long)]
        m: u128,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Count tuple patterns over odd m <= M.
    Census {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        n: usize,
    },
    /// Count and ratio of a single pattern.
    Density {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pattern: PermPattern,
    },
    /// Dropping-time counts N_k for k = 1..=K.
    Dropping {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = syracuse_core::census::DEFAULT_DROP_CAP)]
        cap: u32,
    },
    /// Observed, unobserved and proved-impossible patterns.
    Feasibility {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        n: usize,
    },
    /// Run an invariant suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1_000_000)]
        max: u64,
    },
    /// Smallest witness for an increasing-decreasing pattern.
    Incdec {
        #[arg(long)]
        pattern: IncDecPattern,
        #[arg(long)]
        max: u128,
    },
}

fn config(cli: Cli) -> RunConfig {
    let command = match cli.command {
        Cmd::Classify { m, n } => Command::Classify { m, n },
        Cmd::Census { max, n } => Command::Census { max, n },
        Cmd::Density { max, n, pattern } => Command::Density { max, n, pattern },
        Cmd::Dropping { max, k, cap } => Command::Dropping { max, k, cap },
        Cmd::Feasibility { max, n } => Command::Feasibility { max, n },
        Cmd::Verify { suite, max } => Command::Verify {
            suite: match suite {
                SuiteArg::Lemmas => Suite::Lemmas,
                SuiteArg::Partitions => Suite::Partitions,
                SuiteArg::Classifier => Suite::Classifier,
                SuiteArg::Goldens => Suite::Goldens,
            },
            max,
        },
        Cmd::Incdec { pattern, max } => Command::Incdec { pattern, max },
    };
    RunConfig {
        command,
        workers: cli.workers.unwrap_or_else(default_workers),
        format: cli.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Table => Format::Table,
        }),
        output_path: cli.out,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = config(cli);
    let result = run(&config).and_then(|report| {
        match &config.output_path {
            Some(path) => std::fs::write(path, &report.body)
                .map_err(|e| CliError::Failure(format!("writing {}: {e}", path.display())))?,
            None => print!("{}", report.body),
        }
        Ok(report)
    });
    match result {
        Ok(report) => ExitCode::from(report.exit_code()),
        Err(e) => {
            eprintln!("syra: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
