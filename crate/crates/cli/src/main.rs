use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twosimple_cli::commands::{self, Outcome};
use twosimple_cli::source::{parse_family, parse_ints};
use twosimple_cli::{to_json, CliError};

#[derive(Parser)]
#[command(name = "twosimple", version, about = "Build and verify algebras with two simple modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilyArgs {
    /// green:l, kk:n, empty:n, random:n,m,(k..),seed, glued:m,pool,seed or a JSON file
    #[arg(long)]
    family: String,
    /// Write the JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a family and report property (G)
    CheckFamily {
        #[command(flatten)]
        common: FamilyArgs,
    },
    /// Build the closed-form algebra and its structure constants
    BuildAlgebra {
        #[command(flatten)]
        common: FamilyArgs,
        /// Grading as m + 1 comma-separated integers
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
    },
    /// Compare the closed form with the path-quotient oracle
    VerifyOracle {
        #[command(flatten)]
        common: FamilyArgs,
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Global dimension and Loewy length
    Gldim {
        #[command(flatten)]
        common: FamilyArgs,
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Twisted tensor product factorization certificate
    Factorize {
        #[command(flatten)]
        common: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
    },
    /// Hom table, exceptionality and endomorphism cohomology of the DG model
    DcatVerify {
        #[command(flatten)]
        common: FamilyArgs,
        /// Shifts as m comma-separated integers
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
    },
    /// Gluing graph, modesty and the evaluation map for n = 2, k = 1
    Curve {
        #[command(flatten)]
        common: FamilyArgs,
    },
    /// Run the acceptance suite and write a consolidated report
    Demo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn ints(s: Option<String>, what: &str) -> Result<Option<Vec<i64>>, CliError> {
    s.map(|s| parse_ints(&s, what)).transpose()
}

fn run(cmd: Command) -> Result<(Outcome, Option<PathBuf>), CliError> {
    Ok(match cmd {
        Command::CheckFamily { common } => (commands::check_family(&parse_family(&common.family)?)?, common.out),
        Command::BuildAlgebra { common, chi } => {
            (commands::build_algebra(&parse_family(&common.family)?, ints(chi, "chi")?)?, common.out)
        }
        Command::VerifyOracle { common, cutoff } => (commands::verify_oracle(&parse_family(&common.family)?, cutoff)?, common.out),
        Command::Gldim { common, cutoff } => (commands::gldim(&parse_family(&common.family)?, cutoff)?, common.out),
        Command::Factorize { common, chi } => (commands::factorize(&parse_family(&common.family)?, ints(chi, "chi")?)?, common.out),
        Command::DcatVerify { common, delta } => {
            (commands::dcat_verify(&parse_family(&common.family)?, ints(delta, "delta")?)?, common.out)
        }
        Command::Curve { common } => (commands::curve(&parse_family(&common.family)?)?, common.out),
        Command::Demo { seed, quick, out } => (commands::demo(seed, quick)?, out),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok((outcome, out)) => {
            println!("{}", outcome.summary);
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, to_json(&outcome.report)) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more checks failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
