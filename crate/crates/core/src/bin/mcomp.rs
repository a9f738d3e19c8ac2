use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use measure_compression::lipschitz::DEFAULT_BUDGET;
use measure_compression::report::{
    cmd_classify, cmd_functor_check, cmd_theorem_check, cmd_validate, Format, RunReport, TheoremArgs,
};

/// Compression constants and measure-algebra checks for maps between finite measure spaces.
#[derive(Parser)]
#[command(name = "mcomp", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate space and map files.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Classify a map: inverse-nil-preservation, compression, Lipschitz data.
    Classify { map: PathBuf },
    /// Check compression = fast Lipschitz = brute-force Lipschitz.
    TheoremCheck {
        map: Option<PathBuf>,
        /// Maximum non-null target atoms for the pair enumeration.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Number of random instances to generate and check.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the functor laws for a composable pair `f` then `g`.
    FunctorCheck { f: PathBuf, g: PathBuf },
}

fn emit(report: &RunReport, format: Format, output: Option<&PathBuf>) -> std::io::Result<()> {
    let text = report.render(format);
    match output {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match cli.command {
        Command::Validate { paths } => cmd_validate(&paths),
        Command::Classify { map } => cmd_classify(&map),
        Command::TheoremCheck {
            map,
            budget,
            trials,
            seed,
        } => cmd_theorem_check(&TheoremArgs {
            map,
            budget,
            trials,
            seed,
        }),
        Command::FunctorCheck { f, g } => cmd_functor_check(&f, &g),
    };
    if let Err(e) = emit(&report, cli.format, cli.output.as_ref()) {
        eprintln!("mcomp: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code as u8)
}
