use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use upl_cli::commands::{
    cmd_analyze, cmd_analyze_batch, cmd_convert, cmd_iron, cmd_solve, cmd_verify, load_instance,
    pretty, CliError, Direction, Output,
};
use upl_cli::plot::{plot_files, write_files};
use upl_cli::render::Style;
use upl_cli::{AnalyzeOptions, OutputFormat};

#[derive(Parser)]
#[command(
    name = "upl",
    version,
    about = "Exact analysis of upgrade pricing for finite type spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Text => OutputFormat::Text,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertDirection {
    /// Upgrade menu to separate prices.
    ToSeparate,
    /// Separate prices to an upgrade menu.
    ToUpgrade,
}

#[derive(Subcommand)]
enum Command {
    /// Check the sufficient conditions, build and certify the upgrade mechanism.
    Analyze {
        #[arg(required_unless_present = "batch", conflicts_with = "batch")]
        instance: Option<PathBuf>,
        /// Analyze every *.json file in a directory.
        #[arg(long, value_name = "DIR")]
        batch: Option<PathBuf>,
        /// Skip the LP cross-check.
        #[arg(long)]
        no_lp: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Solve the revenue LP exactly.
    Solve {
        instance: PathBuf,
        /// Print the LP to stderr.
        #[arg(long)]
        dump_lp: bool,
    },
    /// Check a mechanism for IC/IR and optimality, or against a certificate flow.
    Verify {
        instance: PathBuf,
        mechanism: PathBuf,
        #[arg(long)]
        flow: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the ironing algorithm and print its trace.
    Iron {
        instance: PathBuf,
        /// Comma-separated 1-based cutoffs, one per good.
        #[arg(long)]
        cutoffs: Option<String>,
    },
    /// Convert between upgrade menus and separate prices.
    Convert {
        instance: PathBuf,
        #[arg(value_enum)]
        direction: ConvertDirection,
        input: PathBuf,
    },
    /// Write pseudo-revenue and virtual-value CSV files.
    Plot { instance: PathBuf, out_dir: PathBuf },
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let style = Style::from_env();
    match cli.command {
        Command::Analyze {
            instance,
            batch,
            no_lp,
            format,
        } => {
            let options = AnalyzeOptions { lp: !no_lp };
            match (instance, batch) {
                (_, Some(dir)) => cmd_analyze_batch(&dir, options, format.into(), style),
                (Some(path), None) => cmd_analyze(&path, options, format.into(), style),
                (None, None) => Err(CliError::Usage("an instance or --batch is required".into())),
            }
        }
        Command::Solve { instance, dump_lp } => cmd_solve(&instance, dump_lp),
        Command::Verify {
            instance,
            mechanism,
            flow,
            format,
        } => cmd_verify(&instance, &mechanism, flow.as_deref(), format.into(), style),
        Command::Iron { instance, cutoffs } => cmd_iron(&instance, cutoffs.as_deref()),
        Command::Convert {
            instance,
            direction,
            input,
        } => {
            let direction = match direction {
                ConvertDirection::ToSeparate => Direction::ToSeparate,
                ConvertDirection::ToUpgrade => Direction::ToUpgrade,
            };
            cmd_convert(&instance, direction, &input)
        }
        Command::Plot { instance, out_dir } => {
            let inst = load_instance(&instance)?;
            let written = write_files(&out_dir, &plot_files(&inst))?;
            let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
            Ok(Output {
                stdout: pretty(&json!({ "files": names })),
                stderr: String::new(),
                code: 0,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code) = match run(cli) {
        Ok(out) => {
            let code = out.code;
            (out, code)
        }
        Err(e) => (
            Output {
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
                code: e.exit_code(),
            },
            e.exit_code(),
        ),
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(code as u8)
}
