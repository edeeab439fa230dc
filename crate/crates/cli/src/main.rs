use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use equivar_cli::{execute, parse_window, CliError, Format};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Table,
    Machine,
}

/// Run one job file and print its report.
#[derive(Debug, Parser)]
#[command(name = "equivar", version)]
struct Args {
    /// Job file; `-` reads standard input.
    input: PathBuf,
    /// Truncation order for series expansions.
    #[arg(long)]
    order: Option<i64>,
    /// Weight window `a..b` for cohomology tables.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io(format!("stdin: {e}")))
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let format = match args.format {
        OutputFormat::Table => Format::Table,
        OutputFormat::Machine => Format::Machine,
    };
    match read(&args.input).and_then(|text| execute(&text, args.order, args.window, format)) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
