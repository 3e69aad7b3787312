//! Command-line front end: parse model files, dispatch verification suites
//! and cohomology computations, emit deterministic reports.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check, 2 on input
//! errors (unreadable files, parse errors, unknown flags).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use cartan_cli::commands::{self, CohomologyKind, TSpec};
use cartan_cli::model::ModelFile;
use cartan_cli::report::Report;
use cartan_cli::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "cartan",
    version,
    about = "Exact verification suites for equivariant cohomology models"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the Lie algebra, ideal, operation axioms and connection.
    Validate {
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        model: PathBuf,
    },
    /// Build the Weil algebra; verify Koszul's formula and acyclicity.
    Weil {
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        model: PathBuf,
    },
    /// Equivariant cohomology dimensions in the chosen description.
    Cohomology {
        #[arg(long = "model", value_enum)]
        kind: CohomologyArg,
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        model: PathBuf,
    },
    /// Verify the conjugation exp(A_T) D exp(-A_T) = D_T on W_G (x) A.
    Kalkman {
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        /// identity, zero, or seed:<int> for a deterministic random matrix.
        #[arg(long, default_value = "identity")]
        t: String,
        model: PathBuf,
    },
    /// Verify the transgression homotopy between two named connections.
    Transgress {
        #[arg(long)]
        theta0: String,
        #[arg(long)]
        theta1: String,
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        model: PathBuf,
    },
    /// Full reduction suite: moment map, Xi, homotopy identity, basic
    /// cohomology comparison, reduction of the named polynomials.
    Reduce {
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        model: PathBuf,
    },
    /// Equivariant characteristic class of a named invariant polynomial.
    CharClass {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        model: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CohomologyArg {
    Cartan,
    WeilBasic,
}

fn command_echo(cli: &Cli) -> String {
    match &cli.command {
        Command::Validate { max_degree, .. } => format!("validate --max-degree {max_degree}"),
        Command::Weil { max_degree, .. } => format!("weil --max-degree {max_degree}"),
        Command::Cohomology {
            kind, max_degree, ..
        } => {
            let k = match kind {
                CohomologyArg::Cartan => "cartan",
                CohomologyArg::WeilBasic => "weil-basic",
            };
            format!("cohomology --model {k} --max-degree {max_degree}")
        }
        Command::Kalkman { max_degree, t, .. } => {
            format!("kalkman --max-degree {max_degree} --t {t}")
        }
        Command::Transgress {
            theta0,
            theta1,
            max_degree,
            ..
        } => format!("transgress --theta0 {theta0} --theta1 {theta1} --max-degree {max_degree}"),
        Command::Reduce { max_degree, .. } => format!("reduce --max-degree {max_degree}"),
        Command::CharClass {
            poly, max_degree, ..
        } => format!("char-class --poly {poly} --max-degree {max_degree}"),
    }
}

fn model_path(cli: &Cli) -> &PathBuf {
    match &cli.command {
        Command::Validate { model, .. }
        | Command::Weil { model, .. }
        | Command::Cohomology { model, .. }
        | Command::Kalkman { model, .. }
        | Command::Transgress { model, .. }
        | Command::Reduce { model, .. }
        | Command::CharClass { model, .. } => model,
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let path = model_path(cli);
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let digest = commands::digest_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|e| CliError::input(format!("{} is not UTF-8: {e}", path.display())))?;
    let file = ModelFile::parse(&text)?;
    let loaded = file.load()?;
    let mut report = Report::new(command_echo(cli), path.display().to_string(), digest);
    let started = Instant::now();
    match &cli.command {
        Command::Validate { max_degree, .. } => {
            commands::validate(&loaded, *max_degree, &mut report)?
        }
        Command::Weil { max_degree, .. } => commands::weil(&loaded, *max_degree, &mut report)?,
        Command::Cohomology {
            kind, max_degree, ..
        } => {
            let kind = match kind {
                CohomologyArg::Cartan => CohomologyKind::Cartan,
                CohomologyArg::WeilBasic => CohomologyKind::WeilBasic,
            };
            commands::cohomology(&loaded, &kind, *max_degree, &mut report)?
        }
        Command::Kalkman { max_degree, t, .. } => {
            let t_spec = TSpec::parse(t)?;
            commands::kalkman(&loaded, &t_spec, *max_degree, &mut report)?
        }
        Command::Transgress {
            theta0,
            theta1,
            max_degree,
            ..
        } => commands::transgress(&loaded, theta0, theta1, *max_degree, &mut report)?,
        Command::Reduce { max_degree, .. } => {
            commands::reduce(&loaded, *max_degree, &mut report)?
        }
        Command::CharClass {
            poly, max_degree, ..
        } => commands::char_class(&loaded, poly, *max_degree, &mut report)?,
    }
    report.wall_ms = started.elapsed().as_millis();
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => print!("{}", report.render_json()),
            }
            if report.failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
