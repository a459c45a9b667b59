use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use catsize::cli::report::{render, to_json};
use catsize::cli::run::run_scenario;
use catsize::cli::scenario::{check_same_basis, parse_scenario_with, parse_state, Scenario, ScenarioKind};
use catsize::cli::{render_reproduction, reproduce_paper, Format, Report};
use catsize::estimators::PhysicalConstants;
use catsize::materials::MaterialCatalog;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

/// Cat size of superposed quantum states.
#[derive(Parser)]
#[command(name = "catsize", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenario files.
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Run the built-in scenario set and compare with the reference figures.
    ReproducePaper {
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Compare two explicit many-body states.
    Exact {
        #[arg(long)]
        state_a: PathBuf,
        #[arg(long)]
        state_b: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Table => Format::Table,
            OutputFormat::Json => Format::Json,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn execute(command: Command) -> Result<String, Failure> {
    let constants = PhysicalConstants::default();
    match command {
        Command::Run { files, format } => {
            let catalog = MaterialCatalog::from_env().map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
            let mut scenarios = Vec::with_capacity(files.len());
            for path in &files {
                let text = read(path)?;
                let scenario = parse_scenario_with(&text, &catalog)
                    .map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
                scenarios.push(scenario);
            }
            let reports = run_all(&scenarios, &constants)?;
            Ok(render_reports(&reports, format.into()))
        }
        Command::ReproducePaper { format } => {
            let reproduction =
                reproduce_paper(&constants).map_err(|e| Failure::new(EXIT_DOMAIN, e.to_string()))?;
            Ok(render_reproduction(&reproduction, format.into()))
        }
        Command::Exact {
            state_a,
            state_b,
            format,
        } => {
            let parse = |path: &Path| {
                parse_state(&read(path)?)
                    .map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))
            };
            let a = parse(&state_a)?;
            let b = parse(&state_b)?;
            check_same_basis(&a, &b, "state_b", 1)
                .map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", state_b.display())))?;
            let scenario = Scenario {
                name: "exact".to_string(),
                kind: ScenarioKind::Exact { state_a: a, state_b: b },
                criterion: Default::default(),
            };
            let report = run_scenario(&scenario, &constants).map_err(|e| Failure::new(EXIT_DOMAIN, e.to_string()))?;
            Ok(render(&report, format.into()))
        }
    }
}

/// Scenarios are independent pure computations, so they run on scoped
/// threads; output order follows the command line.
fn run_all(scenarios: &[Scenario], constants: &PhysicalConstants) -> Result<Vec<Report>, Failure> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .map(|s| scope.spawn(move || run_scenario(s, constants)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .expect("scenario thread panicked")
                    .map_err(|e| Failure::new(EXIT_DOMAIN, e.to_string()))
            })
            .collect()
    })
}

fn render_reports(reports: &[Report], format: Format) -> String {
    match (format, reports) {
        (Format::Json, [single]) => render(single, Format::Json),
        (Format::Json, many) => to_json(&many),
        (Format::Table, many) => many
            .iter()
            .map(|r| render(r, Format::Table))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}
