use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qsteer_cli::export::{export_dot, export_structured};
use qsteer_cli::report::ReportDocument;
use qsteer_cli::runner::{requested_outputs, run_scenario};
use qsteer_cli::scenario::{parse_scenario, OutputKind, ScenarioFile};
use qsteer_cli::table::emit_table;
use qsteer_cli::{CliError, CliResult};

/// Default output directory when --out is not given.
const OUT_DIR_ENV: &str = "QSTEER_OUT_DIR";

#[derive(Parser)]
#[command(name = "qsteer", version, about = "steering witness and monogamy scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and emit its reports/tables/graphs.
    Run {
        /// Path to the scenario file (TOML).
        scenario: PathBuf,
        /// Output directory; files are written as <name>.<kind>.<ext>.
        /// Falls back to QSTEER_OUT_DIR; otherwise prints to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Restrict emission to one output kind.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Report,
    Table,
    Graph,
}

impl From<FormatArg> for OutputKind {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Report => OutputKind::Report,
            FormatArg::Table => OutputKind::Table,
            FormatArg::Graph => OutputKind::Graph,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            scenario,
            out,
            seed,
            format,
        } => match run(&scenario, out, seed, format) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}

fn run(
    path: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    format: Option<FormatArg>,
) -> CliResult<()> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let mut scenario: ScenarioFile = parse_scenario(&text)?;
    if let Some(seed) = seed {
        scenario.seed = seed;
    }

    let report = run_scenario(&scenario)?;

    let outputs: Vec<OutputKind> = match format {
        Some(f) => vec![f.into()],
        None => requested_outputs(&scenario),
    };
    let out_dir = out.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from));

    for kind in outputs {
        match kind {
            OutputKind::Report => {
                emit(&out_dir, &scenario.name, "report.json", &report.to_json())?
            }
            OutputKind::Table => {
                let table = report.sweep.as_ref().ok_or_else(|| {
                    CliError::Validation(
                        "scenario requests a table but has no sweep".into(),
                    )
                })?;
                emit(&out_dir, &scenario.name, "table.csv", &emit_table(table))?;
            }
            OutputKind::Graph => {
                let graph = graph_of(&report)?;
                emit(&out_dir, &scenario.name, "graph.json", &export_structured(graph))?;
                emit(&out_dir, &scenario.name, "graph.dot", &export_dot(graph))?;
            }
        }
    }
    Ok(())
}

fn graph_of(report: &ReportDocument) -> CliResult<&qsteer_core::graph::SteeringGraph> {
    report.graph.as_ref().ok_or_else(|| {
        CliError::Validation("scenario requests a graph but has no graph plan".into())
    })
}

fn emit(out_dir: &Option<PathBuf>, name: &str, suffix: &str, content: &str) -> CliResult<()> {
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join(format!("{name}.{suffix}"));
            std::fs::write(&path, content)
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}
