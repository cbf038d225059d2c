use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use multipole::scenario::{
    emit, emit_to_path, exit_code, parse_scenario, run_output, Format, OutputRequest, ResultTable, RunOptions,
    Scenario, ScenarioError,
};
use multipole::selfcheck;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Verb {
    Rabi,
    Coupling,
    Selectivity,
    Scan,
    VshGrid,
    Optimize,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

/// Rabi frequencies and geometric couplings of laser-driven multipole transitions.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    verb: Verb,
    /// Scenario file (TOML).
    #[arg(long, required_if_eq_any = [
        ("verb", "rabi"), ("verb", "coupling"), ("verb", "selectivity"),
        ("verb", "scan"), ("verb", "vsh-grid"), ("verb", "optimize"),
    ])]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance of the beam-coupling quadrature.
    #[arg(long, default_value_t = multipole::beams::DEFAULT_QUADRATURE_TOL)]
    tolerance: f64,
    /// Worker threads for scans and quadrature (0 = one per core).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Re-project each beam's polarization transverse to every plane-wave component.
    #[arg(long)]
    reproject_polarization: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

fn matches_verb(request: &OutputRequest, verb: Verb) -> bool {
    matches!(
        (request, verb),
        (OutputRequest::Rabi, Verb::Rabi)
            | (OutputRequest::Coupling, Verb::Coupling)
            | (OutputRequest::Selectivity, Verb::Selectivity)
            | (OutputRequest::Scan { .. }, Verb::Scan)
            | (OutputRequest::VshGrid { .. }, Verb::VshGrid)
            | (OutputRequest::Optimize { .. }, Verb::Optimize)
    )
}

/// Tables for every request of the verb's kind, concatenated in request
/// order. Single-value verbs are evaluated even if the file does not ask.
fn tables_for(s: &Scenario, verb: Verb, opts: &RunOptions) -> Result<ResultTable, Failure> {
    let mut indices: Vec<usize> = (0..s.outputs.len())
        .filter(|&i| matches_verb(&s.outputs[i], verb))
        .collect();
    let mut scenario = s.clone();
    if indices.is_empty() {
        let synthesized = match verb {
            Verb::Rabi => OutputRequest::Rabi,
            Verb::Coupling => OutputRequest::Coupling,
            Verb::Selectivity => OutputRequest::Selectivity,
            _ => {
                return Err(Failure {
                    code: exit_code::PARSE,
                    message: format!("scenario has no [[output]] of kind {}", verb_kind(verb)),
                })
            }
        };
        scenario.outputs.push(synthesized);
        indices.push(scenario.outputs.len() - 1);
    }
    let mut tables = indices
        .iter()
        .map(|&i| run_output(&scenario, i, opts).map(|t| (i, t)))
        .collect::<Result<Vec<_>, _>>()?;
    if tables.len() == 1 {
        return Ok(tables.pop().expect("one table").1);
    }
    let (first, head) = tables.remove(0);
    let mut out = ResultTable {
        columns: head.columns.clone(),
        ..ResultTable::default()
    };
    out.append(head, &format!("output.{first}."));
    for (i, t) in tables {
        out.append(t, &format!("output.{i}."));
    }
    Ok(out)
}

fn verb_kind(verb: Verb) -> &'static str {
    match verb {
        Verb::Rabi => "rabi",
        Verb::Coupling => "coupling",
        Verb::Selectivity => "selectivity",
        Verb::Scan => "scan",
        Verb::VshGrid => "vsh_grid",
        Verb::Optimize => "optimize",
        Verb::Verify => "verify",
    }
}

fn warn_paraxial(s: &Scenario) {
    for (i, d) in s.drives.iter().enumerate() {
        if let Some(w) = d.beam_spec(s.transition.omega).and_then(|b| b.paraxial_warning()) {
            eprintln!(
                "warning: drive {i}: k·w0 = {:.3} is small; the paraxial treatment may be inaccurate",
                w.kw0
            );
        }
    }
}

fn verify(out: &mut dyn Write) -> io::Result<bool> {
    let mut all = true;
    for o in selfcheck::run_all() {
        let status = if o.passed() { "PASS" } else { "FAIL" };
        all &= o.passed();
        writeln!(
            out,
            "{status} {} ({} cases, max error {:.3e}, tolerance {:.0e})",
            o.name, o.cases, o.max_error, o.tolerance
        )?;
    }
    Ok(all)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Failure {
                code: exit_code::FAILURE,
                message: format!("thread pool: {e}"),
            })?;
    }
    if cli.verb == Verb::Verify {
        let stdout = io::stdout();
        let ok = verify(&mut stdout.lock()).map_err(|e| Failure {
            code: exit_code::FAILURE,
            message: e.to_string(),
        })?;
        return if ok {
            Ok(())
        } else {
            Err(Failure {
                code: exit_code::FAILURE,
                message: "self-checks failed".into(),
            })
        };
    }
    if !(cli.tolerance.is_finite() && cli.tolerance > 0.0) {
        return Err(Failure {
            code: exit_code::PARSE,
            message: format!("--tolerance must be positive, got {}", cli.tolerance),
        });
    }
    let path = cli.scenario.as_ref().expect("clap enforces --scenario");
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: exit_code::PARSE,
        message: format!("{}: {e}", path.display()),
    })?;
    let scenario = parse_scenario(&text).map_err(|e| Failure {
        code: e.exit_code(),
        message: format!("{}: {e}", path.display()),
    })?;
    warn_paraxial(&scenario);
    let opts = RunOptions {
        tolerance: cli.tolerance,
        reproject_polarization: cli.reproject_polarization,
    };
    let table = tables_for(&scenario, cli.verb, &opts)?;
    let format = match cli.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Jsonl => Format::JsonLines,
    };
    match &cli.out {
        Some(p) => emit_to_path(&table, format, p)?,
        None => emit(&table, format, io::stdout().lock()).map_err(|e| Failure {
            code: exit_code::FAILURE,
            message: format!("stdout: {e}"),
        })?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(u8::try_from(f.code).unwrap_or(1))
        }
    }
}
