use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use comptab::lines::{Label, Line, LineSet};
use comptab::model::Composition;
use comptab::propagation::CellGrid;
use comptab::render::{self, Format, Style};
use comptab::report::{Report, Timing};
use comptab::verify::{field::MERSENNE_61, run_suite, RankOptions, SuiteOptions, SuiteReport};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::Value;

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "comptab", version, about = "Composition tableaux and the section e + V")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the tableau and the composition tableau.
    Tableau(Shape),
    /// List the lines labelled 1 and *.
    Lines(Shape),
    /// Print e, V, the quadruplets and the extras.
    Section(Shape),
    /// Run every check on one composition.
    Verify(VerifyArgs),
    /// Draw the tableau, the composition tableau or the matrix pattern.
    Render(RenderArgs),
    /// Run the checks on every composition up to a size.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Shape {
    /// Parts, comma or space separated.
    #[arg(required = true, num_args = 1..)]
    composition: Vec<String>,
    #[arg(long)]
    json: bool,
    /// Include the elapsed time in JSON output.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    no_rank: bool,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = MERSENNE_61)]
    prime: u64,
    #[arg(long, env = "COMPTAB_SEED", default_value_t = 0)]
    seed: u64,
}

impl RankArgs {
    fn options(&self) -> Option<RankOptions> {
        (!self.no_rank).then(|| RankOptions {
            trials: self.trials,
            prime: self.prime,
            seed: self.seed,
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    shape: Shape,
    #[command(flatten)]
    rank: RankArgs,
    /// Check this line family (JSON report or array of lines) instead of the computed one.
    #[arg(long, value_name = "FILE")]
    lines: Option<PathBuf>,
    /// Check this composition tableau (JSON report or array of rows) instead of the computed one.
    #[arg(long, value_name = "FILE")]
    extended: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(required = true, num_args = 1..)]
    composition: Vec<String>,
    #[arg(long, default_value = "ascii", value_parser = ["ascii", "svg", "tikz"])]
    format: String,
    #[arg(long, default_value = "t", value_parser = ["t", "tinf", "matrix"])]
    style: String,
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Largest n, at most 14.
    #[arg(long = "n", value_parser = clap::value_parser!(u32).range(1..=14))]
    max_n: u32,
    #[arg(long)]
    serial: bool,
    /// Largest n to run the rank check on.
    #[arg(long, default_value_t = 7)]
    rank_max_n: usize,
    #[command(flatten)]
    rank: RankArgs,
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn parse_composition(parts: &[String]) -> Result<Composition, Failure> {
    parts
        .join(" ")
        .parse()
        .map_err(|e| input_error(format!("invalid composition: {e}")))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// The value under `key` when given a whole report, the value itself otherwise.
fn unwrap_field(v: Value, key: &str) -> Value {
    match v {
        Value::Object(mut m) if m.contains_key(key) => m.remove(key).unwrap_or(Value::Null),
        other => other,
    }
}

#[derive(Deserialize)]
struct LineSpec {
    left: usize,
    right: usize,
    label: Label,
}

fn load_lines(path: &Path, c: &Composition) -> Result<LineSet, Failure> {
    let specs: Vec<LineSpec> = serde_json::from_value(unwrap_field(read_json(path)?, "lines"))
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let (_, t) = comptab::build_tableau(c);
    let n = c.n();
    let mut lines = Vec::with_capacity(specs.len());
    for s in specs {
        if s.left == 0 || s.right == 0 || s.left > n || s.right > n {
            return Err(input_error(format!(
                "{}: line ({},{}) outside 1..={n}",
                path.display(),
                s.left,
                s.right
            )));
        }
        lines.push(Line::new(&t, s.left, s.right, s.label));
    }
    Ok(LineSet::from(lines))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CellSpec {
    Entry(usize),
    Cell { entry: usize },
}

fn load_grid(path: &Path) -> Result<CellGrid, Failure> {
    let rows: Vec<Vec<Option<CellSpec>>> = serde_json::from_value(unwrap_field(read_json(path)?, "extended"))
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let plain: Vec<Vec<Option<usize>>> = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| {
                    c.map(|c| match c {
                        CellSpec::Entry(e) | CellSpec::Cell { entry: e } => e,
                    })
                })
                .collect()
        })
        .collect();
    CellGrid::try_from(plain).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn emit_report(mut report: Report, shape: &Shape, start: Instant) {
    if shape.timing {
        report.timing = Some(Timing {
            micros: start.elapsed().as_micros() as u64,
        });
    }
    emit(&(report.to_json() + "\n"));
}

fn grid_text(rows: &[Vec<String>]) -> String {
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1) + 1;
    rows.iter()
        .map(|r| {
            let line: String = r.iter().map(|c| format!("{c:>width$}")).collect();
            line.trim_end().to_string() + "\n"
        })
        .collect()
}

fn cmd_tableau(shape: &Shape) -> Result<(), Failure> {
    let start = Instant::now();
    let c = parse_composition(&shape.composition)?;
    let report = Report::build(&c);
    if shape.json {
        emit_report(report, shape, start);
        return Ok(());
    }
    let t: Vec<Vec<String>> = report
        .tableau
        .iter()
        .map(|r| r.iter().map(|c| c.map_or(String::new(), |e| e.to_string())).collect())
        .collect();
    let ext: Vec<Vec<String>> = report
        .extended
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| match c {
                    None => String::new(),
                    Some(c) if c.repeat => format!("({})", c.entry),
                    Some(c) => c.entry.to_string(),
                })
                .collect()
        })
        .collect();
    emit(&format!(
        "T for {c}:\n{}T(inf), repeated entries in parentheses:\n{}",
        grid_text(&t),
        grid_text(&ext)
    ));
    Ok(())
}

fn cmd_lines(shape: &Shape) -> Result<(), Failure> {
    let start = Instant::now();
    let report = Report::build(&parse_composition(&shape.composition)?);
    if shape.json {
        emit_report(report, shape, start);
    } else {
        emit(&report.lines_table());
    }
    Ok(())
}

fn cmd_section(shape: &Shape) -> Result<(), Failure> {
    let start = Instant::now();
    let report = Report::build(&parse_composition(&shape.composition)?);
    if shape.json {
        emit_report(report, shape, start);
    } else {
        emit(&report.section_table());
    }
    Ok(())
}

fn suite_text(r: &SuiteReport) -> String {
    let mut out = format!("verify {}\n", r.composition);
    for check in &r.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status} {}\n", check.name));
        for d in check.details.iter().filter(|_| check.passed) {
            out.push_str(&format!("     {d}\n"));
        }
    }
    out
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let c = parse_composition(&args.shape.composition)?;
    let opts = SuiteOptions {
        rank: args.rank.options(),
        lines: args.lines.as_deref().map(|p| load_lines(p, &c)).transpose()?,
        grid: args.extended.as_deref().map(load_grid).transpose()?,
    };
    let suite = run_suite(&c, &opts).map_err(|e| input_error(e.to_string()))?;
    let passed = suite.passed();
    for v in &suite.violations {
        eprintln!("violation: {v}");
    }
    if args.shape.json {
        let mut report = Report::build(&c);
        if let Some(lines) = opts.lines {
            report.section = comptab::build_section(&lines);
            report.lines = lines;
        }
        report.verification = Some(suite);
        emit_report(report, &args.shape, start);
    } else {
        emit(&suite_text(&suite));
    }
    if passed {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VIOLATION,
            message: "verification failed".into(),
        })
    }
}

fn cmd_render(args: &RenderArgs) -> Result<(), Failure> {
    let c = parse_composition(&args.composition)?;
    let format: Format = args.format.parse().map_err(|e: render::ParseRenderError| input_error(e.to_string()))?;
    let style: Style = args.style.parse().map_err(|e: render::ParseRenderError| input_error(e.to_string()))?;
    let text = render::render(&c, format, style);
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display()))),
        None => {
            emit(&text);
            Ok(())
        }
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let max_n = args.max_n as usize;
    let mut total = 0;
    let mut failures: Vec<SuiteReport> = Vec::new();
    for n in 1..=max_n {
        let all = Composition::all_of(n);
        let opts = SuiteOptions {
            rank: args.rank.options().filter(|_| n <= args.rank_max_n),
            ..Default::default()
        };
        let run = |c: &Composition| run_suite(c, &opts);
        let results: Result<Vec<SuiteReport>, _> = if args.serial {
            all.iter().map(run).collect()
        } else {
            all.par_iter().map(run).collect()
        };
        let results = results.map_err(|e| input_error(e.to_string()))?;
        let bad: Vec<SuiteReport> = results.into_iter().filter(|r| !r.passed()).collect();
        let rank = if opts.rank.is_some() { "with rank" } else { "no rank" };
        emit(&format!(
            "n={n:<2} compositions={:<5} violations={} ({rank})\n",
            all.len(),
            bad.len()
        ));
        total += all.len();
        failures.extend(bad);
    }
    let mut summary = format!("total compositions={total} violations={}\n", failures.len());
    for r in &failures {
        summary.push_str(&format!("FAIL {}\n", r.composition));
        for v in &r.violations {
            summary.push_str(&format!("     {v}\n"));
        }
    }
    emit(&summary);
    eprintln!("wall time {:.3}s", start.elapsed().as_secs_f64());
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VIOLATION,
            message: format!("{} compositions failed", failures.len()),
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Tableau(s) => cmd_tableau(s),
        Command::Lines(s) => cmd_lines(s),
        Command::Section(s) => cmd_section(s),
        Command::Verify(a) => cmd_verify(a),
        Command::Render(a) => cmd_render(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("comptab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
