use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polysing::runtime::{run, Verdict};
use polysing::surface::{parse_program, print_type, Diagnostic, Program, SourceMap};
use polysing::syntax::{Heap, System, Tag};
use polysing::typecheck::{check_program, CheckOptions};
use polysing::types::{dual, tail_with, weight_with, well_formed, BoundEnv, QueueSpec, Subtyping, TailError, Type, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "polysing", version, about = "Checker and interpreter for bounded-polymorphic endpoint types")]
struct Cli {
    /// Output format; `run` defaults to json, everything else to text.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Step budget for subtyping, weights and residuals.
    #[arg(long, env = "POLYSING_BUDGET", global = true, default_value_t = DEFAULT_BUDGET as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check every declaration.
    Check { file: PathBuf },
    /// Execute `Main`, printing the trace.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        /// Stop at the first leak, fault or isolation violation.
        #[arg(long)]
        monitor: bool,
    },
    /// Is T1 a subtype of T2?
    Subtype { file: PathBuf, t1: String, t2: String },
    Dual { file: PathBuf, t: String },
    Weight { file: PathBuf, t: String },
    Wf { file: PathBuf, t: String },
    /// Residual of T after the queue `m1(s1) m2(s2) ...`.
    Tail { file: PathBuf, t: String, queue: Vec<String> },
}

const TYPE_ERROR: u8 = 1;
const PARSE_ERROR: u8 = 2;
const INTERNAL: u8 = 3;
const VIOLATION: u8 = 4;
const OUT_OF_STEPS: u8 = 5;

struct Source {
    name: String,
    text: String,
    program: Program,
}

fn emit_diagnostic(format: Format, file: &str, text: &str, d: &Diagnostic) {
    let map = SourceMap::new(text);
    match format {
        Format::Text => eprintln!("{}", d.render(file, &map)),
        Format::Json => println!("{}", json!({ "diagnostics": [d.to_json(file, &map)] })),
    }
}

fn load(path: &PathBuf, format: Format) -> Result<Source, ExitCode> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| {
        emit_diagnostic(format, &name, "", &Diagnostic::error("io", e.to_string(), Default::default()));
        ExitCode::from(PARSE_ERROR)
    })?;
    match parse_program(&text) {
        Ok(program) => Ok(Source { name, text, program }),
        Err(d) => {
            emit_diagnostic(format, &name, &text, &d);
            Err(ExitCode::from(PARSE_ERROR))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget as usize;
    let result = match cli.command {
        Command::Check { file } => load(&file, cli.format.unwrap_or(Format::Text)).map(|s| check(&s, cli.format.unwrap_or(Format::Text), budget)),
        Command::Run { file, seed, steps, monitor } => {
            let format = cli.format.unwrap_or(Format::Json);
            load(&file, format).map(|s| run_main(&s, format, seed, steps, monitor))
        }
        Command::Subtype { file, t1, t2 } => query(&file, cli.format, &[t1, t2], |ts| {
            match Subtyping::new(budget).check(&BoundEnv::new(), &ts[0], &ts[1]) {
                Ok(b) => Answer::Ok(Value::Bool(b), b.to_string()),
                Err(e) => Answer::Budget(e.to_string()),
            }
        }),
        Command::Dual { file, t } => query(&file, cli.format, &[t], |ts| match dual(&ts[0]) {
            Ok(d) => Answer::Ok(Value::String(print_type(&d)), print_type(&d)),
            Err(e) => Answer::Operand(e.to_string()),
        }),
        Command::Weight { file, t } => query(&file, cli.format, &[t], |ts| {
            match weight_with(&BoundEnv::new(), &ts[0], budget) {
                Ok(w) => Answer::Ok(Value::String(w.to_string()), w.to_string()),
                Err(e) => Answer::Budget(e.to_string()),
            }
        }),
        Command::Wf { file, t } => query(&file, cli.format, &[t], |ts| {
            match well_formed(&ts[0], &Default::default(), &Default::default()) {
                Ok(()) => Answer::Ok(json!({ "well_formed": true }), "true".into()),
                Err(e) => Answer::Ok(json!({ "well_formed": false, "reason": e.to_string() }), format!("false: {e}")),
            }
        }),
        Command::Tail { file, t, queue } => tail_query(&file, cli.format, t, &queue, budget),
    };
    result.unwrap_or_else(|code| code)
}

fn check(src: &Source, format: Format, budget: usize) -> ExitCode {
    let opts = CheckOptions { budget, ..CheckOptions::default() };
    let report = check_program(&src.program, &opts);
    let map = SourceMap::new(&src.text);
    let mut diagnostics = Vec::new();
    for p in &report.procs {
        match &p.result {
            Ok(d) => diagnostics.extend(d.warnings.iter().map(|w| w.to_warning())),
            Err(e) => diagnostics.push(e.to_diagnostic()),
        }
    }
    let code = if report.errors().any(|(_, e)| e.is_budget()) {
        INTERNAL
    } else if report.is_ok() {
        0
    } else {
        TYPE_ERROR
    };
    match format {
        Format::Text => {
            for d in &diagnostics {
                eprintln!("{}", d.render(&src.name, &map));
            }
            for p in &report.procs {
                match &p.result {
                    Ok(d) => println!("ok {} ({} rule applications)", p.name, d.steps.len()),
                    Err(_) => println!("FAIL {}", p.name),
                }
            }
        }
        Format::Json => {
            let procs: Vec<Value> = report
                .procs
                .iter()
                .map(|p| match &p.result {
                    Ok(d) => json!({ "name": p.name, "ok": true, "rules": d.steps.len() }),
                    Err(e) => json!({ "name": p.name, "ok": false, "rule": e.rule }),
                })
                .collect();
            let diags: Vec<_> = diagnostics.iter().map(|d| d.to_json(&src.name, &map)).collect();
            println!("{}", json!({ "file": src.name, "ok": code == 0, "procs": procs, "diagnostics": diags }));
        }
    }
    ExitCode::from(code)
}

fn run_main(src: &Source, format: Format, seed: u64, steps: u64, monitor: bool) -> ExitCode {
    let Some(entry) = &src.program.entry else {
        emit_diagnostic(format, &src.name, &src.text, &Diagnostic::error("entry", "no `Main` process to run", Default::default()));
        return ExitCode::from(PARSE_ERROR);
    };
    let out = run(&System { heap: Heap::new(), process: entry.clone() }, seed, steps, monitor);
    for e in &out.trace {
        match format {
            Format::Json => println!("{}", serde_json::to_string(e).expect("serializable")),
            Format::Text => {
                let tag = e.tag.as_deref().map(|t| format!(" {t}")).unwrap_or_default();
                println!("{:>5} {}{} [{}] heap {} -> {}", e.step, e.rule, tag, e.subjects.join(", "), e.heap_before, e.heap_after)
            }
        }
    }
    let r = &out.report;
    match format {
        Format::Json => println!("{}", serde_json::to_string(r).expect("serializable")),
        Format::Text => println!("verdict {} at step {}: {}", r.verdict, r.step, r.witness.join(", ")),
    }
    ExitCode::from(match r.verdict {
        v if v.is_violation() => VIOLATION,
        Verdict::BudgetExhausted => OUT_OF_STEPS,
        _ => 0,
    })
}

enum Answer {
    Ok(Value, String),
    Operand(String),
    Budget(String),
}

fn parse_operand(src: &Source, format: Format, text: &str) -> Result<Type, ExitCode> {
    src.program.parse_type(text).map_err(|d| {
        emit_diagnostic(format, "<operand>", text, &d);
        ExitCode::from(TYPE_ERROR)
    })
}

fn query(file: &PathBuf, format: Option<Format>, operands: &[String], f: impl FnOnce(&[Type]) -> Answer) -> Result<ExitCode, ExitCode> {
    let format = format.unwrap_or(Format::Text);
    let src = load(file, format)?;
    let types = operands.iter().map(|o| parse_operand(&src, format, o)).collect::<Result<Vec<_>, _>>()?;
    Ok(answer(format, f(&types)))
}

fn answer(format: Format, a: Answer) -> ExitCode {
    let (code, value, text) = match a {
        Answer::Ok(v, t) => (0, json!({ "result": v }), t),
        Answer::Operand(m) => (TYPE_ERROR, json!({ "error": m }), format!("error: {m}")),
        Answer::Budget(m) => (INTERNAL, json!({ "error": m }), format!("error: {m}")),
    };
    match format {
        Format::Json => println!("{value}"),
        Format::Text if code == 0 => println!("{text}"),
        Format::Text => eprintln!("{text}"),
    }
    ExitCode::from(code)
}

/// `m`, `m()` or `m(T)`.
fn parse_spec(src: &Source, format: Format, text: &str) -> Result<QueueSpec, ExitCode> {
    let text = text.trim();
    let Some(open) = text.find('(') else {
        return Ok((Tag::new(text), None));
    };
    let inner = text[open + 1..].strip_suffix(')').ok_or_else(|| {
        emit_diagnostic(format, "<operand>", text, &Diagnostic::error("syntax", "expected `)` at the end of a queued message", Default::default()));
        ExitCode::from(TYPE_ERROR)
    })?;
    let tag = Tag::new(text[..open].trim());
    if inner.trim().is_empty() {
        Ok((tag, None))
    } else {
        Ok((tag, Some(parse_operand(src, format, inner)?)))
    }
}

fn tail_query(file: &PathBuf, format: Option<Format>, t: String, queue: &[String], budget: usize) -> Result<ExitCode, ExitCode> {
    let format = format.unwrap_or(Format::Text);
    let src = load(file, format)?;
    let t = parse_operand(&src, format, &t)?;
    let specs = queue.iter().map(|q| parse_spec(&src, format, q)).collect::<Result<Vec<_>, _>>()?;
    Ok(answer(
        format,
        match tail_with(&BoundEnv::new(), &t, &specs, budget) {
            Ok(r) => Answer::Ok(Value::String(print_type(&r)), print_type(&r)),
            Err(e @ TailError::Budget(_)) => Answer::Budget(e.to_string()),
            Err(e) => Answer::Operand(e.to_string()),
        },
    ))
}
