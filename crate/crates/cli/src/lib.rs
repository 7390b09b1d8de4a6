//! Library side of the `matchgame` command: file formats, the built-in
//! worked example, and one function per subcommand.
//!
//! Exit codes: 0 green (or exact match), 1 red report or solver failure,
//! 2 malformed input, 3 contract violation.

pub mod example;
pub mod bench;
pub mod format;

use format::{emit_instance, emit_profile, emit_trace, generated_meta, parse_instance, parse_profile, parse_trace};
use matchgame::engine::{replay, solve};
use matchgame::gen::{generate, GenSpec};
use matchgame::model::GameClass;
use matchgame::verify::internal_stability;
use std::fmt;
use std::io::Write;
use std::path::Path;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or ill-formed input (exit 2).
    Malformed(String),
    /// Well-formed input that breaks a solver precondition (exit 3).
    Contract(String),
    /// The solver gave up or the result is not stable (exit 1).
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Malformed(_) => 2,
            CliError::Contract(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Malformed(m) => write!(f, "malformed input: {m}"),
            CliError::Contract(m) => write!(f, "{m}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl From<matchgame::Error> for CliError {
    fn from(e: matchgame::Error) -> Self {
        match e {
            matchgame::Error::Contract(_) => CliError::Contract(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Malformed(format!("{}: {e}", path.display()))
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Failed(e.to_string())),
    }
}

fn say(out: &mut dyn Write, line: &str) {
    // A closed stdout is not worth a failure exit.
    let _ = writeln!(out, "{line}");
}

/// Options of `matchgame solve`.
#[derive(Clone, Debug, Default)]
pub struct SolveArgs {
    pub eps: Option<f64>,
    pub order: Option<Vec<usize>>,
    pub out: Option<std::path::PathBuf>,
    pub trace: Option<std::path::PathBuf>,
}

/// Solves an instance file. Without `--out` the profile document goes to
/// `out`; a summary line goes to `log`.
pub fn cmd_solve(instance: &Path, args: &SolveArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<i32, CliError> {
    let (g, meta) = parse_instance(&read(instance)?)?;
    let eps = args.eps.unwrap_or(g.epsilon());
    let order = args
        .order
        .clone()
        .or(meta.order)
        .unwrap_or_else(|| (0..g.men()).collect());
    let solved = solve(&g, &order, eps)?;
    write_or_print(args.out.as_deref(), &emit_profile(&solved.profile, Some(&solved.report)), out)?;
    if let Some(t) = &args.trace {
        write_or_print(Some(t), &emit_trace(&solved.trace, eps, &order), out)?;
    }
    let green = solved.report.is_green();
    say(
        log,
        &format!(
            "{}\titerations={}\tsweeps={}",
            if green { "green" } else { "red" },
            solved.trace.iterations,
            solved.trace.sweeps
        ),
    );
    Ok(if green { 0 } else { 1 })
}

/// Checks a profile against an instance; prints the report.
pub fn cmd_verify(instance: &Path, profile: &Path, eps: Option<f64>, out: &mut dyn Write) -> Result<i32, CliError> {
    let (g, _) = parse_instance(&read(instance)?)?;
    let p = parse_profile(&read(profile)?, &g)?;
    let report = internal_stability(&g, &p, eps.unwrap_or(g.epsilon()))?;
    let text = serde_json::to_string_pretty(&report).expect("reports serialize");
    say(out, &text);
    Ok(if report.is_green() { 0 } else { 1 })
}

/// Options of `matchgame gen`.
#[derive(Clone, Debug)]
pub struct GenArgs {
    pub class: GameClass,
    pub men: usize,
    pub women: usize,
    pub actions: usize,
    pub entry_range: (i64, i64),
    pub eps: f64,
    pub seed: u64,
    pub out: Option<std::path::PathBuf>,
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = GenSpec {
        class: args.class,
        men: args.men,
        women: args.women,
        actions: args.actions,
        entry_range: args.entry_range,
        epsilon: args.eps,
        seed: args.seed,
    };
    let g = generate(&spec)?;
    write_or_print(args.out.as_deref(), &emit_instance(&g, &generated_meta(args.seed)), out)?;
    Ok(0)
}

/// Rebuilds the final profile from a trace file and prints it; with
/// `expect`, exits 1 unless it equals that profile.
pub fn cmd_replay(instance: &Path, trace: &Path, expect: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let (g, _) = parse_instance(&read(instance)?)?;
    let (t, _, _) = parse_trace(&read(trace)?)?;
    let p = replay(&g, &t)?;
    say(out, emit_profile(&p, None).trim_end());
    if let Some(path) = expect {
        let want = parse_profile(&read(path)?, &g)?;
        if want != p {
            return Err(CliError::Failed("replayed profile differs from the expected one".into()));
        }
    }
    Ok(0)
}
