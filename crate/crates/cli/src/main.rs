use clap::{Parser, Subcommand};
use matchgame::model::GameClass;
use matchgame_cli::{example, bench, cmd_gen, cmd_replay, cmd_solve, cmd_verify, CliError, GenArgs, SolveArgs};
use std::path::PathBuf;
use std::process::ExitCode;

/// Stable allocations for matching markets with strategic couples.
#[derive(Parser)]
#[command(name = "matchgame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run propose-dispose and strategy modification, then verify.
    Solve {
        instance: PathBuf,
        /// Overrides the instance's epsilon.
        #[arg(long)]
        eps: Option<f64>,
        /// Proposer order, comma separated men indices.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Profile output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trace output file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check external and internal stability of a profile.
    Verify {
        instance: PathBuf,
        profile: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long, value_parser = parse_class)]
        class: GameClass,
        #[arg(long, default_value_t = 3)]
        men: usize,
        #[arg(long, default_value_t = 3)]
        women: usize,
        /// Pure actions per agent (ignored for linear_transfer).
        #[arg(long, default_value_t = 2)]
        actions: usize,
        /// Inclusive integer range of payoff entries, as LO,HI.
        #[arg(long, value_parser = parse_range, default_value = "-10,10", allow_hyphen_values = true)]
        entry_range: (i64, i64),
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iteration and sweep counts against their caps on the seeded suite.
    Bench {
        /// Game classes, comma separated (default: all).
        #[arg(long, value_delimiter = ',', value_parser = parse_class)]
        class: Vec<GameClass>,
        #[arg(long, value_delimiter = ',', default_value = "1,0.25")]
        eps_list: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        seeds: u64,
    },
    /// Reproduce the built-in worked example and diff it against stored values.
    Example,
    /// Rebuild the final profile from a trace file.
    Replay {
        instance: PathBuf,
        trace: PathBuf,
        /// Exit 1 unless the replayed profile equals this one.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
}

fn parse_class(s: &str) -> Result<GameClass, String> {
    GameClass::parse(s).ok_or_else(|| {
        let names: Vec<&str> = GameClass::ALL.iter().map(|c| c.name()).collect();
        format!("unknown class {s:?}; expected one of {}", names.join(", "))
    })
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let stdout = &mut std::io::stdout();
    let stderr = &mut std::io::stderr();
    match cli.command {
        Command::Solve {
            instance,
            eps,
            order,
            out,
            trace,
        } => cmd_solve(&instance, &SolveArgs { eps, order, out, trace }, stdout, stderr),
        Command::Verify { instance, profile, eps } => cmd_verify(&instance, &profile, eps, stdout),
        Command::Gen {
            class,
            men,
            women,
            actions,
            entry_range,
            eps,
            seed,
            out,
        } => cmd_gen(
            &GenArgs {
                class,
                men,
                women,
                actions,
                entry_range,
                eps,
                seed,
                out,
            },
            stdout,
        ),
        Command::Bench { class, eps_list, seeds } => {
            let classes = if class.is_empty() { GameClass::ALL.to_vec() } else { class };
            bench::cmd_bench(&classes, &eps_list, seeds, stdout)
        }
        Command::Example => example::cmd_example(stdout),
        Command::Replay { instance, trace, expect } => cmd_replay(&instance, &trace, expect.as_deref(), stdout),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
