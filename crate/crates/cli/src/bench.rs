//! Iteration and sweep counts against their caps over the seeded suite.

use crate::CliError;
use matchgame::engine::{iteration_cap, iteration_cap_total, solve, sweep_cap};
use matchgame::gen::{generate, suite_spec};
use matchgame::model::GameClass;
use std::io::Write;
use std::time::Instant;

/// Counts for one instance of the suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Run {
    pub seed: u64,
    pub iterations: usize,
    /// `⌈V^max / ε⌉`.
    pub iteration_cap: usize,
    /// `Σ_j ⌈V_j / ε⌉`.
    pub iteration_cap_total: usize,
    pub sweeps: usize,
    pub sweep_cap: usize,
    pub green: bool,
}

/// Aggregate over the seeds of one `(class, ε)` cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub class: GameClass,
    pub eps: f64,
    pub runs: Vec<Run>,
    /// Seeds whose solve returned an error.
    pub errors: Vec<(u64, String)>,
    pub seconds: f64,
}

impl Row {
    pub fn over_cap(&self) -> Vec<&Run> {
        self.runs.iter().filter(|r| r.iterations > r.iteration_cap).collect()
    }

    pub fn over_total_cap(&self) -> Vec<&Run> {
        self.runs.iter().filter(|r| r.iterations > r.iteration_cap_total).collect()
    }

    pub fn over_sweep_cap(&self) -> Vec<&Run> {
        self.runs.iter().filter(|r| r.sweeps > r.sweep_cap).collect()
    }

    pub fn red(&self) -> usize {
        self.runs.iter().filter(|r| !r.green).count()
    }
}

/// Solves seeds `0..seeds` of the suite for `class` at `eps`.
pub fn run_cell(class: GameClass, eps: f64, seeds: u64) -> Result<Row, CliError> {
    let start = Instant::now();
    let mut runs = Vec::new();
    let mut errors = Vec::new();
    for seed in 0..seeds {
        let g = generate(&suite_spec(class, seed, eps))?;
        let order: Vec<usize> = (0..g.men()).collect();
        match solve(&g, &order, eps) {
            Ok(out) => runs.push(Run {
                seed,
                iterations: out.trace.iterations,
                iteration_cap: iteration_cap(&g, eps)?,
                iteration_cap_total: iteration_cap_total(&g, eps)?,
                sweeps: out.trace.sweeps,
                sweep_cap: sweep_cap(&g, eps)?,
                green: out.report.is_green(),
            }),
            Err(e) => errors.push((seed, e.to_string())),
        }
    }
    Ok(Row {
        class,
        eps,
        runs,
        errors,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn mean(v: impl Iterator<Item = usize>) -> f64 {
    let (s, n) = v.fold((0usize, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s as f64 / n as f64
    }
}

pub const HEADER: &str = "class\teps\tseeds\titer_mean\titer_max\titer_cap_max\tover_iter_cap\tover_total_cap\tsweep_mean\tsweep_max\tsweep_cap_max\tover_sweep_cap\tred\terrors";

pub fn format_row(r: &Row) -> String {
    let max = |f: fn(&Run) -> usize| r.runs.iter().map(f).max().unwrap_or(0);
    format!(
        "{}\t{}\t{}\t{:.2}\t{}\t{}\t{}\t{}\t{:.2}\t{}\t{}\t{}\t{}\t{}",
        r.class.name(),
        r.eps,
        r.runs.len() + r.errors.len(),
        mean(r.runs.iter().map(|x| x.iterations)),
        max(|x| x.iterations),
        max(|x| x.iteration_cap),
        r.over_cap().len(),
        r.over_total_cap().len(),
        mean(r.runs.iter().map(|x| x.sweeps)),
        max(|x| x.sweeps),
        max(|x| x.sweep_cap),
        r.over_sweep_cap().len(),
        r.red(),
        r.errors.len()
    )
}

/// Prints one row per `(class, ε)`; exit 0 iff every run is green, error
/// free and within the sweep cap and `Σ_j ⌈V_j / ε⌉`.
pub fn cmd_bench(classes: &[GameClass], eps_list: &[f64], seeds: u64, out: &mut dyn Write) -> Result<i32, CliError> {
    let _ = writeln!(out, "{HEADER}");
    let mut ok = true;
    for &class in classes {
        for &eps in eps_list {
            let r = run_cell(class, eps, seeds)?;
            ok &= r.errors.is_empty() && r.red() == 0 && r.over_total_cap().is_empty() && r.over_sweep_cap().is_empty();
            let _ = writeln!(out, "{}", format_row(&r));
        }
    }
    Ok(if ok { 0 } else { 1 })
}
