//! The built-in three-by-three transfer market and its hand-computed run.
//!
//! Only values that do not depend on tie-breaking or on how the transfer
//! pair is normalized are stored.

use crate::CliError;
use matchgame::engine::{propose_dispose, stabilize, Event, Market};
use matchgame::model::{MatchingGame, MatchingProfile, Matrix, StrategyAssignment};
use matchgame::transfers::{nash_stable_matching, TransferInstance};
use matchgame::verify::internal_stability;
use std::io::Write;

pub const EPS: f64 = 1.0;
/// Proposers `(i1, i3, i2)`.
pub const ORDER: [usize; 3] = [0, 2, 1];

pub fn instance() -> TransferInstance {
    let a = Matrix::from_rows(vec![
        vec![83.0, 85.0, 99.0],
        vec![74.0, 13.0, 15.0],
        vec![58.0, 49.0, 54.0],
    ])
    .expect("rectangular");
    let b = Matrix::from_rows(vec![
        vec![69.0, 6.0, 28.0],
        vec![88.0, 2.0, 70.0],
        vec![72.0, 18.0, 9.0],
    ])
    .expect("rectangular");
    TransferInstance::new(a, b, vec![0.0; 3], vec![0.0; 3]).expect("valid instance")
}

pub fn game() -> MatchingGame {
    instance().to_game(EPS).expect("valid market")
}

/// One stored number sequence and what the run produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub expected: Vec<f64>,
    pub got: Vec<f64>,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.expected == self.got
    }
}

fn partners(p: &MatchingProfile) -> Vec<f64> {
    p.partners().iter().map(|j| j.map_or(-1.0, |j| j as f64)).collect()
}

/// Men's transfers then women's transfers, each indexed by the payer.
fn transfers(g: &MatchingGame, p: &MatchingProfile) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; g.men()];
    let mut y = vec![0.0; g.women()];
    for (i, j, a) in p.couples() {
        if let StrategyAssignment::Transfer { x: xi, y: yj } = a {
            x[i] = *xi;
            y[j] = *yj;
        }
    }
    (x, y)
}

/// Runs deferred acceptance, propose–dispose and strategy modification on
/// the built-in market and pairs every stored value with the computed one.
pub fn run() -> Result<Vec<Check>, CliError> {
    let g = game();
    let mut checks = Vec::new();
    let mut check = |name, expected: &[f64], got: Vec<f64>| {
        checks.push(Check {
            name,
            expected: expected.to_vec(),
            got,
        })
    };

    let da = nash_stable_matching(&instance());
    check("deferred acceptance partners", &[2.0, 0.0, 1.0], partners(&da));
    let (dx, dy) = transfers(&g, &da);
    check("deferred acceptance transfers", &[0.0; 6], [dx, dy].concat());

    let (p, trace) = propose_dispose(&g, &ORDER, EPS)?;
    check("propose-dispose partners", &[2.0, 0.0, 1.0], partners(&p));
    let (x, y) = transfers(&g, &p);
    check("propose-dispose men's transfers", &[0.0; 3], x);
    check("propose-dispose women's transfers", &[24.0, 17.0, 27.0], y);
    check("propose-dispose men's payoffs", &[126.0, 98.0, 66.0], p.u().to_vec());
    check("propose-dispose women's payoffs", &[64.0, 1.0, 1.0], p.v().to_vec());
    check("propose-dispose iterations", &[5.0], vec![trace.iterations as f64]);
    let mut proposals = Vec::new();
    let mut competitions = Vec::new();
    for e in &trace.events {
        match e {
            Event::Propose { value, .. } => proposals.push(*value),
            Event::Compete { reservations, bids, .. } => {
                competitions.extend([reservations.0, reservations.1, bids.0, bids.1])
            }
            _ => {}
        }
    }
    check("proposal values", &[151.0, 128.0, 135.0, 126.0, 66.0], proposals);
    check(
        "competitions (reservations, bids)",
        &[66.0, 126.0, 64.0, 26.0, 84.0, 66.0, 78.0, 64.0],
        competitions,
    );
    let market = Market::new(&g)?;
    let u_eps = (0..3)
        .map(|i| market.outside_options(&p, i, p.partner_of_man(i).unwrap_or(0), EPS).u_eps)
        .collect();
    check("men's outside options", &[89.0, 83.0, 65.0], u_eps);

    let (q, trace2) = stabilize(&g, &p, EPS)?;
    check("strategy modification partners", &[2.0, 0.0, 1.0], partners(&q));
    let (qx, qy) = transfers(&g, &q);
    check("strategy modification transfers", &[0.0; 6], [qx, qy].concat());
    check("strategy modification men's payoffs", &[99.0, 74.0, 49.0], q.u().to_vec());
    check("strategy modification women's payoffs", &[88.0, 18.0, 28.0], q.v().to_vec());
    check("strategy modification sweeps", &[2.0], vec![trace2.sweeps as f64]);
    let green = internal_stability(&g, &q, EPS)?.is_green();
    check("final profile stable", &[1.0], vec![if green { 1.0 } else { 0.0 }]);
    Ok(checks)
}

fn show(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Prints one tab-separated line per stored value; exit 0 iff all match.
pub fn cmd_example(out: &mut dyn Write) -> Result<i32, CliError> {
    let checks = run()?;
    let mut all = true;
    for c in &checks {
        all &= c.ok();
        let line = format!(
            "{}\t{}\texpected={}\tgot={}",
            if c.ok() { "ok" } else { "MISMATCH" },
            c.name,
            show(&c.expected),
            show(&c.got)
        );
        let _ = writeln!(out, "{line}");
    }
    Ok(if all { 0 } else { 1 })
}
