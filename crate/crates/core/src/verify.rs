//! Stability checks, written independently of the solvers they judge.
//!
//! External stability asks whether an unmatched pair could both gain more
//! than ε by matching; each class answers with the largest `t` such that
//! some reachable payoff pair clears both current payoffs by `ε + t`.
//! Internal stability re-solves each partner's one-sided problem.

use crate::engine::Market;
use crate::error::Result;
use crate::linprog::{solve, LinearProgram, Mode, Relation, Sense, Status};
use crate::model::{
    AgentId, CoupleGame, MatchingGame, MatchingProfile, Matrix, OutsideOptions, Side, StrategyAssignment,
};
use crate::rational::{self, Rational};
use crate::repeated::PayoffSets;
use serde::{Deserialize, Serialize};

/// Blocking requires a margin above this, and gains may exceed their
/// allowance by at most this.
pub const STRICT_TOL: f64 = 1e-9;

/// A pair that would both gain more than ε by matching.
///
/// When `woman` (or `man`) is an empty player the entry records an agent
/// below his or her IRP: the witness holds the IRP in that agent's
/// coordinate and 0 in the other, and the margin is the shortfall.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockingPair {
    pub man: AgentId,
    pub woman: AgentId,
    pub witness: (f64, f64),
    pub margin: f64,
}

/// One matched couple's equilibrium check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupleResidual {
    pub man: usize,
    pub woman: usize,
    pub outside: OutsideOptions,
    /// Best constrained unilateral improvement of the man.
    pub man_gain: f64,
    pub woman_gain: f64,
    /// ε for bi-matrix and transfer couples, 0 for repeated couples, whose
    /// gains measure the distance to the equilibrium payoff set.
    pub allowed_gain: f64,
    /// How far a partner sits below his or her outside option minus ε.
    pub participation_deficit: f64,
}

impl CoupleResidual {
    pub fn is_stable(&self) -> bool {
        self.man_gain <= self.allowed_gain + STRICT_TOL
            && self.woman_gain <= self.allowed_gain + STRICT_TOL
            && self.participation_deficit <= STRICT_TOL
    }
}

/// Verdict on a profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub eps: f64,
    pub externally_stable: bool,
    pub blocking_pairs: Vec<BlockingPair>,
    /// `None` when only external stability was checked.
    pub internally_stable: Option<bool>,
    pub cne_residuals: Vec<CoupleResidual>,
    pub tolerance: f64,
}

impl StabilityReport {
    /// Both checks ran and passed.
    pub fn is_green(&self) -> bool {
        self.externally_stable && self.internally_stable == Some(true)
    }
}

fn irp_violations(g: &MatchingGame, p: &MatchingProfile) -> Vec<BlockingPair> {
    let mut out = Vec::new();
    for (i, u) in p.u().iter().enumerate() {
        if *u < g.irp_man(i) - STRICT_TOL {
            out.push(BlockingPair {
                man: AgentId::man(i),
                woman: AgentId::empty(Side::Woman),
                witness: (g.irp_man(i), 0.0),
                margin: g.irp_man(i) - u,
            });
        }
    }
    for (j, v) in p.v().iter().enumerate() {
        if *v < g.irp_woman(j) - STRICT_TOL {
            out.push(BlockingPair {
                man: AgentId::empty(Side::Man),
                woman: AgentId::woman(j),
                witness: (0.0, g.irp_woman(j)),
                margin: g.irp_woman(j) - v,
            });
        }
    }
    out
}

/// Max over `θ ∈ [0, 1]` of `min(U − tu, V − tv)` along the segment `p → q`.
fn segment_margin(p: (f64, f64), q: (f64, f64), tu: f64, tv: f64) -> (f64, (f64, f64)) {
    let at = |th: f64| (p.0 + th * (q.0 - p.0), p.1 + th * (q.1 - p.1));
    let score = |w: (f64, f64)| (w.0 - tu).min(w.1 - tv);
    let mut best = (score(p), p);
    let s = score(q);
    if s > best.0 {
        best = (s, q);
    }
    // f(θ) − g(θ) is linear; its root is where the two terms cross.
    let d0 = (p.0 - tu) - (p.1 - tv);
    let d1 = (q.0 - tu) - (q.1 - tv);
    if d0 != d1 {
        let th = d0 / (d0 - d1);
        if th > 0.0 && th < 1.0 {
            let w = at(th);
            if score(w) > best.0 {
                best = (score(w), w);
            }
        }
    }
    best
}

/// Endpoints of the payoff segment of a game whose `B` decreases with `A`.
fn competitive_segment(a: &Matrix, b: &Matrix) -> ((f64, f64), (f64, f64)) {
    let cells: Vec<(f64, f64)> = a.entries().iter().copied().zip(b.entries().iter().copied()).collect();
    let hi = cells.iter().copied().fold(cells[0], |m, c| if c.0 > m.0 { c } else { m });
    let lo = cells.iter().copied().fold(cells[0], |m, c| if c.0 < m.0 { c } else { m });
    (hi, lo)
}

fn hull_margin(points: &[(f64, f64)], tu: f64, tv: f64) -> Result<(f64, (f64, f64))> {
    let k = points.len();
    let mut obj = vec![0.0; k + 1];
    obj[k] = 1.0;
    let mut lp = LinearProgram::new(Sense::Max, obj);
    let mut ones = vec![1.0; k + 1];
    ones[k] = 0.0;
    lp.constrain(ones, Relation::Eq, 1.0);
    let mut ru: Vec<f64> = points.iter().map(|p| p.0).collect();
    ru.push(-1.0);
    lp.constrain(ru, Relation::Ge, tu);
    let mut rv: Vec<f64> = points.iter().map(|p| p.1).collect();
    rv.push(-1.0);
    lp.constrain(rv, Relation::Ge, tv);
    lp.free(k);
    let s = solve(&lp, Mode::Float)?;
    debug_assert_eq!(s.status, Status::Optimal);
    let w = points
        .iter()
        .zip(&s.point)
        .fold((0.0, 0.0), |acc, (p, l)| (acc.0 + p.0 * l, acc.1 + p.1 * l));
    Ok((s.value, w))
}

/// Largest `t` such that the couple `(i, j)` can give both partners at
/// least their target plus `t`, and a payoff pair attaining it.
fn pair_margin(game: &CoupleGame, tu: f64, tv: f64) -> Result<(f64, (f64, f64))> {
    Ok(match game {
        CoupleGame::ZeroSum { a } => {
            let (hi, lo) = (a.max(), a.min());
            segment_margin((hi, -hi), (lo, -lo), tu, tv)
        }
        CoupleGame::StrictlyCompetitive { a, b } => {
            let (p, q) = competitive_segment(a, b);
            segment_margin(p, q, tu, tv)
        }
        CoupleGame::Repeated { a, b } => {
            let points: Vec<(f64, f64)> = a
                .entries()
                .iter()
                .zip(b.entries())
                .map(|(x, y)| (rational::to_f64(x), rational::to_f64(y)))
                .collect();
            hull_margin(&points, tu, tv)?
        }
        CoupleGame::LinearTransfer { a, b } => {
            let t = (a + b - tu - tv) / 2.0;
            (t, (tu + t, tv + t))
        }
    })
}

/// ε-external stability: IRP floors plus the max-margin test on every
/// pair not matched together.
pub fn external_stability(g: &MatchingGame, p: &MatchingProfile, eps: f64) -> Result<StabilityReport> {
    p.validate(g)?;
    let mut blocking = irp_violations(g, p);
    for i in 0..g.men() {
        for j in 0..g.women() {
            if p.partner_of_man(i) == Some(j) {
                continue;
            }
            let (margin, witness) = pair_margin(g.game(i, j), p.u()[i] + eps, p.v()[j] + eps)?;
            if margin > STRICT_TOL {
                blocking.push(BlockingPair {
                    man: AgentId::man(i),
                    woman: AgentId::woman(j),
                    witness,
                    margin,
                });
            }
        }
    }
    Ok(StabilityReport {
        eps,
        externally_stable: blocking.is_empty(),
        blocking_pairs: blocking,
        internally_stable: None,
        cne_residuals: Vec::new(),
        tolerance: STRICT_TOL,
    })
}

/// Best value of `x·gain` over the simplex subject to `x·keep >= floor`;
/// `None` when no strategy satisfies the floor.
fn one_sided(gain: &[f64], keep: &[f64], floor: f64) -> Result<Option<f64>> {
    let mut lp = LinearProgram::new(Sense::Max, gain.to_vec());
    lp.constrain(vec![1.0; gain.len()], Relation::Eq, 1.0);
    lp.constrain(keep.to_vec(), Relation::Ge, floor);
    let s = solve(&lp, Mode::Float)?;
    Ok((s.status == Status::Optimal).then_some(s.value))
}

fn residual(
    g: &MatchingGame,
    i: usize,
    j: usize,
    assignment: &StrategyAssignment,
    (u, v): (f64, f64),
    outside: OutsideOptions,
    eps: f64,
) -> Result<CoupleResidual> {
    let floors = outside.participation(g.irp_man(i), g.irp_woman(j), eps);
    let lu = floors.u_eps - eps;
    let lv = floors.v_eps - eps;
    let deficit = (lu - u).max(lv - v).max(0.0);
    let mut r = CoupleResidual {
        man: i,
        woman: j,
        outside,
        man_gain: 0.0,
        woman_gain: 0.0,
        allowed_gain: eps,
        participation_deficit: deficit,
    };
    match (g.game(i, j), assignment) {
        (CoupleGame::LinearTransfer { a, b }, StrategyAssignment::Transfer { x, y }) => {
            // Each partner can only lower his or her own transfer, down to
            // the point where the other hits the floor.
            let x_min = (lv - b + y).max(0.0);
            let y_min = (lu - a + x).max(0.0);
            r.man_gain = (x - x_min).max(0.0);
            r.woman_gain = (y - y_min).max(0.0);
        }
        (CoupleGame::Repeated { a, b }, StrategyAssignment::Repeated(sigma)) => {
            r.allowed_gain = 0.0;
            let sets = PayoffSets::new(a, b)?;
            let (gm, gw) = repeated_gaps(&sets, &sigma.limit_payoff, &rational::snap(lu), &rational::snap(lv));
            r.man_gain = gm;
            r.woman_gain = gw;
        }
        (game, StrategyAssignment::Mixed { x, y }) => {
            let am = game.man_matrix().expect("bi-matrix couple");
            let bm = game.woman_matrix().expect("bi-matrix couple");
            let ay = am.apply_right(y.weights());
            let by = bm.apply_right(y.weights());
            if let Some(best) = one_sided(&ay, &by, lv)? {
                r.man_gain = best - u;
            }
            let xa = am.apply_left(x.weights());
            let xb = bm.apply_left(x.weights());
            if let Some(best) = one_sided(&xb, &xa, lu)? {
                r.woman_gain = best - v;
            }
        }
        _ => return crate::error::contract(format!("couple ({i}, {j}) has a mismatched assignment")),
    }
    Ok(r)
}

/// Distance of a repeated couple's limit payoff from the equilibrium
/// payoffs for floors `(lu, lv)`.
///
/// If some point of `E` clears both floors the payoff must lie in `E`.
/// Otherwise the partner whose floor is above the punishment level is held
/// to it, and the other must get the most `E^ε` allows.
fn repeated_gaps(sets: &PayoffSets, (u, v): &(Rational, Rational), lu: &Rational, lv: &Rational) -> (f64, f64) {
    let gap = |target: &Rational, got: &Rational| {
        if target > got {
            rational::to_f64(&(target - got))
        } else {
            0.0
        }
    };
    let fu = if lu > &sets.alpha { lu } else { &sets.alpha };
    let fv = if lv > &sets.beta { lv } else { &sets.beta };
    if sets.lex_max_u(Some(fu), Some(fv)).is_some() {
        return (gap(&sets.alpha, u), gap(&sets.beta, v));
    }
    if lu >= &sets.alpha {
        let vbar = sets.lex_max_v(Some(lu), Some(lv)).map_or(v.clone(), |p| p.v);
        (gap(&sets.alpha, u), gap(&vbar, v))
    } else {
        let ubar = sets.lex_max_u(Some(lu), Some(lv)).map_or(u.clone(), |p| p.u);
        (gap(&ubar, u), gap(&sets.beta, v))
    }
}

/// Full check: external stability, then every couple's constrained
/// equilibrium conditions at its recomputed outside options.
pub fn internal_stability(g: &MatchingGame, p: &MatchingProfile, eps: f64) -> Result<StabilityReport> {
    full_report_in(&Market::new(g)?, p, eps)
}

pub(crate) fn full_report_in(market: &Market, p: &MatchingProfile, eps: f64) -> Result<StabilityReport> {
    let g = market.game();
    let mut report = external_stability(g, p, eps)?;
    let mut residuals = Vec::new();
    for (i, j, a) in p.couples() {
        let outside = market.outside_options(p, i, j, eps);
        residuals.push(residual(g, i, j, a, (p.u()[i], p.v()[j]), outside, eps)?);
    }
    report.internally_stable = Some(residuals.iter().all(CoupleResidual::is_stable));
    report.cne_residuals = residuals;
    Ok(report)
}

/// Vertices of the simplex plus two-point mixtures at spacing `resolution`.
fn edge_grid(n: usize, resolution: f64) -> Vec<Vec<f64>> {
    let steps = (1.0 / resolution).ceil().max(1.0) as usize;
    let mut out: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            e
        })
        .collect();
    for k in 0..n {
        for l in k + 1..n {
            for s in 1..steps {
                let th = s as f64 / steps as f64;
                let mut w = vec![0.0; n];
                w[k] = th;
                w[l] = 1.0 - th;
                out.push(w);
            }
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn grid_margin(game: &CoupleGame, tu: f64, tv: f64, resolution: f64) -> (f64, (f64, f64)) {
    let mut best = (f64::NEG_INFINITY, (0.0, 0.0));
    let mut visit = |w: (f64, f64)| {
        let s = (w.0 - tu).min(w.1 - tv);
        if s > best.0 {
            best = (s, w);
        }
    };
    match game {
        CoupleGame::ZeroSum { .. } | CoupleGame::StrictlyCompetitive { .. } => {
            let a = game.man_matrix().expect("bi-matrix");
            let b = game.woman_matrix().expect("bi-matrix");
            let ys = edge_grid(a.cols(), resolution);
            for x in edge_grid(a.rows(), resolution) {
                let xa = a.apply_left(&x);
                let xb = b.apply_left(&x);
                for y in &ys {
                    visit((dot(&xa, y), dot(&xb, y)));
                }
            }
        }
        CoupleGame::Repeated { a, b } => {
            let pts: Vec<(f64, f64)> = a
                .entries()
                .iter()
                .zip(b.entries())
                .map(|(x, y)| (rational::to_f64(x), rational::to_f64(y)))
                .collect();
            let steps = (1.0 / resolution).ceil().max(1.0) as usize;
            for (k, p) in pts.iter().enumerate() {
                for q in &pts[k..] {
                    for s in 0..=steps {
                        let th = s as f64 / steps as f64;
                        visit((p.0 + th * (q.0 - p.0), p.1 + th * (q.1 - p.1)));
                    }
                }
            }
        }
        CoupleGame::LinearTransfer { a, b } => {
            // U = a + d and V = b − d for the net transfer d = y − x.
            let lo = tu - a - 1.0;
            let hi = (b - tv + 1.0).max(lo);
            let steps = ((hi - lo) / resolution).ceil() as usize;
            for s in 0..=steps {
                let d = lo + s as f64 * resolution;
                visit((a + d, b - d));
            }
        }
    }
    best
}

/// Exhaustive grid scan for blocking pairs.
///
/// Bi-matrix couples scan strategy pairs on the edges of both simplices,
/// which reach every payoff pair a zero-sum or strictly competitive couple
/// can produce; repeated couples scan segments between stage payoffs;
/// transfer couples scan the net transfer. A pair is reported when some
/// grid point clears both targets by more than [`STRICT_TOL`].
pub fn brute_force_blocking(
    g: &MatchingGame,
    p: &MatchingProfile,
    eps: f64,
    resolution: f64,
) -> Result<Vec<BlockingPair>> {
    if !(resolution > 0.0) {
        return crate::error::contract("resolution must be positive");
    }
    let mut out = irp_violations(g, p);
    for i in 0..g.men() {
        for j in 0..g.women() {
            if p.partner_of_man(i) == Some(j) {
                continue;
            }
            let (margin, witness) = grid_margin(g.game(i, j), p.u()[i] + eps, p.v()[j] + eps, resolution);
            if margin > STRICT_TOL {
                out.push(BlockingPair {
                    man: AgentId::man(i),
                    woman: AgentId::woman(j),
                    witness,
                    margin,
                });
            }
        }
    }
    Ok(out)
}

/// Largest payoff change a grid step can hide for the couple `(i, j)`:
/// twice the resolution times the widest payoff range.
pub fn grid_slack(game: &CoupleGame, resolution: f64) -> f64 {
    match game {
        CoupleGame::LinearTransfer { .. } => resolution,
        CoupleGame::Repeated { a, b } => {
            let w = (&a.max() - a.min()).max(&b.max() - b.min());
            2.0 * resolution * rational::to_f64(&w)
        }
        _ => {
            let a = game.man_matrix().expect("bi-matrix");
            let b = game.woman_matrix().expect("bi-matrix");
            2.0 * resolution * (a.max() - a.min()).max(b.max() - b.min())
        }
    }
}
