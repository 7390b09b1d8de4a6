//! Propose–dispose (external stability) and strategy modification
//! (internal stability) over any couple class.
//!
//! Both algorithms talk to couples only through [`CoupleOracle`]: the best
//! payoff of one partner given a floor on the other, a profile realizing
//! it, and a constrained equilibrium for given outside options.

use crate::competitive::{affine_view, AffineZeroSum};
use crate::error::{contract, Error, Result};
use crate::model::{
    CoupleGame, MatchingGame, MatchingProfile, Matrix, OutsideOptions, StrategyAssignment, PAYOFF_TOL,
};
use crate::rational::{self, Rational};
use crate::repeated::{cne_repeated_exact, HullPoint, PayoffSets};
use crate::transfers::{cne_transfer_pair, transfers_for_woman_level};
use crate::verify::{self, StabilityReport};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::{HashMap, VecDeque};

/// A reachable payoff pair with the assignment reaching it.
#[derive(Clone, Debug, PartialEq)]
pub struct Offer {
    pub u: f64,
    pub v: f64,
    pub assignment: StrategyAssignment,
}

/// Repeated couple with memoized hull programs.
#[derive(Debug)]
pub struct RepeatedOracle {
    a: Matrix<Rational>,
    b: Matrix<Rational>,
    sets: PayoffSets,
    max_u: Rational,
    max_v: Rational,
    cache: RefCell<HashMap<(bool, Rational), Option<HullPoint>>>,
}

impl RepeatedOracle {
    pub fn new(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Result<Self> {
        Ok(RepeatedOracle {
            sets: PayoffSets::new(a, b)?,
            max_u: a.max(),
            max_v: b.max(),
            a: a.clone(),
            b: b.clone(),
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn sets(&self) -> &PayoffSets {
        &self.sets
    }

    /// `for_man`: max `U` with `V >= floor`; otherwise max `V` with `U >= floor`.
    fn best(&self, for_man: bool, floor: f64) -> Option<HullPoint> {
        let floor = rational::snap(floor);
        if floor > if for_man { &self.max_v } else { &self.max_u }.clone() {
            return None;
        }
        let key = (for_man, floor);
        if let Some(hit) = self.cache.borrow().get(&key) {
            return hit.clone();
        }
        let r = if for_man {
            self.sets.lex_max_u(None, Some(&key.1))
        } else {
            self.sets.lex_max_v(Some(&key.1), None)
        };
        self.cache.borrow_mut().insert(key, r.clone());
        r
    }

    fn realize(&self, p: &HullPoint) -> Result<Offer> {
        let w = self.sets.weights(&p.u, &p.v)?;
        let sigma = crate::repeated::schedule_from_weights(&self.a, &self.b, &w)?;
        let (u, v) = sigma.limit_f64();
        Ok(Offer {
            u,
            v,
            assignment: StrategyAssignment::Repeated(sigma),
        })
    }
}

/// Everything the algorithms need from one couple.
#[derive(Debug)]
pub enum CoupleOracle {
    /// Zero-sum and strictly competitive couples.
    Affine(AffineZeroSum),
    Repeated(Box<RepeatedOracle>),
    Transfer { a: f64, b: f64 },
}

impl CoupleOracle {
    pub fn new(game: &CoupleGame) -> Result<Self> {
        Ok(match game {
            CoupleGame::ZeroSum { a } => CoupleOracle::Affine(AffineZeroSum::identity(a)),
            CoupleGame::StrictlyCompetitive { a, b } => CoupleOracle::Affine(
                affine_view(a, b).ok_or_else(|| Error::Contract("couple is not strictly competitive".into()))?,
            ),
            CoupleGame::Repeated { a, b } => CoupleOracle::Repeated(Box::new(RepeatedOracle::new(a, b)?)),
            CoupleGame::LinearTransfer { a, b } => CoupleOracle::Transfer { a: *a, b: *b },
        })
    }

    /// Largest reachable man's payoff; unbounded for transfers.
    pub fn max_u(&self) -> f64 {
        match self {
            CoupleOracle::Affine(z) => z.max_u(),
            CoupleOracle::Repeated(r) => rational::to_f64(&r.max_u),
            CoupleOracle::Transfer { .. } => f64::INFINITY,
        }
    }

    pub fn max_v(&self) -> f64 {
        match self {
            CoupleOracle::Affine(z) => z.max_v(),
            CoupleOracle::Repeated(r) => rational::to_f64(&r.max_v),
            CoupleOracle::Transfer { .. } => f64::INFINITY,
        }
    }

    /// Max `U` subject to `V >= floor`, as `(U, V)`.
    pub fn man_best(&self, floor: f64) -> Option<(f64, f64)> {
        match self {
            CoupleOracle::Affine(z) => z.man_best(floor).map(|o| (o.u, o.v)),
            CoupleOracle::Repeated(r) => r
                .best(true, floor)
                .map(|p| (rational::to_f64(&p.u), rational::to_f64(&p.v))),
            CoupleOracle::Transfer { a, b } => Some((a + b - floor, floor)),
        }
    }

    /// Max `V` subject to `U >= floor`, as `(U, V)`.
    pub fn woman_best(&self, floor: f64) -> Option<(f64, f64)> {
        match self {
            CoupleOracle::Affine(z) => z.woman_best(floor).map(|o| (o.u, o.v)),
            CoupleOracle::Repeated(r) => r
                .best(false, floor)
                .map(|p| (rational::to_f64(&p.u), rational::to_f64(&p.v))),
            CoupleOracle::Transfer { a, b } => Some((floor, a + b - floor)),
        }
    }

    /// A profile realizing [`CoupleOracle::man_best`].
    pub fn settle(&self, floor: f64) -> Result<Option<Offer>> {
        Ok(match self {
            CoupleOracle::Affine(z) => z.man_best(floor).map(|o| Offer {
                u: o.u,
                v: o.v,
                assignment: StrategyAssignment::Mixed { x: o.x, y: o.y },
            }),
            CoupleOracle::Repeated(r) => match r.best(true, floor) {
                Some(p) => Some(r.realize(&p)?),
                None => None,
            },
            CoupleOracle::Transfer { a, b } => {
                let (x, y) = transfers_for_woman_level(*b, floor);
                Some(Offer {
                    u: a - x + y,
                    v: b + x - y,
                    assignment: StrategyAssignment::Transfer { x, y },
                })
            }
        })
    }

    /// Constrained equilibrium keeping both partners within ε of their
    /// outside options.
    pub fn cne(&self, o: OutsideOptions, eps: f64, current: &StrategyAssignment) -> Result<StrategyAssignment> {
        match self {
            CoupleOracle::Affine(z) => {
                let c = z.feasible_cne(o.u_eps, o.v_eps, eps)?;
                Ok(StrategyAssignment::Mixed { x: c.x, y: c.y })
            }
            CoupleOracle::Repeated(r) => {
                let sigma = cne_repeated_exact(
                    &r.a,
                    &r.b,
                    &r.sets,
                    &rational::snap(o.u_eps),
                    &rational::snap(o.v_eps),
                    &rational::snap(eps),
                )?;
                Ok(StrategyAssignment::Repeated(sigma))
            }
            CoupleOracle::Transfer { a, b } => match current {
                StrategyAssignment::Transfer { x, y } => {
                    let (x, y) = cne_transfer_pair(*a, *b, o.u_eps, o.v_eps, (*x, *y));
                    Ok(StrategyAssignment::Transfer { x, y })
                }
                _ => contract("transfer couple carries a non-transfer assignment"),
            },
        }
    }

    /// Width of the payoff range the couple can move through.
    pub fn span(&self, irp_man: f64, irp_woman: f64) -> f64 {
        match self {
            CoupleOracle::Affine(z) => (z.max_u() - z.min_u()).max(z.max_v() - z.min_v()),
            CoupleOracle::Repeated(r) => {
                let du = &r.max_u - r.a.min();
                let dv = &r.max_v - r.b.min();
                rational::to_f64(if du > dv { &du } else { &dv })
            }
            CoupleOracle::Transfer { a, b } => (a + b - irp_man - irp_woman).max(0.0),
        }
    }

    /// Highest payoff the woman can get while the man keeps `irp_man`.
    fn woman_cap(&self, irp_man: f64) -> f64 {
        match self {
            CoupleOracle::Transfer { a, b } => a + b - irp_man,
            _ => self.max_v(),
        }
    }
}

/// A market together with one oracle per couple.
#[derive(Debug)]
pub struct Market<'g> {
    g: &'g MatchingGame,
    oracles: Vec<CoupleOracle>,
}

impl<'g> Market<'g> {
    pub fn new(g: &'g MatchingGame) -> Result<Self> {
        let oracles = g.games().iter().map(CoupleOracle::new).collect::<Result<_>>()?;
        Ok(Market { g, oracles })
    }

    pub fn game(&self) -> &MatchingGame {
        self.g
    }

    pub fn oracle(&self, i: usize, j: usize) -> &CoupleOracle {
        &self.oracles[i * self.g.women() + j]
    }

    /// Man `i`'s best proposal value against the women's payoffs `v`,
    /// skipping `exclude`. Ties go to the lowest index; `None` is the
    /// empty woman, chosen only when every woman is worth less than his IRP.
    fn best_proposal(&self, i: usize, v: &[f64], eps: f64, exclude: Option<usize>) -> (Option<usize>, f64) {
        let mut best: (Option<usize>, f64) = (None, f64::NEG_INFINITY);
        for (j, vj) in v.iter().enumerate() {
            if Some(j) == exclude {
                continue;
            }
            if let Some((u, _)) = self.oracle(i, j).man_best(vj + eps) {
                if u > best.1 {
                    best = (Some(j), u);
                }
            }
        }
        if best.1 < self.g.irp_man(i) {
            best = (None, self.g.irp_man(i));
        }
        best
    }

    /// ε-outside options of the couple `(i, j)`.
    ///
    /// An alternative partner counts only if the couple could give that
    /// partner strictly more than her current payoff plus ε; the best such
    /// value is then taken on the closed floor. The empty partner always
    /// counts and is worth the IRP.
    pub fn outside_options(&self, p: &MatchingProfile, i: usize, j: usize, eps: f64) -> OutsideOptions {
        let mut u_eps = self.g.irp_man(i);
        for (k, vk) in p.v().iter().enumerate() {
            let o = self.oracle(i, k);
            if k == j || vk + eps >= o.max_v() - PAYOFF_TOL {
                continue;
            }
            if let Some((u, _)) = o.man_best(vk + eps) {
                u_eps = u_eps.max(u);
            }
        }
        let mut v_eps = self.g.irp_woman(j);
        for (k, uk) in p.u().iter().enumerate() {
            let o = self.oracle(k, j);
            if k == i || uk + eps >= o.max_u() - PAYOFF_TOL {
                continue;
            }
            if let Some((_, v)) = o.woman_best(uk + eps) {
                v_eps = v_eps.max(v);
            }
        }
        OutsideOptions { u_eps, v_eps }
    }
}

/// One step of either algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    /// Man `man` proposes to `woman` (`None`: he stays single) at value `value`.
    Propose { man: usize, woman: Option<usize>, value: f64 },
    /// A single woman accepts.
    Accept {
        man: usize,
        woman: usize,
        u: f64,
        v: f64,
        assignment: StrategyAssignment,
    },
    /// `reservations` and `bids` are listed as `(proposer, incumbent)`.
    Compete {
        proposer: usize,
        incumbent: usize,
        woman: usize,
        reservations: (f64, f64),
        bids: (f64, f64),
    },
    /// The winner is matched with the woman at payoff `level` for her.
    Settle {
        winner: usize,
        loser: usize,
        woman: usize,
        level: f64,
        u: f64,
        v: f64,
        assignment: StrategyAssignment,
    },
    CoupleUpdate {
        sweep: usize,
        man: usize,
        woman: usize,
        outside: OutsideOptions,
        old: (f64, f64),
        new: (f64, f64),
        assignment: StrategyAssignment,
    },
}

/// Ordered event log of a run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EngineTrace {
    pub events: Vec<Event>,
    /// Proposals addressed to a woman (proposals to the empty woman excluded).
    pub iterations: usize,
    /// Strategy-modification sweeps, including the final unchanged one.
    pub sweeps: usize,
}

impl EngineTrace {
    /// Each woman's payoff after every Accept or Settle, in order.
    pub fn women_payoffs(&self, women: usize) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new(); women];
        for e in &self.events {
            match e {
                Event::Accept { woman, v, .. } | Event::Settle { woman, v, .. } => out[*woman].push(*v),
                _ => {}
            }
        }
        out
    }
}

fn check_order(g: &MatchingGame, order: &[usize]) -> Result<()> {
    let mut seen = vec![false; g.men()];
    if order.len() != g.men() || order.iter().any(|&i| i >= g.men() || std::mem::replace(&mut seen[i], true)) {
        return contract("proposer order must be a permutation of the men");
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return contract("eps must be a positive finite number");
    }
    Ok(())
}

/// Propose–dispose: an ε-externally stable profile.
///
/// Men wait in a FIFO queue initialized to `order`. The head proposes to
/// the woman giving him the most while raising her by ε. A single woman
/// accepts. Otherwise proposer and incumbent bid the most they can give her
/// while keeping their best alternative elsewhere; the proposer needs a
/// strictly higher bid, the winner lowers his offer to the loser's bid (and
/// never below her payoff plus ε), and the loser rejoins the queue.
pub fn propose_dispose(g: &MatchingGame, order: &[usize], eps: f64) -> Result<(MatchingProfile, EngineTrace)> {
    let market = Market::new(g)?;
    propose_dispose_in(&market, order, eps)
}

pub fn propose_dispose_in(market: &Market, order: &[usize], eps: f64) -> Result<(MatchingProfile, EngineTrace)> {
    let g = market.game();
    check_order(g, order)?;
    check_eps(eps)?;
    let mut p = MatchingProfile::single(g);
    let mut trace = EngineTrace::default();
    let mut queue: VecDeque<usize> = order.iter().copied().collect();
    while let Some(i) = queue.pop_front() {
        let (target, value) = market.best_proposal(i, p.v(), eps, None);
        trace.events.push(Event::Propose { man: i, woman: target, value });
        let Some(j) = target else { continue };
        trace.iterations += 1;
        let vj = p.v()[j];
        match p.partner_of_woman(j) {
            None => {
                let offer = settle(market, i, j, vj + eps)?;
                p.set_couple(g, i, j, offer.assignment.clone())?;
                trace.events.push(Event::Accept {
                    man: i,
                    woman: j,
                    u: offer.u,
                    v: offer.v,
                    assignment: offer.assignment,
                });
            }
            Some(k) => {
                let beta_i = market.best_proposal(i, p.v(), eps, Some(j)).1;
                let beta_k = market.best_proposal(k, p.v(), eps, Some(j)).1;
                let bid = |m: usize, beta: f64| {
                    market
                        .oracle(m, j)
                        .woman_best(beta)
                        .map_or(f64::NEG_INFINITY, |(_, v)| v)
                };
                let (li, lk) = (bid(i, beta_i), bid(k, beta_k));
                trace.events.push(Event::Compete {
                    proposer: i,
                    incumbent: k,
                    woman: j,
                    reservations: (beta_i, beta_k),
                    bids: (li, lk),
                });
                let (winner, loser, level) = if li > lk + PAYOFF_TOL {
                    (i, k, lk.max(vj + eps).min(li))
                } else {
                    (k, i, li.max(vj).min(lk))
                };
                let offer = settle(market, winner, j, level)?;
                if winner == i {
                    p.dissolve(g, k);
                }
                p.set_couple(g, winner, j, offer.assignment.clone())?;
                queue.push_back(loser);
                trace.events.push(Event::Settle {
                    winner,
                    loser,
                    woman: j,
                    level,
                    u: offer.u,
                    v: offer.v,
                    assignment: offer.assignment,
                });
            }
        }
    }
    Ok((p, trace))
}

fn settle(market: &Market, i: usize, j: usize, level: f64) -> Result<Offer> {
    let o = market.oracle(i, j);
    let level = level.min(o.max_v());
    o.settle(level)?
        .ok_or_else(|| Error::Numerical(format!("no profile of couple ({i}, {j}) reaches level {level}")))
}

/// ε-outside options of the couple `(i, j)` in `p`.
pub fn outside_options(g: &MatchingGame, p: &MatchingProfile, i: usize, j: usize, eps: f64) -> Result<OutsideOptions> {
    Ok(Market::new(g)?.outside_options(p, i, j, eps))
}

/// Largest gap between a woman's best reachable payoff and her IRP.
///
/// For transfer couples the best reachable payoff leaves the man his IRP.
pub fn v_max(g: &MatchingGame) -> Result<f64> {
    Ok(v_max_in(&Market::new(g)?))
}

fn v_max_in(market: &Market) -> f64 {
    v_by_woman_in(market).into_iter().fold(0.0, f64::max)
}

/// `V_j` for every woman: her best reachable payoff over all partners
/// (and staying single) minus her IRP.
pub fn v_by_woman(g: &MatchingGame) -> Result<Vec<f64>> {
    Ok(v_by_woman_in(&Market::new(g)?))
}

fn v_by_woman_in(market: &Market) -> Vec<f64> {
    let g = market.game();
    (0..g.women())
        .map(|j| {
            (0..g.men())
                .map(|i| market.oracle(i, j).woman_cap(g.irp_man(i)) - g.irp_woman(j))
                .fold(0.0, f64::max)
        })
        .collect()
}

/// `⌈V^max / ε⌉`.
///
/// Every counted proposal raises one woman's payoff by at least ε, so this
/// caps the iterations only while a single woman absorbs them; markets with
/// several women can exceed it. [`iteration_cap_total`] always holds.
pub fn iteration_cap(g: &MatchingGame, eps: f64) -> Result<usize> {
    Ok((v_max(g)? / eps).ceil() as usize)
}

/// `Σ_j ⌈V_j / ε⌉`: woman `j` can be raised by ε at most `⌈V_j / ε⌉` times.
pub fn iteration_cap_total(g: &MatchingGame, eps: f64) -> Result<usize> {
    Ok(v_by_woman(g)?.into_iter().map(|v| (v / eps).ceil() as usize).sum())
}

/// Largest couple span over the market.
pub fn max_span(g: &MatchingGame) -> Result<f64> {
    Ok(max_span_in(&Market::new(g)?))
}

fn max_span_in(market: &Market) -> f64 {
    let g = market.game();
    let mut best: f64 = 0.0;
    for i in 0..g.men() {
        for j in 0..g.women() {
            best = best.max(market.oracle(i, j).span(g.irp_man(i), g.irp_woman(j)));
        }
    }
    best
}

/// `⌈span / ε⌉ + 2`.
pub fn sweep_cap(g: &MatchingGame, eps: f64) -> Result<usize> {
    Ok((max_span(g)? / eps).ceil() as usize + 2)
}

/// Strategy modification: replaces every couple's strategies by a
/// constrained equilibrium for its current outside options, sweeping
/// couples by ascending man index until a sweep moves no payoff by more
/// than `1e-9`.
pub fn stabilize(g: &MatchingGame, p: &MatchingProfile, eps: f64) -> Result<(MatchingProfile, EngineTrace)> {
    let market = Market::new(g)?;
    stabilize_in(&market, p, eps)
}

pub fn stabilize_in(market: &Market, p: &MatchingProfile, eps: f64) -> Result<(MatchingProfile, EngineTrace)> {
    let g = market.game();
    check_eps(eps)?;
    p.validate(g)?;
    let bound = (max_span_in(market) / eps).ceil() as usize + 2;
    let mut p = p.clone();
    let mut trace = EngineTrace::default();
    loop {
        if trace.sweeps == bound {
            return Err(Error::NonConvergence {
                sweeps: trace.sweeps,
                bound,
                trace: Box::new(trace),
            });
        }
        trace.sweeps += 1;
        let mut changed = false;
        let couples: Vec<(usize, usize, StrategyAssignment)> =
            p.couples().map(|(i, j, a)| (i, j, a.clone())).collect();
        for (i, j, current) in couples {
            let outside = market.outside_options(&p, i, j, eps);
            let floors = outside.participation(g.irp_man(i), g.irp_woman(j), eps);
            let next = market.oracle(i, j).cne(floors, eps, &current)?;
            let old = (p.u()[i], p.v()[j]);
            p.set_couple(g, i, j, next.clone())?;
            let new = (p.u()[i], p.v()[j]);
            changed |= (new.0 - old.0).abs() > PAYOFF_TOL || (new.1 - old.1).abs() > PAYOFF_TOL;
            trace.events.push(Event::CoupleUpdate {
                sweep: trace.sweeps,
                man: i,
                woman: j,
                outside,
                old,
                new,
                assignment: next,
            });
        }
        if !changed {
            return Ok((p, trace));
        }
    }
}

/// Output of [`solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct Solved {
    pub profile: MatchingProfile,
    pub report: StabilityReport,
    pub trace: EngineTrace,
    /// Profile after propose–dispose, before strategy modification.
    pub external: MatchingProfile,
}

/// Propose–dispose, then strategy modification, then verification.
pub fn solve(g: &MatchingGame, order: &[usize], eps: f64) -> Result<Solved> {
    let market = Market::new(g)?;
    let (external, mut trace) = propose_dispose_in(&market, order, eps)?;
    let (profile, t2) = stabilize_in(&market, &external, eps)?;
    trace.events.extend(t2.events);
    trace.sweeps = t2.sweeps;
    let report = verify::full_report_in(&market, &profile, eps)?;
    Ok(Solved {
        profile,
        report,
        trace,
        external,
    })
}

/// Rebuilds the final profile from an event log.
pub fn replay(g: &MatchingGame, trace: &EngineTrace) -> Result<MatchingProfile> {
    let mut p = MatchingProfile::single(g);
    for e in &trace.events {
        match e {
            Event::Propose { .. } | Event::Compete { .. } => {}
            Event::Accept {
                man, woman, assignment, ..
            } => {
                if *man >= g.men() || *woman >= g.women() {
                    return contract("trace refers to an agent outside the market");
                }
                p.set_couple(g, *man, *woman, assignment.clone())?;
            }
            Event::Settle {
                winner,
                loser,
                woman,
                assignment,
                ..
            } => {
                if *winner >= g.men() || *loser >= g.men() || *woman >= g.women() {
                    return contract("trace refers to an agent outside the market");
                }
                if p.partner_of_man(*loser) == Some(*woman) {
                    p.dissolve(g, *loser);
                }
                p.set_couple(g, *winner, *woman, assignment.clone())?;
            }
            Event::CoupleUpdate {
                man, woman, assignment, ..
            } => {
                if p.partner_of_man(*man) != Some(*woman) {
                    return contract(format!("trace updates unmatched couple ({man}, {woman})"));
                }
                p.set_couple(g, *man, *woman, assignment.clone())?;
            }
        }
    }
    p.validate(g)?;
    Ok(p)
}
