//! Couples with linear transfers: `U = a − x + y` and `V = b + x − y`.
//!
//! `x >= 0` is paid by the man to the woman and `y >= 0` by the woman to the
//! man. Only the net transfer matters for payoffs, so every function here
//! normalizes one of the two to zero.

use crate::error::{contract, Result};
use crate::model::{CoupleGame, GameClass, MatchingGame, MatchingProfile, Matrix, StrategyAssignment};
use serde::{Deserialize, Serialize};

/// Base utilities of every pairing plus IRPs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferInstance {
    pub a: Matrix,
    pub b: Matrix,
    pub irp_men: Vec<f64>,
    pub irp_women: Vec<f64>,
}

impl TransferInstance {
    pub fn new(a: Matrix, b: Matrix, irp_men: Vec<f64>, irp_women: Vec<f64>) -> Result<Self> {
        if a.shape() != b.shape() || irp_men.len() != a.rows() || irp_women.len() != a.cols() {
            return contract("transfer instance dimensions disagree");
        }
        if !a.is_finite() || !b.is_finite() {
            return contract("non-finite base utility");
        }
        Ok(TransferInstance { a, b, irp_men, irp_women })
    }

    pub fn from_game(g: &MatchingGame) -> Result<Self> {
        if g.men() > 0 && g.women() > 0 && g.class() != Some(GameClass::LinearTransfer) {
            return contract("market is not a linear-transfer market");
        }
        let pick = |first: bool| {
            Matrix::from_fn(g.men(), g.women(), |i, j| match g.game(i, j) {
                CoupleGame::LinearTransfer { a, b } => {
                    if first {
                        *a
                    } else {
                        *b
                    }
                }
                _ => unreachable!("class checked"),
            })
        };
        TransferInstance::new(pick(true), pick(false), g.irp_men().to_vec(), g.irp_women().to_vec())
    }

    /// The market with these couples and the given ε.
    pub fn to_game(&self, eps: f64) -> Result<MatchingGame> {
        let (m, n) = self.a.shape();
        let games = (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| CoupleGame::LinearTransfer {
                a: *self.a.get(i, j),
                b: *self.b.get(i, j),
            })
            .collect();
        MatchingGame::new(m, n, games, self.irp_men.clone(), self.irp_women.clone(), eps)
    }

    pub fn men(&self) -> usize {
        self.a.rows()
    }

    pub fn women(&self) -> usize {
        self.a.cols()
    }

    fn total(&self, i: usize, j: usize) -> f64 {
        self.a.get(i, j) + self.b.get(i, j)
    }
}

/// Transfers giving the woman exactly `level` when the pairing is worth
/// `a` to him and `b` to her; the man's transfer is zero when possible.
pub fn transfers_for_woman_level(b: f64, level: f64) -> (f64, f64) {
    if level <= b {
        (0.0, b - level)
    } else {
        (level - b, 0.0)
    }
}

/// Transfers giving the man exactly `level`; the woman's transfer is zero
/// when possible.
pub fn transfers_for_man_level(a: f64, level: f64) -> (f64, f64) {
    if level <= a {
        (a - level, 0.0)
    } else {
        (0.0, level - a)
    }
}

/// A man's best offer at the current women's payoffs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Proposal {
    /// `None` when staying single is best.
    pub woman: Option<usize>,
    pub x: f64,
    pub y: f64,
    pub u: f64,
}

/// Best proposal of man `i` when woman `j` must get at least `current_v[j] + eps`.
///
/// Ties go to the lowest woman index; staying single (worth his IRP) is
/// chosen only when every woman is strictly worse.
pub fn optimal_proposal(inst: &TransferInstance, i: usize, current_v: &[f64], eps: f64) -> Proposal {
    let mut best = Proposal {
        woman: None,
        x: 0.0,
        y: 0.0,
        u: f64::NEG_INFINITY,
    };
    for (j, vj) in current_v.iter().enumerate() {
        let u = inst.total(i, j) - vj - eps;
        if u > best.u {
            let (x, y) = transfers_for_woman_level(*inst.b.get(i, j), vj + eps);
            best = Proposal { woman: Some(j), x, y, u };
        }
    }
    if best.u < inst.irp_men[i] {
        best = Proposal {
            woman: None,
            x: 0.0,
            y: 0.0,
            u: inst.irp_men[i],
        };
    }
    best
}

/// The best value man `i` can reach with any woman except `j`, or single.
pub fn reservation_price(inst: &TransferInstance, i: usize, j: usize, current_v: &[f64], eps: f64) -> f64 {
    current_v
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != j)
        .map(|(k, vk)| inst.total(i, k) - vk - eps)
        .fold(inst.irp_men[i], f64::max)
}

/// Outcome of a competition for a woman.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settlement {
    pub winner: usize,
    pub loser: usize,
    /// Bids of `(i, i_prime)` in the order they were passed.
    pub bids: (f64, f64),
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
}

/// Competition between proposer `i` and incumbent `i_prime` for woman `j`.
///
/// Each bid is the woman's payoff when the man keeps his reservation price:
/// `λ = A + B − β`. The proposer needs a strictly higher bid. A winning
/// proposer pays `max(λ_loser, v_j + ε)` and a winning incumbent pays the
/// proposer's bid. `None` when neither bid reaches `v_j`.
#[allow(clippy::too_many_arguments)]
pub fn bid_and_settle(
    inst: &TransferInstance,
    i: usize,
    i_prime: usize,
    j: usize,
    beta_i: f64,
    beta_i_prime: f64,
    v_j: f64,
    eps: f64,
) -> Option<Settlement> {
    let li = inst.total(i, j) - beta_i;
    let lk = inst.total(i_prime, j) - beta_i_prime;
    if li.max(lk) < v_j {
        return None;
    }
    let (winner, loser, level) = if li > lk + crate::model::PAYOFF_TOL {
        (i, i_prime, lk.max(v_j + eps).min(li))
    } else {
        (i_prime, i, li.max(v_j).min(lk))
    };
    let (x, y) = transfers_for_woman_level(*inst.b.get(winner, j), level);
    Some(Settlement {
        winner,
        loser,
        bids: (li, lk),
        x,
        y,
        u: inst.total(winner, j) - level,
        v: level,
    })
}

/// Men-proposing deferred acceptance on the ordinal preferences of `A` and
/// `B` with zero transfers.
///
/// A man proposes only to women worth at least his IRP, best first (lowest
/// index among equals). A woman holds a proposal when its `B` entry beats
/// what she currently has, starting from her IRP.
pub fn nash_stable_matching(inst: &TransferInstance) -> MatchingProfile {
    let (m, n) = inst.a.shape();
    let prefs: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            let mut js: Vec<usize> = (0..n).filter(|&j| *inst.a.get(i, j) >= inst.irp_men[i]).collect();
            js.sort_by(|&p, &q| inst.a.get(i, q).total_cmp(inst.a.get(i, p)).then(p.cmp(&q)));
            js
        })
        .collect();
    let mut next = vec![0usize; m];
    let mut holds: Vec<Option<usize>> = vec![None; n];
    let mut free: std::collections::VecDeque<usize> = (0..m).collect();
    while let Some(i) = free.pop_front() {
        let Some(&j) = prefs[i].get(next[i]) else { continue };
        next[i] += 1;
        let current = holds[j].map_or(inst.irp_women[j], |k| *inst.b.get(k, j));
        if *inst.b.get(i, j) > current {
            if let Some(k) = holds[j].replace(i) {
                free.push_back(k);
            }
        } else {
            free.push_back(i);
        }
    }
    let g = inst.to_game(1.0).expect("instance already validated");
    let couples = holds
        .iter()
        .enumerate()
        .filter_map(|(j, h)| h.map(|i| (i, j, StrategyAssignment::Transfer { x: 0.0, y: 0.0 })));
    MatchingProfile::from_couples(&g, couples).expect("deferred acceptance yields a matching")
}

/// Transfers after the constrained-equilibrium reduction.
///
/// The woman lowers `y` until the man is held to his outside option `u_eps`
/// (never below zero), then the man lowers `x` against `v_eps`, repeated
/// until neither can lower anything. While both bind, each round takes the
/// same amount off both transfers, so those rounds are skipped in one step.
/// The result is a fixed point: applying it again changes nothing.
pub fn cne_transfer(inst: &TransferInstance, i: usize, j: usize, u_eps: f64, v_eps: f64, current: (f64, f64)) -> (f64, f64) {
    cne_transfer_pair(*inst.a.get(i, j), *inst.b.get(i, j), u_eps, v_eps, current)
}

pub(crate) fn cne_transfer_pair(a: f64, b: f64, u_eps: f64, v_eps: f64, current: (f64, f64)) -> (f64, f64) {
    let round = |(x, y): (f64, f64)| {
        let y2 = y.min((u_eps - a + x).max(0.0));
        let x2 = x.min((v_eps - b + y2).max(0.0));
        (x2, y2)
    };
    let mut cur = round(current);
    loop {
        let mut next = round(cur);
        if next == cur {
            return cur;
        }
        let step = (cur.0 - next.0).min(cur.1 - next.1);
        if step > 0.0 && next.0 > 0.0 && next.1 > 0.0 {
            let skip = (next.0.min(next.1) / step).floor() - 1.0;
            if skip >= 1.0 {
                next = (next.0 - skip * step, next.1 - skip * step);
            }
        }
        cur = next;
    }
}
