//! Infinitely repeated bi-matrix couples under the limit-of-means criterion.
//!
//! Any rational point of the convex hull of stage payoffs is the exact
//! average of a finite cycle of pure action pairs. A [`RepeatedStrategy`] is
//! such a cycle plus, for each partner, whether a deviation from it is
//! answered by minmax punishment forever or ignored.
//!
//! ```
//! use matchgame::model::Matrix;
//! use matchgame::rational::int;
//! use matchgame::repeated::achieve_payoff;
//!
//! // Prisoners' dilemma, rows and columns ordered (C, B).
//! let a = Matrix::from_rows(vec![vec![int(2), int(0)], vec![int(3), int(-1)]]).unwrap();
//! let b = Matrix::from_rows(vec![vec![int(2), int(3)], vec![int(0), int(-1)]]).unwrap();
//! let sigma = achieve_payoff(&a, &b, &(int(1), int(1))).unwrap();
//! assert_eq!(sigma.period(), 4);
//! ```

use crate::error::{contract, Error, Result};
use crate::linprog::{minmax_levels_exact, solve_exact, LinearProgram, Relation, Sense, Status};
use crate::model::{Matrix, Side};
use crate::rational::{self, Rational};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// `count` consecutive stages of the pure pair `(s, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleRun(pub usize, pub usize, pub u64);

/// How the partner reacts to a deviation from the schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Punishment {
    Ignore,
    /// The partner plays `strategy` forever, holding the deviator to `level`.
    Punish {
        #[serde(with = "rational::vec")]
        strategy: Vec<Rational>,
        #[serde(with = "rational")]
        level: Rational,
    },
}

/// A cyclic schedule with punishment annotations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeatedStrategy {
    pub schedule: Vec<ScheduleRun>,
    #[serde(with = "rational::pair")]
    pub limit_payoff: (Rational, Rational),
    /// Reaction to a deviation by the man (carried out by the woman).
    pub punish_man: Punishment,
    /// Reaction to a deviation by the woman (carried out by the man).
    pub punish_woman: Punishment,
}

fn exact_average(a: &Matrix<Rational>, b: &Matrix<Rational>, runs: &[ScheduleRun]) -> Result<(Rational, Rational)> {
    let mut su = Rational::zero();
    let mut sv = Rational::zero();
    let mut n = BigInt::zero();
    for &ScheduleRun(s, t, c) in runs {
        if s >= a.rows() || t >= a.cols() || c == 0 {
            return contract(format!("invalid schedule run ({s}, {t}, {c})"));
        }
        let c = BigInt::from(c);
        su += a.get(s, t) * Rational::from_integer(c.clone());
        sv += b.get(s, t) * Rational::from_integer(c.clone());
        n += c;
    }
    if n.is_zero() {
        return contract("schedule must contain at least one stage");
    }
    let n = Rational::from_integer(n);
    Ok((su / n.clone(), sv / n))
}

impl RepeatedStrategy {
    /// Schedule without punishments; the limit payoff is computed exactly.
    pub fn from_schedule(
        a: &Matrix<Rational>,
        b: &Matrix<Rational>,
        runs: Vec<(usize, usize, u64)>,
    ) -> Result<Self> {
        let schedule: Vec<ScheduleRun> = runs.into_iter().map(|(s, t, c)| ScheduleRun(s, t, c)).collect();
        let limit_payoff = exact_average(a, b, &schedule)?;
        Ok(RepeatedStrategy {
            schedule,
            limit_payoff,
            punish_man: Punishment::Ignore,
            punish_woman: Punishment::Ignore,
        })
    }

    /// Cycle length `N`.
    pub fn period(&self) -> u64 {
        self.schedule.iter().map(|r| r.2).sum()
    }

    /// Pure pair played at 0-based stage `k` on the path.
    pub fn cell_at(&self, k: u64) -> (usize, usize) {
        let mut k = k % self.period();
        for &ScheduleRun(s, t, c) in &self.schedule {
            if k < c {
                return (s, t);
            }
            k -= c;
        }
        unreachable!("k reduced modulo the period")
    }

    /// Checks the schedule against the stage game and the stored payoff.
    pub fn check_against(&self, a: &Matrix<Rational>, b: &Matrix<Rational>) -> Result<()> {
        if exact_average(a, b, &self.schedule)? != self.limit_payoff {
            return contract("limit payoff differs from the schedule average");
        }
        let (m, n) = a.shape();
        for (p, len) in [(&self.punish_man, n), (&self.punish_woman, m)] {
            if let Punishment::Punish { strategy, .. } = p {
                let sum: Rational = strategy.iter().sum();
                if strategy.len() != len || !sum.is_one() || strategy.iter().any(|w| !rational::is_nonneg(w)) {
                    return contract("punishing strategy is not a distribution of the right size");
                }
            }
        }
        Ok(())
    }

    pub fn limit_f64(&self) -> (f64, f64) {
        (
            rational::to_f64(&self.limit_payoff.0),
            rational::to_f64(&self.limit_payoff.1),
        )
    }
}

/// Stage-payoff geometry of one couple.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffSets {
    /// Payoff pair of every cell, in lexicographic cell order.
    pub points: Vec<(Rational, Rational)>,
    /// Vertices of the convex hull, counter-clockwise from the lowest-leftmost.
    pub hull_vertices: Vec<(Rational, Rational)>,
    pub alpha: Rational,
    pub beta: Rational,
    /// The woman's strategy holding the man to `alpha`.
    pub y_punish: Vec<Rational>,
    /// The man's strategy holding the woman to `beta`.
    pub x_punish: Vec<Rational>,
}

/// A hull point with weights over cells.
#[derive(Clone, Debug, PartialEq)]
pub struct HullPoint {
    pub u: Rational,
    pub v: Rational,
    pub lambda: Vec<Rational>,
}

fn cross(o: &(Rational, Rational), a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

fn convex_hull(points: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut p = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let mut lower: Vec<(Rational, Rational)> = Vec::new();
    for q in &p {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], q) <= Rational::zero() {
            lower.pop();
        }
        lower.push(q.clone());
    }
    let mut upper: Vec<(Rational, Rational)> = Vec::new();
    for q in p.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], q) <= Rational::zero() {
            upper.pop();
        }
        upper.push(q.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl PayoffSets {
    pub fn new(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Result<Self> {
        if a.shape() != b.shape() {
            return contract("stage matrices must have equal shapes");
        }
        let points: Vec<(Rational, Rational)> = a
            .entries()
            .iter()
            .cloned()
            .zip(b.entries().iter().cloned())
            .collect();
        let (alpha, y_punish, beta, x_punish) = minmax_levels_exact(a, b)?;
        Ok(PayoffSets {
            hull_vertices: convex_hull(&points),
            points,
            alpha,
            beta,
            y_punish,
            x_punish,
        })
    }

    fn lp(&self, sense: Sense, objective_u: bool) -> LinearProgram<Rational> {
        let obj = self
            .points
            .iter()
            .map(|p| if objective_u { p.0.clone() } else { p.1.clone() })
            .collect();
        let mut lp = LinearProgram::new(sense, obj);
        lp.constrain(vec![Rational::one(); self.points.len()], Relation::Eq, Rational::one());
        lp
    }

    fn us(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.0.clone()).collect()
    }

    fn vs(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.1.clone()).collect()
    }

    fn run(lp: &LinearProgram<Rational>) -> Option<(Rational, Vec<Rational>)> {
        let sol = solve_exact(lp).expect("well-formed hull program");
        (sol.status == Status::Optimal).then_some((sol.value, sol.point))
    }

    /// Hull point maximizing `u`, then `v`, subject to optional floors.
    pub fn lex_max_u(&self, u_floor: Option<&Rational>, v_floor: Option<&Rational>) -> Option<HullPoint> {
        self.lex_max(true, u_floor, v_floor)
    }

    /// Hull point maximizing `v`, then `u`, subject to optional floors.
    pub fn lex_max_v(&self, u_floor: Option<&Rational>, v_floor: Option<&Rational>) -> Option<HullPoint> {
        self.lex_max(false, u_floor, v_floor)
    }

    fn lex_max(&self, first_u: bool, u_floor: Option<&Rational>, v_floor: Option<&Rational>) -> Option<HullPoint> {
        let floors = |lp: &mut LinearProgram<Rational>| {
            if let Some(f) = u_floor {
                lp.constrain(self.us(), Relation::Ge, f.clone());
            }
            if let Some(f) = v_floor {
                lp.constrain(self.vs(), Relation::Ge, f.clone());
            }
        };
        let mut lp = self.lp(Sense::Max, first_u);
        floors(&mut lp);
        let (best, _) = Self::run(&lp)?;
        let mut lp = self.lp(Sense::Max, !first_u);
        floors(&mut lp);
        lp.constrain(if first_u { self.us() } else { self.vs() }, Relation::Eq, best.clone());
        let (second, lambda) = Self::run(&lp)?;
        let (u, v) = if first_u { (best, second) } else { (second, best) };
        Some(HullPoint { u, v, lambda })
    }

    pub fn contains(&self, u: &Rational, v: &Rational) -> bool {
        self.weights(u, v).is_ok()
    }

    /// Most interior weights reaching `(u, v)`: maximizes the smallest weight.
    pub fn weights(&self, u: &Rational, v: &Rational) -> Result<Vec<Rational>> {
        let k = self.points.len();
        let mut obj = vec![Rational::zero(); k + 1];
        obj[k] = Rational::one();
        let mut lp = LinearProgram::new(Sense::Max, obj);
        let with_tau = |mut c: Vec<Rational>| {
            c.push(Rational::zero());
            c
        };
        lp.constrain(with_tau(vec![Rational::one(); k]), Relation::Eq, Rational::one());
        lp.constrain(with_tau(self.us()), Relation::Eq, u.clone());
        lp.constrain(with_tau(self.vs()), Relation::Eq, v.clone());
        for c in 0..k {
            let mut row = vec![Rational::zero(); k + 1];
            row[c] = Rational::one();
            row[k] = -Rational::one();
            lp.constrain(row, Relation::Ge, Rational::zero());
        }
        let sol = solve_exact(&lp)?;
        if sol.status != Status::Optimal {
            return Err(Error::PayoffOutsideHull);
        }
        let mut w = sol.point;
        w.truncate(k);
        Ok(w)
    }

    /// Membership in the uniform-equilibrium set `E`.
    pub fn in_e(&self, u: &Rational, v: &Rational) -> bool {
        u >= &self.alpha && v >= &self.beta && self.contains(u, v)
    }
}

/// Cyclic schedule whose exact average is `target`.
///
/// Weights come from [`PayoffSets::weights`]; the period is the lcm of
/// their denominators and cells are visited in lexicographic order.
pub fn achieve_payoff(
    a: &Matrix<Rational>,
    b: &Matrix<Rational>,
    target: &(Rational, Rational),
) -> Result<RepeatedStrategy> {
    if a.shape() != b.shape() {
        return contract("stage matrices must have equal shapes");
    }
    let points: Vec<(Rational, Rational)> = a
        .entries()
        .iter()
        .cloned()
        .zip(b.entries().iter().cloned())
        .collect();
    let sets = PayoffSets {
        hull_vertices: Vec::new(),
        points,
        alpha: Rational::zero(),
        beta: Rational::zero(),
        y_punish: Vec::new(),
        x_punish: Vec::new(),
    };
    let w = sets.weights(&target.0, &target.1)?;
    schedule_from_weights(a, b, &w)
}

pub(crate) fn schedule_from_weights(a: &Matrix<Rational>, b: &Matrix<Rational>, w: &[Rational]) -> Result<RepeatedStrategy> {
    let n = w
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| rational::lcm(&acc, x.denom()));
    let cols = a.cols();
    let mut runs = Vec::new();
    for (k, x) in w.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let count = (x * Rational::from_integer(n.clone())).to_integer();
        let count = count.to_u64().ok_or(Error::ScheduleTooLong)?;
        runs.push((k / cols, k % cols, count));
    }
    let total: u128 = runs.iter().map(|r| r.2 as u128).sum();
    if total > u64::MAX as u128 {
        return Err(Error::ScheduleTooLong);
    }
    RepeatedStrategy::from_schedule(a, b, runs)
}

/// `max Σ Aλ` subject to `Σ Bλ >= floor_v` over the joint simplex.
///
/// Among maximizers the one with the largest `Σ Bλ` is returned. The floor
/// is read as the rational [`rational::snap`] recovers from it.
pub fn best_in_hull(a: &Matrix<Rational>, b: &Matrix<Rational>, floor_v: f64) -> Option<(f64, f64, Vec<f64>)> {
    let floor = rational::snap(floor_v);
    let p = best_in_hull_exact(a, b, &floor)?;
    Some((
        rational::to_f64(&p.u),
        rational::to_f64(&p.v),
        p.lambda.iter().map(rational::to_f64).collect(),
    ))
}

pub fn best_in_hull_exact(a: &Matrix<Rational>, b: &Matrix<Rational>, floor: &Rational) -> Option<HullPoint> {
    if floor > &b.max() {
        return None;
    }
    let sets = PayoffSets {
        hull_vertices: Vec::new(),
        points: a.entries().iter().cloned().zip(b.entries().iter().cloned()).collect(),
        alpha: Rational::zero(),
        beta: Rational::zero(),
        y_punish: Vec::new(),
        x_punish: Vec::new(),
    };
    sets.lex_max_u(None, Some(floor))
}

/// Punishment levels `(α, β)` in floats.
pub fn punishment_levels(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Result<(f64, f64)> {
    let (alpha, _, beta, _) = minmax_levels_exact(a, b)?;
    Ok((rational::to_f64(&alpha), rational::to_f64(&beta)))
}

/// Constrained Nash equilibrium of a repeated couple.
///
/// Outside options are exact; see [`cne_repeated`] for the float entry point.
pub fn cne_repeated_exact(
    a: &Matrix<Rational>,
    b: &Matrix<Rational>,
    sets: &PayoffSets,
    u: &Rational,
    v: &Rational,
    eps: &Rational,
) -> Result<RepeatedStrategy> {
    let lu = u - eps;
    let lv = v - eps;
    let punish_man = Punishment::Punish {
        strategy: sets.y_punish.clone(),
        level: sets.alpha.clone(),
    };
    let punish_woman = Punishment::Punish {
        strategy: sets.x_punish.clone(),
        level: sets.beta.clone(),
    };
    let fu = if lu > sets.alpha { lu.clone() } else { sets.alpha.clone() };
    let fv = if lv > sets.beta { lv.clone() } else { sets.beta.clone() };
    if let Some(p) = sets.lex_max_u(Some(&fu), Some(&fv)) {
        let mut sigma = schedule_from_weights(a, b, &sets.weights(&p.u, &p.v)?)?;
        sigma.punish_man = punish_man;
        sigma.punish_woman = punish_woman;
        return Ok(sigma);
    }
    if lu >= sets.alpha {
        // Only the woman's floor is below her punishment level.
        let p = sets.lex_max_v(Some(&lu), Some(&lv)).ok_or(Error::NoFeasibleAgreement)?;
        let shifted = &p.v + eps;
        let target = if sets.contains(&p.u, &shifted) { (p.u, shifted) } else { (p.u, p.v) };
        let mut sigma = schedule_from_weights(a, b, &sets.weights(&target.0, &target.1)?)?;
        sigma.punish_man = punish_man;
        sigma.punish_woman = Punishment::Ignore;
        Ok(sigma)
    } else {
        let p = sets.lex_max_u(Some(&lu), Some(&lv)).ok_or(Error::NoFeasibleAgreement)?;
        let shifted = &p.u + eps;
        let target = if sets.contains(&shifted, &p.v) { (shifted, p.v) } else { (p.u, p.v) };
        let mut sigma = schedule_from_weights(a, b, &sets.weights(&target.0, &target.1)?)?;
        sigma.punish_man = Punishment::Ignore;
        sigma.punish_woman = punish_woman;
        Ok(sigma)
    }
}

/// Constrained Nash equilibrium for float outside options.
///
/// `u`, `v` and `eps` are read through [`rational::snap`].
pub fn cne_repeated(
    a: &Matrix<Rational>,
    b: &Matrix<Rational>,
    u: f64,
    v: f64,
    eps: f64,
) -> Result<RepeatedStrategy> {
    let sets = PayoffSets::new(a, b)?;
    cne_repeated_exact(a, b, &sets, &rational::snap(u), &rational::snap(v), &rational::snap(eps))
}

/// A single agent leaving the schedule.
///
/// From stage `start` (1-based) the deviator plays `script` in order. Once
/// the script is exhausted he returns to the schedule, or, if his deviation
/// triggered punishment, best-responds to the punishing strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct Deviation {
    pub who: Side,
    pub start: u64,
    pub script: Vec<usize>,
}

/// Exact `K`-stage average payoffs along the play path.
///
/// Punishment stages contribute expected payoffs against the punisher's
/// mixed strategy.
pub fn simulate(
    a: &Matrix<Rational>,
    b: &Matrix<Rational>,
    sigma: &RepeatedStrategy,
    k: u64,
    deviation: Option<&Deviation>,
) -> Result<(Rational, Rational)> {
    if k == 0 {
        return contract("simulate needs at least one stage");
    }
    sigma.check_against(a, b)?;
    let (m, n) = a.shape();
    if let Some(d) = deviation {
        let bound = if d.who == Side::Man { m } else { n };
        if d.script.iter().any(|&x| x >= bound) || d.start == 0 {
            return contract("deviation script out of range");
        }
    }
    // Expected payoffs of each deviator action against a punishing strategy.
    let vs_strategy = |who: Side, strat: &[Rational]| -> Vec<(Rational, Rational)> {
        match who {
            Side::Man => (0..m)
                .map(|s| {
                    (0..n).fold((Rational::zero(), Rational::zero()), |(pu, pv), t| {
                        (pu + a.get(s, t) * &strat[t], pv + b.get(s, t) * &strat[t])
                    })
                })
                .collect(),
            Side::Woman => (0..n)
                .map(|t| {
                    (0..m).fold((Rational::zero(), Rational::zero()), |(pu, pv), s| {
                        (pu + a.get(s, t) * &strat[s], pv + b.get(s, t) * &strat[s])
                    })
                })
                .collect(),
        }
    };
    let mut punished: Option<(Vec<(Rational, Rational)>, usize)> = None;
    let (mut su, mut sv) = (Rational::zero(), Rational::zero());
    for stage in 1..=k {
        let scripted = deviation.and_then(|d| {
            let off = stage.checked_sub(d.start)?;
            d.script.get(off as usize).copied()
        });
        if let Some((table, best)) = &punished {
            let act = scripted.unwrap_or(*best);
            su += &table[act].0;
            sv += &table[act].1;
            continue;
        }
        let (s, t) = sigma.cell_at(stage - 1);
        let (mut ps, mut pt) = (s, t);
        let mut deviated = false;
        if let (Some(d), Some(x)) = (deviation, scripted) {
            match d.who {
                Side::Man => {
                    deviated = x != s;
                    ps = x;
                }
                Side::Woman => {
                    deviated = x != t;
                    pt = x;
                }
            }
        }
        su += a.get(ps, pt);
        sv += b.get(ps, pt);
        if deviated {
            let who = deviation.expect("deviated").who;
            let rule = if who == Side::Man { &sigma.punish_man } else { &sigma.punish_woman };
            if let Punishment::Punish { strategy, .. } = rule {
                let table = vs_strategy(who, strategy);
                let own = |p: &(Rational, Rational)| if who == Side::Man { p.0.clone() } else { p.1.clone() };
                let best = (0..table.len())
                    .fold(0, |bi, i| if own(&table[i]) > own(&table[bi]) { i } else { bi });
                punished = Some((table, best));
            }
        }
    }
    let k = Rational::from_integer(BigInt::from(k));
    Ok((su / k.clone(), sv / k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn rm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    fn pd() -> (Matrix<Rational>, Matrix<Rational>) {
        (rm(&[&[2, 0], &[3, -1]]), rm(&[&[2, 3], &[0, -1]]))
    }

    #[test]
    fn four_cycle_for_prisoners_dilemma() {
        let (a, b) = pd();
        let s = achieve_payoff(&a, &b, &(int(1), int(1))).unwrap();
        assert_eq!(s.period(), 4);
        assert_eq!(
            s.schedule,
            vec![ScheduleRun(0, 0, 1), ScheduleRun(0, 1, 1), ScheduleRun(1, 0, 1), ScheduleRun(1, 1, 1)]
        );
        assert_eq!(s.limit_payoff, (int(1), int(1)));
    }

    #[test]
    fn vertex_and_edge_targets() {
        let (a, b) = pd();
        let s = achieve_payoff(&a, &b, &(int(3), int(0))).unwrap();
        assert_eq!(s.schedule, vec![ScheduleRun(1, 0, 1)]);
        // 1/3 (3, 0) + 2/3 (2, 2)
        let s = achieve_payoff(&a, &b, &(ratio(7, 3), ratio(4, 3))).unwrap();
        assert_eq!(s.period(), 3);
        assert_eq!(s.schedule, vec![ScheduleRun(0, 0, 2), ScheduleRun(1, 0, 1)]);
        assert!(matches!(
            achieve_payoff(&a, &b, &(int(3), int(3))),
            Err(Error::PayoffOutsideHull)
        ));
    }

    #[test]
    fn hull_of_prisoners_dilemma() {
        let (a, b) = pd();
        let sets = PayoffSets::new(&a, &b).unwrap();
        assert_eq!(sets.hull_vertices.len(), 4);
        assert_eq!((sets.alpha.clone(), sets.beta.clone()), (int(0), int(0)));
    }

    #[test]
    fn best_in_hull_examples() {
        let (a, b) = pd();
        assert_eq!(best_in_hull(&a, &b, 1.0).unwrap().0, 2.5);
        assert_eq!(best_in_hull(&a, &b, -5.0).unwrap().0, 3.0);
        assert_eq!(best_in_hull(&a, &b, 3.0).unwrap().0, 0.0);
        assert!(best_in_hull(&a, &b, 3.5).is_none());
    }

    #[test]
    fn cne_in_intersection_case() {
        let (a, b) = pd();
        let s = cne_repeated(&a, &b, 1.0, 1.0, 0.1).unwrap();
        assert_eq!(s.limit_payoff, (ratio(51, 20), ratio(9, 10)));
        assert_eq!(s.period(), 20);
        assert!(matches!(s.punish_man, Punishment::Punish { .. }));
        assert!(matches!(s.punish_woman, Punishment::Punish { .. }));
    }

    #[test]
    fn simulate_full_cycles_is_exact() {
        let (a, b) = pd();
        let s = cne_repeated(&a, &b, 1.0, 1.0, 0.1).unwrap();
        assert_eq!(simulate(&a, &b, &s, 2000, None).unwrap(), s.limit_payoff);
    }

    #[test]
    fn man_deviation_is_punished_to_alpha() {
        let (a, b) = pd();
        let s = cne_repeated(&a, &b, 1.0, 1.0, 0.1).unwrap();
        let (first, _) = s.cell_at(0);
        let d = Deviation {
            who: Side::Man,
            start: 1,
            script: vec![1 - first],
        };
        let k = 10_000;
        let (u, _) = simulate(&a, &b, &s, k, Some(&d)).unwrap();
        // One deviation stage, then alpha = 0 forever.
        assert!(rational::to_f64(&u).abs() <= 3.0 / k as f64);
    }

    #[test]
    fn ignored_deviation_returns_to_schedule() {
        let (a, b) = pd();
        let mut s = achieve_payoff(&a, &b, &(int(1), int(1))).unwrap();
        s.punish_woman = Punishment::Ignore;
        let d = Deviation {
            who: Side::Woman,
            start: 1,
            script: vec![1],
        };
        // Stage 1 becomes (C, B) instead of (C, C): woman +1, man -2.
        let (u, v) = simulate(&a, &b, &s, 4, Some(&d)).unwrap();
        assert_eq!((u, v), (ratio(1, 2), ratio(5, 4)));
    }
}
