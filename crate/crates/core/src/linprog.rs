//! Dense two-phase simplex with Bland's rule.
//!
//! The same tableau code runs over `f64` (sign decisions use [`FLOAT_TOL`]) and
//! over exact [`Rational`]s. Problems here have at most a few hundred
//! variables, so the tableau is dense and reduced costs are recomputed on
//! every pivot.
//!
//! ```
//! use matchgame::linprog::{solve, LinearProgram, Mode, Relation, Sense, Status};
//!
//! // max x + y  s.t.  x + 2y <= 4,  3x + y <= 6
//! let mut lp = LinearProgram::new(Sense::Max, vec![1.0, 1.0]);
//! lp.constrain(vec![1.0, 2.0], Relation::Le, 4.0);
//! lp.constrain(vec![3.0, 1.0], Relation::Le, 6.0);
//! let sol = solve(&lp, Mode::Rational).unwrap();
//! assert_eq!(sol.status, Status::Optimal);
//! assert!((sol.value - 2.8).abs() < 1e-12);
//! ```

use crate::error::{contract, Error, Result};
use crate::model::{Matrix, MixedStrategy};
use crate::rational::{self, Rational};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Sign tolerance of the floating-point mode.
pub const FLOAT_TOL: f64 = 1e-9;

const MAX_PIVOTS: usize = 100_000;

/// Ordered field the tableau can pivot over.
pub trait Scalar:
    Clone
    + PartialOrd
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn to_f64(&self) -> f64;

    fn is_null(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_TOL
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Float,
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// `sense objective·x` subject to the constraints and per-variable bounds.
///
/// Bounds default to `0 <= x` with no upper bound; `None` means unbounded on
/// that side.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T> {
    pub objective: Vec<T>,
    pub sense: Sense,
    pub constraints: Vec<Constraint<T>>,
    pub lower: Vec<Option<T>>,
    pub upper: Vec<Option<T>>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(sense: Sense, objective: Vec<T>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            sense,
            constraints: Vec::new(),
            lower: vec![Some(T::zero()); n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn bound(&mut self, var: usize, lower: Option<T>, upper: Option<T>) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn free(&mut self, var: usize) -> &mut Self {
        self.bound(var, None, None)
    }

    fn check(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return contract("bound vectors must match the objective length");
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return contract(format!(
                    "constraint {k} has {} coefficients, expected {n}",
                    c.coeffs.len()
                ));
            }
        }
        Ok(())
    }

    /// Largest violation of a constraint or bound at `x`, as a float.
    pub fn max_violation(&self, x: &[T]) -> f64 {
        let mut worst = 0.0f64;
        for c in &self.constraints {
            let lhs = dot(&c.coeffs, x);
            let gap = match c.relation {
                Relation::Le => lhs - c.rhs.clone(),
                Relation::Ge => c.rhs.clone() - lhs,
                Relation::Eq => {
                    let d = lhs - c.rhs.clone();
                    if d.is_neg() {
                        -d
                    } else {
                        d
                    }
                }
            };
            worst = worst.max(gap.to_f64());
        }
        for (k, xk) in x.iter().enumerate() {
            if let Some(l) = &self.lower[k] {
                worst = worst.max((l.clone() - xk.clone()).to_f64());
            }
            if let Some(u) = &self.upper[k] {
                worst = worst.max((xk.clone() - u.clone()).to_f64());
            }
        }
        worst
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (p, q)| acc + p.clone() * q.clone())
}

/// Result of a float- or rational-mode solve, reported in floats.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: Status,
    pub point: Vec<f64>,
    pub value: f64,
    /// Exact coordinates, present for optimal rational-mode solves.
    pub exact_point: Option<Vec<Rational>>,
}

/// Result of [`solve_exact`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSolution {
    pub status: Status,
    pub point: Vec<Rational>,
    pub value: Rational,
}

/// Solves a float-coefficient program, optionally in exact arithmetic.
///
/// Rational mode converts every coefficient to its exact dyadic value first.
pub fn solve(lp: &LinearProgram<f64>, mode: Mode) -> Result<LpSolution> {
    lp.check()?;
    match mode {
        Mode::Float => {
            let (status, point, value) = simplex(lp)?;
            Ok(LpSolution {
                status,
                point,
                value,
                exact_point: None,
            })
        }
        Mode::Rational => {
            let exact = to_rational_lp(lp)?;
            let sol = solve_exact(&exact)?;
            let point = sol.point.iter().map(rational::to_f64).collect();
            let optimal = sol.status == Status::Optimal;
            Ok(LpSolution {
                status: sol.status,
                point,
                value: rational::to_f64(&sol.value),
                exact_point: optimal.then_some(sol.point),
            })
        }
    }
}

/// Solves a rational program exactly.
pub fn solve_exact(lp: &LinearProgram<Rational>) -> Result<ExactSolution> {
    lp.check()?;
    let (status, point, value) = simplex(lp)?;
    Ok(ExactSolution {
        status,
        point,
        value,
    })
}

fn to_rational_lp(lp: &LinearProgram<f64>) -> Result<LinearProgram<Rational>> {
    let conv = |x: f64| {
        rational::from_f64_exact(x)
            .ok_or_else(|| Error::Contract(format!("non-finite coefficient {x}")))
    };
    let convv = |v: &[f64]| v.iter().map(|&x| conv(x)).collect::<Result<Vec<_>>>();
    let convo = |v: &[Option<f64>]| {
        v.iter()
            .map(|b| b.map(conv).transpose())
            .collect::<Result<Vec<_>>>()
    };
    Ok(LinearProgram {
        objective: convv(&lp.objective)?,
        sense: lp.sense,
        constraints: lp
            .constraints
            .iter()
            .map(|c| {
                Ok(Constraint {
                    coeffs: convv(&c.coeffs)?,
                    relation: c.relation,
                    rhs: conv(c.rhs)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        lower: convo(&lp.lower)?,
        upper: convo(&lp.upper)?,
    })
}

/// Original variable as `offset + Σ coef·column` over nonnegative columns.
struct VarMap<T> {
    offset: T,
    terms: Vec<(usize, T)>,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    width: usize,
}

impl<T: Scalar> Tableau<T> {
    fn rhs(&self, r: usize) -> &T {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f == T::zero() {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v = v.clone() - f.clone() * pv.clone();
            }
            row[c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost·col` over columns `< limit`; returns false when unbounded.
    fn optimize(&mut self, cost: &[T], limit: usize) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_null() {
                        d = d - cost[b].clone() * self.rows[r][j].clone();
                    }
                }
                if d.is_pos() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rhs(r).clone() / a.clone();
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        let diff = ratio.clone() - bratio.clone();
                        if diff.is_neg() || (diff.is_null() && self.basis[r] < self.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, j);
        }
        Err(Error::Numerical("simplex pivot limit reached".into()))
    }
}

fn simplex<T: Scalar>(lp: &LinearProgram<T>) -> Result<(Status, Vec<T>, T)> {
    let n = lp.num_vars();
    let mut cols = 0usize;
    let mut maps = Vec::with_capacity(n);
    let mut extra_rows: Vec<(Vec<(usize, T)>, T)> = Vec::new();
    for k in 0..n {
        match (&lp.lower[k], &lp.upper[k]) {
            (Some(l), u) => {
                let c = cols;
                cols += 1;
                if let Some(u) = u {
                    extra_rows.push((vec![(c, T::one())], u.clone() - l.clone()));
                }
                maps.push(VarMap {
                    offset: l.clone(),
                    terms: vec![(c, T::one())],
                });
            }
            (None, Some(u)) => {
                let c = cols;
                cols += 1;
                maps.push(VarMap {
                    offset: u.clone(),
                    terms: vec![(c, -T::one())],
                });
            }
            (None, None) => {
                let c = cols;
                cols += 2;
                maps.push(VarMap {
                    offset: T::zero(),
                    terms: vec![(c, T::one()), (c + 1, -T::one())],
                });
            }
        }
    }

    // Rows over structural columns: (coeffs, relation, rhs).
    let mut rows: Vec<(Vec<T>, Relation, T)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![T::zero(); cols];
        let mut rhs = c.rhs.clone();
        for (k, a) in c.coeffs.iter().enumerate() {
            if *a == T::zero() {
                continue;
            }
            rhs = rhs - a.clone() * maps[k].offset.clone();
            for (col, coef) in &maps[k].terms {
                coeffs[*col] = coeffs[*col].clone() + a.clone() * coef.clone();
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for (terms, rhs) in extra_rows {
        let mut coeffs = vec![T::zero(); cols];
        for (col, coef) in terms {
            coeffs[col] = coef;
        }
        rows.push((coeffs, Relation::Le, rhs));
    }
    for row in rows.iter_mut() {
        if row.2 < T::zero() {
            for v in row.0.iter_mut() {
                *v = -v.clone();
            }
            row.2 = -row.2.clone();
            row.1 = match row.1 {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let art_start = cols + n_slack;
    let width = art_start + n_art;
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        width,
    };
    let (mut s_idx, mut a_idx) = (cols, art_start);
    for (coeffs, rel, rhs) in rows {
        let mut row = coeffs;
        row.resize(width + 1, T::zero());
        row[width] = rhs;
        match rel {
            Relation::Le => {
                row[s_idx] = T::one();
                tab.basis.push(s_idx);
                s_idx += 1;
            }
            Relation::Ge => {
                row[s_idx] = -T::one();
                s_idx += 1;
                row[a_idx] = T::one();
                tab.basis.push(a_idx);
                a_idx += 1;
            }
            Relation::Eq => {
                row[a_idx] = T::one();
                tab.basis.push(a_idx);
                a_idx += 1;
            }
        }
        tab.rows.push(row);
    }

    if n_art > 0 {
        let mut cost = vec![T::zero(); width];
        for c in cost.iter_mut().skip(art_start) {
            *c = -T::one();
        }
        tab.optimize(&cost, width)?;
        let mut infeas = T::zero();
        for (r, &b) in tab.basis.iter().enumerate() {
            if b >= art_start {
                infeas = infeas + tab.rhs(r).clone();
            }
        }
        if infeas.is_pos() {
            return Ok((Status::Infeasible, vec![T::zero(); n], T::zero()));
        }
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                match (0..art_start).find(|&j| !tab.rows[r][j].is_null()) {
                    Some(j) => {
                        tab.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    let mut cost = vec![T::zero(); width];
    for (k, ck) in lp.objective.iter().enumerate() {
        let ck = match lp.sense {
            Sense::Max => ck.clone(),
            Sense::Min => -ck.clone(),
        };
        for (col, coef) in &maps[k].terms {
            cost[*col] = cost[*col].clone() + ck.clone() * coef.clone();
        }
    }
    if !tab.optimize(&cost, art_start)? {
        return Ok((Status::Unbounded, vec![T::zero(); n], T::zero()));
    }

    let mut colval = vec![T::zero(); width];
    for (r, &b) in tab.basis.iter().enumerate() {
        colval[b] = tab.rhs(r).clone();
    }
    let point: Vec<T> = maps
        .iter()
        .map(|m| {
            m.terms.iter().fold(m.offset.clone(), |acc, (col, coef)| {
                acc + coef.clone() * colval[*col].clone()
            })
        })
        .collect();
    let value = dot(&lp.objective, &point);
    Ok((Status::Optimal, point, value))
}

/// Value and optimal strategies of the zero-sum game where the row player
/// receives `xAy`.
#[derive(Clone, Debug, PartialEq)]
pub struct GameValue {
    pub w: f64,
    pub x_star: MixedStrategy,
    pub y_star: MixedStrategy,
}

/// Exact counterpart of [`GameValue`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExactGameValue {
    pub w: Rational,
    pub x_star: Vec<Rational>,
    pub y_star: Vec<Rational>,
}

/// `max_x min_t (xA)_t` as an LP over `(x, w)`; returns `(w, x)`.
fn maximin<T: Scalar>(a: &Matrix<T>) -> Result<(T, Vec<T>)> {
    let (m, n) = (a.rows(), a.cols());
    let mut obj = vec![T::zero(); m + 1];
    obj[m] = T::one();
    let mut lp = LinearProgram::new(Sense::Max, obj);
    lp.free(m);
    for t in 0..n {
        let mut c: Vec<T> = (0..m).map(|s| a.get(s, t).clone()).collect();
        c.push(-T::one());
        lp.constrain(c, Relation::Ge, T::zero());
    }
    let mut sum = vec![T::one(); m];
    sum.push(T::zero());
    lp.constrain(sum, Relation::Eq, T::one());
    let (status, mut point, value) = simplex(&lp)?;
    if status != Status::Optimal {
        return Err(Error::Numerical(format!("game LP ended {status:?}")));
    }
    point.truncate(m);
    Ok((value, point))
}

/// `min_y max_s (Ay)_s` as an LP over `(y, w)`; returns `(w, y)`.
fn minimax<T: Scalar>(a: &Matrix<T>) -> Result<(T, Vec<T>)> {
    let neg_t = a.transpose().map(|v| -v.clone());
    let (w, y) = maximin(&neg_t)?;
    Ok((-w, y))
}

/// Solves the matrix game `A` (row player maximizes `xAy`).
///
/// The returned pair is a saddle point: `x A y* <= w <= x* A y` for all
/// `x`, `y`, which a pure-strategy sweep certifies.
pub fn game_value(a: &Matrix) -> Result<GameValue> {
    let (w, x) = maximin(a)?;
    let (_, y) = minimax(a)?;
    Ok(GameValue {
        w,
        x_star: MixedStrategy::from_solver(x)?,
        y_star: MixedStrategy::from_solver(y)?,
    })
}

/// Exact [`game_value`] over rationals.
pub fn game_value_exact(a: &Matrix<Rational>) -> Result<ExactGameValue> {
    let (w, x_star) = maximin(a)?;
    let (_, y_star) = minimax(a)?;
    Ok(ExactGameValue { w, x_star, y_star })
}

/// Punishment levels `α = min_y max_x xAy` and `β = min_x max_y xBy`.
pub fn minmax_levels(a: &Matrix, b: &Matrix) -> Result<(f64, f64)> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return contract("minmax_levels needs equal shapes");
    }
    Ok((minimax(a)?.0, minimax(&b.transpose())?.0))
}

/// Exact punishment levels plus the punishing strategies.
///
/// Returns `(α, y_pun, β, x_pun)`: the woman holds the man to `α` with
/// `y_pun`, the man holds the woman to `β` with `x_pun`.
pub fn minmax_levels_exact(
    a: &Matrix<Rational>,
    b: &Matrix<Rational>,
) -> Result<(Rational, Vec<Rational>, Rational, Vec<Rational>)> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return contract("minmax_levels needs equal shapes");
    }
    let (alpha, y) = minimax(a)?;
    let (beta, x) = minimax(&b.transpose())?;
    Ok((alpha, y, beta, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn one_variable_box() {
        let mut lp = LinearProgram::new(Sense::Max, vec![1.0]);
        lp.constrain(vec![1.0], Relation::Le, 1.0);
        for mode in [Mode::Float, Mode::Rational] {
            let s = solve(&lp, mode).unwrap();
            assert_eq!(s.status, Status::Optimal);
            assert_eq!(s.value, 1.0);
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Max, vec![1.0]);
        lp.constrain(vec![1.0], Relation::Ge, 2.0);
        lp.constrain(vec![1.0], Relation::Le, 1.0);
        assert_eq!(solve(&lp, Mode::Float).unwrap().status, Status::Infeasible);
        let lp = LinearProgram::new(Sense::Max, vec![1.0]);
        assert_eq!(solve(&lp, Mode::Rational).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn dimension_mismatch_is_a_contract_error() {
        let mut lp = LinearProgram::new(Sense::Max, vec![1.0, 2.0]);
        lp.constrain(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve(&lp, Mode::Float), Err(Error::Contract(_))));
    }

    #[test]
    fn free_and_upper_bounded_variables() {
        // min x s.t. x >= -3, x free  ->  -3
        let mut lp = LinearProgram::new(Sense::Min, vec![1.0]);
        lp.free(0);
        lp.constrain(vec![1.0], Relation::Ge, -3.0);
        assert_eq!(solve(&lp, Mode::Rational).unwrap().value, -3.0);
        // max x with -5 <= x <= -2  ->  -2
        let mut lp = LinearProgram::new(Sense::Max, vec![1.0]);
        lp.bound(0, Some(-5.0), Some(-2.0));
        assert_eq!(solve(&lp, Mode::Float).unwrap().value, -2.0);
        // max -x with x <= 4 and no lower bound: unbounded
        let mut lp = LinearProgram::new(Sense::Max, vec![-1.0]);
        lp.bound(0, None, Some(4.0));
        assert_eq!(solve(&lp, Mode::Float).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(Sense::Max, vec![1.0, 1.0]);
        lp.constrain(vec![1.0, 1.0], Relation::Eq, 1.0);
        lp.constrain(vec![2.0, 2.0], Relation::Eq, 2.0);
        let s = solve(&lp, Mode::Rational).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert_eq!(s.value, 1.0);
    }

    #[test]
    fn matching_pennies() {
        let g = game_value(&m(&[&[1.0, -1.0], &[-1.0, 1.0]])).unwrap();
        assert!(g.w.abs() < 1e-12);
        assert!((g.x_star.weights()[0] - 0.5).abs() < 1e-12);
        assert!((g.y_star.weights()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_entry_game() {
        let g = game_value(&m(&[&[2.0]])).unwrap();
        assert_eq!(g.w, 2.0);
        assert_eq!(g.x_star.weights(), &[1.0]);
    }

    // Grid oracle for min_y max_x xAy on a 2-column matrix.
    fn grid_minimax_2col(a: &Matrix, steps: usize) -> f64 {
        (0..=steps)
            .map(|k| {
                let q = k as f64 / steps as f64;
                (0..a.rows())
                    .map(|s| q * a.get(s, 0) + (1.0 - q) * a.get(s, 1))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn prisoners_dilemma_row_matrix() {
        let a = m(&[&[2.0, 0.0], &[3.0, -1.0]]);
        assert!(grid_minimax_2col(&a, 1000).abs() < 1e-12);
        let g = game_value(&a).unwrap();
        assert!(g.w.abs() < 1e-12);
        assert_eq!(g.y_star.weights(), &[0.0, 1.0]);
    }

    #[test]
    fn punishment_levels_of_prisoners_dilemma() {
        let a = m(&[&[2.0, 0.0], &[3.0, -1.0]]);
        let b = m(&[&[2.0, 3.0], &[0.0, -1.0]]);
        let (alpha, beta) = minmax_levels(&a, &b).unwrap();
        assert!(alpha.abs() < 1e-12 && beta.abs() < 1e-12);
    }

    #[test]
    fn punishment_levels_of_constants() {
        let (alpha, beta) = minmax_levels(&m(&[&[3.5]]), &m(&[&[3.5]])).unwrap();
        assert_eq!((alpha, beta), (3.5, 3.5));
    }

    #[test]
    fn punishment_levels_of_coordination_game() {
        let a = m(&[&[4.0, 0.0], &[0.0, 0.5]]);
        let b = m(&[&[0.5, 0.0], &[0.0, 4.0]]);
        // 1e-4 grid oracle on the punisher's first weight.
        let oracle = grid_minimax_2col(&a, 10_000);
        let (alpha, beta) = minmax_levels(&a, &b).unwrap();
        assert!((alpha - oracle).abs() < 1e-3);
        assert!((alpha - 4.0 / 9.0).abs() < 1e-12);
        // The game is symmetric under swapping roles.
        assert!((alpha - beta).abs() < 1e-12);
        let ea = a.map(|&v| rational::snap(v));
        let eb = b.map(|&v| rational::snap(v));
        let (ra, _, rb, _) = minmax_levels_exact(&ea, &eb).unwrap();
        assert_eq!(ra, ratio(4, 9));
        assert_eq!(rb, ratio(4, 9));
    }

    // Vertex-pair brute force for max Σ Aλ s.t. Σ Bλ >= c over the hull.
    fn hull_pair_oracle(pts: &[(f64, f64)], c: f64) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for &(u, v) in pts {
            if v >= c {
                best = best.max(u);
            }
        }
        for &(u1, v1) in pts {
            for &(u2, v2) in pts {
                if v1 > c && c > v2 {
                    let q = (c - v2) / (v1 - v2);
                    best = best.max(q * u1 + (1.0 - q) * u2);
                }
            }
        }
        best
    }

    #[test]
    fn hull_program_on_prisoners_dilemma() {
        let pts = [(2.0, 2.0), (0.0, 3.0), (3.0, 0.0), (-1.0, -1.0)];
        let oracle = hull_pair_oracle(&pts, 1.0);
        assert_eq!(oracle, 2.5);
        let mut lp = LinearProgram::new(Sense::Max, pts.iter().map(|p| p.0).collect());
        lp.constrain(pts.iter().map(|p| p.1).collect(), Relation::Ge, 1.0);
        lp.constrain(vec![1.0; 4], Relation::Eq, 1.0);
        let s = solve(&lp, Mode::Rational).unwrap();
        assert_eq!(s.value, 2.5);
        let lam = s.exact_point.unwrap();
        let v: Rational = lam
            .iter()
            .zip(&pts)
            .map(|(l, p)| l * rational::snap(p.1))
            .sum();
        assert_eq!(v, int(1));
    }
}
