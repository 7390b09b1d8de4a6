//! Zero-sum couples: level solves, proposal and bid subproblems, and
//! constrained Nash equilibria.
//!
//! The man receives `xAy` and the woman `−xAy`. Functions taking a pair of
//! thresholds `(u, v)` express both as bounds on `xAy`: the man needs
//! `xAy >= u − ε` and the woman needs `xAy <= v + ε`, so `v` is the negated
//! outside option of the woman.

use crate::error::{Error, Result};
use crate::linprog::{game_value, FLOAT_TOL};
use crate::model::{Matrix, MixedStrategy};

/// A profile with `xAy = achieved`; at least one side is pure.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSolve {
    pub x: MixedStrategy,
    pub y: MixedStrategy,
    pub achieved: f64,
}

/// A constrained Nash equilibrium and its value.
#[derive(Clone, Debug, PartialEq)]
pub struct Cne {
    pub x: MixedStrategy,
    pub y: MixedStrategy,
    pub value: f64,
}

fn argmin(v: impl Iterator<Item = f64>) -> (usize, f64) {
    v.enumerate()
        .fold((0, f64::INFINITY), |b, (k, x)| if x < b.1 { (k, x) } else { b })
}

fn argmax(v: impl Iterator<Item = f64>) -> (usize, f64) {
    v.enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (k, x)| if x > b.1 { (k, x) } else { b })
}

/// Finds a profile with `xAy = c`.
///
/// Levels above `max A` clamp to the first maximal cell; levels below
/// `min A` (beyond [`FLOAT_TOL`]) fail. Otherwise the first row whose entries
/// straddle `c` is played purely against a mix of its smallest and largest
/// column; when no row straddles, the first straddling column is used with a
/// mix of two rows.
///
/// ```
/// use matchgame::model::Matrix;
/// use matchgame::zerosum::solve_level;
///
/// let a = Matrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
/// let l = solve_level(&a, 0.5).unwrap();
/// assert_eq!(l.x.weights(), &[1.0, 0.0]);
/// assert_eq!(l.y.weights(), &[0.5, 0.5]);
/// assert!(solve_level(&a, -1.0).is_err());
/// ```
pub fn solve_level(a: &Matrix, c: f64) -> Result<LevelSolve> {
    let (m, n) = a.shape();
    let (lo, hi) = (a.min(), a.max());
    if c < lo - FLOAT_TOL {
        return Err(Error::LevelInfeasible(c));
    }
    let pure = |s: usize, t: usize| LevelSolve {
        x: MixedStrategy::pure(m, s),
        y: MixedStrategy::pure(n, t),
        achieved: *a.get(s, t),
    };
    let cell_of = |target: f64| {
        let k = a.entries().iter().position(|&v| v == target).expect("entry");
        (k / n, k % n)
    };
    if c >= hi {
        let (s, t) = cell_of(hi);
        return Ok(pure(s, t));
    }
    if c <= lo {
        let (s, t) = cell_of(lo);
        return Ok(pure(s, t));
    }
    for s in 0..m {
        let (tl, vl) = argmin(a.row(s).iter().copied());
        let (th, vh) = argmax(a.row(s).iter().copied());
        if vl <= c && c <= vh {
            if vh == vl {
                return Ok(pure(s, tl));
            }
            let lambda = (c - vl) / (vh - vl);
            return Ok(LevelSolve {
                x: MixedStrategy::pure(m, s),
                y: MixedStrategy::two_point(n, th, tl, lambda),
                achieved: c,
            });
        }
    }
    for t in 0..n {
        let (sl, vl) = argmin((0..m).map(|s| *a.get(s, t)));
        let (sh, vh) = argmax((0..m).map(|s| *a.get(s, t)));
        if vl <= c && c <= vh {
            let lambda = (c - vl) / (vh - vl);
            return Ok(LevelSolve {
                x: MixedStrategy::two_point(m, sh, sl, lambda),
                y: MixedStrategy::pure(n, t),
                achieved: c,
            });
        }
    }
    unreachable!("min A < c < max A always has a straddling row or column")
}

/// The man's best offer when the woman must keep `−xAy >= v_floor + eps`.
///
/// Returns `None` when `−(v_floor + eps)` lies below `min A`.
pub fn proposal_value(a: &Matrix, v_floor: f64, eps: f64) -> Option<(f64, LevelSolve)> {
    let target = -(v_floor + eps);
    let l = solve_level(a, target).ok()?;
    Some((l.achieved, l))
}

/// The woman's best payoff `−xAy` while the man keeps `xAy >= reservation`.
///
/// Returns `None` when the reservation exceeds `max A`.
pub fn bid(a: &Matrix, reservation: f64) -> Option<(f64, LevelSolve)> {
    if reservation > a.max() + FLOAT_TOL {
        return None;
    }
    let l = solve_level(a, reservation.max(a.min())).ok()?;
    Some((-l.achieved, l))
}

/// Median of three reals.
pub fn median3(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).min(a.min(b).max(c))
}

/// Constrained Nash equilibrium with value `median{u − 2ε, w, v + 2ε}`.
///
/// `w` is the value of `A`. Inside the band the saddle point is returned;
/// otherwise a pure row is played against a mix of the two-point level
/// profile and the minimizer's optimal strategy, stopped at the last point
/// where some row still attains the target.
///
/// ```
/// use matchgame::model::Matrix;
/// use matchgame::zerosum::cne;
///
/// let a = Matrix::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
/// let c = cne(&a, 0.5, 1.0, 0.1).unwrap();
/// assert!((c.value - 0.3).abs() < 1e-12);
/// ```
pub fn cne(a: &Matrix, u: f64, v: f64, eps: f64) -> Result<Cne> {
    cne_at(a, u, v, eps, 2.0)
}

/// Constrained Nash equilibrium with value `median{u − ε, w, v + ε}`.
///
/// Both partners keep their participation constraint (`xAy >= u − ε` and
/// `xAy <= v + ε`), which [`cne`] does not guarantee: its `u − 2ε` target
/// leaves the man below `u − ε`. Strategy modification uses this variant so
/// that ε-external stability survives every update.
pub fn feasible_cne(a: &Matrix, u: f64, v: f64, eps: f64) -> Result<Cne> {
    cne_at(a, u, v, eps, 1.0)
}

fn cne_at(a: &Matrix, u: f64, v: f64, eps: f64, slack: f64) -> Result<Cne> {
    if !(eps > 0.0) {
        return Err(Error::Contract("eps must be positive".into()));
    }
    let (amin, amax) = (a.min(), a.max());
    if (u - eps).max(amin) > (v + eps).min(amax) + FLOAT_TOL {
        return Err(Error::NoFeasibleAgreement);
    }
    let g = game_value(a)?;
    let (lo, hi) = (u - slack * eps, v + slack * eps);
    if g.w < lo {
        let (x, y, value) = pull_to_level(a, lo, &g.y_star);
        Ok(Cne { x, y, value })
    } else if g.w > hi {
        // Same construction with the roles of the partners swapped.
        let neg_t = a.transpose().map(|z| -z);
        let (y, x, value) = pull_to_level(&neg_t, -hi, &g.x_star);
        Ok(Cne {
            x,
            y,
            value: -value,
        })
    } else {
        Ok(Cne {
            value: a.bilinear(g.x_star.weights(), g.y_star.weights()),
            x: g.x_star,
            y: g.y_star,
        })
    }
}

/// Target `c` above the value: the row player is held at exactly `c`.
fn pull_to_level(
    a: &Matrix,
    c: f64,
    y_star: &MixedStrategy,
) -> (MixedStrategy, MixedStrategy, f64) {
    let (m, n) = a.shape();
    // Callers admit targets up to FLOAT_TOL above max A.
    let c = c.min(a.max());
    // Column t admits x with (xA)_t >= c iff its largest entry does; the best
    // row of that one-column program is its argmax.
    let (t, s) = (0..n)
        .find_map(|t| {
            let (s, best) = argmax((0..m).map(|s| *a.get(s, t)));
            (best >= c).then_some((t, s))
        })
        .expect("c <= max A");
    // Row s has an entry below c, since min_t A(s, t) <= w < c.
    let (tl, vl) = argmin(a.row(s).iter().copied());
    let vh = *a.get(s, t);
    let lambda = if vh > vl { (c - vl) / (vh - vl) } else { 1.0 };
    let y0 = MixedStrategy::two_point(n, t, tl, lambda);

    let p = a.apply_right(y0.weights());
    let q = a.apply_right(y_star.weights());
    let mut best: Option<(f64, usize)> = None;
    for r in 0..m {
        let slope = q[r] - p[r];
        let root = if slope.abs() < 1e-300 {
            if (p[r] - c).abs() <= FLOAT_TOL {
                0.0
            } else {
                continue;
            }
        } else {
            (c - p[r]) / slope
        };
        if !(-FLOAT_TOL..=1.0 + FLOAT_TOL).contains(&root) {
            continue;
        }
        let root = root.clamp(0.0, 1.0);
        if best.map_or(true, |(b, _)| root > b) {
            best = Some((root, r));
        }
    }
    let (tau, row) = best.unwrap_or((0.0, s));
    let y = y0.lerp(y_star, tau);
    let x = MixedStrategy::pure(m, row);
    let value = a.bilinear(x.weights(), y.weights());
    (x, y, value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn level_clamps_above_max() {
        let l = solve_level(&m(&[&[1.0]]), 5.0).unwrap();
        assert_eq!(l.achieved, 1.0);
    }

    #[test]
    fn level_mixes_rows_when_no_row_straddles() {
        let a = m(&[&[0.0, 1.0], &[3.0, 4.0]]);
        let l = solve_level(&a, 2.0).unwrap();
        assert!((a.bilinear(l.x.weights(), l.y.weights()) - 2.0).abs() < 1e-12);
        assert!(l.x.as_pure().is_none());
        assert!(l.y.as_pure().is_some());
    }

    #[test]
    fn proposal_examples() {
        let a = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let (u, l) = proposal_value(&a, -1.5, 0.5).unwrap();
        assert_eq!(u, 1.0);
        assert!(-a.bilinear(l.x.weights(), l.y.weights()) >= -1.5 + 0.5);
        assert!(proposal_value(&a, 0.5, 0.5).is_none());
        let b = m(&[&[-2.0, 2.0], &[2.0, -2.0]]);
        let (u, l) = proposal_value(&b, 0.0, 1.0).unwrap();
        assert_eq!(u, -1.0);
        assert!((b.bilinear(l.x.weights(), l.y.weights()) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn bid_examples() {
        let a = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(bid(&a, 0.0).unwrap().0, 0.0);
        assert!(bid(&m(&[&[2.0]]), 3.0).is_none());
        let b = m(&[&[-1.0, 1.0], &[1.0, -1.0]]);
        assert_eq!(bid(&b, -1.0).unwrap().0, 1.0);
    }

    #[test]
    fn cne_examples() {
        let a = m(&[&[1.0, -1.0], &[-1.0, 1.0]]);
        // Band [-0.6, -0.4] lies below the value 0: the woman's side binds.
        let c = cne(&a, -0.5, -0.5, 0.1).unwrap();
        assert!((c.value + 0.3).abs() < 1e-12);
        let c = cne(&a, -0.5, 0.5, 0.1).unwrap();
        assert!(c.value.abs() < 1e-12);
        assert_eq!(c.x.weights(), &[0.5, 0.5]);
        let c = cne(&a, 0.5, 1.0, 0.1).unwrap();
        assert!((c.value - 0.3).abs() < 1e-12);
        let c = cne(&a, -2.0, -0.6, 0.1).unwrap();
        assert!((c.value + 0.4).abs() < 1e-12);
        assert!(matches!(
            cne(&a, 2.0, -2.0, 0.1),
            Err(Error::NoFeasibleAgreement)
        ));
    }

    #[test]
    fn feasible_variant_keeps_participation() {
        let a = m(&[&[1.0, -1.0], &[-1.0, 1.0]]);
        let c = feasible_cne(&a, 0.5, 1.0, 0.1).unwrap();
        assert!((c.value - 0.4).abs() < 1e-12);
        let c = feasible_cne(&a, -2.0, -0.6, 0.1).unwrap();
        assert!((c.value + 0.5).abs() < 1e-12);
    }

    #[test]
    fn median3_orders() {
        assert_eq!(median3(1.0, 2.0, 3.0), 2.0);
        assert_eq!(median3(3.0, 1.0, 2.0), 2.0);
        assert_eq!(median3(2.0, 3.0, 1.0), 2.0);
    }
}
