//! Strictly competitive couples, reduced to zero-sum games.
//!
//! A couple with matrices `(A, B)` is strictly competitive when `P = −B` is a
//! positive affine variant of `A`. Both payoffs are then affine in one
//! zero-sum value `z = xZy`, where `Z` is whichever of `A`, `P` the other is
//! a contraction of. [`AffineZeroSum`] carries that view; zero-sum couples
//! are the identity case.

use crate::error::{Error, Result};
use crate::linprog::FLOAT_TOL;
use crate::model::{Matrix, MixedStrategy};
use crate::zerosum::{self, Cne, LevelSolve};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `B = alpha·A + offset`.
    AtoB,
    /// `A = alpha·B + offset`.
    BtoA,
}

/// `target = alpha·source + offset·U` with `0 < alpha <= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub alpha: f64,
    pub offset: f64,
    pub direction: Direction,
}

impl AffineMap {
    pub fn apply(&self, source: &Matrix) -> Matrix {
        source.map(|v| self.alpha * v + self.offset)
    }
}

fn close(a: &Matrix, b: &Matrix) -> bool {
    let scale = a
        .entries()
        .iter()
        .chain(b.entries())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    a.entries()
        .iter()
        .zip(b.entries())
        .all(|(p, q)| (p - q).abs() <= FLOAT_TOL * scale)
}

/// Finds `alpha`, `offset` with `B = λA + μU` written in the direction that
/// keeps `alpha <= 1`, or `None` if no positive affine relation holds.
///
/// ```
/// use matchgame::competitive::{detect_affine, Direction};
/// use matchgame::model::Matrix;
///
/// let a = Matrix::from_rows(vec![vec![3.0, 5.0], vec![5.0, 3.0]]).unwrap();
/// let b = Matrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
/// let map = detect_affine(&a, &b).unwrap();
/// assert_eq!(map.alpha, 0.5);
/// assert_eq!(map.direction, Direction::AtoB);
/// ```
pub fn detect_affine(a: &Matrix, b: &Matrix) -> Option<AffineMap> {
    if a.shape() != b.shape() {
        return None;
    }
    let (amin, amax, bmin, bmax) = (a.min(), a.max(), b.min(), b.max());
    let (aspan, bspan) = (amax - amin, bmax - bmin);
    let scale = amax.abs().max(amin.abs()).max(bmax.abs()).max(bmin.abs()).max(1.0);
    let flat = |span: f64| span <= FLOAT_TOL * scale;
    let map = match (flat(aspan), flat(bspan)) {
        (true, true) => AffineMap {
            alpha: 1.0,
            offset: bmin - amin,
            direction: Direction::AtoB,
        },
        (true, false) | (false, true) => return None,
        (false, false) => {
            let lambda = bspan / aspan;
            if lambda <= 1.0 + 1e-12 {
                let alpha = if (lambda - 1.0).abs() <= 1e-12 { 1.0 } else { lambda };
                AffineMap {
                    alpha,
                    offset: bmin - alpha * amin,
                    direction: Direction::AtoB,
                }
            } else {
                let alpha = 1.0 / lambda;
                AffineMap {
                    alpha,
                    offset: amin - alpha * bmin,
                    direction: Direction::BtoA,
                }
            }
        }
    };
    let ok = match map.direction {
        Direction::AtoB => close(&map.apply(a), b),
        Direction::BtoA => close(&map.apply(b), a),
    };
    ok.then_some(map)
}

/// Individually rational floors in zero-sum units, both as bounds on `z`:
/// the man needs `z >= u'` and the woman needs `z <= v'`.
pub fn transform_thresholds(map: &AffineMap, irp_u: f64, irp_v: f64) -> (f64, f64) {
    match map.direction {
        Direction::BtoA => ((irp_u - map.offset) / map.alpha, -irp_v),
        Direction::AtoB => (irp_u, -(irp_v + map.offset) / map.alpha),
    }
}

/// Outside options in the threshold convention of [`zerosum::cne`].
///
/// The partner whose payoff is scaled by `alpha` gets the correction
/// `ε(1 − α)/α`, so ε-slack in zero-sum units matches ε-slack in the
/// original game.
pub fn transform_outside_options(map: &AffineMap, u: f64, v: f64, eps: f64) -> (f64, f64) {
    let corr = eps * (1.0 - map.alpha) / map.alpha;
    match map.direction {
        Direction::BtoA => ((u - map.offset) / map.alpha - corr, -v),
        Direction::AtoB => (u, -(v + map.offset) / map.alpha + corr),
    }
}

/// Payoffs `U = ms·z + mo` and `V = −ws·z + wo` of a couple driven by one
/// zero-sum value `z = xZy`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineZeroSum {
    pub z: Matrix,
    pub man_scale: f64,
    pub man_offset: f64,
    pub woman_scale: f64,
    pub woman_offset: f64,
    zmin: f64,
    zmax: f64,
}

/// An achievable payoff pair and the profile reaching it.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelOffer {
    pub u: f64,
    pub v: f64,
    pub x: MixedStrategy,
    pub y: MixedStrategy,
}

impl AffineZeroSum {
    fn build(z: Matrix, ms: f64, mo: f64, ws: f64, wo: f64) -> Self {
        AffineZeroSum {
            zmin: z.min(),
            zmax: z.max(),
            z,
            man_scale: ms,
            man_offset: mo,
            woman_scale: ws,
            woman_offset: wo,
        }
    }

    /// A zero-sum couple: `U = z`, `V = −z`.
    pub fn identity(a: &Matrix) -> Self {
        AffineZeroSum::build(a.clone(), 1.0, 0.0, 1.0, 0.0)
    }

    fn offer(&self, l: LevelSolve) -> LevelOffer {
        let (u, v) = self.payoffs(l.achieved);
        LevelOffer {
            u,
            v,
            x: l.x,
            y: l.y,
        }
    }

    pub fn payoffs(&self, z: f64) -> (f64, f64) {
        (
            self.man_scale * z + self.man_offset,
            -self.woman_scale * z + self.woman_offset,
        )
    }

    pub fn max_u(&self) -> f64 {
        self.payoffs(self.zmax).0
    }

    pub fn max_v(&self) -> f64 {
        self.payoffs(self.zmin).1
    }

    pub fn min_u(&self) -> f64 {
        self.payoffs(self.zmin).0
    }

    pub fn min_v(&self) -> f64 {
        self.payoffs(self.zmax).1
    }

    /// Largest `U` subject to `V >= floor`.
    pub fn man_best(&self, floor: f64) -> Option<LevelOffer> {
        let c = (self.woman_offset - floor) / self.woman_scale;
        if c < self.zmin - FLOAT_TOL {
            return None;
        }
        zerosum::solve_level(&self.z, c.min(self.zmax))
            .ok()
            .map(|l| self.offer(l))
    }

    /// Largest `V` subject to `U >= floor`.
    pub fn woman_best(&self, floor: f64) -> Option<LevelOffer> {
        let c = (floor - self.man_offset) / self.man_scale;
        if c > self.zmax + FLOAT_TOL {
            return None;
        }
        zerosum::solve_level(&self.z, c.max(self.zmin))
            .ok()
            .map(|l| self.offer(l))
    }

    /// Outside options `(u, v)` in own units, mapped to zero-sum thresholds.
    pub fn thresholds(&self, u: f64, v: f64, eps: f64) -> (f64, f64) {
        let (ms, ws) = (self.man_scale, self.woman_scale);
        let u_z = (u - self.man_offset) / ms - eps * (1.0 - ms) / ms;
        let v_z = (v - self.woman_offset) / ws - eps * (1.0 - ws) / ws;
        (u_z, -v_z)
    }

    /// Participation-preserving CNE for own-unit outside options.
    pub fn feasible_cne(&self, u: f64, v: f64, eps: f64) -> Result<LevelOffer> {
        let (uz, vz) = self.thresholds(u, v, eps);
        let c = zerosum::feasible_cne(&self.z, uz, vz, eps)?;
        Ok(self.from_cne(c))
    }

    fn from_cne(&self, c: Cne) -> LevelOffer {
        let (u, v) = self.payoffs(c.value);
        LevelOffer {
            u,
            v,
            x: c.x,
            y: c.y,
        }
    }
}

/// The zero-sum view of `(A, B)` where `B` is the woman's own matrix.
pub fn affine_view(a: &Matrix, b: &Matrix) -> Option<AffineZeroSum> {
    let p = b.map(|v| -v);
    let map = detect_affine(a, &p)?;
    Some(match map.direction {
        Direction::BtoA => AffineZeroSum::build(p, map.alpha, map.offset, 1.0, 0.0),
        Direction::AtoB => AffineZeroSum::build(a.clone(), 1.0, 0.0, map.alpha, -map.offset),
    })
}

/// Constrained Nash equilibrium of a strictly competitive couple.
///
/// `B` is the woman's payoff matrix and `(u, v)` are outside options in each
/// partner's own units. The outside options are mapped with
/// [`transform_outside_options`] and the zero-sum [`zerosum::cne`] is solved
/// on the contracted matrix.
pub fn cne_competitive(
    a: &Matrix,
    b: &Matrix,
    u: f64,
    v: f64,
    eps: f64,
) -> Result<(MixedStrategy, MixedStrategy)> {
    let p = b.map(|x| -x);
    let map = detect_affine(a, &p)
        .ok_or_else(|| Error::Contract("couple game is not strictly competitive".into()))?;
    let z = match map.direction {
        Direction::BtoA => &p,
        Direction::AtoB => a,
    };
    let (uz, vz) = transform_outside_options(&map, u, v, eps);
    let c = zerosum::cne(z, uz, vz, eps)?;
    Ok((c.x, c.y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn detects_identity_and_rejects_permutation() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let id = detect_affine(&a, &a).unwrap();
        assert_eq!((id.alpha, id.offset), (1.0, 0.0));
        assert!(detect_affine(&m(&[&[1.0, 0.0], &[0.0, 1.0]]), &m(&[&[0.0, 1.0], &[1.0, 0.0]])).is_none());
    }

    #[test]
    fn constant_pairs() {
        let map = detect_affine(&m(&[&[2.0, 2.0]]), &m(&[&[5.0, 5.0]])).unwrap();
        assert_eq!((map.alpha, map.offset), (1.0, 3.0));
        assert!(detect_affine(&m(&[&[2.0, 2.0]]), &m(&[&[5.0, 6.0]])).is_none());
    }

    #[test]
    fn reverse_direction() {
        // A = 2B + 3U: the contraction runs from A to B with alpha 1/2.
        let b = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let a = m(&[&[3.0, 5.0], &[5.0, 3.0]]);
        let map = detect_affine(&b, &a).unwrap();
        assert_eq!(map.direction, Direction::BtoA);
        assert_eq!((map.alpha, map.offset), (0.5, -1.5));
    }

    #[test]
    fn threshold_examples() {
        let id = AffineMap {
            alpha: 1.0,
            offset: 0.0,
            direction: Direction::AtoB,
        };
        assert_eq!(transform_thresholds(&id, 2.0, 3.0), (2.0, -3.0));
        assert_eq!(transform_outside_options(&id, 2.0, 3.0, 0.5), (2.0, -3.0));
        let half = AffineMap {
            alpha: 0.5,
            offset: 3.0,
            direction: Direction::BtoA,
        };
        // a_min = 3, b_min = 0: the lower edge maps to the lower edge.
        assert_eq!(transform_thresholds(&half, 3.0, 1.0).0, 0.0);
        assert_eq!(transform_outside_options(&half, 5.0, 0.0, 1.0), (3.0, 0.0));
    }

    #[test]
    fn zero_sum_input_matches_zero_sum_cne() {
        let a = m(&[&[1.0, -1.0, 2.0], &[-1.0, 1.0, 0.0]]);
        let b = a.map(|v| -v);
        let (x, y) = cne_competitive(&a, &b, 0.8, -1.5, 0.1).unwrap();
        let c = zerosum::cne(&a, 0.8, 1.5, 0.1).unwrap();
        assert_eq!((x, y), (c.x, c.y));
    }

    #[test]
    fn view_payoffs_match_matrices() {
        let a = m(&[&[3.0, 5.0], &[5.0, 3.0]]);
        // The woman's matrix is -(A - 3)/2.
        let b = a.map(|v| -(v - 3.0) / 2.0);
        let view = affine_view(&a, &b).unwrap();
        for s in 0..2 {
            for t in 0..2 {
                let (u, v) = view.payoffs(*view.z.get(s, t));
                assert!((u - a.get(s, t)).abs() < 1e-12);
                assert!((v - b.get(s, t)).abs() < 1e-12);
            }
        }
        assert_eq!(view.max_u(), 5.0);
        assert_eq!(view.max_v(), 0.0);
    }
}
