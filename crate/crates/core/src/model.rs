//! Agents, couple games, strategies and profiles.

use crate::error::{contract, Error, Result};
use crate::rational::{self, Rational};
use crate::repeated::RepeatedStrategy;
use serde::{Deserialize, Serialize};

/// Simplex weights must sum to one within this tolerance.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Cached payoffs may drift from recomputation by at most this much.
pub const PAYOFF_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Man,
    Woman,
}

/// A man, a woman, or the empty player of one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AgentId {
    pub side: Side,
    pub index: usize,
    pub is_empty: bool,
}

impl AgentId {
    pub fn man(index: usize) -> Self {
        AgentId {
            side: Side::Man,
            index,
            is_empty: false,
        }
    }

    pub fn woman(index: usize) -> Self {
        AgentId {
            side: Side::Woman,
            index,
            is_empty: false,
        }
    }

    /// The empty player of `side`; its index is always 0.
    pub fn empty(side: Side) -> Self {
        AgentId {
            side,
            index: 0,
            is_empty: true,
        }
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<T>>", into = "Vec<Vec<T>>")]
#[serde(bound(
    serialize = "T: Clone + Serialize",
    deserialize = "T: Clone + Deserialize<'de>"
))]
pub struct Matrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return contract("matrices need at least one row and one column");
        }
        if data.len() != rows * cols {
            return contract(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                data.len()
            ));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return contract("ragged matrix rows");
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, s: usize, t: usize) -> &T {
        &self.data[s * self.cols + t]
    }

    pub fn row(&self, s: usize) -> &[T] {
        &self.data[s * self.cols..(s + 1) * self.cols]
    }

    /// Entries in row-major (lexicographic cell) order.
    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |t, s| self.get(s, t).clone())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols).map(<[T]>::to_vec).collect()
    }
}

impl<T: Clone> TryFrom<Vec<Vec<T>>> for Matrix<T> {
    type Error = Error;

    fn try_from(rows: Vec<Vec<T>>) -> Result<Self> {
        Matrix::from_rows(rows)
    }
}

impl<T: Clone> From<Matrix<T>> for Vec<Vec<T>> {
    fn from(m: Matrix<T>) -> Self {
        m.to_rows()
    }
}

impl Matrix<f64> {
    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `A y` as a vector over rows.
    pub fn apply_right(&self, y: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|s| self.row(s).iter().zip(y).map(|(a, q)| a * q).sum())
            .collect()
    }

    /// `x A` as a vector over columns.
    pub fn apply_left(&self, x: &[f64]) -> Vec<f64> {
        (0..self.cols)
            .map(|t| (0..self.rows).map(|s| x[s] * self.get(s, t)).sum())
            .collect()
    }

    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(self.apply_right(y)).map(|(p, q)| p * q).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl Matrix<Rational> {
    pub fn min(&self) -> Rational {
        rational::min_of(&self.data).expect("nonempty matrix")
    }

    pub fn max(&self) -> Rational {
        rational::max_of(&self.data).expect("nonempty matrix")
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(rational::to_f64)
    }
}

/// A point of the probability simplex over a finite pure-action set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return contract("a mixed strategy needs at least one action");
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return contract("mixed-strategy weights must be finite and nonnegative");
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return contract(format!("mixed-strategy weights sum to {sum}, not 1"));
        }
        Ok(MixedStrategy(weights))
    }

    pub fn pure(n: usize, k: usize) -> Self {
        assert!(k < n, "pure action {k} out of {n}");
        let mut w = vec![0.0; n];
        w[k] = 1.0;
        MixedStrategy(w)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        MixedStrategy(vec![1.0 / n as f64; n])
    }

    /// `weight·e_a + (1 − weight)·e_b`.
    pub fn two_point(n: usize, a: usize, b: usize, weight: f64) -> Self {
        let weight = weight.clamp(0.0, 1.0);
        let mut w = vec![0.0; n];
        w[a] += weight;
        w[b] += 1.0 - weight;
        MixedStrategy(w)
    }

    /// Cleans solver output: clips round-off negatives and renormalizes.
    pub fn from_solver(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| *w < -1e-7 || !w.is_finite()) {
            return Err(Error::Numerical(format!(
                "solver returned an invalid distribution {weights:?}"
            )));
        }
        let clipped: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
        let sum: f64 = clipped.iter().sum();
        if sum <= 0.0 {
            return Err(Error::Numerical("solver returned a zero distribution".into()));
        }
        MixedStrategy::new(clipped.into_iter().map(|w| w / sum).collect())
    }

    /// Linear interpolation `(1 − tau)·self + tau·other`.
    pub fn lerp(&self, other: &MixedStrategy, tau: f64) -> Self {
        let w: Vec<f64> = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| ((1.0 - tau) * a + tau * b).max(0.0))
            .collect();
        let sum: f64 = w.iter().sum();
        MixedStrategy(w.into_iter().map(|v| v / sum).collect())
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The supporting action when the strategy is pure.
    pub fn as_pure(&self) -> Option<usize> {
        let support: Vec<usize> = (0..self.0.len()).filter(|&k| self.0[k] > 0.0).collect();
        (support.len() == 1).then(|| support[0])
    }
}

impl TryFrom<Vec<f64>> for MixedStrategy {
    type Error = Error;

    fn try_from(w: Vec<f64>) -> Result<Self> {
        MixedStrategy::new(w)
    }
}

impl From<MixedStrategy> for Vec<f64> {
    fn from(m: MixedStrategy) -> Self {
        m.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameClass {
    ZeroSum,
    StrictlyCompetitive,
    Repeated,
    LinearTransfer,
}

impl GameClass {
    pub const ALL: [GameClass; 4] = [
        GameClass::ZeroSum,
        GameClass::StrictlyCompetitive,
        GameClass::Repeated,
        GameClass::LinearTransfer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GameClass::ZeroSum => "zero_sum",
            GameClass::StrictlyCompetitive => "strictly_competitive",
            GameClass::Repeated => "repeated",
            GameClass::LinearTransfer => "linear_transfer",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        GameClass::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// The game a couple plays once matched.
///
/// Bi-matrix payoffs are `(xAy, xBy)`; `B` is the woman's own matrix.
/// A zero-sum couple stores only `A` and the woman receives `−xAy`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoupleGame {
    ZeroSum {
        a: Matrix,
    },
    StrictlyCompetitive {
        a: Matrix,
        b: Matrix,
    },
    Repeated {
        #[serde(with = "rational_matrix")]
        a: Matrix<Rational>,
        #[serde(with = "rational_matrix")]
        b: Matrix<Rational>,
    },
    LinearTransfer {
        a: f64,
        b: f64,
    },
}

impl CoupleGame {
    pub fn class(&self) -> GameClass {
        match self {
            CoupleGame::ZeroSum { .. } => GameClass::ZeroSum,
            CoupleGame::StrictlyCompetitive { .. } => GameClass::StrictlyCompetitive,
            CoupleGame::Repeated { .. } => GameClass::Repeated,
            CoupleGame::LinearTransfer { .. } => GameClass::LinearTransfer,
        }
    }

    /// `(|S|, |T|)`; transfer games have no finite action sets.
    pub fn shape(&self) -> Option<(usize, usize)> {
        match self {
            CoupleGame::ZeroSum { a } | CoupleGame::StrictlyCompetitive { a, .. } => {
                Some(a.shape())
            }
            CoupleGame::Repeated { a, .. } => Some(a.shape()),
            CoupleGame::LinearTransfer { .. } => None,
        }
    }

    /// The woman's payoff matrix in floats (`−A` for zero-sum couples).
    pub fn woman_matrix(&self) -> Option<Matrix> {
        match self {
            CoupleGame::ZeroSum { a } => Some(a.map(|v| -v)),
            CoupleGame::StrictlyCompetitive { b, .. } => Some(b.clone()),
            CoupleGame::Repeated { b, .. } => Some(b.to_f64()),
            CoupleGame::LinearTransfer { .. } => None,
        }
    }

    /// The man's payoff matrix in floats.
    pub fn man_matrix(&self) -> Option<Matrix> {
        match self {
            CoupleGame::ZeroSum { a } | CoupleGame::StrictlyCompetitive { a, .. } => {
                Some(a.clone())
            }
            CoupleGame::Repeated { a, .. } => Some(a.to_f64()),
            CoupleGame::LinearTransfer { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            CoupleGame::ZeroSum { a } => {
                if !a.is_finite() {
                    return contract("non-finite payoff entry");
                }
            }
            CoupleGame::StrictlyCompetitive { a, b } => {
                if a.shape() != b.shape() {
                    return contract("A and B must have the same shape");
                }
                if !a.is_finite() || !b.is_finite() {
                    return contract("non-finite payoff entry");
                }
                if crate::competitive::affine_view(a, b).is_none() {
                    return contract("couple game is not strictly competitive");
                }
            }
            CoupleGame::Repeated { a, b } => {
                if a.shape() != b.shape() {
                    return contract("A and B must have the same shape");
                }
            }
            CoupleGame::LinearTransfer { a, b } => {
                if !a.is_finite() || !b.is_finite() {
                    return contract("non-finite base utility");
                }
            }
        }
        Ok(())
    }

    /// Payoff pair `(u, v)` of an assignment.
    pub fn evaluate(&self, assignment: &StrategyAssignment) -> Result<(f64, f64)> {
        match (self, assignment) {
            (CoupleGame::ZeroSum { a }, StrategyAssignment::Mixed { x, y }) => {
                check_dims(a.shape(), x, y)?;
                let z = a.bilinear(x.weights(), y.weights());
                Ok((z, -z))
            }
            (CoupleGame::StrictlyCompetitive { a, b }, StrategyAssignment::Mixed { x, y }) => {
                check_dims(a.shape(), x, y)?;
                Ok((
                    a.bilinear(x.weights(), y.weights()),
                    b.bilinear(x.weights(), y.weights()),
                ))
            }
            (CoupleGame::Repeated { a, b }, StrategyAssignment::Repeated(sigma)) => {
                sigma.check_against(a, b)?;
                Ok((
                    rational::to_f64(&sigma.limit_payoff.0),
                    rational::to_f64(&sigma.limit_payoff.1),
                ))
            }
            (CoupleGame::LinearTransfer { a, b }, StrategyAssignment::Transfer { x, y }) => {
                if !(*x >= 0.0 && *y >= 0.0 && x.is_finite() && y.is_finite()) {
                    return contract("transfers must be finite and nonnegative");
                }
                Ok((a - x + y, b + x - y))
            }
            _ => contract(format!(
                "assignment variant does not match a {} couple",
                self.class().name()
            )),
        }
    }
}

fn check_dims(shape: (usize, usize), x: &MixedStrategy, y: &MixedStrategy) -> Result<()> {
    if (x.len(), y.len()) != shape {
        return contract(format!(
            "strategy sizes ({}, {}) do not match game shape {shape:?}",
            x.len(),
            y.len()
        ));
    }
    Ok(())
}

/// Strategies a matched couple plays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyAssignment {
    Mixed { x: MixedStrategy, y: MixedStrategy },
    Transfer { x: f64, y: f64 },
    Repeated(RepeatedStrategy),
}

/// The whole market.
///
/// `games` is indexed row-major by `(man, woman)`. All couples share one
/// [`GameClass`], and every man (woman) has the same number of actions
/// against every partner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchingGame {
    men: usize,
    women: usize,
    games: Vec<CoupleGame>,
    irp_men: Vec<f64>,
    irp_women: Vec<f64>,
    epsilon: f64,
}

impl MatchingGame {
    pub fn new(
        men: usize,
        women: usize,
        games: Vec<CoupleGame>,
        irp_men: Vec<f64>,
        irp_women: Vec<f64>,
        epsilon: f64,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return contract("epsilon must be a positive finite number");
        }
        if games.len() != men * women {
            return contract(format!(
                "expected {} couple games, got {}",
                men * women,
                games.len()
            ));
        }
        if irp_men.len() != men || irp_women.len() != women {
            return contract("one IRP per agent is required");
        }
        if irp_men.iter().chain(&irp_women).any(|v| !v.is_finite()) {
            return contract("IRPs must be finite");
        }
        if let Some(first) = games.first() {
            let class = first.class();
            for (k, g) in games.iter().enumerate() {
                if g.class() != class {
                    return contract(format!(
                        "couple ({}, {}) is {} but the market is {}",
                        k / women,
                        k % women,
                        g.class().name(),
                        class.name()
                    ));
                }
                g.validate()?;
            }
            if class != GameClass::LinearTransfer {
                for i in 0..men {
                    for j in 0..women {
                        let (s, t) = games[i * women + j].shape().expect("bi-matrix");
                        let (s0, _) = games[i * women].shape().expect("bi-matrix");
                        let (_, t0) = games[j].shape().expect("bi-matrix");
                        if s != s0 || t != t0 {
                            return contract(format!(
                                "couple ({i}, {j}) has shape ({s}, {t}); expected ({s0}, {t0})"
                            ));
                        }
                    }
                }
            }
        }
        Ok(MatchingGame {
            men,
            women,
            games,
            irp_men,
            irp_women,
            epsilon,
        })
    }

    pub fn men(&self) -> usize {
        self.men
    }

    pub fn women(&self) -> usize {
        self.women
    }

    pub fn game(&self, i: usize, j: usize) -> &CoupleGame {
        &self.games[i * self.women + j]
    }

    pub fn games(&self) -> &[CoupleGame] {
        &self.games
    }

    pub fn irp_man(&self, i: usize) -> f64 {
        self.irp_men[i]
    }

    pub fn irp_woman(&self, j: usize) -> f64 {
        self.irp_women[j]
    }

    pub fn irp_men(&self) -> &[f64] {
        &self.irp_men
    }

    pub fn irp_women(&self) -> &[f64] {
        &self.irp_women
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Same market with a different ε.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        MatchingGame::new(
            self.men,
            self.women,
            self.games.clone(),
            self.irp_men.clone(),
            self.irp_women.clone(),
            epsilon,
        )
    }

    /// `None` for a market without couples.
    pub fn class(&self) -> Option<GameClass> {
        self.games.first().map(CoupleGame::class)
    }
}

/// A matching plus the strategies of every matched couple.
///
/// Men index the arrays; a man without a partner is matched to the empty
/// woman and receives his IRP, and likewise for women.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchingProfile {
    partner: Vec<Option<usize>>,
    assignments: Vec<Option<StrategyAssignment>>,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl MatchingProfile {
    /// Everyone single.
    pub fn single(g: &MatchingGame) -> Self {
        MatchingProfile {
            partner: vec![None; g.men()],
            assignments: vec![None; g.men()],
            u: g.irp_men().to_vec(),
            v: g.irp_women().to_vec(),
        }
    }

    /// Builds a profile from `(man, woman, assignment)` triples.
    pub fn from_couples(
        g: &MatchingGame,
        couples: impl IntoIterator<Item = (usize, usize, StrategyAssignment)>,
    ) -> Result<Self> {
        let mut p = MatchingProfile::single(g);
        let mut taken = vec![false; g.women()];
        for (i, j, a) in couples {
            if i >= g.men() || j >= g.women() {
                return contract(format!("couple ({i}, {j}) out of range"));
            }
            if p.partner[i].is_some() || taken[j] {
                return contract(format!("agent of couple ({i}, {j}) matched twice"));
            }
            taken[j] = true;
            p.set_couple(g, i, j, a)?;
        }
        Ok(p)
    }

    /// Matches `i` with `j` (both must be free or already together).
    pub(crate) fn set_couple(
        &mut self,
        g: &MatchingGame,
        i: usize,
        j: usize,
        a: StrategyAssignment,
    ) -> Result<()> {
        let (u, v) = g.game(i, j).evaluate(&a)?;
        self.partner[i] = Some(j);
        self.assignments[i] = Some(a);
        self.u[i] = u;
        self.v[j] = v;
        Ok(())
    }

    /// Sends `i` and his partner back to their empty players.
    pub(crate) fn dissolve(&mut self, g: &MatchingGame, i: usize) {
        if let Some(j) = self.partner[i].take() {
            self.v[j] = g.irp_woman(j);
        }
        self.assignments[i] = None;
        self.u[i] = g.irp_man(i);
    }

    pub fn partner_of_man(&self, i: usize) -> Option<usize> {
        self.partner[i]
    }

    pub fn partner_of_woman(&self, j: usize) -> Option<usize> {
        self.partner.iter().position(|p| *p == Some(j))
    }

    pub fn partners(&self) -> &[Option<usize>] {
        &self.partner
    }

    pub fn assignment(&self, i: usize) -> Option<&StrategyAssignment> {
        self.assignments[i].as_ref()
    }

    /// Matched couples in ascending man order.
    pub fn couples(&self) -> impl Iterator<Item = (usize, usize, &StrategyAssignment)> + '_ {
        self.partner.iter().enumerate().filter_map(|(i, p)| {
            p.map(|j| (i, j, self.assignments[i].as_ref().expect("matched")))
        })
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Checks structure and that cached payoffs match recomputation.
    pub fn validate(&self, g: &MatchingGame) -> Result<()> {
        if self.partner.len() != g.men()
            || self.assignments.len() != g.men()
            || self.u.len() != g.men()
            || self.v.len() != g.women()
        {
            return contract("profile size does not match the market");
        }
        let mut seen = vec![false; g.women()];
        for (i, p) in self.partner.iter().enumerate() {
            match (p, &self.assignments[i]) {
                (Some(j), Some(_)) => {
                    if *j >= g.women() || std::mem::replace(&mut seen[*j], true) {
                        return contract(format!("woman {j} matched twice or out of range"));
                    }
                }
                (None, None) => {}
                _ => return contract(format!("man {i}: partner and assignment disagree")),
            }
        }
        let (u, v) = profile_payoffs(g, self)?;
        for (k, (a, b)) in u.iter().zip(&self.u).chain(v.iter().zip(&self.v)).enumerate() {
            if (a - b).abs() > PAYOFF_TOL {
                return contract(format!("cached payoff {k} is {b}, recomputed {a}"));
            }
        }
        Ok(())
    }
}

/// Recomputes every agent's payoff from the assignments.
pub fn profile_payoffs(g: &MatchingGame, p: &MatchingProfile) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut u = g.irp_men().to_vec();
    let mut v = g.irp_women().to_vec();
    for (i, j, a) in p.couples() {
        let (ui, vj) = g.game(i, j).evaluate(a)?;
        u[i] = ui;
        v[j] = vj;
    }
    Ok((u, v))
}

/// Outside options of a couple: the best payoff each partner could secure
/// elsewhere while the new partner gains more than ε, floored at the IRP.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutsideOptions {
    pub u_eps: f64,
    pub v_eps: f64,
}

impl OutsideOptions {
    /// Options raised so that the ε-relaxed floors `u_eps − ε` and
    /// `v_eps − ε` never fall below the IRPs.
    pub fn participation(self, irp_man: f64, irp_woman: f64, eps: f64) -> OutsideOptions {
        OutsideOptions {
            u_eps: self.u_eps.max(irp_man + eps),
            v_eps: self.v_eps.max(irp_woman + eps),
        }
    }
}

/// Serde adapter for rational matrices using the encoding of [`crate::rational`].
pub mod rational_matrix {
    use super::Matrix;
    use crate::rational::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "crate::rational::vec")] Vec<Rational>);

    pub fn serialize<S: Serializer>(m: &Matrix<Rational>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.to_rows().into_iter().map(Row))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix<Rational>, D::Error> {
        let rows: Vec<Row> = Vec::deserialize(d)?;
        Matrix::from_rows(rows.into_iter().map(|r| r.0).collect())
            .map_err(serde::de::Error::custom)
    }
}
