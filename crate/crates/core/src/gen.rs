//! Seeded instance and profile generators.
//!
//! Output depends only on the arguments and [`GENERATOR_VERSION`]; any
//! change to the drawing sequence must bump the version.

use crate::error::{contract, Result};
use crate::model::{
    CoupleGame, GameClass, MatchingGame, MatchingProfile, Matrix, MixedStrategy, StrategyAssignment,
};
use crate::rational::{self, Rational};
use crate::repeated::RepeatedStrategy;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const GENERATOR_VERSION: &str = "matchgame-gen/1";

/// Parameters of a random market.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub class: GameClass,
    pub men: usize,
    pub women: usize,
    /// Pure actions per agent; ignored for transfer markets.
    pub actions: usize,
    /// Inclusive range of integer payoff entries.
    pub entry_range: (i64, i64),
    pub epsilon: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(class: GameClass, men: usize, women: usize, actions: usize, seed: u64) -> Self {
        GenSpec {
            class,
            men,
            women,
            actions,
            entry_range: (-10, 10),
            epsilon: 1.0,
            seed,
        }
    }
}

/// Member `seed` of the standard seeded suite: sizes cycle through 1 to 5
/// men, 1 to 5 women and 1 to 4 actions, entries in `[−10, 10]`.
pub fn suite_spec(class: GameClass, seed: u64, epsilon: f64) -> GenSpec {
    let mut s = GenSpec::new(
        class,
        1 + (seed % 5) as usize,
        1 + ((seed / 5) % 5) as usize,
        1 + ((seed / 2) % 4) as usize,
        seed,
    );
    s.epsilon = epsilon;
    s
}

/// A random market.
///
/// Entries are uniform integers in `entry_range`. Strictly competitive
/// couples draw `A` that way and set the woman's matrix to `−(λA + μ)` with
/// `λ ∈ {1, 2}` and an integer `μ` in half the range, so her entries may
/// leave the range. IRPs are uniform integers between half the lower end
/// (or 0) and 0.
pub fn generate(spec: &GenSpec) -> Result<MatchingGame> {
    let (lo, hi) = spec.entry_range;
    if lo > hi {
        return contract("empty entry range");
    }
    if spec.class != GameClass::LinearTransfer && spec.actions == 0 {
        return contract("at least one action per agent is required");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.actions;
    let entry = |rng: &mut ChaCha8Rng| rng.gen_range(lo..=hi);
    let mut games = Vec::with_capacity(spec.men * spec.women);
    for _ in 0..spec.men * spec.women {
        let g = match spec.class {
            GameClass::ZeroSum => CoupleGame::ZeroSum {
                a: Matrix::from_fn(n, n, |_, _| entry(&mut rng) as f64),
            },
            GameClass::StrictlyCompetitive => {
                let a = Matrix::from_fn(n, n, |_, _| entry(&mut rng) as f64);
                let lambda = rng.gen_range(1..=2) as f64;
                let mu = rng.gen_range(lo / 2..=hi / 2) as f64;
                let b = a.map(|v| -(lambda * v + mu));
                CoupleGame::StrictlyCompetitive { a, b }
            }
            GameClass::Repeated => {
                let a = Matrix::from_fn(n, n, |_, _| rational::int(entry(&mut rng)));
                let b = Matrix::from_fn(n, n, |_, _| rational::int(entry(&mut rng)));
                CoupleGame::Repeated { a, b }
            }
            GameClass::LinearTransfer => CoupleGame::LinearTransfer {
                a: entry(&mut rng) as f64,
                b: entry(&mut rng) as f64,
            },
        };
        games.push(g);
    }
    let irp_lo = lo.min(0) / 2;
    let irp_men = (0..spec.men).map(|_| rng.gen_range(irp_lo..=0) as f64).collect();
    let irp_women = (0..spec.women).map(|_| rng.gen_range(irp_lo..=0) as f64).collect();
    MatchingGame::new(spec.men, spec.women, games, irp_men, irp_women, spec.epsilon)
}

fn random_mixed(rng: &mut ChaCha8Rng, n: usize) -> MixedStrategy {
    if rng.gen_bool(0.3) {
        return MixedStrategy::pure(n, rng.gen_range(0..n));
    }
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=4) as f64).collect();
    let total: f64 = w.iter().sum();
    if total == 0.0 {
        return MixedStrategy::uniform(n);
    }
    MixedStrategy::from_solver(w.iter().map(|x| x / total).collect()).expect("normalized weights")
}

/// A random, usually unstable, profile of `g`: each man is matched with
/// probability 0.7 to a distinct random woman and plays random strategies.
pub fn random_profile(g: &MatchingGame, seed: u64) -> Result<MatchingProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut women: Vec<usize> = (0..g.women()).collect();
    women.shuffle(&mut rng);
    let mut couples = Vec::new();
    for i in 0..g.men() {
        if women.is_empty() || !rng.gen_bool(0.7) {
            continue;
        }
        let j = women.pop().expect("non-empty");
        let a = match g.game(i, j) {
            CoupleGame::ZeroSum { a } | CoupleGame::StrictlyCompetitive { a, .. } => StrategyAssignment::Mixed {
                x: random_mixed(&mut rng, a.rows()),
                y: random_mixed(&mut rng, a.cols()),
            },
            CoupleGame::Repeated { a, b } => {
                let runs = (0..rng.gen_range(1..=3))
                    .map(|_| (rng.gen_range(0..a.rows()), rng.gen_range(0..a.cols()), rng.gen_range(1..=4)))
                    .collect();
                StrategyAssignment::Repeated(RepeatedStrategy::from_schedule(a, b, runs)?)
            }
            CoupleGame::LinearTransfer { .. } => StrategyAssignment::Transfer {
                x: rng.gen_range(0..=20) as f64 / 2.0,
                y: rng.gen_range(0..=20) as f64 / 2.0,
            },
        };
        couples.push((i, j, a));
    }
    MatchingProfile::from_couples(g, couples)
}

/// Exact rational copy of a float matrix with dyadic entries.
pub fn exact_matrix(m: &Matrix) -> Option<Matrix<Rational>> {
    let rows: Option<Vec<Vec<Rational>>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(rational::from_f64_exact).collect())
        .collect();
    Matrix::from_rows(rows?).ok()
}
