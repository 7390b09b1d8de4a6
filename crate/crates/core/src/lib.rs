//! Stable allocations in two-sided matching markets where every couple
//! plays a strategic game.
//!
//! A market ([`model::MatchingGame`]) pairs men with women; a matched couple
//! plays one of four game classes (zero-sum, strictly competitive,
//! infinitely repeated, or linear transfers). [`engine::propose_dispose`]
//! finds an ε-externally stable profile: no unmatched pair could both gain
//! more than ε. [`engine::stabilize`] then moves every couple to a
//! constrained Nash equilibrium given its outside options, which makes the
//! profile ε-internally stable as well. [`verify`] rechecks both properties
//! without going through the solvers.
//!
//! ```
//! use matchgame::engine::solve;
//! use matchgame::model::{CoupleGame, MatchingGame, Matrix};
//!
//! let a = Matrix::from_rows(vec![vec![3.0, -1.0], vec![-2.0, 1.0]]).unwrap();
//! let g = MatchingGame::new(1, 1, vec![CoupleGame::ZeroSum { a }], vec![-1.0], vec![-1.0], 0.25).unwrap();
//! let out = solve(&g, &[0], 0.25).unwrap();
//! assert!(out.report.is_green());
//! assert_eq!(out.profile.partner_of_man(0), Some(0));
//! ```

pub mod competitive;
pub mod engine;
pub mod error;
pub mod gen;
pub mod linprog;
pub mod model;
pub mod rational;
pub mod repeated;
pub mod transfers;
pub mod verify;
pub mod zerosum;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/stability.md")]
    mod stability {}
    #[doc = include_str!("../../../book/src/zero_sum.md")]
    mod zero_sum {}
    #[doc = include_str!("../../../book/src/strictly_competitive.md")]
    mod strictly_competitive {}
    #[doc = include_str!("../../../book/src/repeated.md")]
    mod repeated {}
    #[doc = include_str!("../../../book/src/transfers.md")]
    mod transfers {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
