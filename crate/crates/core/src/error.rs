use thiserror::Error;

/// Failures surfaced by the solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input violates a documented precondition (shape, simplex, variant mismatch, ...).
    #[error("contract violation: {0}")]
    Contract(String),
    /// The requested level lies below every entry of the matrix.
    #[error("level {0} is below the smallest achievable value")]
    LevelInfeasible(f64),
    /// Outside options leave no profile the couple can both accept.
    #[error("no feasible agreement for the given outside options")]
    NoFeasibleAgreement,
    /// A repeated-game target is not in the convex hull of stage payoffs.
    #[error("payoff outside the feasible set")]
    PayoffOutsideHull,
    /// The cyclic schedule would need more than `u64::MAX` stages.
    #[error("schedule length does not fit in 64 bits")]
    ScheduleTooLong,
    /// Strategy modification did not reach a fixed point within its sweep bound.
    #[error("no fixed point after {sweeps} sweeps (bound {bound})")]
    NonConvergence {
        sweeps: usize,
        bound: usize,
        trace: Box<crate::engine::EngineTrace>,
    },
    /// Floating-point pivoting failed to terminate.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
