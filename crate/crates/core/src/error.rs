use thiserror::Error;

/// Errors raised by the exact algebra and the dynamics built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Coefficient or coordinate growth exceeded the configured bit budget.
    #[error("bit budget of {budget} exceeded (reached degree {partial_degree})")]
    BudgetExceeded { budget: u64, partial_degree: u32 },

    /// An orbit point would exceed the configured bit budget.
    #[error("bit budget of {budget} exceeded after {iterates} orbit steps")]
    OrbitBudgetExceeded { budget: u64, iterates: usize },

    /// The input is degenerate for the requested operation (zero map, constant map, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A coefficient denominator is divisible by the chosen prime.
    #[error("prime {p} divides a coefficient denominator")]
    BadPrime { p: u64 },

    /// The map fails the Jacobian test and is not dominant.
    #[error("map is not dominant (Jacobian determinant vanishes identically)")]
    NotDominant,

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Independent primes kept disagreeing on a value that should be prime-independent.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// Randomized trials never agreed twice.
    #[error("topological degree undetermined; observed counts {observed:?}")]
    Undetermined { observed: Vec<usize> },

    /// The fiber over the requested point contains a curve.
    #[error("fiber is not finite")]
    NonFiniteFiber,

    /// The growth exponent is only defined when the first dynamical degree exceeds one.
    #[error("growth exponent undefined: first dynamical degree is 1")]
    GrowthExponentUndefined,

    #[error("growth type undetermined: {0}")]
    GrowthUndetermined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
