//! Geometric symmetric chain decompositions of rational polytopes.
//!
//! A decomposition is a collection of *snakes*: sequences of *swipes* that
//! shear a starting *turning set* through axis directions until it lands on
//! an ending turning set. Restricting the swept chains to the points of
//! denominator `n` inside the polytope yields symmetric chain decompositions
//! of the finite posets `P(n)`, which this crate produces and verifies with
//! exact rational arithmetic throughout.

pub mod catalog;
pub mod conditions;
pub mod construct;
pub mod discretize;
pub mod exact;
pub mod io;
pub mod oracle;
pub mod polytope;
pub mod poset;
pub mod render;
pub mod snake;
pub mod volume;

pub use exact::{rat, ratio, Hyperplane, PartialSimplex, Point, Rat, Simplex};
pub use polytope::{LatticePoint, Polytope};
pub use poset::{ChainDecomposition, ChainKind, DiscreteChain, RankProfile, VerificationReport};
pub use snake::{GeoDecomposition, Mode, Snake, SnakeKind, Swipe, ValidationReport};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("hyperplane coefficients must not all be zero")]
    ZeroHyperplane,
    #[error("simplex vertices are affinely dependent")]
    DegenerateSimplex,
    #[error("invalid partial simplex: {0}")]
    InvalidPartialSimplex(String),
    #[error("invalid swipe: {0}")]
    InvalidSwipe(String),
    #[error("invalid snake: {0}")]
    InvalidSnake(String),
    #[error("empty chain")]
    EmptyChain,
    #[error("empty polytope")]
    EmptyPolytope,
    #[error("certificate does not contain turning set (vertex {vertex} off hyperplane)")]
    CertificateMismatch { vertex: usize },
    #[error("point belongs to two distinct snakes ({0} and {1})")]
    AmbiguousMembership(usize, usize),
    #[error("point not covered by any snake: {0}")]
    NotCovered(String),
    #[error("walk step {0} is not a multiple of 1/{1}")]
    NonIntegralStep(String, u64),
    #[error("breakpoint denominator {denom} does not divide {bound}")]
    BreakpointDenominator { denom: u64, bound: u64 },
    #[error("strong hyperplane condition fails at turning set {0}")]
    StrongConditionFailed(usize),
    #[error("mixed snake kinds: cannot take the product of open and closed chain families")]
    MixedKinds,
    #[error("non-injective projection: direction lies in the affine span")]
    NonInjectiveProjection,
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
