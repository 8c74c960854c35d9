//! Desk-scale construction and verification of a Swiss cheese with
//! quasianalytic behaviour on the interval `I = [-1/2, 1/2]`.
//!
//! The kit runs the staged inductive deletion schedule over exact rational
//! arithmetic, certifies every geometric and combinatorial side condition
//! (capsule avoidance, radius budgets, disjointness, bound-table freezing,
//! block divergence certificates), and offers numerical probes: certified
//! Cauchy derivative bounds, point-of-continuity certificates, and a
//! Jensen-measure LP search over discrete supports.

pub mod bounds;
pub mod bracket;
pub mod certificates;
pub mod geometry;
pub mod io;
pub mod jensen;
pub mod mckissick;
pub mod num;
pub mod poly;
pub mod report;
pub mod schedule;
pub mod simplex;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("pole at evaluation point")]
    PoleAtPoint,
    #[error("denominator modulus below the proximity threshold")]
    PoleProximity,
    #[error("grid point touches the deleted union: {0}")]
    GridTouchesUnion(String),
    #[error("invalid bound query: {0}")]
    InvalidQuery(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("no certificate within budget: {0}")]
    NoCertificate(String),
    #[error("pole on measure support: {0}")]
    PoleOnSupport(String),
    #[error("infeasible grid: {0}")]
    InfeasibleGrid(String),
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
