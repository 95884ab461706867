//! Exact census of elliptic curves over **Q** with Galois-stable cyclic
//! subgroups of order 4.
//!
//! Every curve `E/Q` has a unique minimal model `y^2 = x^3 + Ax + B` with
//! integer coefficients, and its height is `max{|4A^3|, 27B^2}`. Such a curve
//! carries zero, one, or two *pairs* of Galois-stable cyclic subgroups of
//! order 4 (the kernels of rational 4-isogenies; the two subgroups of a pair
//! meet in a common 2-torsion point). This crate provides:
//!
//! * [`curves`] — the classification procedure deciding how many pairs a
//!   given `(A, B)` has, and the three-parameter integer family `(r, v, w)`
//!   that hits every two-pair curve exactly once;
//! * [`census`] — exact counters for `N1(X)` and `N2(X)`, the number of
//!   curves of height at most `X` with at least one (resp. two) pairs,
//!   with independent naive/full-scan oracles for cross-validation;
//! * [`constants`] — numerical evaluation of the constants in the asymptotic
//!   expansions `N1(X) ~ c11 X^(1/3) + c12 X^(1/6)` and
//!   `N2(X) ~ c21 X^(1/6)`, with explicit error bounds;
//! * [`arithmetic`] — the exact integer primitives underneath: Möbius and
//!   smallest-prime-factor sieves, squarefree counting, integer roots.
//!
//! All census paths use exact integer arithmetic only; floating point is
//! confined to the constants module and diagnostic output.

#![allow(clippy::manual_is_multiple_of)]

pub mod arithmetic;
pub mod census;
pub mod constants;
pub mod curves;

mod complex;

pub use arithmetic::{HeightBound, SieveTables};
pub use census::{CensusResult, CountMethod, ScanTallies};
pub use complex::Complex;
pub use constants::ConstantsReport;
pub use curves::{CaseTag, MinimalCurve, PairClassification, TwoPairTriple};

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("sieve limit must be at least 1")]
    ZeroSieveLimit,
    #[error("sieve limit {0} is too large for in-memory tables")]
    SieveLimitTooLarge(u64),
    #[error("root degree must be at least 1")]
    ZeroRootDegree,
    #[error("height bound must be at least 1")]
    ZeroHeightBound,
    #[error("{0}")]
    BadHeightSpec(String),
    #[error("curve is singular: 4A^3 + 27B^2 = 0")]
    SingularCurve,
    #[error("curve is not minimal: {0}^4 divides A and {0}^6 divides B")]
    NonMinimalCurve(u64),
    #[error("invalid (r, v, w) triple: {0}")]
    InvalidTriple(String),
    #[error("rho values must be pairwise distinct")]
    RepeatedRoots,
    #[error("height bound exceeds the guard {guard} for method `{method}`")]
    GuardExceeded { method: &'static str, guard: String },
    #[error("quadrature did not converge: requested {requested:e}, achieved {achieved:e}")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },
    #[error("tolerance must be positive and finite")]
    BadTolerance,
}

pub type Result<T> = std::result::Result<T, Error>;
