//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The polyhedron is feasible but has a nontrivial recession cone.
    #[error("polyhedron is unbounded")]
    Unbounded,

    /// An operation that needs at least one lattice point got none.
    #[error("polytope contains no lattice points")]
    EmptyPolytope,

    /// Brute-force enumeration would scan more box points than allowed.
    #[error("bounding box volume exceeds enumeration cap of {cap}")]
    CapExceeded { cap: u64 },

    /// A polynomial power would exceed the configured unary-degree cap.
    #[error("total degree {degree} exceeds the degree cap of {cap}")]
    DegreeBudgetExceeded { degree: u64, cap: u64 },

    /// Inverting a series whose stored coefficients are all zero.
    #[error("cannot invert a zero series")]
    ZeroSeries,

    /// Cone rays do not span the ambient space.
    #[error("cone is not full-dimensional")]
    NotFullDimensional,

    /// Cone contains a line; triangulation requires a pointed cone.
    #[error("cone is not pointed")]
    NotPointed,

    /// A specialization direction hit a denominator vector orthogonally.
    #[error("direction is not generic for the generating function")]
    NonGenericDirection,

    /// The objective took a negative power sum; it must be non-negative
    /// on the lattice points of the polytope.
    #[error("objective is negative somewhere on the feasible lattice points")]
    NegativeObjective,

    /// Malformed input text.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
