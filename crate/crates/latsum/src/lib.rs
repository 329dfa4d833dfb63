//! Exact lattice-point counting and polynomial integer optimization over
//! rational polytopes.
//!
//! The pipeline: enumerate the vertices of `P = {x : A x <= b}`, take the
//! tangent cone at each vertex, polarize, triangulate, decompose into
//! signed unimodular cones, and dualize back.  Each unimodular piece
//! contributes one simple rational term to the generating function
//! `g(P; z) = sum_{alpha in P cap Z^d} z^alpha`, whose specialization at
//! `z = 1` counts the points exactly, no matter how many there are.
//! Applying differential operators before the specialization turns counts
//! into weighted sums `sum h(alpha)`, and power sums `sum f^k(alpha)`
//! sandwich the maximum of `f`, which yields an approximation scheme with
//! a proven `(1 - epsilon)` guarantee and exact arithmetic throughout.
//!
//! ```
//! use latsum::arith::rat;
//! use latsum::polyhedra::Polytope;
//! use latsum::genfun::SparsePolynomial;
//!
//! let p = Polytope::interval(rat(0), rat(4));
//! let count = latsum::evaluate::count(&p).unwrap();
//! assert_eq!(count, 5.into());
//!
//! let x_squared = SparsePolynomial::monomial(1, rat(1), vec![2]);
//! let sum = latsum::evaluate::weighted_sum(&p, &x_squared).unwrap();
//! assert_eq!(sum, rat(30));
//! ```

pub mod arith;
pub mod cones;
pub mod error;
pub mod evaluate;
pub mod genfun;
pub mod optimize;
pub mod oracle;
pub mod polyhedra;

mod lattice;
mod linalg;

pub use error::{Error, Result};
