//! Exact symbolic layer for tuples of real quadratic forms Q = (Q_1,...,Q_n) on R^d.
//!
//! Everything in this crate is exact rational arithmetic: surface parsing and
//! linear-change-of-variables algebra, the minimal-variable-count invariants,
//! matrix-pencil minimal rank with certified real root isolation, the symbolic
//! Jacobian engine with monomial-comparability verdicts, and the predicted
//! exponent ranges with the box-testing sharpness optimizer. Floating point
//! appears only where square roots are unavoidable (the constructive 2x2
//! classification transforms) and in heuristic integral probes.

pub mod error;
pub mod exponents;
pub mod invariants;
pub mod jacobian;
pub mod matrix;
pub mod poly;
pub mod quadform;
pub mod rational;
pub mod unipoly;

pub use error::CoreError;
pub use quadform::{QuadTuple, SurfaceSpec, SymMatrix};
pub use rational::Rat;
