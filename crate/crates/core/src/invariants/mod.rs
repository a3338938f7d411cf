//! Structural invariants of quadratic-form tuples: matrix-pencil minimal
//! rank, the d-invariants (minimal variable counts under rank-constrained
//! changes of variables), the codimension-2 nondegeneracy check, the 2x2
//! canonical classification, and Hurwitz-Radon numbers.

mod classify;
mod cm;
mod dinv;
mod hurwitz;
mod pencil;

pub use classify::{classify_2x2, Canonical2x2, CanonicalClass2x2, CLASSIFY_RESIDUAL_TOL};
pub use cm::{cm_check_3_2, cm_integral_probe, d22_decision_3x2, CmMethod, CmVerdict, Dim22Decision};
pub use dinv::{d_invariant, DInvariantResult, SearchBudget};
pub use hurwitz::hurwitz_radon;
pub use pencil::{min_rank_pencil, PencilResult};

pub(crate) use pencil::combinations;
