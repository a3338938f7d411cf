//! Numerical side of the analyzer: evaluation of the extension operator
//! E^Q f(x) = ∫ e(x · (ξ, Q(ξ))) f(ξ) dξ over [0,1]^d, local L^q norms on
//! balls, witness ratio estimators for the linear and bilinear local
//! restriction constants, scaling-law fits, the square-function sharpness
//! integral, tube locally-constant checks, and the significant-set
//! diagnostic.
//!
//! Everything is deterministic: meshes and samples are explicit, randomized
//! pieces are seeded, and parallel reductions preserve order, so outputs are
//! byte-identical across thread counts.

pub mod budget;
pub mod error;
pub mod eval;
pub mod fresnel;
pub mod grid;
pub mod mesh;
pub mod norms;
pub mod ratios;
pub mod scaling;
pub mod sharpness;
pub mod significant;

pub use error::NumericsError;
pub use eval::{BoxRegion, QTupleF};
pub use grid::GridFunction;
