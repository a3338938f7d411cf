//! Desk-scale caps. All hard limits that guard runtimes live here.

/// Maximum points in a dense ball lattice.
pub const DENSE_LATTICE_CAP: usize = 60_000_000;

/// Maximum points emitted by a graded witness mesh.
pub const GRADED_MESH_CAP: usize = 50_000_000;

/// Cap on boxes in the square-function partition.
pub const TAU_CAP: usize = 1 << 16;

/// Full-ball norms are limited to ambient dimension d + n <= 6.
pub const MAX_AMBIENT_DIM: usize = 6;

/// Model-mass fraction below which a mesh subtree is skipped.
pub const PRUNE_FRACTION: f64 = 1e-8;

/// Refinement movement (relative) above which a norm estimate is flagged.
pub const QUADRATURE_FLAG_TOL: f64 = 0.01;
