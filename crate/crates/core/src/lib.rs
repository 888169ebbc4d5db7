//! Spectral-geometry toolkit for universal eigenvalue inequalities.
//!
//! The crate builds discrete Laplace-Beltrami and Schrodinger operators on
//! immersed triangle meshes, the Kohn sublaplacian on Heisenberg-group box
//! grids, and exact model spectra (spheres, flat tori), then evaluates and
//! reports universal eigenvalue inequalities on them: gap-quadratic
//! (Yang-type) bounds with curvature moments, two-sided root brackets,
//! Reilly-type bounds, eigenmap inequalities and their Kohn-Laplacian
//! counterparts. The sphere saturation identity is certified in exact
//! rational arithmetic.
//!
//! Entry points:
//! - [`exact`]: exact model spectra and the saturation identity
//! - [`inequality`]: inequality margins, brackets, and reports
//! - [`mesh`]: immersed triangle meshes, operator assembly, curvature
//! - [`solver`]: sparse symmetric eigensolver and the commutator lemma check
//! - [`heisenberg`]: Kohn sublaplacian on box grids
//! - [`scenario`]: reproducible batch runs behind the `eigenineq` CLI

pub mod error;
pub mod exact;
pub mod heisenberg;
pub mod inequality;
pub mod mesh;
pub mod scenario;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};
