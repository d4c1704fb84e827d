//! Adaptive lowest-order virtual element solver for the Steklov eigenvalue
//! problem
//!
//! ```text
//!   -Δw = 0 in Ω,   ∂w/∂n = λ w on Γ0,   ∂w/∂n = 0 on Γ1
//! ```
//!
//! on general polygonal meshes, with a residual a posteriori error estimator
//! and the refinement loop built on it.
//!
//! The pipeline for one adaptive step is
//! [`vem::assemble`] → [`eigen::solve_smallest_positive`] →
//! [`estimator::estimate`] → [`adapt::mark`] → [`adapt::refine_vem`] (or the
//! triangle refiners in [`adapt`]). [`experiment`] wires these into the
//! sloshing and notched-square convergence studies.

pub mod adapt;
pub mod eigen;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod mesh;
pub mod quadrature;
pub mod sparse;
pub mod vem;

pub use error::{Error, Result};
pub use mesh::{BoundaryTag, Point2, PolygonalMesh};
