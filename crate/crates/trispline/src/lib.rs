//! C1-smooth spline surfaces over 2D triangular meshes from first-order
//! Hermite data (values and gradients at the vertices).
//!
//! The construction is local: on each triangle a basic Hermite interpolant
//! `F0` built from a pair of shape curves `(Ψ0, Ψ1)` is corrected by a term
//! `H` built from trivariate modifiers `(χ0, χ1)`, giving a patch
//! `F = F0 − H` whose transversal derivative along each edge depends only on
//! that edge's data (reduced side derivatives). Gluing patches that share
//! per-edge transversal vectors yields a globally C1 surface.
//!
//! Modules:
//! - [`geometry`]: triangles, barycentric weights and their derivative
//!   functionals, transversal vectors;
//! - [`shape`]: shape curves, modifiers, RSD tuples and their constructors;
//! - [`rsd`]: the local patch evaluator with analytic gradients;
//! - [`validate`]: numerical verifiers for admissibility, the RSD
//!   edge-derivative conditions, range shift and affinity invariance;
//! - [`mesh`]: conforming meshes, global spline assembly, point location and
//!   C1 conformance scans.

pub mod geometry;
pub mod mesh;
pub mod rsd;
pub mod shape;
pub mod validate;

pub use geometry::{Barycentric, Covector2, Point2, Triangle, Vector2};
pub use shape::{Curve, Modifier, RsdTuple};
