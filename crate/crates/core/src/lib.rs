//! Numerical laboratory for chord-constancy properties of convex plane
//! bodies: the tangent-chord boundary map with its invariant measure and
//! rotation number, constancy profiles over tangent chords (product, length,
//! reciprocal sum, subtended angle), trigonometric chord-length solvers, a
//! derivative-free search for interior circles with constant profiles, and
//! desk-scale 3D verifiers for the corresponding sphere and ellipsoid
//! statements.

pub mod bodies2d;
pub mod circle_search;
pub mod error;
pub mod fit;
pub mod geometry2d;
pub(crate) mod numerics;
pub mod par;
pub mod property_lab;
pub mod space3d;
pub mod tangent_dynamics;

pub use error::{Error, Result};
