//! Plane-curve representations, robust line-curve intersection, arc length
//! and polar curvature.

mod curve;
mod interp;
mod piecewise;
mod primitives;
mod radial;

pub use curve::{arc_length, line_curve_intersections, ConvexCurve, CurveRepr, Intersection};
pub use interp::{PeriodicCubic, TrigInterp};
pub use piecewise::{Piece, PiecewiseCurve};
pub use primitives::{
    angle_between, ccw_angle, cross, normalize_angle, rot90, rotate, tangent_lines_from_point,
    unit, Circle, Line, Point, TangentContact, TangentPair, Vector, TAU,
};
pub use radial::{constant_radial, curvature_polar, RadialCurve, RadialFn};
