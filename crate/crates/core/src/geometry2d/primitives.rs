//! Points, lines, circles and tangent-line construction.

use crate::error::{Error, Result};

pub type Point = nalgebra::Point2<f64>;
pub type Vector = nalgebra::Vector2<f64>;

pub const TAU: f64 = std::f64::consts::TAU;

/// Unit vector at angle `theta`.
#[inline]
pub fn unit(theta: f64) -> Vector {
    Vector::new(theta.cos(), theta.sin())
}

/// Counterclockwise quarter turn.
#[inline]
pub fn rot90(v: Vector) -> Vector {
    Vector::new(-v.y, v.x)
}

/// 2D cross product `a.x*b.y - a.y*b.x`.
#[inline]
pub fn cross(a: Vector, b: Vector) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Reduces an angle to `[0, 2π)`.
#[inline]
pub fn normalize_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Counterclockwise angle from `a` to `b`, in `[0, 2π)`.
pub fn ccw_angle(a: Vector, b: Vector) -> f64 {
    normalize_angle(cross(a, b).atan2(a.dot(&b)))
}

/// Unsigned angle between two vectors, in `[0, π]`.
pub fn angle_between(a: Vector, b: Vector) -> f64 {
    cross(a, b).abs().atan2(a.dot(&b))
}

/// Applies the rotation by `rot` to a vector.
#[inline]
pub fn rotate(v: Vector, rot: f64) -> Vector {
    let (s, c) = rot.sin_cos();
    Vector::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// An oriented line through `point` with unit `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub point: Point,
    pub direction: Vector,
}

impl Line {
    /// Builds a line, normalising the direction. Rejects zero directions.
    pub fn new(point: Point, direction: Vector) -> Result<Self> {
        let n = direction.norm();
        if n < 1e-300 {
            return Err(Error::Domain("line direction must be nonzero".into()));
        }
        Ok(Self {
            point,
            direction: direction / n,
        })
    }

    /// Line through two distinct points.
    pub fn through(a: Point, b: Point) -> Result<Self> {
        Self::new(a, b - a)
    }

    /// Signed distance of `p` from the line; positive on the left of the
    /// direction.
    #[inline]
    pub fn signed_distance(&self, p: Point) -> f64 {
        cross(self.direction, p - self.point)
    }

    /// Scalar coordinate of `p` along the direction.
    #[inline]
    pub fn projection(&self, p: Point) -> f64 {
        (p - self.point).dot(&self.direction)
    }

    /// Intersection with another line, if they are not parallel.
    pub fn intersect(&self, other: &Line) -> Option<Point> {
        let det = cross(self.direction, other.direction);
        if det.abs() < 1e-14 {
            return None;
        }
        let t = cross(other.point - self.point, other.direction) / det;
        Some(self.point + t * self.direction)
    }
}

/// A circle with positive radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!(
                "circle radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    /// Point on the circle at contact angle `phi`.
    #[inline]
    pub fn point_at(&self, phi: f64) -> Point {
        self.center + self.radius * unit(phi)
    }

    /// Power of the point: `|p - center|^2 - r^2`.
    #[inline]
    pub fn power(&self, p: Point) -> f64 {
        (p - self.center).norm_squared() - self.radius * self.radius
    }

    /// Length of a tangent segment from an exterior point.
    pub fn tangent_length(&self, p: Point) -> Result<f64> {
        let pw = self.power(p);
        if pw <= 0.0 {
            return Err(Error::Domain(
                "point is inside or on the circle; no tangent segment".into(),
            ));
        }
        Ok(pw.sqrt())
    }
}

/// One tangent line from an exterior point, with its contact point.
#[derive(Debug, Clone, Copy)]
pub struct TangentContact {
    pub line: Line,
    pub contact: Point,
}

/// The two tangent lines from an exterior point to a circle.
///
/// `left` is the contact whose directed ray from `x` keeps the circle centre
/// on its left; `right` keeps it on the right. Both tangent-segment lengths
/// equal `sqrt(|x - center|^2 - r^2)`.
#[derive(Debug, Clone, Copy)]
pub struct TangentPair {
    pub left: TangentContact,
    pub right: TangentContact,
    pub segment_length: f64,
}

pub fn tangent_lines_from_point(circle: &Circle, x: Point) -> Result<TangentPair> {
    let d = circle.center - x;
    let dist2 = d.norm_squared();
    let r = circle.radius;
    let l2 = dist2 - r * r;
    if l2 <= 0.0 {
        return Err(Error::Domain(
            "tangent lines require a point strictly outside the circle".into(),
        ));
    }
    let l = l2.sqrt();
    let along = l2 / dist2;
    let across = r * l / dist2;
    // The "-rot90" branch keeps the centre on the left of x -> contact.
    let left_contact = x + along * d - across * rot90(d);
    let right_contact = x + along * d + across * rot90(d);
    let make = |contact: Point| -> Result<TangentContact> {
        Ok(TangentContact {
            line: Line::through(x, contact)?,
            contact,
        })
    };
    Ok(TangentPair {
        left: make(left_contact)?,
        right: make(right_contact)?,
        segment_length: l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangents_from_unit_circle() {
        let c = Circle::new(Point::origin(), 1.0).unwrap();
        let pair = tangent_lines_from_point(&c, Point::new(2.0, 0.0)).unwrap();
        assert!((pair.segment_length - 3.0f64.sqrt()).abs() < 1e-12);
        // Contacts at (1/2, ±√3/2); the left one has positive y.
        assert!((pair.left.contact - Point::new(0.5, 0.75f64.sqrt())).norm() < 1e-12);
        assert!((pair.right.contact - Point::new(0.5, -(0.75f64.sqrt()))).norm() < 1e-12);
        // Both contacts on the circle.
        assert!((pair.left.contact.coords.norm() - 1.0).abs() < 1e-12);
        assert!((pair.right.contact.coords.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tangents_pythagoras() {
        let c = Circle::new(Point::origin(), 1.0).unwrap();
        let pair = tangent_lines_from_point(&c, Point::new(0.0, 5.0)).unwrap();
        assert!((pair.segment_length - 24.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tangents_reject_interior_point() {
        let c = Circle::new(Point::new(1.0, 1.0), 2.0).unwrap();
        assert!(tangent_lines_from_point(&c, Point::new(1.0, 1.0)).is_err());
    }

    #[test]
    fn ccw_angle_quarters() {
        let a = unit(0.0);
        assert!((ccw_angle(a, unit(1.0)) - 1.0).abs() < 1e-14);
        assert!((ccw_angle(a, unit(-1.0)) - (TAU - 1.0)).abs() < 1e-13);
    }
}
