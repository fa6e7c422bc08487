//! Closed convex curves assembled from line segments and circular arcs.
//!
//! The curve must be counterclockwise and star-shaped about the origin, so
//! the polar angle serves as the curve parameter. Line intersections and arc
//! lengths are computed piecewise in closed form.

use crate::error::{Error, Result};
use crate::geometry2d::primitives::{
    ccw_angle, cross, normalize_angle, rot90, unit, Line, Point, Vector, TAU,
};

/// One boundary piece.
#[derive(Debug, Clone, Copy)]
pub enum Piece {
    Segment {
        start: Point,
        end: Point,
    },
    /// Counterclockwise arc from `start_angle` to `end_angle` about `center`
    /// (`end_angle > start_angle`). `ccw` is kept for schema completeness;
    /// clockwise arcs are concave and rejected by validation.
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
        ccw: bool,
    },
}

impl Piece {
    pub fn start_point(&self) -> Point {
        match self {
            Piece::Segment { start, .. } => *start,
            Piece::Arc {
                center,
                radius,
                start_angle,
                ..
            } => center + *radius * unit(*start_angle),
        }
    }

    pub fn end_point(&self) -> Point {
        match self {
            Piece::Segment { end, .. } => *end,
            Piece::Arc {
                center,
                radius,
                end_angle,
                ..
            } => center + *radius * unit(*end_angle),
        }
    }

    fn start_tangent(&self) -> Vector {
        match self {
            Piece::Segment { start, end } => (end - start).normalize(),
            Piece::Arc { start_angle, .. } => rot90(unit(*start_angle)),
        }
    }

    fn end_tangent(&self) -> Vector {
        match self {
            Piece::Segment { start, end } => (end - start).normalize(),
            Piece::Arc { end_angle, .. } => rot90(unit(*end_angle)),
        }
    }

    fn turning(&self) -> f64 {
        match self {
            Piece::Segment { .. } => 0.0,
            Piece::Arc {
                start_angle,
                end_angle,
                ..
            } => end_angle - start_angle,
        }
    }
}

/// A closed convex piecewise curve, counterclockwise, origin interior.
#[derive(Debug, Clone)]
pub struct PiecewiseCurve {
    pieces: Vec<Piece>,
    /// Polar-angle window of each piece, unwrapped: `span[i].1 >= span[i].0`,
    /// cumulative over the loop, total exactly 2π.
    spans: Vec<(f64, f64)>,
}

impl PiecewiseCurve {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.len() < 2 {
            return Err(Error::InvalidBody("piecewise curve needs >= 2 pieces".into()));
        }
        let n = pieces.len();
        for i in 0..n {
            let gap = (pieces[(i + 1) % n].start_point() - pieces[i].end_point()).norm();
            if gap > 1e-10 {
                return Err(Error::InvalidBody(format!(
                    "piece {i} end does not meet piece {} start (gap {gap:.3e})",
                    (i + 1) % n
                )));
            }
            if let Piece::Arc { radius, start_angle, end_angle, ccw, .. } = pieces[i] {
                if !(radius > 0.0) {
                    return Err(Error::InvalidBody("arc radius must be positive".into()));
                }
                if !ccw || end_angle <= start_angle {
                    return Err(Error::InvalidBody(
                        "clockwise arcs are concave; pieces must run counterclockwise".into(),
                    ));
                }
            }
        }
        // Total turning: arc spans plus corner turns must add to 2π, all
        // corner turns nonnegative (convexity).
        let mut turning = 0.0;
        for i in 0..n {
            turning += pieces[i].turning();
            let corner = ccw_angle(pieces[i].end_tangent(), pieces[(i + 1) % n].start_tangent());
            let corner = if corner > TAU - 1e-9 { 0.0 } else { corner };
            if corner > std::f64::consts::PI {
                return Err(Error::InvalidBody(
                    "reflex corner; piecewise curve is not convex".into(),
                ));
            }
            turning += corner;
        }
        if (turning - TAU).abs() > 1e-8 {
            return Err(Error::InvalidBody(format!(
                "total turning {turning:.9} != 2π; curve is not a simple convex loop"
            )));
        }
        // Polar spans about the origin, unwrapped along the loop.
        let first = normalize_angle(pieces[0].start_point().coords.y.atan2(pieces[0].start_point().coords.x));
        let mut spans = Vec::with_capacity(n);
        let mut cursor = first;
        for piece in &pieces {
            let sweep = ccw_angle(
                piece.start_point().coords,
                piece.end_point().coords,
            );
            if sweep <= 0.0 || sweep >= TAU {
                return Err(Error::InvalidBody(
                    "piece subtends a degenerate polar angle about the origin".into(),
                ));
            }
            spans.push((cursor, cursor + sweep));
            cursor += sweep;
        }
        if (cursor - first - TAU).abs() > 1e-8 {
            return Err(Error::InvalidBody(
                "polar spans do not close; origin is not interior".into(),
            ));
        }
        Ok(Self { pieces, spans })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Parameters at which pieces meet (smoothness breakpoints).
    pub fn junction_params(&self) -> Vec<f64> {
        self.spans.iter().map(|s| normalize_angle(s.0)).collect()
    }

    fn piece_index(&self, theta: f64) -> usize {
        let base = self.spans[0].0;
        let t = base + (theta - base).rem_euclid(TAU);
        for (i, &(a, b)) in self.spans.iter().enumerate() {
            if t >= a - 1e-12 && t <= b + 1e-12 {
                return i;
            }
        }
        self.spans.len() - 1
    }

    /// Radial distance from the origin in direction `theta` (closed form).
    pub fn radius(&self, theta: f64) -> f64 {
        let i = self.piece_index(theta);
        let u = unit(theta);
        match &self.pieces[i] {
            Piece::Segment { start, end } => {
                let e = (end - start).normalize();
                let n = rot90(e);
                let c = n.dot(&start.coords);
                c / n.dot(&u)
            }
            Piece::Arc { center, radius, .. } => {
                let q = center.coords;
                let uq = u.dot(&q);
                let disc = (uq * uq - q.norm_squared() + radius * radius).max(0.0);
                uq + disc.sqrt()
            }
        }
    }

    /// d(radius)/d(theta), from the active piece's closed form.
    pub fn radius_d1(&self, theta: f64) -> f64 {
        let i = self.piece_index(theta);
        let u = unit(theta);
        let up = rot90(u);
        match &self.pieces[i] {
            Piece::Segment { start, end } => {
                let e = (end - start).normalize();
                let n = rot90(e);
                let c = n.dot(&start.coords);
                let denom = n.dot(&u);
                -c * n.dot(&up) / (denom * denom)
            }
            Piece::Arc { center, .. } => {
                let q = center.coords;
                let rho = self.radius(theta);
                rho * up.dot(&q) / (rho - u.dot(&q))
            }
        }
    }

    pub fn point(&self, theta: f64) -> Point {
        Point::origin() + self.radius(theta) * unit(theta)
    }

    /// Unit tangent (counterclockwise) at the boundary point in direction
    /// `theta`.
    pub fn tangent(&self, theta: f64) -> Vector {
        let i = self.piece_index(theta);
        match &self.pieces[i] {
            Piece::Segment { start, end } => (end - start).normalize(),
            Piece::Arc { center, .. } => {
                let p = self.point(theta);
                rot90((p - center).normalize())
            }
        }
    }

    pub fn curvature(&self, theta: f64) -> f64 {
        match &self.pieces[self.piece_index(theta)] {
            Piece::Segment { .. } => 0.0,
            Piece::Arc { radius, .. } => 1.0 / radius,
        }
    }

    #[inline]
    pub fn speed(&self, theta: f64) -> f64 {
        let r = self.radius(theta);
        let d1 = self.radius_d1(theta);
        (r * r + d1 * d1).sqrt()
    }

    /// Exact arc length of the boundary between polar angles `t0 <= t1`
    /// (at most one full turn).
    pub fn arc_length(&self, t0: f64, t1: f64) -> f64 {
        debug_assert!(t1 >= t0 - 1e-12 && t1 - t0 <= TAU + 1e-9);
        let base = self.spans[0].0;
        let a = base + (t0 - base).rem_euclid(TAU);
        let b = a + (t1 - t0);
        let mut total = 0.0;
        // Walk spans over up to two periods to cover the unwrapped interval.
        for rep in 0..2 {
            let shift = TAU * rep as f64;
            for (i, &(s0, s1)) in self.spans.iter().enumerate() {
                let (s0, s1) = (s0 + shift, s1 + shift);
                let lo = s0.max(a);
                let hi = s1.min(b);
                if hi <= lo + 1e-15 {
                    continue;
                }
                total += self.piece_length_between(i, lo, hi);
            }
        }
        total
    }

    fn piece_length_between(&self, i: usize, ta: f64, tb: f64) -> f64 {
        let pa = self.point(ta);
        let pb = self.point(tb);
        match &self.pieces[i] {
            Piece::Segment { .. } => (pb - pa).norm(),
            Piece::Arc { center, radius, .. } => {
                let sweep = ccw_angle(pa - center, pb - center);
                let sweep = if sweep > TAU - 1e-9 { 0.0 } else { sweep };
                radius * sweep
            }
        }
    }

    pub fn perimeter(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| match p {
                Piece::Segment { start, end } => (end - start).norm(),
                Piece::Arc {
                    radius,
                    start_angle,
                    end_angle,
                    ..
                } => radius * (end_angle - start_angle),
            })
            .sum()
    }

    /// All intersections with a line, in closed form, sorted along the
    /// line direction. Returns `(point, polar angle)` pairs.
    pub fn line_intersections(&self, line: &Line) -> Result<Vec<(Point, f64)>> {
        let mut hits: Vec<(Point, f64)> = Vec::new();
        let mut push = |p: Point| {
            let t = normalize_angle(p.coords.y.atan2(p.coords.x));
            if hits.iter().all(|(q, _)| (p - q).norm() > 1e-9) {
                hits.push((p, t));
            }
        };
        for piece in &self.pieces {
            match piece {
                Piece::Segment { start, end } => {
                    let e = end - start;
                    let det = cross(line.direction, e);
                    if det.abs() < 1e-15 {
                        continue;
                    }
                    let w = start - line.point;
                    let s = cross(w, e) / det; // along line
                    let t = cross(w, line.direction) / det; // along segment
                    if (-1e-12..=1.0 + 1e-12).contains(&t) {
                        let _ = s;
                        push(start + t.clamp(0.0, 1.0) * e);
                    }
                }
                Piece::Arc {
                    center,
                    radius,
                    start_angle,
                    end_angle,
                    ..
                } => {
                    let w = line.point - center;
                    let b = w.dot(&line.direction);
                    let c = w.norm_squared() - radius * radius;
                    let disc = b * b - c;
                    if disc < 0.0 {
                        continue;
                    }
                    let sq = disc.sqrt();
                    for s in [-b - sq, -b + sq] {
                        let p = line.point + s * line.direction;
                        let ang = (p - center).y.atan2((p - center).x);
                        // containment in [start_angle, end_angle] mod 2π
                        let rel = (ang - start_angle).rem_euclid(TAU);
                        let span = end_angle - start_angle;
                        if rel <= span + 1e-9 || rel >= TAU - 1e-9 {
                            push(p);
                        }
                    }
                }
            }
        }
        hits.sort_by(|a, b| {
            line.projection(a.0)
                .partial_cmp(&line.projection(b.0))
                .unwrap()
        });
        if hits.len() > 2 {
            return Err(Error::DegenerateIntersection(format!(
                "{} crossings on a convex piecewise curve",
                hits.len()
            )));
        }
        Ok(hits)
    }
}
