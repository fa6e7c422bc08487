//! The unified convex boundary type used by every higher module.
//!
//! A `ConvexCurve` wraps a radial or piecewise representation together with
//! a rigid motion (rotation + translation). The curve parameter is the polar
//! angle in the base frame, which makes the tangent map composable and keeps
//! orbits free of re-projection drift.

use crate::error::{Error, Result};
use crate::geometry2d::piecewise::PiecewiseCurve;
use crate::geometry2d::primitives::{normalize_angle, rot90, rotate, unit, Line, Point, Vector, TAU};
use crate::geometry2d::radial::RadialCurve;
use crate::numerics::{adaptive_simpson, bisect, golden_min};

#[derive(Debug, Clone)]
pub enum CurveRepr {
    Radial(RadialCurve),
    Piecewise(PiecewiseCurve),
}

/// A closed convex boundary, counterclockwise, with its distinguished point
/// (the base-frame origin) strictly inside.
#[derive(Debug, Clone)]
pub struct ConvexCurve {
    repr: CurveRepr,
    rotation: f64,
    translation: Vector,
}

/// One line/curve crossing: the point (world frame) and curve parameter.
#[derive(Debug, Clone, Copy)]
pub struct Intersection {
    pub point: Point,
    pub param: f64,
}

const SWEEP_POINTS: usize = 720;
const BISECT_TOL: f64 = 1e-13;
const TANGENCY_TOL: f64 = 1e-9;

impl ConvexCurve {
    pub fn from_radial(curve: RadialCurve) -> Self {
        Self {
            repr: CurveRepr::Radial(curve),
            rotation: 0.0,
            translation: Vector::zeros(),
        }
    }

    pub fn from_piecewise(curve: PiecewiseCurve) -> Self {
        Self {
            repr: CurveRepr::Piecewise(curve),
            rotation: 0.0,
            translation: Vector::zeros(),
        }
    }

    pub fn repr(&self) -> &CurveRepr {
        &self.repr
    }

    /// Composes a further rigid motion (rotation about the curve's centre,
    /// then translation) onto the curve.
    pub fn transformed(&self, rotation: f64, translation: Vector) -> Self {
        Self {
            repr: self.repr.clone(),
            rotation: self.rotation + rotation,
            translation: rotate(self.translation, rotation) + translation,
        }
    }

    /// World position of the distinguished point (base-frame origin).
    pub fn center(&self) -> Point {
        Point::origin() + self.translation
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn is_identity_placed(&self) -> bool {
        self.rotation == 0.0 && self.translation == Vector::zeros()
    }

    pub fn is_piecewise(&self) -> bool {
        matches!(self.repr, CurveRepr::Piecewise(_))
    }

    #[inline]
    pub fn to_base_point(&self, p: Point) -> Point {
        Point::origin() + rotate(p - self.center(), -self.rotation)
    }

    #[inline]
    pub fn to_world_point(&self, p: Point) -> Point {
        self.center() + rotate(p.coords, self.rotation)
    }

    #[inline]
    pub fn to_base_vector(&self, v: Vector) -> Vector {
        rotate(v, -self.rotation)
    }

    #[inline]
    pub fn to_world_vector(&self, v: Vector) -> Vector {
        rotate(v, self.rotation)
    }

    /// Radial distance from the distinguished point in base-frame direction
    /// `theta` (the curve parameter).
    #[inline]
    pub fn radius_at(&self, theta: f64) -> f64 {
        match &self.repr {
            CurveRepr::Radial(c) => c.radius(theta),
            CurveRepr::Piecewise(c) => c.radius(theta),
        }
    }

    #[inline]
    fn radius_d1_at(&self, theta: f64) -> f64 {
        match &self.repr {
            CurveRepr::Radial(c) => c.radius_d1(theta),
            CurveRepr::Piecewise(c) => c.radius_d1(theta),
        }
    }

    /// Boundary point at parameter `theta`, world frame.
    pub fn point_at(&self, theta: f64) -> Point {
        let base = Point::origin() + self.radius_at(theta) * unit(theta);
        self.to_world_point(base)
    }

    /// Unit tangent (counterclockwise) at parameter `theta`, world frame.
    pub fn tangent_at(&self, theta: f64) -> Vector {
        let t = match &self.repr {
            CurveRepr::Radial(c) => {
                let r = c.radius(theta);
                let d1 = c.radius_d1(theta);
                (d1 * unit(theta) + r * rot90(unit(theta))).normalize()
            }
            CurveRepr::Piecewise(c) => c.tangent(theta),
        };
        self.to_world_vector(t)
    }

    /// Speed `|dγ/dθ|` of the parametrisation (frame invariant).
    #[inline]
    pub fn speed_at(&self, theta: f64) -> f64 {
        let r = self.radius_at(theta);
        let d1 = self.radius_d1_at(theta);
        (r * r + d1 * d1).sqrt()
    }

    /// Curvature at parameter `theta`.
    pub fn curvature_at(&self, theta: f64) -> Result<f64> {
        match &self.repr {
            CurveRepr::Radial(c) => c.curvature(theta),
            CurveRepr::Piecewise(c) => Ok(c.curvature(theta)),
        }
    }

    /// Interior smoothness breakpoints (piece junctions), as parameters.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.repr {
            CurveRepr::Radial(c) => c.breakpoints().to_vec(),
            CurveRepr::Piecewise(c) => c.junction_params(),
        }
    }

    /// Arc length between parameters `t0 <= t1` (up to one full turn).
    pub fn arc_length(&self, t0: f64, t1: f64) -> f64 {
        assert!(
            t1 >= t0 - 1e-12 && t1 - t0 <= TAU + 1e-9,
            "arc_length interval must satisfy 0 <= t1 - t0 <= 2π"
        );
        if t1 <= t0 {
            return 0.0;
        }
        match &self.repr {
            CurveRepr::Piecewise(c) => c.arc_length(t0, t1),
            CurveRepr::Radial(c) => {
                let f = |t: f64| c.speed(t);
                let mut total = 0.0;
                for (a, b) in split_at_breakpoints(t0, t1, c.breakpoints()) {
                    total += adaptive_simpson(&f, a, b, 1e-12);
                }
                total
            }
        }
    }

    pub fn perimeter(&self) -> f64 {
        match &self.repr {
            CurveRepr::Piecewise(c) => c.perimeter(),
            CurveRepr::Radial(_) => self.arc_length(0.0, TAU),
        }
    }

    /// Whether a world point lies strictly inside, with clearance `margin`.
    pub fn is_strictly_inside(&self, p: Point, margin: f64) -> bool {
        let b = self.to_base_point(p);
        let rho = b.coords.norm();
        if rho < 1e-14 {
            return true;
        }
        let theta = b.coords.y.atan2(b.coords.x);
        rho + margin < self.radius_at(theta)
    }

    /// Minimum distance from a world point to the boundary. Grid scan with
    /// golden-section refinement of every grid-local minimum.
    pub fn min_distance_to_boundary(&self, p: Point, n_grid: usize) -> f64 {
        let b = self.to_base_point(p).coords;
        let d = |t: f64| {
            let q = self.radius_at(t) * unit(t);
            (q - b).norm()
        };
        let n = n_grid.max(64);
        let vals: Vec<f64> = (0..n).map(|k| d(TAU * k as f64 / n as f64)).collect();
        let mut best = f64::INFINITY;
        for k in 0..n {
            let prev = vals[(k + n - 1) % n];
            let next = vals[(k + 1) % n];
            if vals[k] <= prev && vals[k] <= next {
                let t = TAU * k as f64 / n as f64;
                let h = TAU / n as f64;
                let (_, fm) = golden_min(&d, t - h, t + h, 1e-12);
                best = best.min(fm);
            }
        }
        best
    }

    /// Intersections of a world-frame line with the curve: 0, 1 (tangency)
    /// or 2 points, ordered along the line direction.
    pub fn line_intersections(&self, line: &Line) -> Result<Vec<Intersection>> {
        // Work in the base frame; push results back out.
        let base_line = Line {
            point: self.to_base_point(line.point),
            direction: self.to_base_vector(line.direction),
        };
        let hits = match &self.repr {
            CurveRepr::Piecewise(c) => c.line_intersections(&base_line)?,
            CurveRepr::Radial(_) => self.radial_line_intersections(&base_line)?,
        };
        let mut out: Vec<Intersection> = hits
            .into_iter()
            .map(|(p, t)| Intersection {
                point: self.to_world_point(p),
                param: t,
            })
            .collect();
        out.sort_by(|a, b| {
            line.projection(a.point)
                .partial_cmp(&line.projection(b.point))
                .unwrap()
        });
        Ok(out)
    }

    /// Warm-started variant of `line_intersections` for callers sweeping a
    /// family of nearby lines (profile grids, search objectives): each hint
    /// is a base-frame parameter near an expected crossing. Local
    /// sign-change bracketing around the hints replaces the global sweep;
    /// returns `None` when the hints fail to isolate exactly two crossings.
    pub fn line_intersections_hinted(
        &self,
        line: &Line,
        hints: (f64, f64),
    ) -> Option<[Intersection; 2]> {
        if self.is_piecewise() {
            return None;
        }
        let base_line = Line {
            point: self.to_base_point(line.point),
            direction: self.to_base_vector(line.direction),
        };
        let s = |t: f64| {
            let p = Point::origin() + self.radius_at(t) * unit(t);
            base_line.signed_distance(p)
        };
        const WINDOW: f64 = 0.35;
        const STEPS: usize = 14;
        let mut roots = [0.0f64; 2];
        for (slot, &hint) in [hints.0, hints.1].iter().enumerate() {
            let mut found = None;
            let mut prev_t = hint - WINDOW;
            let mut prev_v = s(prev_t);
            for k in 1..=STEPS {
                let t = hint - WINDOW + 2.0 * WINDOW * k as f64 / STEPS as f64;
                let v = s(t);
                if prev_v == 0.0 {
                    found = Some(prev_t);
                    break;
                }
                if prev_v * v < 0.0 {
                    found = Some(bisect(&s, prev_t, t, BISECT_TOL));
                    break;
                }
                prev_t = t;
                prev_v = v;
            }
            roots[slot] = found?;
        }
        if (roots[0] - roots[1]).abs() < 1e-7 {
            return None;
        }
        let make = |t: f64| {
            let tn = normalize_angle(t);
            Intersection {
                point: self
                    .to_world_point(Point::origin() + self.radius_at(tn) * unit(tn)),
                param: tn,
            }
        };
        let (i0, i1) = (make(roots[0]), make(roots[1]));
        if line.projection(i0.point) <= line.projection(i1.point) {
            Some([i0, i1])
        } else {
            Some([i1, i0])
        }
    }

    /// Sweep-and-bisect intersection for radial curves: sample the signed
    /// distance of the boundary to the line on a coarse angular grid,
    /// bracket sign changes, bisect. Convexity guarantees at most two roots.
    fn radial_line_intersections(&self, line: &Line) -> Result<Vec<(Point, f64)>> {
        let s = |t: f64| {
            let p = Point::origin() + self.radius_at(t) * unit(t);
            line.signed_distance(p)
        };
        let n = SWEEP_POINTS;
        let h = TAU / n as f64;
        let vals: Vec<f64> = (0..n).map(|k| s(k as f64 * h)).collect();

        let mut roots: Vec<f64> = Vec::new();
        for k in 0..n {
            let a = k as f64 * h;
            let b = (k + 1) as f64 * h;
            let (fa, fb) = (vals[k], vals[(k + 1) % n]);
            if fa == 0.0 {
                roots.push(a);
            } else if fa * fb < 0.0 {
                roots.push(bisect(&s, a, b, BISECT_TOL));
            }
        }

        if roots.is_empty() {
            // No sign change at sweep resolution: either a tangency, a miss,
            // or two roots inside one cell. Refine around the grid minimum
            // of |s|; the neighbouring grid nodes carry the ambient sign and
            // anchor the brackets for the two-root case.
            let k_min = (0..n)
                .min_by(|&i, &j| vals[i].abs().partial_cmp(&vals[j].abs()).unwrap())
                .unwrap();
            let t = k_min as f64 * h;
            let absf = |x: f64| s(x).abs();
            let (tm, _) = golden_min(&absf, t - h, t + h, 1e-13);
            let sm = s(tm);
            if sm * vals[k_min] < 0.0 && sm.abs() > 1e-13 {
                let left = s(t - h);
                let right = s(t + h);
                if left * sm < 0.0 {
                    roots.push(bisect(&s, t - h, tm, BISECT_TOL));
                }
                if right * sm < 0.0 {
                    roots.push(bisect(&s, tm, t + h, BISECT_TOL));
                }
            } else if sm.abs() <= TANGENCY_TOL {
                roots.push(tm);
            }
        }

        let mut out: Vec<(Point, f64)> = Vec::new();
        for t in roots {
            let t = normalize_angle(t);
            let p = Point::origin() + self.radius_at(t) * unit(t);
            if out.iter().all(|(q, _)| (p - q).norm() > 1e-9) {
                out.push((p, t));
            }
        }
        if out.len() > 2 {
            return Err(Error::DegenerateIntersection(format!(
                "{} crossings on a convex curve",
                out.len()
            )));
        }
        Ok(out)
    }

    /// Distance from an interior world point to the boundary along direction
    /// `dir`, together with the hit parameter.
    pub fn ray_hit(&self, from: Point, dir: Vector) -> Result<(f64, f64)> {
        let b = self.to_base_point(from).coords;
        if b.norm() < 1e-14 {
            // Ray from the distinguished point: exact radial lookup.
            let ang = self.to_base_vector(dir);
            let theta = normalize_angle(ang.y.atan2(ang.x));
            return Ok((self.radius_at(theta), theta));
        }
        let line = Line::new(from, dir)?;
        let hits = self.line_intersections(&line)?;
        hits.iter()
            .map(|h| (line.projection(h.point), h.param))
            .find(|&(t, _)| t > 0.0)
            .ok_or_else(|| {
                Error::DegenerateIntersection("ray from interior point missed the boundary".into())
            })
    }

    /// Runs convexity validation on the underlying representation (radial
    /// curves only; piecewise curves validate at construction).
    pub fn validate_convex(self, kappa_tol: f64) -> Result<Self> {
        match self.repr {
            CurveRepr::Radial(c) => {
                let validated = c.validate_convex(kappa_tol)?;
                Ok(Self {
                    repr: CurveRepr::Radial(validated),
                    rotation: self.rotation,
                    translation: self.translation,
                })
            }
            CurveRepr::Piecewise(_) => Ok(self),
        }
    }
}

/// Splits `[t0, t1]` at the breakpoints it contains (mod 2π).
fn split_at_breakpoints(t0: f64, t1: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = Vec::new();
    for &b in breaks {
        for rep in -1..=1 {
            let c = b + TAU * rep as f64;
            if c > t0 + 1e-12 && c < t1 - 1e-12 {
                cuts.push(c);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut prev = t0;
    for c in cuts {
        out.push((prev, c));
        prev = c;
    }
    out.push((prev, t1));
    out
}

/// `line_curve_intersections` as a free function over the unified type.
pub fn line_curve_intersections(curve: &ConvexCurve, line: &Line) -> Result<Vec<Intersection>> {
    curve.line_intersections(line)
}

/// `arc_length` as a free function over the unified type.
pub fn arc_length(curve: &ConvexCurve, t0: f64, t1: f64) -> f64 {
    curve.arc_length(t0, t1)
}
