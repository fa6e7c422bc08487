//! The tangent-chord boundary map, its orbits, its invariant boundary
//! measure, rotation numbers and periodicity detection.
//!
//! For a convex body `K` with a strictly interior circle, the map `F` sends
//! a boundary point `A` to the second endpoint `B` of the chord through `A`
//! tangent to the circle, with the circle kept on the left of the directed
//! segment `A -> B`. `F` is an orientation-preserving homeomorphism of the
//! boundary; boundary points are represented by their curve parameter so
//! that iterates compose without re-projection drift.

use crate::error::{Error, Result};
use crate::geometry2d::{
    angle_between, normalize_angle, rot90, tangent_lines_from_point, unit,
    Circle, ConvexCurve, Line, Point, TAU,
};
use crate::numerics::simpson_richardson;
use crate::par;

/// One chord tangent to the interior circle: contact angle `phi`, contact
/// point `p`, endpoints `a_point`/`b_point` on the boundary (the circle lies
/// left of `a -> b`), tangent-segment lengths `a = |AP|`, `b = |PB|`, and
/// the angle `alpha` the chord subtends at the circle centre.
#[derive(Debug, Clone, Copy)]
pub struct TangentChord {
    pub phi: f64,
    pub p: Point,
    pub a_point: Point,
    pub b_point: Point,
    pub a_param: f64,
    pub b_param: f64,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
}

impl TangentChord {
    pub fn product(&self) -> f64 {
        self.a * self.b
    }

    pub fn length(&self) -> f64 {
        self.a + self.b
    }

    pub fn reciprocal_sum(&self) -> f64 {
        1.0 / self.a + 1.0 / self.b
    }
}

/// Iterates of the tangent-chord map from one starting point.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    /// Curve parameters of `A_0, A_1, ..., A_n`.
    pub params: Vec<f64>,
    /// Boundary points corresponding to `params`.
    pub points: Vec<Point>,
    /// Lengths of the chords `A_i A_{i+1}`.
    pub chord_lengths: Vec<f64>,
    /// Birkhoff average of the angular advance, in `(0, 1)`.
    pub rotation_number: f64,
    /// Smallest detected period, if one closed up within tolerance.
    pub period: Option<usize>,
    /// Distance of the best recurrence to the starting point.
    pub closure_error: f64,
    /// Set for piecewise-smooth bodies, where the tangent-length density has
    /// corner-induced kinks.
    pub piecewise_body: bool,
}

/// How to estimate the rotation number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationMode {
    /// Invariant-measure ratio `μ(A -> F(A)) / μ(∂K)`; exact up to quadrature.
    Measure,
    /// Birkhoff average of the angular advance over `n` iterates.
    Orbit,
}

/// Validates that the circle is strictly inside the body and returns the
/// clearance `min_∂K |X - O| - r`.
pub fn validate_interior(curve: &ConvexCurve, circle: &Circle) -> Result<f64> {
    let margin = curve.min_distance_to_boundary(circle.center, 2048) - circle.radius;
    if margin <= 1e-9 || !curve.is_strictly_inside(circle.center, 0.0) {
        return Err(Error::Domain(format!(
            "circle is not strictly interior to the body (clearance {margin:.3e})"
        )));
    }
    Ok(margin)
}

/// Chord cut by the tangent line of the circle at contact angle `phi`
/// (measured in the body's base frame).
pub fn tangent_chord_at(curve: &ConvexCurve, circle: &Circle, phi: f64) -> Result<TangentChord> {
    validate_interior(curve, circle)?;
    chord_at_unchecked(curve, circle, phi)
}

pub(crate) fn chord_at_unchecked(
    curve: &ConvexCurve,
    circle: &Circle,
    phi: f64,
) -> Result<TangentChord> {
    // Contact point and chord direction in the base frame: with direction
    // u(phi) from the circle centre, the tangent direction rot90(u) keeps
    // the circle on the left of A -> B.
    let center_base = curve.to_base_point(circle.center);
    let p_base = center_base + circle.radius * unit(phi);
    let dir_base = rot90(unit(phi));
    let line_world = Line {
        point: curve.to_world_point(p_base),
        direction: curve.to_world_vector(dir_base),
    };
    let hits = curve.line_intersections(&line_world)?;
    if hits.len() != 2 {
        return Err(Error::DegenerateIntersection(format!(
            "tangent line at phi = {phi:.6} cut {} boundary points, expected 2",
            hits.len()
        )));
    }
    let (first, second) = (hits[0], hits[1]);
    let proj_p = line_world.projection(line_world.point);
    debug_assert!((proj_p).abs() < 1e-12);
    let (sa, sb) = (
        line_world.projection(first.point),
        line_world.projection(second.point),
    );
    if !(sa < 0.0 && sb > 0.0) {
        return Err(Error::DegenerateIntersection(
            "contact point does not lie between the chord endpoints".into(),
        ));
    }
    let p_world = line_world.point;
    let o_world = circle.center;
    let alpha = angle_between(first.point - o_world, second.point - o_world);
    Ok(TangentChord {
        phi: normalize_angle(phi),
        p: p_world,
        a_point: first.point,
        b_point: second.point,
        a_param: first.param,
        b_param: second.param,
        a: -sa,
        b: sb,
        alpha,
    })
}

/// Chord through the boundary point at parameter `t`, tangent to the circle,
/// oriented forward (`A = point(t)`, circle left of `A -> B`) or backward.
fn chord_from_point(
    curve: &ConvexCurve,
    circle: &Circle,
    t: f64,
    forward: bool,
) -> Result<TangentChord> {
    let a_world = curve.point_at(t);
    let pair = tangent_lines_from_point(circle, a_world).map_err(|_| {
        Error::Domain("boundary point lies inside the circle; body validation failed".into())
    })?;
    let contact = if forward { pair.left } else { pair.right };
    let dir = (contact.contact - a_world).normalize();
    let line = Line::new(a_world, dir)?;
    let hits = curve.line_intersections(&line)?;
    // The far intersection is the partner endpoint; the near one is A itself.
    let other = hits
        .iter()
        .max_by(|x, y| {
            (x.point - a_world)
                .norm()
                .partial_cmp(&(y.point - a_world).norm())
                .unwrap()
        })
        .copied()
        .ok_or_else(|| Error::DegenerateIntersection("tangent chord found no partner".into()))?;
    if (other.point - a_world).norm() < 1e-9 {
        return Err(Error::DegenerateIntersection(
            "tangent chord degenerated to a point".into(),
        ));
    }
    let p = contact.contact;
    let center_base = curve.to_base_point(circle.center);
    let p_base = curve.to_base_point(p);
    let phi = normalize_angle((p_base.y - center_base.y).atan2(p_base.x - center_base.x));
    let (a_pt, b_pt, a_par, b_par) = if forward {
        (a_world, other.point, t, other.param)
    } else {
        (other.point, a_world, other.param, t)
    };
    Ok(TangentChord {
        phi,
        p,
        a_point: a_pt,
        b_point: b_pt,
        a_param: normalize_angle(a_par),
        b_param: normalize_angle(b_par),
        a: (a_pt - p).norm(),
        b: (b_pt - p).norm(),
        alpha: angle_between(a_pt - circle.center, b_pt - circle.center),
    })
}

/// The tangent-chord map on curve parameters: `t -> parameter of F(point(t))`.
pub fn map_f(curve: &ConvexCurve, circle: &Circle, t: f64) -> Result<f64> {
    Ok(chord_from_point(curve, circle, t, true)?.b_param)
}

/// Inverse map: the parameter whose image under `F` is `point(t)`.
pub fn map_f_inverse(curve: &ConvexCurve, circle: &Circle, t: f64) -> Result<f64> {
    Ok(chord_from_point(curve, circle, t, false)?.a_param)
}

/// `map_f` on raw points; the point must lie on the boundary to 1e-8.
pub fn map_f_point(curve: &ConvexCurve, circle: &Circle, a: Point) -> Result<Point> {
    let t = boundary_param_of(curve, a)?;
    let tb = map_f(curve, circle, t)?;
    Ok(curve.point_at(tb))
}

/// Parameter of a point expected to lie on the boundary (distance <= 1e-8).
pub fn boundary_param_of(curve: &ConvexCurve, p: Point) -> Result<f64> {
    let b = curve.to_base_point(p);
    if b.coords.norm() < 1e-14 {
        return Err(Error::Domain(
            "point is the distinguished interior point, not on the boundary".into(),
        ));
    }
    let t = normalize_angle(b.y.atan2(b.x));
    let dist = (curve.point_at(t) - p).norm();
    if dist > 1e-8 {
        return Err(Error::Domain(format!(
            "point is not on the boundary (distance {dist:.3e})"
        )));
    }
    Ok(t)
}

/// Tangent-segment length from a boundary point to the circle.
#[inline]
fn tangent_segment(circle: &Circle, x: Point) -> f64 {
    circle.power(x).max(0.0).sqrt()
}

/// Central angle about the circle centre swept by the boundary arc
/// `[t0, t1]`. The sweep is accumulated over subintervals so arcs longer
/// than π unwrap correctly.
fn central_angle_span(curve: &ConvexCurve, circle: &Circle, t0: f64, t1: f64) -> f64 {
    const STEPS: usize = 32;
    let psi = |t: f64| {
        let v = curve.point_at(t) - circle.center;
        v.y.atan2(v.x)
    };
    let mut total = 0.0;
    let mut prev = psi(t0);
    for k in 1..=STEPS {
        let t = t0 + (t1 - t0) * k as f64 / STEPS as f64;
        let cur = psi(t);
        total += normalize_angle(cur - prev);
        prev = cur;
    }
    total
}

/// Total mass `∮ ds/ρ` of the boundary, where `ρ(X)` is the
/// tangent-segment length from `X` to the circle. Composite Simpson on 2048
/// panels with a Richardson check, split at smoothness breakpoints.
fn tangent_density_total(curve: &ConvexCurve, circle: &Circle) -> f64 {
    let integrand = |t: f64| curve.speed_at(t) / tangent_segment(circle, curve.point_at(t));
    let mut cuts: Vec<f64> = curve
        .breakpoints()
        .iter()
        .map(|&b| normalize_angle(b))
        .filter(|&b| b > 1e-12 && b < TAU - 1e-12)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut bounds = vec![0.0];
    bounds.extend(cuts);
    bounds.push(TAU);
    let mut acc = 0.0;
    for w in bounds.windows(2) {
        let panels = ((2048.0 * (w[1] - w[0]) / TAU).ceil() as usize).max(64);
        acc += simpson_richardson(&integrand, w[0], w[1], panels);
    }
    acc
}

/// The invariant boundary measure of the tangent-chord map.
///
/// For a configuration whose tangent chords all subtend the same angle α at
/// the circle centre `O` (every equipotential configuration does), `F` acts
/// as the exact rotation by α in the central angle about `O`, so the central
/// angle carries the invariant measure. The measure returned here is that
/// angular measure, normalised so the full boundary has mass `∮ ds/ρ` with
/// `ρ` the tangent-segment length; on concentric configurations the density
/// `ds/ρ` is itself constant per angle and the two descriptions coincide
/// (full disc boundary: `2πR/sqrt(R² − r²)`).
pub fn invariant_measure(curve: &ConvexCurve, circle: &Circle, t0: f64, t1: f64) -> Result<f64> {
    if t1 < t0 - 1e-12 || t1 - t0 > TAU + 1e-9 {
        return Err(Error::Domain(
            "measure interval must satisfy 0 <= t1 - t0 <= 2π".into(),
        ));
    }
    if t1 <= t0 {
        return Ok(0.0);
    }
    let span = central_angle_span(curve, circle, t0, t1);
    Ok(span / TAU * tangent_density_total(curve, circle))
}

/// Measure of the full boundary, `∮ ds/ρ`.
pub fn boundary_measure_total(curve: &ConvexCurve, circle: &Circle) -> Result<f64> {
    Ok(tangent_density_total(curve, circle))
}

/// Rotation number of the tangent-chord map, in `(0, 1)`.
///
/// `Measure` mode returns `μ([A0, F(A0)]) / μ(∂K)`; `Orbit` mode returns the
/// Birkhoff average of the angular advance over `n_iter` iterates. The two
/// agree for smooth bodies.
pub fn rotation_number(
    curve: &ConvexCurve,
    circle: &Circle,
    a0: f64,
    mode: RotationMode,
    n_iter: usize,
) -> Result<f64> {
    validate_interior(curve, circle)?;
    match mode {
        RotationMode::Measure => {
            let t1 = map_f(curve, circle, a0)?;
            let span = normalize_angle(t1 - a0);
            let arc = invariant_measure(curve, circle, a0, a0 + span)?;
            let total = boundary_measure_total(curve, circle)?;
            Ok(arc / total)
        }
        RotationMode::Orbit => {
            let n = n_iter.max(1);
            let mut t = a0;
            let mut lift = 0.0;
            for _ in 0..n {
                let next = map_f(curve, circle, t)?;
                lift += normalize_angle(next - t);
                t = next;
            }
            Ok(lift / (TAU * n as f64))
        }
    }
}

/// Computes `n_steps` iterates of the map from parameter `a0` and records
/// chord lengths, the rotation estimate and any detected period.
pub fn compute_orbit(
    curve: &ConvexCurve,
    circle: &Circle,
    a0: f64,
    n_steps: usize,
    period_tol: f64,
) -> Result<OrbitRecord> {
    validate_interior(curve, circle)?;
    let mut params = Vec::with_capacity(n_steps + 1);
    let mut points = Vec::with_capacity(n_steps + 1);
    let mut chord_lengths = Vec::with_capacity(n_steps);
    params.push(normalize_angle(a0));
    points.push(curve.point_at(a0));
    let mut t = a0;
    let mut lift = 0.0;
    for _ in 0..n_steps {
        let chord = chord_from_point(curve, circle, t, true)?;
        lift += normalize_angle(chord.b_param - normalize_angle(t));
        chord_lengths.push((chord.b_point - chord.a_point).norm());
        t = chord.b_param;
        params.push(t);
        points.push(chord.b_point);
    }
    let rotation = lift / (TAU * n_steps.max(1) as f64);
    let mut record = OrbitRecord {
        params,
        points,
        chord_lengths,
        rotation_number: rotation,
        period: None,
        closure_error: f64::INFINITY,
        piecewise_body: curve.is_piecewise(),
    };
    if let Some((p, err)) = detect_period(&record, period_tol) {
        record.period = Some(p);
        record.closure_error = err;
    } else if let Some(best) = best_recurrence(&record) {
        record.closure_error = best;
    }
    Ok(record)
}

/// Smallest `n >= 3` with `|A_n - A_0| < tol`, together with that distance.
pub fn detect_period(orbit: &OrbitRecord, tol: f64) -> Option<(usize, f64)> {
    let a0 = orbit.points.first()?;
    for (n, p) in orbit.points.iter().enumerate().skip(3) {
        let d = (p - a0).norm();
        if d < tol {
            return Some((n, d));
        }
    }
    None
}

fn best_recurrence(orbit: &OrbitRecord) -> Option<f64> {
    let a0 = orbit.points.first()?;
    orbit
        .points
        .iter()
        .skip(3)
        .map(|p| (p - a0).norm())
        .min_by(|x, y| x.partial_cmp(y).unwrap())
}

/// All tangent chords on a uniform contact-angle grid (parallel).
pub fn tangent_chords(
    curve: &ConvexCurve,
    circle: &Circle,
    n_grid: usize,
) -> Result<Vec<TangentChord>> {
    validate_interior(curve, circle)?;
    let results = par::map_indices(n_grid, |k| {
        let phi = TAU * k as f64 / n_grid as f64;
        chord_at_unchecked(curve, circle, phi)
    });
    results.into_iter().collect()
}
