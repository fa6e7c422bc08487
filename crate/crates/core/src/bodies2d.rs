//! Constructors for the concrete convex bodies used throughout the crate,
//! plus ingestion of user-supplied radial samples.
//!
//! All constructors place the body's distinguished point (pole, centre of
//! symmetry, or circle centre) at the origin of the base frame.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry2d::{
    unit, Circle, ConvexCurve, PeriodicCubic, Piece, PiecewiseCurve, Point, RadialCurve, RadialFn,
    TrigInterp, TAU,
};

const PI: f64 = std::f64::consts::PI;

/// A constructed body: boundary, optional canonical interior circle, and the
/// distinguished point (always the origin).
#[derive(Debug, Clone)]
pub struct Body {
    pub curve: ConvexCurve,
    pub circle: Option<Circle>,
    pub anchor: Point,
}

impl Body {
    fn new(curve: ConvexCurve, circle: Option<Circle>) -> Self {
        Self {
            curve,
            circle,
            anchor: Point::origin(),
        }
    }
}

// ── Ellipse ────────────────────────────────────────────────────────────────

/// Ellipse with semi-axes `a >= b > 0` about the origin, together with its
/// interior circle of radius `a·b/sqrt(a² + b²)` (the circle inscribed in
/// the rhombus on the four vertices). Every chord tangent to that circle
/// subtends a right angle at the centre, and the chord product is `r²`.
pub fn make_ellipse(a: f64, b: f64) -> Result<(ConvexCurve, Circle)> {
    if !(a >= b && b > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "ellipse semi-axes must satisfy a >= b > 0, got a={a}, b={b}"
        )));
    }
    let curve = ConvexCurve::from_radial(ellipse_radial(a, b)).validate_convex(1e-9)?;
    let r = a * b / (a * a + b * b).sqrt();
    Ok((curve, Circle::new(Point::origin(), r)?))
}

pub(crate) fn ellipse_radial(a: f64, b: f64) -> RadialCurve {
    let g = move |t: f64| {
        let s = t.sin();
        b * b + (a * a - b * b) * s * s
    };
    let g1 = move |t: f64| (a * a - b * b) * (2.0 * t).sin();
    let g2 = move |t: f64| 2.0 * (a * a - b * b) * (2.0 * t).cos();
    let ab = a * b;
    let r: RadialFn = Arc::new(move |t| ab / g(t).sqrt());
    let r1: RadialFn = Arc::new(move |t| -0.5 * ab * g1(t) / g(t).powf(1.5));
    let r2: RadialFn =
        Arc::new(move |t| ab * (0.75 * g1(t) * g1(t) / g(t).powf(2.5) - 0.5 * g2(t) / g(t).powf(1.5)));
    RadialCurve::from_functions(r, r1, r2)
}

/// Disc of the given radius about the origin.
pub fn make_disc(radius: f64) -> Result<ConvexCurve> {
    if !(radius > 0.0) {
        return Err(Error::Domain("disc radius must be positive".into()));
    }
    ConvexCurve::from_radial(crate::geometry2d::constant_radial(radius)).validate_convex(1e-9)
}

// ── Limaçon ────────────────────────────────────────────────────────────────

/// Limaçon `r(θ) = b + a·cos θ` about its pole. Convex iff `b >= 2a`; every
/// chord through the pole has length `2b`, and the chord midpoints lie on
/// the circle of radius `a/2` centred at `(a/2, 0)`.
pub fn make_limacon(a: f64, b: f64) -> Result<ConvexCurve> {
    if !(a >= 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "limaçon parameters must satisfy a >= 0, b > 0, got a={a}, b={b}"
        )));
    }
    if b < 2.0 * a {
        return Err(Error::InvalidBody(format!(
            "nonconvex limaçon: requires b >= 2a, got a={a}, b={b}"
        )));
    }
    let r: RadialFn = Arc::new(move |t: f64| b + a * t.cos());
    let r1: RadialFn = Arc::new(move |t: f64| -a * t.sin());
    let r2: RadialFn = Arc::new(move |t: f64| -a * t.cos());
    ConvexCurve::from_radial(RadialCurve::from_functions(r, r1, r2)).validate_convex(1e-9)
}

// ── Hexagon-and-arcs curve (Yanagihara) ───────────────────────────────────

/// The classical hexagon construction with a single equipotential point:
/// take a regular hexagon `ABCDEF` of circumradius 1 centred at `O`, the
/// circles through `O` circumscribing triangles `OBC`, `ODE`, `OFA`, and
/// form the closed curve from segments `AB`, `CD`, `EF` and the three outer
/// arcs. Every chord through `O` has product exactly 1.
///
/// Orientation: vertex `A` sits at angle π/3 so that segment `AB` is
/// horizontal on top.
pub fn make_yanagihara() -> ConvexCurve {
    let vertex = |k: usize| -> Point {
        let ang = PI / 3.0 * (k + 1) as f64;
        Point::origin() + unit(ang)
    };
    let (a, b, c, d, e, f) = (
        vertex(0),
        vertex(1),
        vertex(2),
        vertex(3),
        vertex(4),
        vertex(5),
    );
    let centroid = |p: Point, q: Point| -> Point {
        Point::new((p.x + q.x) / 3.0, (p.y + q.y) / 3.0)
    };
    let q_bc = centroid(b, c);
    let q_de = centroid(d, e);
    let q_fa = centroid(f, a);
    let radius = (1.0f64 / 3.0).sqrt();
    let arc = |center: Point, from: Point, to: Point| -> Piece {
        let a0 = (from - center).y.atan2((from - center).x);
        let mut a1 = (to - center).y.atan2((to - center).x);
        while a1 <= a0 {
            a1 += TAU;
        }
        Piece::Arc {
            center,
            radius,
            start_angle: a0,
            end_angle: a1,
            ccw: true,
        }
    };
    let pieces = vec![
        arc(q_fa, f, a),
        Piece::Segment { start: a, end: b },
        arc(q_bc, b, c),
        Piece::Segment { start: c, end: d },
        arc(q_de, d, e),
        Piece::Segment { start: e, end: f },
    ];
    let curve = PiecewiseCurve::new(pieces).expect("hexagon construction is a valid convex loop");
    ConvexCurve::from_piecewise(curve)
}

// ── Parabola body ──────────────────────────────────────────────────────────

/// Stable reciprocal of the parabola's polar radius: `w(θ) = 1/r(θ)` for the
/// parabola `y = x²/2 − 3/2` about the origin. Rationalised form
/// `w = (sqrt(1 + 2cos²θ) − sin θ)/3`, finite for all θ, zero only at π/2.
fn parab_w(t: f64) -> (f64, f64, f64) {
    let (s, c) = t.sin_cos();
    let sq = (1.0 + 2.0 * c * c).sqrt();
    let w = (sq - s) / 3.0;
    // S = sqrt(1+2cos²θ): S' = -sin(2θ)/S, S'' = -2cos(2θ)/S - sin²(2θ)/S³
    let s2 = (2.0 * t).sin();
    let c2 = (2.0 * t).cos();
    let sq1 = -s2 / sq;
    let sq2 = -2.0 * c2 / sq - s2 * s2 / (sq * sq * sq);
    let w1 = (sq1 - c) / 3.0;
    let w2 = (sq2 + s) / 3.0;
    (w, w1, w2)
}

/// Polar radius of the parabola `y = x²/2 − 3/2` about the origin, with
/// derivatives. Defined for all θ except π/2 (mod 2π) where it diverges.
fn parab_r(t: f64) -> (f64, f64, f64) {
    let (c, _) = (t.cos(), ());
    let (w, w1, w2) = parab_w(t);
    let r = if c.abs() >= 0.1 {
        let s = t.sin();
        (s + (1.0 + 2.0 * c * c).sqrt()) / (c * c)
    } else {
        // Near cos θ = 0 the closed form is 0/0-prone; use the positive
        // root of r²cos²θ − 2r·sinθ − 3 = 0 instead.
        1.0 / w
    };
    let r1 = -w1 / (w * w);
    let r2 = (2.0 * w1 * w1 - w * w2) / (w * w * w);
    (r, r1, r2)
}

/// Polar radius of the induced partner curve (the locus of chord endpoints
/// `B` rotated into the parabola's sector): `r₁ = r/sqrt(r²sin²θ + 2r·sinθ + 2)`,
/// evaluated stably as `1/sqrt((sinθ + w)² + w²)` with `w = 1/r`. Closed and
/// strictly convex on all of `[0, 2π]`.
fn parab_partner(t: f64) -> (f64, f64, f64) {
    let s = t.sin();
    let c = t.cos();
    let (w, w1, w2) = parab_w(t);
    let g = (s + w) * (s + w) + w * w;
    let g1 = 2.0 * (s + w) * (c + w1) + 2.0 * w * w1;
    let g2 = 2.0 * (c + w1) * (c + w1) + 2.0 * (s + w) * (-s + w2) + 2.0 * w1 * w1 + 2.0 * w * w2;
    let v = g.powf(-0.5);
    let v1 = -0.5 * g1 * g.powf(-1.5);
    let v2 = 0.75 * g1 * g1 * g.powf(-2.5) - 0.5 * g2 * g.powf(-1.5);
    (v, v1, v2)
}

/// The parabola `y = x²/2 − 3/2` in polar form about the origin, as an open
/// radial curve (diverges at θ = π/2; not closed, not convex-validated).
/// Useful for curvature checks against the Cartesian parabola.
pub fn parabola_polar() -> RadialCurve {
    RadialCurve::from_functions(
        Arc::new(|t| parab_r(t).0),
        Arc::new(|t| parab_r(t).1),
        Arc::new(|t| parab_r(t).2),
    )
}

/// The closed partner curve of the parabola construction (the rotated locus
/// of second chord endpoints), strictly convex on `[0, 2π]`.
pub fn parabola_partner_polar() -> RadialCurve {
    RadialCurve::from_functions(
        Arc::new(|t| parab_partner(t).0),
        Arc::new(|t| parab_partner(t).1),
        Arc::new(|t| parab_partner(t).2),
    )
}

/// Identity satisfied by the parabola's polar radius:
/// `r²cos²θ − 2r·sinθ − 3 = 0`.
pub fn parabola_identity_residual(t: f64) -> f64 {
    let (r, _, _) = parab_r(t);
    let c = t.cos();
    r * r * c * c - 2.0 * r * t.sin() - 3.0
}

/// The centrally symmetric body assembled from the parabola arc (polar
/// sector `[5π/4, 7π/4]`), the partner arc rotated a quarter turn
/// counterclockwise, and their reflections through the origin. The unit
/// circle is its interior circle and every tangent chord has product 1.
pub fn make_parabola_body() -> (ConvexCurve, Circle) {
    // Sector dispatch by polar angle; the four junctions sit at odd
    // multiples of π/4.
    let eval = |t: f64, which: usize| -> f64 {
        let tt = (t - PI / 4.0).rem_euclid(TAU) + PI / 4.0; // in [π/4, 9π/4)
        let (f, shift): (fn(f64) -> (f64, f64, f64), f64) = if tt < 0.75 * PI {
            (parab_r, -PI)
        } else if tt < 1.25 * PI {
            (parab_partner, -1.5 * PI)
        } else if tt < 1.75 * PI {
            (parab_r, 0.0)
        } else {
            (parab_partner, -0.5 * PI)
        };
        let v = f(tt + shift);
        [v.0, v.1, v.2][which]
    };
    let r: RadialFn = Arc::new(move |t| eval(t, 0));
    let r1: RadialFn = Arc::new(move |t| eval(t, 1));
    let r2: RadialFn = Arc::new(move |t| eval(t, 2));
    let curve = RadialCurve::from_functions(r, r1, r2)
        .with_breakpoints(vec![0.25 * PI, 0.75 * PI, 1.25 * PI, 1.75 * PI]);
    let curve = ConvexCurve::from_radial(curve)
        .validate_convex(1e-9)
        .expect("parabola body is convex");
    let circle = Circle::new(Point::origin(), 1.0).expect("unit circle");
    (curve, circle)
}

// ── Sampled boundaries ─────────────────────────────────────────────────────

/// Builds a convex curve through `(θ, r)` samples: trigonometric
/// interpolation on uniform grids, a periodic cubic spline otherwise.
/// Rejects nonconvex data, listing the offending angles.
pub fn load_radial_samples(samples: &[(f64, f64)]) -> Result<ConvexCurve> {
    if samples.len() < 16 {
        return Err(Error::InvalidBody(format!(
            "need at least 16 radial samples, got {}",
            samples.len()
        )));
    }
    for w in samples.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::InvalidBody(
                "sample angles must be strictly increasing".into(),
            ));
        }
    }
    let first = samples[0].0;
    let last = samples[samples.len() - 1].0;
    if !(-1e-9..=1e-2).contains(&first) || last >= TAU || TAU - (last - first) > TAU / 2.0 {
        return Err(Error::InvalidBody(
            "sample angles must cover [0, 2π) starting near 0".into(),
        ));
    }
    if samples.iter().any(|&(_, r)| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidBody("radial samples must be positive".into()));
    }

    let n = samples.len();
    let step = TAU / n as f64;
    let uniform = samples
        .iter()
        .enumerate()
        .all(|(k, &(t, _))| (t - (first + k as f64 * step)).abs() < 1e-9);

    let curve = if uniform {
        let interp = Arc::new(TrigInterp::fit_uniform(samples));
        let (i1, i2) = (interp.clone(), interp.clone());
        RadialCurve::from_functions(
            Arc::new(move |t| interp.eval(t)),
            Arc::new(move |t| i1.eval_d1(t)),
            Arc::new(move |t| i2.eval_d2(t)),
        )
    } else {
        let spline = Arc::new(PeriodicCubic::fit(samples)?);
        let (s1, s2) = (spline.clone(), spline.clone());
        RadialCurve::from_functions(
            Arc::new(move |t| spline.eval(t)),
            Arc::new(move |t| s1.eval_d1(t)),
            Arc::new(move |t| s2.eval_d2(t)),
        )
    };
    ConvexCurve::from_radial(curve).validate_convex(1e-6)
}

// ── BodySpec (JSON external interface) ─────────────────────────────────────

/// JSON-facing body description:
/// `{"kind": string, "params": object, "samples": [[θ, r], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodySpec {
    pub kind: String,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    pub samples: Option<Vec<[f64; 2]>>,
}

impl BodySpec {
    fn param(&self, name: &str) -> Result<f64> {
        self.params
            .get(name)
            .and_then(|v| v.as_f64())
            .ok_or_else(|| {
                Error::InvalidBody(format!(
                    "body kind '{}' requires numeric parameter '{name}'",
                    self.kind
                ))
            })
    }

    /// Builds the described body.
    pub fn build(&self) -> Result<Body> {
        match self.kind.as_str() {
            "ellipse" => {
                let (curve, circle) = make_ellipse(self.param("a")?, self.param("b")?)?;
                Ok(Body::new(curve, Some(circle)))
            }
            "disc" => {
                let radius = self.param("radius")?;
                let curve = make_disc(radius)?;
                // Any concentric circle works for a disc; half the radius is
                // the documented convention.
                let circle = Circle::new(Point::origin(), radius / 2.0)?;
                Ok(Body::new(curve, Some(circle)))
            }
            "limacon" => {
                let curve = make_limacon(self.param("a")?, self.param("b")?)?;
                Ok(Body::new(curve, None))
            }
            "yanagihara" => Ok(Body::new(make_yanagihara(), None)),
            "parabola_body" => {
                let (curve, circle) = make_parabola_body();
                Ok(Body::new(curve, Some(circle)))
            }
            "radial_samples" => {
                let samples: Vec<(f64, f64)> = self
                    .samples
                    .as_ref()
                    .ok_or_else(|| {
                        Error::InvalidBody("kind 'radial_samples' requires samples".into())
                    })?
                    .iter()
                    .map(|s| (s[0], s[1]))
                    .collect();
                Ok(Body::new(load_radial_samples(&samples)?, None))
            }
            other => Err(Error::InvalidBody(format!("unknown body kind '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry2d::curvature_polar;

    #[test]
    fn ellipse_circle_radius_and_lambda() {
        let (_, circle) = make_ellipse(1.0, 1.0).unwrap();
        assert!((circle.radius - 1.0 / 2.0f64.sqrt()).abs() < 1e-14);
        let (_, circle) = make_ellipse(2.0, 1.0).unwrap();
        assert!((circle.radius - 2.0 / 5.0f64.sqrt()).abs() < 1e-14);
        let lambda = circle.radius * circle.radius;
        assert!((lambda - 0.8).abs() < 1e-14);
        assert!(make_ellipse(0.0, -1.0).is_err());
    }

    #[test]
    fn limacon_diametral_chords() {
        let curve = make_limacon(1.0, 3.0).unwrap();
        for k in 0..360 {
            let t = TAU * k as f64 / 360.0;
            let len = curve.radius_at(t) + curve.radius_at(t + PI);
            assert!((len - 6.0).abs() < 1e-12);
        }
        assert!(matches!(
            make_limacon(1.0, 1.0),
            Err(Error::InvalidBody(msg)) if msg.contains("nonconvex")
        ));
        // a = 0 degenerates to a circle
        let circle = make_limacon(0.0, 1.0).unwrap();
        assert!((circle.radius_at(0.4) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn limacon_midpoint_locus_is_circle() {
        let curve = make_limacon(1.0, 3.0).unwrap();
        // midpoint of the chord through the pole in direction ψ
        for k in 0..720 {
            let psi = TAU * k as f64 / 720.0;
            let fwd = curve.radius_at(psi);
            let back = curve.radius_at(psi + PI);
            let mid = Point::origin() + 0.5 * (fwd - back) * unit(psi);
            let d = (mid - Point::new(0.5, 0.0)).norm();
            assert!((d - 0.5).abs() < 1e-10, "midpoint fit residual {d}");
        }
    }

    #[test]
    fn yanagihara_products() {
        let curve = make_yanagihara();
        // chord through O perpendicular to the top segment
        let up = curve.radius_at(PI / 2.0);
        let down = curve.radius_at(1.5 * PI);
        assert!((up - 0.75f64.sqrt()).abs() < 1e-12);
        assert!((down - 2.0 / 3.0f64.sqrt()).abs() < 1e-12);
        assert!((up * down - 1.0).abs() < 1e-12);
        // chord along a vertex direction
        let v = curve.radius_at(0.0) * curve.radius_at(PI);
        assert!((v - 1.0).abs() < 1e-12);
        // dense grid
        let mut worst = 0.0f64;
        for k in 0..3600 {
            let psi = TAU * k as f64 / 3600.0;
            let p = curve.radius_at(psi) * curve.radius_at(psi + PI);
            worst = worst.max((p - 1.0).abs());
        }
        assert!(worst < 1e-9, "product deviation {worst}");
    }

    #[test]
    fn parabola_point_values() {
        let (r, _, _) = parab_r(0.0);
        assert!((r - 3.0f64.sqrt()).abs() < 1e-14);
        let (p, _, _) = parab_partner(0.0);
        assert!((p - 1.5f64.sqrt()).abs() < 1e-14);
        // |AP| at x = √3 on the parabola
        let x = 3.0f64.sqrt();
        let ap = (-x * x / 2.0 + x.powi(4) / 4.0 + 1.25).sqrt();
        assert!((ap - 2.0f64.sqrt()).abs() < 1e-14);
        assert!((r / ap - p).abs() < 1e-14);
    }

    #[test]
    fn parabola_identity_on_arc_grid() {
        let mut worst = 0.0f64;
        for k in 0..4096 {
            let t = 1.25 * PI + 0.5 * PI * k as f64 / 4095.0;
            worst = worst.max(parabola_identity_residual(t).abs());
        }
        assert!(worst < 1e-10, "identity residual {worst}");
    }

    #[test]
    fn parabola_partner_strictly_convex() {
        let partner = parabola_partner_polar();
        let mut min_kappa = f64::INFINITY;
        for k in 0..4096 {
            let t = TAU * k as f64 / 4096.0;
            min_kappa = min_kappa.min(curvature_polar(&partner, t).unwrap());
        }
        assert!(min_kappa > 0.0, "min curvature {min_kappa}");
    }

    #[test]
    fn parabola_body_symmetric_and_junction_tangent() {
        let (curve, circle) = make_parabola_body();
        assert!((circle.radius - 1.0).abs() < 1e-15);
        // central symmetry
        let mut worst = 0.0f64;
        for k in 0..2048 {
            let t = TAU * k as f64 / 2048.0;
            worst = worst.max((curve.radius_at(t) - curve.radius_at(t + PI)).abs());
        }
        assert!(worst < 1e-10);
        // junction points are C = (-1,-1) and D = (1,-1) and their images
        let d = curve.point_at(1.75 * PI);
        assert!((d - Point::new(1.0, -1.0)).norm() < 1e-10);
        let c = curve.point_at(1.25 * PI);
        assert!((c - Point::new(-1.0, -1.0)).norm() < 1e-10);
        // shared tangents at the junctions
        for t in [0.25 * PI, 0.75 * PI, 1.25 * PI, 1.75 * PI] {
            let before = curve.tangent_at(t - 1e-7);
            let after = curve.tangent_at(t + 1e-7);
            let mismatch = crate::geometry2d::angle_between(before, after);
            assert!(mismatch < 1e-6, "tangent mismatch {mismatch} at {t}");
        }
        // tighter check by one-sided extrapolation at D: parabola tangent
        // direction at (1,-1) is (1,1)/√2
        let tang = curve.tangent_at(1.75 * PI - 1e-9);
        let expected = crate::geometry2d::Vector::new(1.0, 1.0).normalize();
        assert!(
            crate::geometry2d::angle_between(tang, expected) < 1e-7,
            "parabola-side tangent at D"
        );
    }

    #[test]
    fn radial_samples_roundtrip() {
        // 64 samples of the unit circle
        let samples: Vec<(f64, f64)> = (0..64).map(|k| (TAU * k as f64 / 64.0, 1.0)).collect();
        let c = load_radial_samples(&samples).unwrap();
        assert!((c.radius_at(0.37) - 1.0).abs() < 1e-12);
        assert!((c.curvature_at(1.9).unwrap() - 1.0).abs() < 1e-9);

        // 256 samples of the ellipse: perimeter matches the analytic body
        let (ellipse, _) = make_ellipse(2.0, 1.0).unwrap();
        let samples: Vec<(f64, f64)> = (0..256)
            .map(|k| {
                let t = TAU * k as f64 / 256.0;
                (t, ellipse.radius_at(t))
            })
            .collect();
        let c = load_radial_samples(&samples).unwrap();
        assert!((c.perimeter() - ellipse.perimeter()).abs() < 1e-6);

        // a five-pointed star is rejected
        let samples: Vec<(f64, f64)> = (0..64)
            .map(|k| {
                let t = TAU * k as f64 / 64.0;
                (t, 1.0 + 0.3 * (5.0 * t).cos())
            })
            .collect();
        match load_radial_samples(&samples) {
            Err(Error::NonConvex { offending }) => assert!(!offending.is_empty()),
            other => panic!("expected NonConvex, got {other:?}"),
        }
    }

    #[test]
    fn body_spec_json_schema() {
        let spec: BodySpec =
            serde_json::from_str(r#"{"kind": "ellipse", "params": {"a": 2.0, "b": 1.0}}"#).unwrap();
        let body = spec.build().unwrap();
        assert!((body.circle.unwrap().radius - 2.0 / 5.0f64.sqrt()).abs() < 1e-14);

        let spec: BodySpec = serde_json::from_str(r#"{"kind": "yanagihara"}"#).unwrap();
        assert!(spec.build().unwrap().circle.is_none());

        let samples: Vec<[f64; 2]> = (0..32)
            .map(|k| [TAU * k as f64 / 32.0, 2.0])
            .collect();
        let spec = BodySpec {
            kind: "radial_samples".into(),
            params: Default::default(),
            samples: Some(samples),
        };
        let body = spec.build().unwrap();
        assert!((body.curve.radius_at(1.0) - 2.0).abs() < 1e-10);
    }
}
