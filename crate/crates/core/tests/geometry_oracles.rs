//! Frozen-oracle checks: quantities computed by independent routes
//! (arithmetic-geometric mean, Cartesian curvature, direct substitution)
//! compared against the library's geometric code paths.

use eqlab_core::bodies2d::{make_ellipse, parabola_polar};
use eqlab_core::geometry2d::{
    curvature_polar, tangent_lines_from_point, unit, Circle, Line, Point, TAU,
};
use eqlab_core::tangent_dynamics::tangent_chord_at;

/// Complete elliptic integral of the second kind via the arithmetic-
/// geometric mean; an independent route to the ellipse perimeter.
fn agm_perimeter(a: f64, b: f64) -> f64 {
    let k2 = 1.0 - (b / a) * (b / a);
    let kp = (1.0 - k2).sqrt();
    let mut an = 1.0f64;
    let mut bn = kp;
    let mut cn2 = k2; // c_n², starting from c_0² = k²
    let mut sum = 0.5 * cn2; // 2^{n-1} c_n² at n = 0
    let mut pow = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (an - bn);
        let a_next = 0.5 * (an + bn);
        bn = (an * bn).sqrt();
        an = a_next;
        pow *= 2.0;
        cn2 = c * c;
        sum += pow * cn2;
        if c.abs() < 1e-18 {
            break;
        }
    }
    let big_k = std::f64::consts::FRAC_PI_2 / an;
    let big_e = big_k * (1.0 - sum);
    4.0 * a * big_e
}

#[test]
fn ellipse_perimeter_matches_agm() {
    let (curve, _) = make_ellipse(2.0, 1.0).unwrap();
    let perimeter = curve.perimeter();
    let oracle = agm_perimeter(2.0, 1.0);
    assert!(
        (perimeter - oracle).abs() < 1e-8,
        "perimeter {perimeter} vs AGM {oracle}"
    );
}

#[test]
fn parabola_polar_curvature_matches_cartesian() {
    // The parabola y = x²/2 - 3/2 passes through (√3, 0), i.e. θ = 0 at
    // radius √3. Cartesian curvature y''/(1 + y'²)^{3/2} = 1/(1 + x²)^{3/2}.
    let curve = parabola_polar();
    let kappa = curvature_polar(&curve, 0.0).unwrap();
    let x = 3.0f64.sqrt();
    let oracle = 1.0 / (1.0 + x * x).powf(1.5);
    assert!((kappa - oracle).abs() < 1e-12, "kappa {kappa} vs {oracle}");
    assert!((oracle - 0.125).abs() < 1e-15);
}

#[test]
fn ellipse_vertex_chord_by_substitution() {
    // The line x + 2y = 2 meets x²/4 + y² = 1 exactly at the vertices
    // (2, 0) and (0, 1).
    let (curve, _) = make_ellipse(2.0, 1.0).unwrap();
    let dir = (Point::new(0.0, 1.0) - Point::new(2.0, 0.0)).normalize();
    let line = Line::new(Point::new(2.0, 0.0), dir).unwrap();
    let hits = curve.line_intersections(&line).unwrap();
    assert_eq!(hits.len(), 2);
    let mut pts: Vec<Point> = hits.iter().map(|h| h.point).collect();
    pts.sort_by(|p, q| p.x.partial_cmp(&q.x).unwrap());
    assert!((pts[0] - Point::new(0.0, 1.0)).norm() < 1e-10);
    assert!((pts[1] - Point::new(2.0, 0.0)).norm() < 1e-10);
}

#[test]
fn rhombus_tangency_chord_product() {
    // Contact point of the circle with the rhombus side x + 2y = 2: the
    // chord endpoints are the vertices and the tangent-segment product is
    // the squared circle radius 4/5.
    let (curve, circle) = make_ellipse(2.0, 1.0).unwrap();
    let phi = 2.0f64.atan2(1.0); // direction of (1, 2)/√5 from the origin
    let chord = tangent_chord_at(&curve, &circle, phi).unwrap();
    assert!((chord.product() - 0.8).abs() < 1e-10);
    // circle on the left of A -> B puts A at (2, 0), B at (0, 1)
    assert!((chord.a_point - Point::new(2.0, 0.0)).norm() < 1e-9);
    assert!((chord.b_point - Point::new(0.0, 1.0)).norm() < 1e-9);
}

#[test]
fn tangent_contacts_by_right_triangle() {
    let circle = Circle::new(Point::origin(), 1.0).unwrap();
    let pair = tangent_lines_from_point(&circle, Point::new(2.0, 0.0)).unwrap();
    // Right-triangle geometry: contact at (1/2, ±√3/2), length √3.
    assert!((pair.segment_length - 3.0f64.sqrt()).abs() < 1e-12);
    let expected = Point::origin() + unit(TAU / 6.0);
    assert!((pair.left.contact - expected).norm() < 1e-12);
}
