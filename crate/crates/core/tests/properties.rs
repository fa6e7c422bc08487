//! Cross-module invariants: intersection counts, tangent-length equality,
//! arc-length additivity, map bijectivity, and rotation-number coherence.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eqlab_core::bodies2d::{make_ellipse, make_limacon, make_parabola_body, make_yanagihara};
use eqlab_core::geometry2d::{
    tangent_lines_from_point, unit, Circle, ConvexCurve, Line, Point, Vector, TAU,
};
use eqlab_core::tangent_dynamics::{map_f, map_f_inverse};

fn test_bodies() -> Vec<ConvexCurve> {
    vec![
        make_ellipse(2.0, 1.0).unwrap().0,
        make_limacon(1.0, 3.0).unwrap(),
        make_yanagihara(),
        make_parabola_body().0,
    ]
}

#[test]
fn convex_curves_have_at_most_two_crossings() {
    let bodies = test_bodies();
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for _ in 0..10_000 {
        let body = &bodies[rng.gen_range(0..bodies.len())];
        let p = Point::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let ang = rng.gen_range(0.0..TAU);
        let line = Line::new(p, unit(ang)).unwrap();
        let hits = body.line_intersections(&line).unwrap();
        assert!(hits.len() <= 2, "{} crossings", hits.len());
        for h in &hits {
            // the reported point lies on the line and on the curve
            assert!(line.signed_distance(h.point).abs() < 1e-9);
            assert!((body.point_at(h.param) - h.point).norm() < 1e-9);
        }
    }
}

#[test]
fn tangent_segments_are_equal() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10_000 {
        let center = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let radius = rng.gen_range(0.05..2.0);
        let circle = Circle::new(center, radius).unwrap();
        let dist = radius * rng.gen_range(1.001..5.0);
        let ang = rng.gen_range(0.0..TAU);
        let x = center + dist * unit(ang);
        let pair = tangent_lines_from_point(&circle, x).unwrap();
        let l1 = (pair.left.contact - x).norm();
        let l2 = (pair.right.contact - x).norm();
        assert!((l1 - l2).abs() < 1e-12, "tangent lengths differ by {}", (l1 - l2).abs());
        assert!((l1 - pair.segment_length).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arc_length_additive(t0 in 0.0..TAU, frac in 0.01..0.99f64, span in 0.2..TAU) {
        let (curve, _) = make_ellipse(2.0, 1.0).unwrap();
        let t_mid = t0 + frac * span;
        let t1 = t0 + span;
        let whole = curve.arc_length(t0, t1);
        let parts = curve.arc_length(t0, t_mid) + curve.arc_length(t_mid, t1);
        prop_assert!((whole - parts).abs() < 1e-10, "additivity violated by {}", (whole - parts).abs());
    }

    #[test]
    fn map_roundtrip_on_random_circles(cx in -0.4..0.4f64, cy in -0.2..0.2f64, r in 0.1..0.35f64, t in 0.0..TAU) {
        let (curve, _) = make_ellipse(2.0, 1.0).unwrap();
        let circle = Circle::new(Point::new(cx, cy), r).unwrap();
        let fwd = map_f(&curve, &circle, t).unwrap();
        let back = map_f_inverse(&curve, &circle, fwd).unwrap();
        let err = (curve.point_at(back) - curve.point_at(t)).norm();
        prop_assert!(err < 1e-9, "roundtrip error {err}");
    }

    #[test]
    fn transformed_bodies_keep_crossing_counts(rot in 0.0..TAU, tx in -3.0..3.0f64, ty in -3.0..3.0f64, ang in 0.0..TAU, px in -2.0..2.0f64, py in -2.0..2.0f64) {
        let body = make_yanagihara().transformed(rot, Vector::new(tx, ty));
        let line = Line::new(Point::new(px + tx, py + ty), unit(ang)).unwrap();
        let hits = body.line_intersections(&line).unwrap();
        prop_assert!(hits.len() <= 2);
    }
}
