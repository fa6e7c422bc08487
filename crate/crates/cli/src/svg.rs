//! Minimal deterministic SVG scenes: body outline, interior circle, chord
//! fans and orbit polygons in a fixed 800×800 viewBox.

use std::fmt::Write as _;

use eqlab_core::geometry2d::{Circle, ConvexCurve, Point, TAU};

const VIEW: f64 = 800.0;

pub struct Scene {
    elements: String,
    scale: f64,
    cx: f64,
    cy: f64,
}

impl Scene {
    /// World window from the body's bounding box plus 10% padding.
    pub fn around(curve: &ConvexCurve) -> Self {
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for k in 0..720 {
            let p = curve.point_at(TAU * k as f64 / 720.0);
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(p.y);
            max_y = max_y.max(p.y);
        }
        let span = (max_x - min_x).max(max_y - min_y) * 1.2;
        Self {
            elements: String::new(),
            scale: VIEW / span,
            cx: 0.5 * (min_x + max_x),
            cy: 0.5 * (min_y + max_y),
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            VIEW / 2.0 + (p.x - self.cx) * self.scale,
            VIEW / 2.0 - (p.y - self.cy) * self.scale,
        )
    }

    pub fn add_curve(&mut self, curve: &ConvexCurve, stroke: &str) {
        let mut d = String::from("M");
        for k in 0..=720 {
            let p = curve.point_at(TAU * (k % 720) as f64 / 720.0);
            let (x, y) = self.map(p);
            let _ = write!(d, " {x:.6},{y:.6}");
            if k == 0 {
                d.push_str(" L");
            }
        }
        let _ = writeln!(
            self.elements,
            "  <path d=\"{d} Z\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"2\"/>"
        );
    }

    pub fn add_circle(&mut self, circle: &Circle, stroke: &str) {
        let (x, y) = self.map(circle.center);
        let r = circle.radius * self.scale;
        let _ = writeln!(
            self.elements,
            "  <circle cx=\"{x:.6}\" cy=\"{y:.6}\" r=\"{r:.6}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>"
        );
    }

    pub fn add_segment(&mut self, a: Point, b: Point, stroke: &str, width: f64) {
        let (x1, y1) = self.map(a);
        let (x2, y2) = self.map(b);
        let _ = writeln!(
            self.elements,
            "  <line x1=\"{x1:.6}\" y1=\"{y1:.6}\" x2=\"{x2:.6}\" y2=\"{y2:.6}\" stroke=\"{stroke}\" stroke-width=\"{width:.2}\"/>"
        );
    }

    pub fn add_polygon(&mut self, points: &[Point], stroke: &str) {
        if points.is_empty() {
            return;
        }
        let mut d = String::from("M");
        for (i, p) in points.iter().enumerate() {
            let (x, y) = self.map(*p);
            let _ = write!(d, " {x:.6},{y:.6}");
            if i == 0 {
                d.push_str(" L");
            }
        }
        let _ = writeln!(
            self.elements,
            "  <path d=\"{d}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1\"/>"
        );
    }

    pub fn add_dot(&mut self, p: Point, fill: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(
            self.elements,
            "  <circle cx=\"{x:.6}\" cy=\"{y:.6}\" r=\"4\" fill=\"{fill}\"/>"
        );
    }

    pub fn render(&self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {VIEW} {VIEW}\">\n\
             \x20 <rect width=\"{VIEW}\" height=\"{VIEW}\" fill=\"white\"/>\n\
             {}</svg>\n",
            self.elements
        )
    }
}
