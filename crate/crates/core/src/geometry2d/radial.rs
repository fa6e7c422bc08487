//! Radial (polar-graph) curves `theta -> r(theta)` about the origin.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry2d::primitives::TAU;
use crate::par;

pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A curve given in polar coordinates about the origin, with first and
/// second derivative functions (analytic when available, otherwise central
/// finite differences with a declared step).
#[derive(Clone)]
pub struct RadialCurve {
    r: RadialFn,
    r1: RadialFn,
    r2: RadialFn,
    /// Parameters of interior smoothness breaks (piecewise-assembled bodies).
    breakpoints: Vec<f64>,
    convex_validated: bool,
}

impl std::fmt::Debug for RadialCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialCurve")
            .field("breakpoints", &self.breakpoints)
            .field("convex_validated", &self.convex_validated)
            .finish_non_exhaustive()
    }
}

impl RadialCurve {
    /// Builds from explicit radius and derivative functions. No validation.
    pub fn from_functions(r: RadialFn, r1: RadialFn, r2: RadialFn) -> Self {
        Self {
            r,
            r1,
            r2,
            breakpoints: Vec::new(),
            convex_validated: false,
        }
    }

    /// Builds from a radius function alone; derivatives use central finite
    /// differences with step `h` (second derivative by a 5-point stencil).
    pub fn from_function_fd(r: RadialFn, h: f64) -> Self {
        let rf = r.clone();
        let r1: RadialFn = Arc::new(move |t: f64| (rf(t + h) - rf(t - h)) / (2.0 * h));
        let rf = r.clone();
        let r2: RadialFn = Arc::new(move |t: f64| {
            (-rf(t + 2.0 * h) + 16.0 * rf(t + h) - 30.0 * rf(t) + 16.0 * rf(t - h)
                - rf(t - 2.0 * h))
                / (12.0 * h * h)
        });
        Self::from_functions(r, r1, r2)
    }

    /// Declares interior smoothness breaks; quadrature splits at these.
    pub fn with_breakpoints(mut self, breaks: Vec<f64>) -> Self {
        self.breakpoints = breaks;
        self
    }

    #[inline]
    pub fn radius(&self, theta: f64) -> f64 {
        (self.r)(theta)
    }

    #[inline]
    pub fn radius_d1(&self, theta: f64) -> f64 {
        (self.r1)(theta)
    }

    #[inline]
    pub fn radius_d2(&self, theta: f64) -> f64 {
        (self.r2)(theta)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn is_convex_validated(&self) -> bool {
        self.convex_validated
    }

    /// Curvature in polar coordinates,
    /// `κ = (r² − r·r″ + 2·r′²) / (r′² + r²)^{3/2}`.
    pub fn curvature(&self, theta: f64) -> Result<f64> {
        let r = self.radius(theta);
        let d1 = self.radius_d1(theta);
        let d2 = self.radius_d2(theta);
        if !(r.is_finite() && d1.is_finite() && d2.is_finite()) {
            return Err(Error::Evaluation { theta });
        }
        let num = r * r - r * d2 + 2.0 * d1 * d1;
        let den = (d1 * d1 + r * r).powf(1.5);
        if den == 0.0 || !den.is_finite() {
            return Err(Error::Evaluation { theta });
        }
        Ok(num / den)
    }

    /// Speed of the polar parametrisation, `sqrt(r² + r′²)`.
    #[inline]
    pub fn speed(&self, theta: f64) -> f64 {
        let r = self.radius(theta);
        let d1 = self.radius_d1(theta);
        (r * r + d1 * d1).sqrt()
    }

    /// Validates closedness, positivity and convexity on a 4096-point grid;
    /// curvature must stay above `-kappa_tol`. On success the curve is marked
    /// convex-validated.
    pub fn validate_convex(mut self, kappa_tol: f64) -> Result<Self> {
        const N: usize = 4096;
        for k in 0..8 {
            let t = TAU * k as f64 / 8.0;
            let gap = (self.radius(t + TAU) - self.radius(t)).abs();
            if gap > 1e-12 {
                return Err(Error::InvalidBody(format!(
                    "radius not 2π-periodic at theta = {t:.6} (gap {gap:.3e})"
                )));
            }
        }
        let checks = par::map_indices(N, |k| {
            let t = TAU * k as f64 / N as f64;
            let r = self.radius(t);
            if !(r.is_finite() && r > 0.0) {
                return Some((t, f64::NEG_INFINITY));
            }
            match self.curvature(t) {
                Ok(kappa) if kappa >= -kappa_tol => None,
                Ok(kappa) => Some((t, kappa)),
                Err(_) => Some((t, f64::NEG_INFINITY)),
            }
        });
        let offending: Vec<f64> = checks.into_iter().flatten().map(|(t, _)| t).collect();
        if !offending.is_empty() {
            return Err(Error::NonConvex { offending });
        }
        self.convex_validated = true;
        Ok(self)
    }
}

/// Curvature of a radial curve at `theta` by the polar formula.
pub fn curvature_polar(curve: &RadialCurve, theta: f64) -> Result<f64> {
    curve.curvature(theta)
}

/// Circle of radius `r` about the origin as a radial curve.
pub fn constant_radial(r: f64) -> RadialCurve {
    RadialCurve::from_functions(
        Arc::new(move |_| r),
        Arc::new(|_| 0.0),
        Arc::new(|_| 0.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_curvature_is_inverse_radius() {
        let c = constant_radial(2.0);
        for t in [0.0, 0.7, 3.0, 6.0] {
            assert!((c.curvature(t).unwrap() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn fd_derivatives_match_analytic() {
        let r: RadialFn = Arc::new(|t: f64| 2.0 + 0.3 * t.cos());
        let fd = RadialCurve::from_function_fd(r, 1e-5);
        let t = 0.9;
        assert!((fd.radius_d1(t) + 0.3 * t.sin()).abs() < 1e-9);
        assert!((fd.radius_d2(t) + 0.3 * t.cos()).abs() < 1e-5);
    }

    #[test]
    fn validate_rejects_nonconvex() {
        let r: RadialFn = Arc::new(|t: f64| 1.0 + 0.3 * (5.0 * t).cos());
        let r1: RadialFn = Arc::new(|t: f64| -1.5 * (5.0 * t).sin());
        let r2: RadialFn = Arc::new(|t: f64| -7.5 * (5.0 * t).cos());
        let c = RadialCurve::from_functions(r, r1, r2);
        match c.validate_convex(1e-9) {
            Err(Error::NonConvex { offending }) => assert!(!offending.is_empty()),
            other => panic!("expected NonConvex, got {other:?}"),
        }
    }
}
