//! Constancy profiles over tangent chords and chords through a point, the
//! trigonometric chord-length solvers, central-symmetry testing, and the
//! constant-angle envelope explorer.

use crate::error::{Error, Result};
use crate::fit::{fit_circle, fit_ellipse, CircleFit, EllipseFit};
use crate::geometry2d::{
    rotate, unit, Circle, ConvexCurve, Line, Point, TAU,
};
use crate::numerics::bisect;
use crate::par;
use crate::tangent_dynamics::{chord_at_unchecked, validate_interior};

const PI: f64 = std::f64::consts::PI;
const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

/// The chord functional whose constancy is examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    /// `|AP| · |PB|`
    Product,
    /// `|AB|`
    Length,
    /// `1/|AP| + 1/|PB|`
    ReciprocalSum,
    /// Angle the chord subtends at the reference point.
    SubtendedAngle,
}

impl Functional {
    pub fn name(&self) -> &'static str {
        match self {
            Functional::Product => "product",
            Functional::Length => "length",
            Functional::ReciprocalSum => "reciprocal_sum",
            Functional::SubtendedAngle => "subtended_angle",
        }
    }

    /// Parses the CLI/JSON spelling.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "product" => Ok(Functional::Product),
            "length" => Ok(Functional::Length),
            "reciprocal_sum" => Ok(Functional::ReciprocalSum),
            "subtended_angle" => Ok(Functional::SubtendedAngle),
            other => Err(Error::Domain(format!("unknown functional '{other}'"))),
        }
    }

    fn apply(&self, a: f64, b: f64, alpha: f64) -> f64 {
        match self {
            Functional::Product => a * b,
            Functional::Length => a + b,
            Functional::ReciprocalSum => 1.0 / a + 1.0 / b,
            Functional::SubtendedAngle => alpha,
        }
    }
}

/// Constancy verdict at the profile's tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Constant,
    NonConstant,
}

/// A sampled functional over a family of chords, with its constancy verdict.
#[derive(Debug, Clone)]
pub struct PropertyProfile {
    pub functional: Functional,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Mean value of the functional over the grid.
    pub lambda_hat: f64,
    /// Peak-to-peak deviation.
    pub deviation: f64,
    /// Absolute tolerance the verdict was taken at.
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl PropertyProfile {
    fn from_samples(functional: Functional, grid: Vec<f64>, values: Vec<f64>, tol: f64) -> Self {
        let lambda_hat = values.iter().sum::<f64>() / values.len() as f64;
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let deviation = max - min;
        let verdict = if deviation < tol {
            Verdict::Constant
        } else {
            Verdict::NonConstant
        };
        Self {
            functional,
            grid,
            values,
            lambda_hat,
            deviation,
            tolerance: tol,
            verdict,
        }
    }
}

/// Default absolute constancy tolerance: relative deviation `1e-6` for
/// analytic bodies, `1e-4` for sampled ones.
pub fn default_tolerance(lambda_hat: f64, sampled_body: bool) -> f64 {
    let rel = if sampled_body { 1e-4 } else { 1e-6 };
    rel * lambda_hat.abs().max(1e-12)
}

/// Functional profile over tangent chords of an interior circle, on a
/// uniform contact-angle grid.
pub fn profile(
    curve: &ConvexCurve,
    circle: &Circle,
    functional: Functional,
    n_grid: usize,
    tolerance: f64,
) -> Result<PropertyProfile> {
    if n_grid < 64 {
        return Err(Error::Domain(format!(
            "profile grid must have at least 64 points, got {n_grid}"
        )));
    }
    validate_interior(curve, circle)?;
    let samples = par::map_indices(n_grid, |k| {
        let phi = TAU * k as f64 / n_grid as f64;
        chord_at_unchecked(curve, circle, phi).map(|ch| (phi, functional.apply(ch.a, ch.b, ch.alpha)))
    });
    let mut grid = Vec::with_capacity(n_grid);
    let mut values = Vec::with_capacity(n_grid);
    for s in samples {
        let (phi, v) = s?;
        grid.push(phi);
        values.push(v);
    }
    Ok(PropertyProfile::from_samples(functional, grid, values, tolerance))
}

/// One chord through an interior point: direction `psi`, distances `a` (to
/// the trailing endpoint) and `b` (to the leading endpoint).
#[derive(Debug, Clone, Copy)]
pub struct PointChord {
    pub psi: f64,
    pub a_point: Point,
    pub b_point: Point,
    pub a: f64,
    pub b: f64,
}

/// All chords through an interior point on a uniform direction grid
/// (directions measured in the body's base frame).
pub fn point_chords(curve: &ConvexCurve, x: Point, n_grid: usize) -> Result<Vec<PointChord>> {
    if !curve.is_strictly_inside(x, 1e-9) {
        return Err(Error::Domain(format!(
            "profile point ({}, {}) is not strictly inside the body",
            x.x, x.y
        )));
    }
    let at_center = (x - curve.center()).norm() < 1e-13;
    let results = par::map_indices(n_grid, |k| -> Result<PointChord> {
        let psi = TAU * k as f64 / n_grid as f64;
        let dir = rotate(unit(psi), curve.rotation());
        if at_center {
            // Chords through the distinguished point: exact radial lookup.
            let b_len = curve.radius_at(psi);
            let a_len = curve.radius_at(psi + PI);
            return Ok(PointChord {
                psi,
                a_point: x - a_len * dir,
                b_point: x + b_len * dir,
                a: a_len,
                b: b_len,
            });
        }
        let line = Line::new(x, dir)?;
        let hits = curve.line_intersections(&line)?;
        if hits.len() != 2 {
            return Err(Error::DegenerateIntersection(format!(
                "chord through interior point found {} boundary crossings",
                hits.len()
            )));
        }
        let s0 = line.projection(hits[0].point);
        let s1 = line.projection(hits[1].point);
        if !(s0 < 0.0 && s1 > 0.0) {
            return Err(Error::DegenerateIntersection(
                "interior point does not separate the chord endpoints".into(),
            ));
        }
        Ok(PointChord {
            psi,
            a_point: hits[0].point,
            b_point: hits[1].point,
            a: -s0,
            b: s1,
        })
    });
    results.into_iter().collect()
}

/// Functional profile over chords through an interior point.
pub fn point_profile(
    curve: &ConvexCurve,
    x: Point,
    functional: Functional,
    n_grid: usize,
    tolerance: f64,
) -> Result<PropertyProfile> {
    if n_grid < 64 {
        return Err(Error::Domain(format!(
            "profile grid must have at least 64 points, got {n_grid}"
        )));
    }
    let chords = point_chords(curve, x, n_grid)?;
    let grid: Vec<f64> = chords.iter().map(|c| c.psi).collect();
    let values: Vec<f64> = chords
        .iter()
        .map(|c| functional.apply(c.a, c.b, PI))
        .collect();
    Ok(PropertyProfile::from_samples(functional, grid, values, tolerance))
}

// ── Chord-length equations ──────────────────────────────────────────────────

/// Solution set of a chord-length equation at fixed subtended angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquationSolution {
    /// Two solutions `{theta, alpha - theta}`; both give the same chord.
    TwoSolutions { theta: f64, chord_length: f64 },
    /// The symmetric solution `theta = alpha/2` only.
    UniqueSymmetric { theta: f64, chord_length: f64 },
    /// Every admissible `theta` solves the equation (product case at
    /// `alpha = π/2`, `lambda = 1`).
    DegenerateContinuum,
    NoSolution,
}

/// Treat `alpha` within this distance of π/2 as the degenerate case.
const RIGHT_ANGLE_TOL: f64 = 1e-9;

fn check_angle_domain(alpha: f64, lambda: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::Domain(format!(
            "subtended angle must lie in (0, π), got {alpha}"
        )));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "chord constant must be positive, got {lambda}"
        )));
    }
    Ok(())
}

/// Admissible interval for the sub-angle `theta`: the tangent-length
/// geometry forces both `theta` and `alpha - theta` into `(0, π/2)`.
fn admissible_interval(alpha: f64) -> (f64, f64) {
    ((alpha - FRAC_PI_2).max(0.0), alpha.min(FRAC_PI_2))
}

/// Solves `tan θ · tan(α−θ) = λ` for a unit interior circle.
///
/// `f(θ)` is symmetric about `α/2` and strictly monotone on the half
/// interval: increasing for `α < π/2` (range `(0, tan²(α/2)]`), decreasing
/// for `α > π/2` (range `[tan²(α/2), ∞)` within the admissible window), so
/// the attainable constants always lie on the side of `tan²(α/2)` towards 1.
/// At `α = π/2` the product is identically 1: `λ = 1` admits a continuum,
/// anything else nothing.
pub fn solve_product_equation(alpha: f64, lambda: f64) -> Result<EquationSolution> {
    check_angle_domain(alpha, lambda)?;
    if (alpha - FRAC_PI_2).abs() < RIGHT_ANGLE_TOL {
        return Ok(if (lambda - 1.0).abs() <= 1e-9 {
            EquationSolution::DegenerateContinuum
        } else {
            EquationSolution::NoSolution
        });
    }
    let f = |th: f64| th.tan() * (alpha - th).tan();
    let half = alpha / 2.0;
    let crit = f(half); // tan²(α/2)
    let increasing = alpha < FRAC_PI_2;
    if (lambda - crit).abs() < 1e-14 * crit.max(1.0) {
        return Ok(EquationSolution::UniqueSymmetric {
            theta: half,
            chord_length: 2.0 * half.tan(),
        });
    }
    let attainable = if increasing { lambda < crit } else { lambda > crit };
    if !attainable {
        return Ok(EquationSolution::NoSolution);
    }
    let (lo, _) = admissible_interval(alpha);
    let theta = bracketed_root(&|th| f(th) - lambda, lo, half, increasing)?;
    Ok(EquationSolution::TwoSolutions {
        theta,
        chord_length: theta.tan() + (alpha - theta).tan(),
    })
}

/// Solves `cot θ + cot(α−θ) = λ`.
///
/// `g(θ)` is symmetric about `α/2` and strictly decreasing on `(0, α/2]`
/// for every `α ∈ (0, π)`; its minimum is `2·cot(α/2)`. Unlike the product
/// case there is no degeneracy at `α = π/2`: every admissible `(α, λ)`
/// yields a unique chord length. For `α > π/2` the admissible window also
/// caps `λ` below `cot(α − π/2)` (the chord endpoint recedes to infinity
/// there).
pub fn solve_reciprocal_equation(alpha: f64, lambda: f64) -> Result<EquationSolution> {
    check_angle_domain(alpha, lambda)?;
    let g = |th: f64| 1.0 / th.tan() + 1.0 / (alpha - th).tan();
    let half = alpha / 2.0;
    let g_min = 2.0 / half.tan();
    if (lambda - g_min).abs() < 1e-14 * g_min.max(1.0) {
        return Ok(EquationSolution::UniqueSymmetric {
            theta: half,
            chord_length: 2.0 * half.tan(),
        });
    }
    if lambda < g_min {
        return Ok(EquationSolution::NoSolution);
    }
    let (lo, _) = admissible_interval(alpha);
    if alpha > FRAC_PI_2 {
        // g decreases from cot(α − π/2) at the admissible edge; larger λ
        // would need an endpoint beyond infinity.
        let edge = 1.0 / (alpha - FRAC_PI_2).tan();
        if lambda >= edge {
            return Ok(EquationSolution::NoSolution);
        }
    }
    let theta = bracketed_root(&|th| g(th) - lambda, lo, half, false)?;
    Ok(EquationSolution::TwoSolutions {
        theta,
        chord_length: theta.tan() + (alpha - theta).tan(),
    })
}

/// Root of a strictly monotone function on `(lo, hi)` with a singular or
/// extremal left endpoint; expands the bracket inward from `lo`.
fn bracketed_root(
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    increasing: bool,
) -> Result<f64> {
    let f_hi = f(hi);
    let mut eps = (hi - lo) * 0.5;
    for _ in 0..60 {
        let x = lo + eps;
        let fx = f(x);
        if fx.is_finite() && fx * f_hi < 0.0 {
            return Ok(bisect(f, x, hi, 1e-15));
        }
        eps *= 0.5;
        if eps < 1e-300 {
            break;
        }
    }
    let _ = increasing;
    Err(Error::Domain(
        "failed to bracket the chord-length equation root".into(),
    ))
}

// ── Central symmetry ────────────────────────────────────────────────────────

/// Sup over a 2048-direction grid of `|ρ₊(u) − ρ₋(u)|` where `ρ±` are the
/// boundary distances from `o` in directions `±u`; zero iff the body is
/// centrally symmetric about `o` at grid resolution.
pub fn central_symmetry_defect(curve: &ConvexCurve, o: Point) -> Result<f64> {
    const N: usize = 2048;
    if !curve.is_strictly_inside(o, 0.0) {
        return Err(Error::Domain(
            "symmetry reference point must lie inside the body".into(),
        ));
    }
    let at_center = (o - curve.center()).norm() < 1e-13;
    let defects = par::map_indices(N, |k| -> Result<f64> {
        let psi = TAU * k as f64 / N as f64;
        if at_center {
            return Ok((curve.radius_at(psi) - curve.radius_at(psi + PI)).abs());
        }
        let dir = rotate(unit(psi), curve.rotation());
        let fwd = curve.ray_hit(o, dir)?.0;
        let back = curve.ray_hit(o, -dir)?.0;
        Ok((fwd - back).abs())
    });
    let mut worst = 0.0f64;
    for d in defects {
        worst = worst.max(d?);
    }
    Ok(worst)
}

// ── Constant-angle envelope explorer ───────────────────────────────────────

/// Envelope of the constant-angle chord family, with circle and ellipse
/// fits of the envelope points.
#[derive(Debug, Clone)]
pub struct EnvelopeReport {
    pub points: Vec<Point>,
    pub circle_fit: Option<CircleFit>,
    pub ellipse_fit: Option<EllipseFit>,
}

/// For each boundary point `A`, finds `B` with `∠AOB = alpha` and computes
/// the envelope point of the chord family as the limit intersection of
/// neighbouring chords (symmetric differencing with one Richardson step).
pub fn constant_angle_envelope(
    curve: &ConvexCurve,
    o: Point,
    alpha: f64,
    n_grid: usize,
) -> Result<EnvelopeReport> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::Domain(format!(
            "envelope angle must lie in (0, π), got {alpha}"
        )));
    }
    if !curve.is_strictly_inside(o, 1e-9) {
        return Err(Error::Domain(
            "envelope pivot point must be strictly inside the body".into(),
        ));
    }
    let n = n_grid.max(16);
    // Chord with ∠AOB = alpha, pivoting at o: endpoints are the boundary
    // hits of the rays at angles ψ and ψ + alpha about o.
    let boundary_at = |psi: f64| -> Result<Point> {
        let dir = unit(psi);
        let (dist, _) = curve
            .ray_hit(o, dir)
            .map_err(|_| Error::AngleUnattainable { direction: psi })?;
        Ok(o + dist * dir)
    };
    let chord_line = |psi: f64| -> Result<Line> {
        let a = boundary_at(psi)?;
        let b = boundary_at(psi + alpha)?;
        Line::through(a, b)
    };
    let results = par::map_indices(n, |k| -> Result<Point> {
        let psi = TAU * k as f64 / n as f64;
        let h = 1e-4;
        let envelope_at = |step: f64| -> Result<Point> {
            let l0 = chord_line(psi - step)?;
            let l1 = chord_line(psi + step)?;
            l0.intersect(&l1).ok_or(Error::DegenerateIntersection(
                "neighbouring chords are parallel".into(),
            ))
        };
        let e_h = envelope_at(h)?;
        let e_h2 = envelope_at(h / 2.0)?;
        // Symmetric differencing has O(h²) error; one Richardson step.
        Ok(Point::from((4.0 * e_h2.coords - e_h.coords) / 3.0))
    });
    let mut points = Vec::with_capacity(n);
    for r in results {
        points.push(r?);
    }
    let circle_fit = fit_circle(&points).ok();
    let ellipse_fit = fit_ellipse(&points).ok();
    Ok(EnvelopeReport {
        points,
        circle_fit,
        ellipse_fit,
    })
}
