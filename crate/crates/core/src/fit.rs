//! Algebraic circle and ellipse fitting with geometric residuals.
//!
//! Implements:
//! - Hyperaccurate algebraic circle fit (SVD form, with the exact-fit
//!   fallback when the design matrix is rank deficient).
//! - Direct least-squares conic fit constrained to ellipses.
//! - Geometric point-to-ellipse distance for residual reporting.

use nalgebra::{DMatrix, Matrix3, Matrix4, Vector3};

use crate::error::{Error, Result};
use crate::geometry2d::{Circle, Point};

// ── Circle fit ──────────────────────────────────────────────────────────────

/// Result of a circle fit: geometry plus RMS geometric residual.
#[derive(Debug, Clone, Copy)]
pub struct CircleFit {
    pub circle: Circle,
    pub rms_residual: f64,
}

/// Hyperaccurate algebraic circle fit.
///
/// Solves for `a0(x² + y²) + a1 x + a2 y + a3 = 0` minimising algebraic
/// error under the hyper-normalisation; falls back to the smallest singular
/// vector when the data lie exactly on a circle.
pub fn fit_circle(points: &[Point]) -> Result<CircleFit> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Domain(format!("circle fit needs >= 3 points, got {n}")));
    }
    let cx = points.iter().map(|p| p.x).sum::<f64>() / n as f64;
    let cy = points.iter().map(|p| p.y).sum::<f64>() / n as f64;

    let mut design = DMatrix::<f64>::zeros(n, 4);
    for (i, p) in points.iter().enumerate() {
        let (x, y) = (p.x - cx, p.y - cy);
        design[(i, 0)] = x * x + y * y;
        design[(i, 1)] = x;
        design[(i, 2)] = y;
        design[(i, 3)] = 1.0;
    }
    let svd = design.clone().svd(true, true);
    let sing = &svd.singular_values;
    let v_t = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::Domain("circle fit SVD failed".into()))?;

    let coeffs: [f64; 4] = if sing[3] / sing[0] < 1e-12 {
        // Data lie on a circle to machine precision.
        [v_t[(3, 0)], v_t[(3, 1)], v_t[(3, 2)], v_t[(3, 3)]]
    } else {
        // Hyper normalisation: eigenvector of W·H⁻¹·W for the smallest
        // positive eigenvalue, where W = VΣVᵀ and H is built from moments.
        let mut w = Matrix4::<f64>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += v_t[(k, i)] * sing[k] * v_t[(k, j)];
                }
                w[(i, j)] = acc;
            }
        }
        let zm = design.column(0).sum() / n as f64;
        let xm = design.column(1).sum() / n as f64;
        let ym = design.column(2).sum() / n as f64;
        let h = Matrix4::new(
            8.0 * zm,
            4.0 * xm,
            4.0 * ym,
            2.0,
            4.0 * xm,
            1.0,
            0.0,
            0.0,
            4.0 * ym,
            0.0,
            1.0,
            0.0,
            2.0,
            0.0,
            0.0,
            0.0,
        );
        let h_inv = h
            .try_inverse()
            .ok_or_else(|| Error::Domain("circle fit constraint matrix singular".into()))?;
        let m = w * h_inv * w;
        let eig = nalgebra::SymmetricEigen::new(m);
        let mut best: Option<(f64, usize)> = None;
        for k in 0..4 {
            let lam = eig.eigenvalues[k];
            if lam > 0.0 && best.is_none_or(|(b, _)| lam < b) {
                best = Some((lam, k));
            }
        }
        let (_, idx) =
            best.ok_or_else(|| Error::Domain("circle fit found no positive eigenvalue".into()))?;
        let a_star = eig.eigenvectors.column(idx).into_owned();
        let a = w
            .try_inverse()
            .ok_or_else(|| Error::Domain("circle fit scatter matrix singular".into()))?
            * a_star;
        [a[0], a[1], a[2], a[3]]
    };

    let [a0, a1, a2, a3] = coeffs;
    if a0.abs() < 1e-14 {
        return Err(Error::Domain("circle fit degenerated to a line".into()));
    }
    let center = Point::new(-a1 / (2.0 * a0) + cx, -a2 / (2.0 * a0) + cy);
    let radius = ((a1 * a1 + a2 * a2 - 4.0 * a0 * a3).max(0.0)).sqrt() / (2.0 * a0.abs());
    let circle = Circle::new(center, radius)?;
    let rms = (points
        .iter()
        .map(|p| {
            let d = (p - center).norm() - radius;
            d * d
        })
        .sum::<f64>()
        / n as f64)
        .sqrt();
    Ok(CircleFit {
        circle,
        rms_residual: rms,
    })
}

// ── Ellipse fit ─────────────────────────────────────────────────────────────

/// Geometric ellipse parameters.
#[derive(Debug, Clone, Copy)]
pub struct EllipseGeom {
    pub center: Point,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Rotation of the major axis from +x, radians.
    pub angle: f64,
}

/// Result of an ellipse fit: geometry plus RMS geometric residual.
#[derive(Debug, Clone, Copy)]
pub struct EllipseFit {
    pub ellipse: EllipseGeom,
    pub rms_residual: f64,
}

/// Direct least-squares conic fit constrained to ellipses
/// (stable block decomposition of the quadratic constraint problem).
pub fn fit_ellipse(points: &[Point]) -> Result<EllipseFit> {
    let n = points.len();
    if n < 6 {
        return Err(Error::Domain(format!("ellipse fit needs >= 6 points, got {n}")));
    }
    let cx = points.iter().map(|p| p.x).sum::<f64>() / n as f64;
    let cy = points.iter().map(|p| p.y).sum::<f64>() / n as f64;

    let mut d1 = DMatrix::<f64>::zeros(n, 3);
    let mut d2 = DMatrix::<f64>::zeros(n, 3);
    for (i, p) in points.iter().enumerate() {
        let (x, y) = (p.x - cx, p.y - cy);
        d1[(i, 0)] = x * x;
        d1[(i, 1)] = x * y;
        d1[(i, 2)] = y * y;
        d2[(i, 0)] = x;
        d2[(i, 1)] = y;
        d2[(i, 2)] = 1.0;
    }
    let s1 = d1.transpose() * &d1;
    let s2 = d1.transpose() * &d2;
    let s3 = d2.transpose() * &d2;
    let s3_inv = Matrix3::from(s3.fixed_view::<3, 3>(0, 0))
        .try_inverse()
        .ok_or_else(|| Error::Domain("ellipse fit: degenerate linear block".into()))?;
    let t = -s3_inv * s2.transpose();
    let m_full = Matrix3::from(s1.fixed_view::<3, 3>(0, 0))
        + Matrix3::from(s2.fixed_view::<3, 3>(0, 0)) * Matrix3::from(t.fixed_view::<3, 3>(0, 0));
    // Apply C1⁻¹ with C1 = [[0,0,2],[0,-1,0],[2,0,0]].
    let m_hat = Matrix3::new(
        m_full[(2, 0)] / 2.0,
        m_full[(2, 1)] / 2.0,
        m_full[(2, 2)] / 2.0,
        -m_full[(1, 0)],
        -m_full[(1, 1)],
        -m_full[(1, 2)],
        m_full[(0, 0)] / 2.0,
        m_full[(0, 1)] / 2.0,
        m_full[(0, 2)] / 2.0,
    );
    let a1 = select_ellipse_eigenvector(&m_hat)?;
    let a2 = Matrix3::from(t.fixed_view::<3, 3>(0, 0)) * a1;
    // Conic in centred coordinates: A x² + B xy + C y² + D x + E y + F = 0.
    let (a, b, c, d, e, f) = (a1[0], a1[1], a1[2], a2[0], a2[1], a2[2]);
    // Un-centre: substitute x -> x - cx, y -> y - cy.
    let d_w = d - 2.0 * a * cx - b * cy;
    let e_w = e - 2.0 * c * cy - b * cx;
    let f_w = f + a * cx * cx + b * cx * cy + c * cy * cy - d * cx - e * cy;
    let geom = conic_to_ellipse(a, b, c, d_w, e_w, f_w)?;
    let rms = (points
        .iter()
        .map(|p| {
            let d = point_ellipse_distance(&geom, *p);
            d * d
        })
        .sum::<f64>()
        / n as f64)
        .sqrt();
    Ok(EllipseFit {
        ellipse: geom,
        rms_residual: rms,
    })
}

/// Real eigenvector of the reduced matrix satisfying the ellipse constraint
/// `4·a0·a2 - a1² > 0`.
fn select_ellipse_eigenvector(m: &Matrix3<f64>) -> Result<Vector3<f64>> {
    // Characteristic cubic λ³ + p2 λ² + p1 λ + p0 = 0.
    let tr = m.trace();
    let tr2 = (m * m).trace();
    let det = m.determinant();
    let p2 = -tr;
    let p1 = 0.5 * (tr * tr - tr2);
    let p0 = -det;
    for lam in real_cubic_roots(p2, p1, p0) {
        let shifted = m - Matrix3::identity() * lam;
        // Null vector via the largest cross product of two rows.
        let r0 = Vector3::new(shifted[(0, 0)], shifted[(0, 1)], shifted[(0, 2)]);
        let r1 = Vector3::new(shifted[(1, 0)], shifted[(1, 1)], shifted[(1, 2)]);
        let r2 = Vector3::new(shifted[(2, 0)], shifted[(2, 1)], shifted[(2, 2)]);
        let candidates = [r0.cross(&r1), r0.cross(&r2), r1.cross(&r2)];
        let v = candidates
            .iter()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        if v.norm() < 1e-300 {
            continue;
        }
        let v = v / v.norm();
        if 4.0 * v[0] * v[2] - v[1] * v[1] > 0.0 {
            return Ok(v);
        }
    }
    Err(Error::Domain("no ellipse solution in conic fit".into()))
}

/// Real roots of `x³ + a x² + b x + c = 0`.
fn real_cubic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    if disc > 1e-30 {
        let sq = disc.sqrt();
        let u = (-q / 2.0 + sq).cbrt();
        let v = (-q / 2.0 - sq).cbrt();
        vec![u + v + shift]
    } else if p.abs() < 1e-300 {
        vec![shift]
    } else {
        let r = (-p / 3.0).sqrt();
        let phi = ((3.0 * q) / (2.0 * p * r)).clamp(-1.0, 1.0).acos();
        (0..3)
            .map(|k| 2.0 * r * ((phi - std::f64::consts::TAU * k as f64) / 3.0).cos() + shift)
            .collect()
    }
}

/// Converts conic coefficients to geometric ellipse parameters.
fn conic_to_ellipse(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<EllipseGeom> {
    let det = 4.0 * a * c - b * b;
    if det <= 0.0 {
        return Err(Error::Domain("conic is not an ellipse".into()));
    }
    let cx = (b * e - 2.0 * c * d) / det;
    let cy = (b * d - 2.0 * a * e) / det;
    // Value at centre (negated constant of the centred quadratic form).
    let f0 = a * cx * cx + b * cx * cy + c * cy * cy + d * cx + e * cy + f;
    if f0.abs() < 1e-300 {
        return Err(Error::Domain("degenerate (point) ellipse".into()));
    }
    let m = nalgebra::Matrix2::new(a, b / 2.0, b / 2.0, c);
    let eig = nalgebra::SymmetricEigen::new(m);
    let (l0, l1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let s0 = -f0 / l0;
    let s1 = -f0 / l1;
    if s0 <= 0.0 || s1 <= 0.0 {
        return Err(Error::Domain("conic is not a real ellipse".into()));
    }
    let (r0, r1) = (s0.sqrt(), s1.sqrt());
    let (semi_major, semi_minor, axis) = if r0 >= r1 {
        (r0, r1, eig.eigenvectors.column(0))
    } else {
        (r1, r0, eig.eigenvectors.column(1))
    };
    let mut angle = axis[1].atan2(axis[0]);
    if angle <= -std::f64::consts::FRAC_PI_2 {
        angle += std::f64::consts::PI;
    } else if angle > std::f64::consts::FRAC_PI_2 {
        angle -= std::f64::consts::PI;
    }
    Ok(EllipseGeom {
        center: Point::new(cx, cy),
        semi_major,
        semi_minor,
        angle,
    })
}

/// Geometric distance from a point to an ellipse (robust bisection on the
/// standard rational root function, exact for interior and exterior points).
pub fn point_ellipse_distance(e: &EllipseGeom, p: Point) -> f64 {
    let (s, c) = e.angle.sin_cos();
    let dx = p.x - e.center.x;
    let dy = p.y - e.center.y;
    // Rotate into the canonical frame, fold into the first quadrant.
    let px = (c * dx + s * dy).abs();
    let py = (-s * dx + c * dy).abs();
    let (a, b) = (e.semi_major, e.semi_minor);
    if px < 1e-300 && py < 1e-300 {
        return b;
    }
    // Root of F(t) = (a·px/(t+a²))² + (b·py/(t+b²))² − 1 on (−b², ∞).
    let f = |t: f64| {
        let u = a * px / (t + a * a);
        let v = b * py / (t + b * b);
        u * u + v * v - 1.0
    };
    let mut lo = -b * b + 1e-14 * b * b.max(1.0);
    if py < 1e-14 {
        // Degenerate row: closest point may be on the major axis.
        if px >= (a * a - b * b) / a {
            return (px - a).abs();
        }
        let xc = a * a * px / (a * a - b * b);
        let yc = b * (1.0 - (xc / a) * (xc / a)).max(0.0).sqrt();
        return ((px - xc).powi(2) + yc * yc).sqrt();
    }
    while f(lo) < 0.0 {
        lo = -b * b + 0.5 * (lo + b * b);
        if lo + b * b < 1e-300 {
            break;
        }
    }
    let mut hi = (a * px).max(b * py) + a * a;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let xc = a * a * px / (t + a * a);
    let yc = b * b * py / (t + b * b);
    ((px - xc).powi(2) + (py - yc).powi(2)).sqrt()
}
