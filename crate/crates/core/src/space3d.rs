//! Desk-scale 3D verifiers: chord midpoint loci in ellipsoids, the
//! tangent-cone ratio-2 projection, equipotential/equireciprocal sphere
//! checks via analytic plane sections, and root finding on 2-cycles of
//! planes.

use std::sync::Arc;

use nalgebra::{DMatrix, Matrix2, Matrix3};

use crate::error::{Error, Result};
use crate::par;

pub type Point3 = nalgebra::Point3<f64>;
pub type Vector3 = nalgebra::Vector3<f64>;

const TAU: f64 = std::f64::consts::TAU;

/// Sphere with positive radius.
#[derive(Debug, Clone, Copy)]
pub struct Sphere {
    pub center: Point3,
    pub radius: f64,
}

impl Sphere {
    pub fn new(center: Point3, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain("sphere radius must be positive".into()));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, p: Point3) -> bool {
        (p - self.center).norm() < self.radius
    }
}

/// Solid ellipsoid `{x : (x - c)ᵀ Q (x - c) <= 1}` with symmetric
/// positive-definite `Q`.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    pub center: Point3,
    pub q: Matrix3<f64>,
}

impl Ellipsoid {
    pub fn new(center: Point3, q: Matrix3<f64>) -> Result<Self> {
        let asym = (q - q.transpose()).norm();
        if asym > 1e-14 {
            return Err(Error::Domain(format!(
                "ellipsoid form must be symmetric (asymmetry {asym:.3e})"
            )));
        }
        let eig = nalgebra::SymmetricEigen::new(q);
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::Domain(
                "ellipsoid form must be positive definite".into(),
            ));
        }
        Ok(Self { center, q })
    }

    /// Axis-aligned ellipsoid with the given semi-axes.
    pub fn axis_aligned(center: Point3, semi_axes: [f64; 3]) -> Result<Self> {
        for a in semi_axes {
            if !(a > 0.0) {
                return Err(Error::Domain("semi-axes must be positive".into()));
            }
        }
        let q = Matrix3::from_diagonal(&Vector3::new(
            1.0 / (semi_axes[0] * semi_axes[0]),
            1.0 / (semi_axes[1] * semi_axes[1]),
            1.0 / (semi_axes[2] * semi_axes[2]),
        ));
        Self::new(center, q)
    }

    /// Ball as the isotropic special case.
    pub fn ball(center: Point3, radius: f64) -> Result<Self> {
        Self::axis_aligned(center, [radius, radius, radius])
    }

    #[inline]
    pub fn value(&self, p: Point3) -> f64 {
        let d = p - self.center;
        (self.q * d).dot(&d)
    }

    pub fn contains(&self, p: Point3) -> bool {
        self.value(p) < 1.0
    }

    /// Chord through `p` in direction `u`: signed parameters of the two
    /// boundary crossings (`t_minus < 0 < t_plus` for interior `p`).
    pub fn chord_params(&self, p: Point3, u: Vector3) -> Result<(f64, f64)> {
        let d = p - self.center;
        let a = (self.q * u).dot(&u);
        let b = 2.0 * (self.q * d).dot(&u);
        let c = (self.q * d).dot(&d) - 1.0;
        let disc = b * b - 4.0 * a * c;
        if disc <= 0.0 {
            return Err(Error::DegenerateIntersection(
                "chord direction misses the ellipsoid".into(),
            ));
        }
        let sq = disc.sqrt();
        Ok(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)))
    }

    /// Distance-like residual of `p` from the boundary: `|q(p) - 1| / |∇q(p)|`.
    pub fn boundary_defect(&self, p: Point3) -> f64 {
        let d = p - self.center;
        let grad = 2.0 * self.q * d;
        (self.value(p) - 1.0).abs() / grad.norm().max(1e-300)
    }
}

/// A convex 3D test body.
#[derive(Debug, Clone)]
pub enum Body3 {
    Ball(Sphere),
    Ellipsoid(Ellipsoid),
}

impl Body3 {
    pub fn as_ellipsoid(&self) -> Result<Ellipsoid> {
        match self {
            Body3::Ball(s) => Ellipsoid::ball(s.center, s.radius),
            Body3::Ellipsoid(e) => Ok(e.clone()),
        }
    }

    pub fn contains(&self, p: Point3) -> bool {
        match self {
            Body3::Ball(s) => s.contains(p),
            Body3::Ellipsoid(e) => e.contains(p),
        }
    }

    /// Geometric boundary distance for balls; gradient-normalised algebraic
    /// defect for ellipsoids.
    pub fn boundary_defect(&self, p: Point3) -> f64 {
        match self {
            Body3::Ball(s) => ((p - s.center).norm() - s.radius).abs(),
            Body3::Ellipsoid(e) => e.boundary_defect(p),
        }
    }

    pub fn is_on_boundary(&self, p: Point3, tol: f64) -> bool {
        self.boundary_defect(p) <= tol
    }
}

/// Near-uniform deterministic direction set on the unit sphere
/// (Fibonacci lattice).
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3> {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = TAU * (i as f64 / golden).fract();
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Deterministic orthonormal basis of the plane orthogonal to `n`.
pub fn orthonormal_basis(n: Vector3) -> (Vector3, Vector3) {
    let n = n.normalize();
    let helper = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vector3::x()
    } else if n.y.abs() <= n.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let e1 = n.cross(&helper).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

// ── Midpoint locus ──────────────────────────────────────────────────────────

/// Homothety comparison between the fitted locus and the ambient ellipsoid.
#[derive(Debug, Clone, Copy)]
pub struct HomothetyCheck {
    pub ratio: f64,
    pub center: Point3,
    /// Frobenius distance of the unit-normalised quadratic forms.
    pub defect: f64,
}

/// Quadric fit of the chord-midpoint locus through an interior point.
#[derive(Debug, Clone)]
pub struct MidpointLocusFit {
    /// Coefficients of `[x², y², z², xy, xz, yz, x, y, z, 1]`, unit norm.
    pub coeffs: [f64; 10],
    /// RMS gradient-normalised residual of the midpoints on the fitted
    /// quadric.
    pub rms_residual: f64,
    pub homothety: Option<HomothetyCheck>,
    /// Residuals of the pivot point and the ellipsoid centre on the locus.
    pub p_residual: f64,
    pub center_residual: f64,
    /// Set when the pivot is the centre and the locus collapses to a point.
    pub degenerate: bool,
    /// Centre and form of the fitted quadric (when nondegenerate).
    pub fitted: Option<Ellipsoid>,
}

/// Samples chords of `e` through `p` over a direction grid, collects their
/// midpoints, fits a quadric, and verifies the locus is homothetic to `e`
/// and passes through both `p` and the centre.
pub fn midpoint_locus(e: &Ellipsoid, p: Point3, n_samples: usize) -> Result<MidpointLocusFit> {
    if !e.contains(p) {
        return Err(Error::Domain(
            "midpoint locus requires an interior pivot point".into(),
        ));
    }
    let dirs = fibonacci_sphere(n_samples.max(64));
    let midpoints: Vec<Point3> = par::map_slice(&dirs, |u| {
        let (t0, t1) = e.chord_params(p, *u).expect("interior point chords exist");
        p + 0.5 * (t0 + t1) * u
    });
    // Degenerate pivot: all midpoints coincide with the centre.
    let spread = midpoints
        .iter()
        .map(|m| (m - midpoints[0]).norm())
        .fold(0.0f64, f64::max);
    if spread < 1e-12 {
        return Ok(MidpointLocusFit {
            coeffs: [0.0; 10],
            rms_residual: 0.0,
            homothety: None,
            p_residual: (p - midpoints[0]).norm(),
            center_residual: (e.center - midpoints[0]).norm(),
            degenerate: true,
            fitted: None,
        });
    }

    let coeffs = fit_quadric(&midpoints)?;
    let rms = {
        let mut acc = 0.0;
        for m in &midpoints {
            let r = quadric_sampson(&coeffs, *m);
            acc += r * r;
        }
        (acc / midpoints.len() as f64).sqrt()
    };
    let fitted = quadric_to_ellipsoid(&coeffs).ok();
    let homothety = fitted.as_ref().map(|fit| {
        let ratio = (e.q.determinant() / fit.q.determinant()).powf(1.0 / 6.0);
        let defect = (e.q / e.q.norm() - fit.q / fit.q.norm()).norm();
        // Homothety centre from c_fit = z + s(c - z) with s = ratio.
        if (1.0 - ratio).abs() < 1e-12 {
            return HomothetyCheck {
                ratio,
                center: Point3::origin(),
                defect,
            };
        }
        let z = (fit.center.coords - ratio * e.center.coords) / (1.0 - ratio);
        HomothetyCheck {
            ratio,
            center: Point3::from(z),
            defect,
        }
    });
    Ok(MidpointLocusFit {
        coeffs,
        rms_residual: rms,
        p_residual: quadric_sampson(&coeffs, p),
        center_residual: quadric_sampson(&coeffs, e.center),
        degenerate: false,
        homothety,
        fitted,
    })
}

/// Least-squares quadric through points: smallest right singular vector of
/// the monomial design matrix, unit-norm coefficients.
fn fit_quadric(points: &[Point3]) -> Result<[f64; 10]> {
    if points.len() < 10 {
        return Err(Error::Domain("quadric fit needs >= 10 points".into()));
    }
    let mut design = DMatrix::<f64>::zeros(points.len(), 10);
    for (i, p) in points.iter().enumerate() {
        let (x, y, z) = (p.x, p.y, p.z);
        let row = [x * x, y * y, z * z, x * y, x * z, y * z, x, y, z, 1.0];
        for (j, v) in row.iter().enumerate() {
            design[(i, j)] = *v;
        }
    }
    let svd = design.svd(true, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Domain("quadric fit SVD failed".into()))?;
    let mut coeffs = [0.0; 10];
    for j in 0..10 {
        coeffs[j] = v_t[(9, j)];
    }
    Ok(coeffs)
}

fn quadric_value(c: &[f64; 10], p: Point3) -> f64 {
    let (x, y, z) = (p.x, p.y, p.z);
    c[0] * x * x
        + c[1] * y * y
        + c[2] * z * z
        + c[3] * x * y
        + c[4] * x * z
        + c[5] * y * z
        + c[6] * x
        + c[7] * y
        + c[8] * z
        + c[9]
}

/// Gradient-normalised (first-order geometric) residual.
fn quadric_sampson(c: &[f64; 10], p: Point3) -> f64 {
    let (x, y, z) = (p.x, p.y, p.z);
    let gx = 2.0 * c[0] * x + c[3] * y + c[4] * z + c[6];
    let gy = 2.0 * c[1] * y + c[3] * x + c[5] * z + c[7];
    let gz = 2.0 * c[2] * z + c[4] * x + c[5] * y + c[8];
    let g = (gx * gx + gy * gy + gz * gz).sqrt().max(1e-300);
    quadric_value(c, p).abs() / g
}

/// Extracts centre and unit-level form from general quadric coefficients.
fn quadric_to_ellipsoid(c: &[f64; 10]) -> Result<Ellipsoid> {
    let mut a = Matrix3::new(
        c[0],
        c[3] / 2.0,
        c[4] / 2.0,
        c[3] / 2.0,
        c[1],
        c[5] / 2.0,
        c[4] / 2.0,
        c[5] / 2.0,
        c[2],
    );
    let mut b = Vector3::new(c[6], c[7], c[8]);
    let mut f = c[9];
    if a.trace() < 0.0 {
        a = -a;
        b = -b;
        f = -f;
    }
    let a_inv = a
        .try_inverse()
        .ok_or_else(|| Error::Domain("quadric has no centre".into()))?;
    let center = -0.5 * a_inv * b;
    let k = (a * center).dot(&center) - f;
    if k <= 0.0 {
        return Err(Error::Domain("quadric is not a real ellipsoid".into()));
    }
    Ellipsoid::new(Point3::from(center), a / k)
}

// ── Tangent cone projection ────────────────────────────────────────────────

/// A circle in 3-space.
#[derive(Debug, Clone, Copy)]
pub struct Circle3 {
    pub center: Point3,
    pub radius: f64,
    pub normal: Vector3,
}

/// Result of projecting the tangent-cone contact circle from a boundary
/// point through the ratio-2 homothety.
#[derive(Debug, Clone)]
pub struct ConeProjection {
    /// Contact circle of the tangent cone from `p` to the sphere.
    pub contact_circle: Circle3,
    /// Samples of the homothety image (ratio 2, centre `p`).
    pub image_samples: Vec<Point3>,
    /// Max boundary defect of the image samples on `∂K`.
    pub max_defect: f64,
}

/// Builds the contact circle of the tangent cone from boundary point `p` to
/// the sphere `s`, applies the homothety with centre `p` and ratio 2, and
/// reports how far the image lies from the boundary of `k`.
pub fn tangent_cone_projection(
    k: &Body3,
    s: &Sphere,
    p: Point3,
    n_samples: usize,
) -> Result<ConeProjection> {
    if !k.is_on_boundary(p, 1e-8) {
        return Err(Error::Domain(
            "cone apex must lie on the body boundary".into(),
        ));
    }
    let d = p - s.center;
    let dist = d.norm();
    if dist <= s.radius {
        return Err(Error::Domain(
            "cone apex must be outside the sphere".into(),
        ));
    }
    // Polar plane of p: contact circle at offset r²/d from the centre.
    let axis = d / dist;
    let offset = s.radius * s.radius / dist;
    let radius = s.radius * (dist * dist - s.radius * s.radius).sqrt() / dist;
    let center = s.center + offset * axis;
    let (e1, e2) = orthonormal_basis(axis);
    let n = n_samples.max(16);
    let image_samples: Vec<Point3> = (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            let y = center + radius * (t.cos() * e1 + t.sin() * e2);
            // homothety with centre p, ratio 2
            p + 2.0 * (y - p)
        })
        .collect();
    let max_defect = image_samples
        .iter()
        .map(|q| k.boundary_defect(*q))
        .fold(0.0f64, f64::max);
    Ok(ConeProjection {
        contact_circle: Circle3 {
            center,
            radius,
            normal: axis,
        },
        image_samples,
        max_defect,
    })
}

// ── Sphere property check ───────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionMode {
    Equipotential,
    Equireciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereVerdict {
    /// Every tangent-plane section is constant at its contact point AND the
    /// constants agree across the sphere.
    ConstantEverywhere,
    /// Per-section constancy holds but the constant varies with the contact
    /// point.
    PerPointOnly,
    NonConstant,
}

#[derive(Debug, Clone)]
pub struct SphereCheckReport {
    pub mode: SectionMode,
    /// Largest in-section deviation over all contact points.
    pub per_point_max_deviation: f64,
    /// Constants `λ(P)` per contact point.
    pub lambda_values: Vec<f64>,
    /// Peak-to-peak spread of `λ(P)`.
    pub lambda_spread: f64,
    pub verdict: SphereVerdict,
}

/// For a grid of contact points `P` on the sphere, cuts the tangent-plane
/// section of `k` analytically and profiles the chord functional through `P`
/// inside that plane.
pub fn sphere_property_check(
    k: &Body3,
    s: &Sphere,
    mode: SectionMode,
    constant_required: bool,
    n_points: usize,
    n_dirs: usize,
    tolerance: f64,
) -> Result<SphereCheckReport> {
    let e = k.as_ellipsoid()?;
    // Strict interiority of the sphere in k.
    for u in fibonacci_sphere(512) {
        let probe = s.center + s.radius * u;
        if !e.contains(probe) {
            return Err(Error::Domain(
                "sphere is not strictly interior to the body".into(),
            ));
        }
    }
    let contact_points = fibonacci_sphere(n_points.max(16));
    let stats: Vec<Result<(f64, f64)>> = par::map_slice(&contact_points, |u| {
        let p = s.center + s.radius * u;
        let (e1, e2) = orthonormal_basis(*u);
        // Section conic in plane coordinates (s, t) centred at p:
        // chords through p solve  A t² + B t + C = 0 per direction.
        let d = p - e.center;
        let m = Matrix2::new(
            (e.q * e1).dot(&e1),
            (e.q * e1).dot(&e2),
            (e.q * e2).dot(&e1),
            (e.q * e2).dot(&e2),
        );
        let b1 = (e.q * d).dot(&e1);
        let b2 = (e.q * d).dot(&e2);
        let c0 = (e.q * d).dot(&d) - 1.0;
        if c0 >= 0.0 {
            return Err(Error::Domain(
                "contact point left the body; sphere not interior".into(),
            ));
        }
        let mut min_v = f64::INFINITY;
        let mut max_v = f64::NEG_INFINITY;
        for j in 0..n_dirs.max(32) {
            let psi = TAU * j as f64 / n_dirs.max(32) as f64;
            let (cp, sp) = (psi.cos(), psi.sin());
            let a2 = m[(0, 0)] * cp * cp + 2.0 * m[(0, 1)] * cp * sp + m[(1, 1)] * sp * sp;
            let b_lin = 2.0 * (b1 * cp + b2 * sp);
            let disc = (b_lin * b_lin - 4.0 * a2 * c0).sqrt();
            let t_plus = (-b_lin + disc) / (2.0 * a2);
            let t_minus = (-b_lin - disc) / (2.0 * a2);
            let (a_len, b_len) = (-t_minus, t_plus);
            let v = match mode {
                SectionMode::Equipotential => a_len * b_len,
                SectionMode::Equireciprocal => 1.0 / a_len + 1.0 / b_len,
            };
            min_v = min_v.min(v);
            max_v = max_v.max(v);
        }
        Ok(((min_v + max_v) / 2.0, max_v - min_v))
    });
    let mut lambda_values = Vec::with_capacity(contact_points.len());
    let mut per_point_max = 0.0f64;
    for s in stats {
        let (lambda, dev) = s?;
        lambda_values.push(lambda);
        per_point_max = per_point_max.max(dev);
    }
    let lmax = lambda_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lmin = lambda_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let lambda_spread = lmax - lmin;
    let scale = lambda_values.iter().map(|l| l.abs()).fold(0.0f64, f64::max);
    let per_point_ok = per_point_max < tolerance * scale.max(1e-12);
    let global_ok = lambda_spread < tolerance * scale.max(1e-12);
    let verdict = if per_point_ok && global_ok {
        SphereVerdict::ConstantEverywhere
    } else if per_point_ok {
        SphereVerdict::PerPointOnly
    } else {
        SphereVerdict::NonConstant
    };
    let _ = constant_required;
    Ok(SphereCheckReport {
        mode,
        per_point_max_deviation: per_point_max,
        lambda_values,
        lambda_spread,
        verdict,
    })
}

// ── 2-cycles of planes ──────────────────────────────────────────────────────

/// A 2-cycle of planes `H_y = {x : <x, y> = δ(y)}` indexed by unit vectors,
/// with odd, continuous offset `δ(-y) = -δ(y)`.
#[derive(Clone)]
pub struct TwoCycle {
    delta: Arc<dyn Fn(Vector3) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for TwoCycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TwoCycle").finish_non_exhaustive()
    }
}

impl TwoCycle {
    /// Validates oddness on a 1000-point antipodal sample.
    pub fn new(delta: Arc<dyn Fn(Vector3) -> f64 + Send + Sync>) -> Result<Self> {
        for u in fibonacci_sphere(1000) {
            let odd = (delta(u) + delta(-u)).abs();
            if odd > 1e-12 {
                return Err(Error::Domain(format!(
                    "plane offset is not odd: |δ(u) + δ(-u)| = {odd:.3e}"
                )));
            }
        }
        Ok(Self { delta })
    }

    #[inline]
    pub fn offset(&self, y: Vector3) -> f64 {
        (self.delta)(y)
    }

    /// Signed distance from a point to the plane `H_y` (unit `y`).
    #[inline]
    pub fn signed_distance(&self, y: Vector3, p: Point3) -> f64 {
        p.coords.dot(&y) - self.offset(y)
    }
}

/// A line in 3-space given by a point and a unit direction.
#[derive(Debug, Clone, Copy)]
pub struct Line3 {
    pub point: Point3,
    pub direction: Vector3,
}

/// Outcome of the plane-through-line search on a 2-cycle.
#[derive(Debug, Clone)]
pub struct TwoCycleRoot {
    /// Unit normal of the plane containing the line.
    pub x0: Vector3,
    /// Residual `σ(x0)` at the root.
    pub sigma_at_root: f64,
    /// Max distance of the line's endpoints/midpoint from the plane.
    pub containment_defect: f64,
}

/// Finds a plane of the cycle containing the line `l`: on the great circle
/// of normals orthogonal to the line direction, the signed distance
/// `σ(x) = <midpoint, x> − δ(x)` is odd and continuous, so a sign change is
/// bracketed and bisected. The line midpoint must lie inside `k`.
pub fn two_cycle_plane_through_line(
    cycle: &TwoCycle,
    l: &Line3,
    half_length: f64,
    k: &Body3,
) -> Result<TwoCycleRoot> {
    let mid = l.point;
    if !k.contains(mid) {
        return Err(Error::Domain(
            "line midpoint must lie inside the body".into(),
        ));
    }
    let u = l.direction.normalize();
    let (e1, e2) = orthonormal_basis(u);
    let x_at = |psi: f64| psi.cos() * e1 + psi.sin() * e2;
    let sigma = |psi: f64| cycle.signed_distance(x_at(psi), mid);

    const N: usize = 720;
    let vals: Vec<f64> = (0..N).map(|i| sigma(TAU * i as f64 / N as f64)).collect();
    let mut root_psi: Option<f64> = None;
    for i in 0..N {
        let a = TAU * i as f64 / N as f64;
        let b = TAU * (i + 1) as f64 / N as f64;
        let (fa, fb) = (vals[i], vals[(i + 1) % N]);
        if fa == 0.0 {
            root_psi = Some(a);
            break;
        }
        if fa * fb < 0.0 {
            root_psi = Some(crate::numerics::bisect(&sigma, a, b, 1e-15));
            break;
        }
    }
    let psi = root_psi.ok_or_else(|| {
        Error::DegenerateIntersection(
            "no sign change of the odd offset at sampling resolution".into(),
        )
    })?;
    let x0 = x_at(psi);
    let sigma_at_root = cycle.signed_distance(x0, mid);
    let ends = [
        mid,
        mid + half_length * u,
        mid - half_length * u,
    ];
    let containment_defect = ends
        .iter()
        .map(|p| cycle.signed_distance(x0, *p).abs())
        .fold(0.0f64, f64::max);
    Ok(TwoCycleRoot {
        x0,
        sigma_at_root,
        containment_defect,
    })
}
