//! Derivative-free search for an interior circle whose tangent-chord
//! functional is constant: simplex descent over (centre, radius) with
//! multistart seeding on a coarse feasible grid, plus a grid-scan
//! uniqueness certificate.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry2d::{unit, Circle, ConvexCurve, Point, TAU};
use crate::par;
use crate::property_lab::Functional;

/// A candidate interior circle with its profile deviation.
#[derive(Debug, Clone, Copy)]
pub struct CircleCandidate {
    pub center: Point,
    pub radius: f64,
    /// Peak-to-peak deviation of the chosen functional over the grid.
    pub objective: f64,
    /// `min_∂K |X - center| - radius`; positive for strictly interior circles.
    pub feasibility_margin: f64,
}

/// Search configuration. `tolerance` is the absolute deviation below which
/// the verdict is `Found`.
///
/// `min_radius_fraction` keeps the search away from the point-circle limit:
/// a body with an equichordal or equireciprocal point admits circles of
/// radius `r -> 0` around it whose deviation vanishes like `O(r)`, which
/// says nothing about genuine interior circles. Candidates must have radius
/// at least this fraction of the body diameter.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub functional: Functional,
    pub n_grid: usize,
    pub multistarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub min_radius_fraction: f64,
}

impl SearchConfig {
    pub fn new(functional: Functional) -> Self {
        Self {
            functional,
            n_grid: 96,
            multistarts: 16,
            max_iterations: 300,
            tolerance: 1e-6,
            seed: 42,
            min_radius_fraction: 0.01,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.multistarts < 1 {
            return Err(Error::Domain("multistarts must be >= 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Domain("search tolerance must be positive".into()));
        }
        if self.n_grid < 16 {
            return Err(Error::Domain("search grid must have >= 16 points".into()));
        }
        if !(self.min_radius_fraction > 0.0) {
            return Err(Error::Domain("minimum radius fraction must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchVerdict {
    Found,
    NoneBelowTolerance,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: CircleCandidate,
    pub verdict: SearchVerdict,
}

/// Context shared by objective evaluations.
struct SearchSpace<'a> {
    curve: &'a ConvexCurve,
    functional: Functional,
    n_grid: usize,
    /// Feasibility floor `1e-6 · diameter` on the interior clearance.
    floor: f64,
    /// Minimum admissible candidate radius.
    min_radius: f64,
    extent: f64,
}

impl<'a> SearchSpace<'a> {
    fn new(
        curve: &'a ConvexCurve,
        functional: Functional,
        n_grid: usize,
        min_radius_fraction: f64,
    ) -> Self {
        let mut max_r = 0.0f64;
        for k in 0..256 {
            max_r = max_r.max(curve.radius_at(TAU * k as f64 / 256.0));
        }
        let diameter = 2.0 * max_r;
        Self {
            curve,
            functional,
            n_grid,
            floor: 1e-6 * diameter,
            min_radius: min_radius_fraction * diameter,
            extent: max_r,
        }
    }

    fn margin(&self, center: Point, radius: f64) -> f64 {
        self.curve.min_distance_to_boundary(center, 512) - radius
    }

    /// Penalised objective: profile deviation plus `1e6` times the violation
    /// of the clearance floor or the minimum-radius constraint.
    fn objective(&self, x: [f64; 3]) -> f64 {
        let center = Point::new(x[0], x[1]);
        let radius = x[2];
        if !radius.is_finite() || radius <= 0.0 {
            return 1e9 + radius.abs();
        }
        if !self.curve.is_strictly_inside(center, 0.0) {
            return 1e9 + (center - self.curve.center()).norm();
        }
        let margin = self.margin(center, radius);
        if margin <= 0.0 {
            return 1e6 * (self.floor - margin) + 1e3;
        }
        let penalty = 1e6 * (self.floor - margin).max(0.0)
            + 1e6 * (self.min_radius - radius).max(0.0);
        match self.deviation(&Circle { center, radius }) {
            Some(dev) => dev + penalty,
            None => 1e6,
        }
    }

    /// Profile deviation over the contact-angle grid. Consecutive chords
    /// are close, so each intersection is warm-started from the previous
    /// chord's endpoint parameters, falling back to the global sweep when
    /// the local brackets fail.
    fn deviation(&self, circle: &Circle) -> Option<f64> {
        let mut min_v = f64::INFINITY;
        let mut max_v = f64::NEG_INFINITY;
        let mut hints: Option<(f64, f64)> = None;
        for k in 0..self.n_grid {
            let phi = TAU * k as f64 / self.n_grid as f64;
            let (a_len, b_len, alpha, params) = self.chord_lengths(circle, phi, hints)?;
            hints = Some(params);
            let v = match self.functional {
                Functional::Product => a_len * b_len,
                Functional::Length => a_len + b_len,
                Functional::ReciprocalSum => 1.0 / a_len + 1.0 / b_len,
                Functional::SubtendedAngle => alpha,
            };
            min_v = min_v.min(v);
            max_v = max_v.max(v);
        }
        Some(max_v - min_v)
    }

    fn chord_lengths(
        &self,
        circle: &Circle,
        phi: f64,
        hints: Option<(f64, f64)>,
    ) -> Option<(f64, f64, f64, (f64, f64))> {
        let center_base = self.curve.to_base_point(circle.center);
        let p_base = center_base + circle.radius * unit(phi);
        let dir_base = crate::geometry2d::rot90(unit(phi));
        let line = crate::geometry2d::Line {
            point: self.curve.to_world_point(p_base),
            direction: self.curve.to_world_vector(dir_base),
        };
        let pair = hints
            .and_then(|h| self.curve.line_intersections_hinted(&line, h))
            .map(|[a, b]| (a, b));
        let (first, second) = match pair {
            Some(p) => p,
            None => {
                let hits = self.curve.line_intersections(&line).ok()?;
                if hits.len() != 2 {
                    return None;
                }
                (hits[0], hits[1])
            }
        };
        let sa = line.projection(first.point);
        let sb = line.projection(second.point);
        if !(sa < 0.0 && sb > 0.0) {
            // Hint landed on the wrong crossings; retry with the sweep.
            let hits = self.curve.line_intersections(&line).ok()?;
            if hits.len() != 2 {
                return None;
            }
            let sa = line.projection(hits[0].point);
            let sb = line.projection(hits[1].point);
            if !(sa < 0.0 && sb > 0.0) {
                return None;
            }
            let alpha = crate::geometry2d::angle_between(
                hits[0].point - circle.center,
                hits[1].point - circle.center,
            );
            return Some((-sa, sb, alpha, (hits[0].param, hits[1].param)));
        }
        let alpha = crate::geometry2d::angle_between(
            first.point - circle.center,
            second.point - circle.center,
        );
        Some((-sa, sb, alpha, (first.param, second.param)))
    }
}

/// Nelder-Mead simplex descent (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2) with two shrinking restarts around the incumbent.
fn nelder_mead(
    f: &dyn Fn([f64; 3]) -> f64,
    start: [f64; 3],
    step: f64,
    max_iter: usize,
) -> ([f64; 3], f64) {
    let mut best = start;
    let mut best_f = f(start);
    let mut scale = step;
    for _restart in 0..3 {
        let (x, fx) = nelder_mead_once(f, best, scale, max_iter);
        if fx < best_f {
            best = x;
            best_f = fx;
        }
        scale *= 0.1;
    }
    (best, best_f)
}

fn nelder_mead_once(
    f: &dyn Fn([f64; 3]) -> f64,
    start: [f64; 3],
    step: f64,
    max_iter: usize,
) -> ([f64; 3], f64) {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    simplex.push((start, f(start)));
    for d in 0..3 {
        let mut v = start;
        v[d] += step;
        simplex.push((v, f(v)));
    }

    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[3].1 - simplex[0].1;
        let size = (0..3)
            .map(|d| (simplex[3].0[d] - simplex[0].0[d]).abs())
            .fold(0.0f64, f64::max);
        if spread < 1e-13 && size < 1e-9 {
            break;
        }
        let centroid = {
            let mut c = [0.0; 3];
            for v in simplex.iter().take(3) {
                for d in 0..3 {
                    c[d] += v.0[d] / 3.0;
                }
            }
            c
        };
        let worst = simplex[3];
        let reflect = add(centroid, scale(sub(centroid, worst.0), ALPHA));
        let f_r = f(reflect);
        if f_r < simplex[0].1 {
            let expand = add(centroid, scale(sub(centroid, worst.0), GAMMA));
            let f_e = f(expand);
            simplex[3] = if f_e < f_r { (expand, f_e) } else { (reflect, f_r) };
        } else if f_r < simplex[2].1 {
            simplex[3] = (reflect, f_r);
        } else {
            let contract = add(centroid, scale(sub(worst.0, centroid), RHO));
            let f_c = f(contract);
            if f_c < worst.1 {
                simplex[3] = (contract, f_c);
            } else {
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    let shrunk = add(best, scale(sub(v.0, best), SIGMA));
                    *v = (shrunk, f(shrunk));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    (simplex[0].0, simplex[0].1)
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Searches for an interior circle minimising the profile deviation.
///
/// Seeds come from a coarse feasible grid (centres on a 5×5 lattice, three
/// radius fractions of the local clearance), jittered deterministically from
/// `config.seed`; the best `multistarts` seeds each run a simplex descent,
/// concurrently. Ties between equal objectives break lexicographically by
/// centre.
pub fn find_circle(curve: &ConvexCurve, config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let space = SearchSpace::new(curve, config.functional, config.n_grid, config.min_radius_fraction);

    // Coarse feasible seed grid.
    let mut seeds: Vec<([f64; 3], f64)> = Vec::new();
    let o = curve.center();
    for i in 0..5 {
        for j in 0..5 {
            let cx = o.x + space.extent * 0.5 * (i as f64 - 2.0) / 2.0;
            let cy = o.y + space.extent * 0.5 * (j as f64 - 2.0) / 2.0;
            let c = Point::new(cx, cy);
            if !curve.is_strictly_inside(c, space.floor) {
                continue;
            }
            let clearance = curve.min_distance_to_boundary(c, 512);
            for frac in [0.25, 0.5, 0.75] {
                let r = clearance * frac;
                if r > space.min_radius {
                    seeds.push(([cx, cy, r], f64::INFINITY));
                }
            }
        }
    }
    if seeds.is_empty() {
        // Body too thin for the minimum candidate radius.
        return Err(Error::NoFeasibleCircle);
    }
    let evals = par::map_slice(&seeds, |(x, _)| space.objective(*x));
    for (seed, e) in seeds.iter_mut().zip(evals) {
        seed.1 = e;
    }
    seeds.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    seeds.truncate(config.multistarts);

    // Deterministic jitter so restarts do not collapse onto grid symmetry.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let jitter = space.extent * 1e-3;
    let starts: Vec<[f64; 3]> = seeds
        .iter()
        .map(|(x, _)| {
            [
                x[0] + rng.gen_range(-jitter..jitter),
                x[1] + rng.gen_range(-jitter..jitter),
                (x[2] + rng.gen_range(-jitter..jitter)).max(space.min_radius),
            ]
        })
        .collect();

    let step = space.extent * 0.1;
    let results = par::map_slice(&starts, |&s| {
        nelder_mead(&|x| space.objective(x), s, step, config.max_iterations)
    });
    let (bx, bf) = results
        .into_iter()
        .min_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap()
                .then(a.0[0].partial_cmp(&b.0[0]).unwrap())
                .then(a.0[1].partial_cmp(&b.0[1]).unwrap())
        })
        .unwrap();

    let center = Point::new(bx[0], bx[1]);
    let radius = bx[2];
    let margin = space.margin(center, radius);
    if margin <= 0.0 || radius < space.min_radius * (1.0 - 1e-9) {
        return Err(Error::NoFeasibleCircle);
    }
    let best = CircleCandidate {
        center,
        radius,
        objective: bf,
        feasibility_margin: margin,
    };
    let verdict = if bf < config.tolerance {
        SearchVerdict::Found
    } else {
        SearchVerdict::NoneBelowTolerance
    };
    Ok(SearchOutcome { best, verdict })
}

/// Exclusion ball radius (in the joint centre/radius parameter space)
/// around the found candidate when certifying uniqueness.
pub const UNIQUENESS_EXCLUSION_RADIUS: f64 = 0.05;

/// Grid-scan report on candidates away from the found circle.
#[derive(Debug, Clone)]
pub struct UniquenessReport {
    /// Best feasible candidate outside the exclusion neighbourhood.
    pub second_best: Option<CircleCandidate>,
    /// Whether that candidate also clears the search tolerance (a continuum
    /// of near-constant circles, as in a disc).
    pub disc_like: bool,
    pub grid_step: f64,
    pub scanned: usize,
}

/// Scans a (centre, radius) grid, excluding a neighbourhood of `found`, and
/// reports the second-best objective. For non-disc bodies this is bounded
/// away from zero.
pub fn certify_uniqueness_grid(
    curve: &ConvexCurve,
    found: &CircleCandidate,
    grid_step: f64,
    config: &SearchConfig,
) -> Result<UniquenessReport> {
    config.validate()?;
    if !(grid_step > 0.0) {
        return Err(Error::Domain("grid step must be positive".into()));
    }
    let space = SearchSpace::new(curve, config.functional, config.n_grid, config.min_radius_fraction);
    let o = curve.center();
    let half_span = space.extent;
    let steps = (2.0 * half_span / grid_step).ceil() as i64;

    let mut candidates: Vec<[f64; 3]> = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps {
            let cx = o.x - half_span + i as f64 * grid_step;
            let cy = o.y - half_span + j as f64 * grid_step;
            let c = Point::new(cx, cy);
            if !curve.is_strictly_inside(c, space.floor) {
                continue;
            }
            let clearance = curve.min_distance_to_boundary(c, 512);
            let mut r = grid_step.max(space.min_radius);
            while r < clearance - space.floor {
                let d2 = (cx - found.center.x).powi(2)
                    + (cy - found.center.y).powi(2)
                    + (r - found.radius).powi(2);
                if d2.sqrt() >= UNIQUENESS_EXCLUSION_RADIUS {
                    candidates.push([cx, cy, r]);
                }
                r += grid_step;
            }
        }
    }
    let scanned = candidates.len();
    let evals = par::map_slice(&candidates, |&x| space.objective(x));
    let mut second_best: Option<CircleCandidate> = None;
    for (x, f) in candidates.iter().zip(evals) {
        if second_best.as_ref().is_none_or(|b| f < b.objective) {
            let center = Point::new(x[0], x[1]);
            second_best = Some(CircleCandidate {
                center,
                radius: x[2],
                objective: f,
                feasibility_margin: space.margin(center, x[2]),
            });
        }
    }
    let disc_like = second_best
        .as_ref()
        .is_some_and(|b| b.objective < config.tolerance);
    Ok(UniquenessReport {
        second_best,
        disc_like,
        grid_step,
        scanned,
    })
}

/// Profile-deviation objective for an explicit candidate (used by tests and
/// the uniqueness scan; invariant under joint rigid motions of the body and
/// the candidate).
pub fn candidate_objective(
    curve: &ConvexCurve,
    circle: &Circle,
    functional: Functional,
    n_grid: usize,
) -> Result<f64> {
    let space = SearchSpace::new(curve, functional, n_grid, 0.01);
    space
        .deviation(circle)
        .ok_or_else(|| Error::DegenerateIntersection("objective evaluation failed".into()))
}
