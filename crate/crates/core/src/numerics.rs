//! Small scalar routines: quadrature, bisection, golden-section minimisation.

/// Composite Simpson rule on `n` panels (`n` rounded up to even).
pub(crate) fn composite_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n.is_multiple_of(2) { n.max(2) } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Composite Simpson with one Richardson extrapolation step (compares the
/// `n`- and `n/2`-panel sums).
pub(crate) fn simpson_richardson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let coarse = composite_simpson(f, a, b, n / 2);
    let fine = composite_simpson(f, a, b, n);
    fine + (fine - coarse) / 15.0
}

fn simpson_slice(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
}

fn adaptive_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    whole: f64,
    m: f64,
    fm: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (left, lm, flm) = simpson_slice(f, a, fa, m, fm);
    let (right, rm, frm) = simpson_slice(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_rec(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
        + adaptive_rec(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson_slice(f, a, fa, b, fb);
    adaptive_rec(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// Bisection for a root of `f` in `[a, b]`. The interval should bracket a
/// sign change; if re-evaluation noise destroys the bracket (a root within
/// rounding of an endpoint), the endpoint with the smaller magnitude is
/// returned.
pub(crate) fn bisect(f: &dyn Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    let fb = f(b);
    if fb == 0.0 {
        return b;
    }
    if fa * fb > 0.0 {
        return if fa.abs() <= fb.abs() { a } else { b };
    }
    while (b - a).abs() > xtol {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimisation of a unimodal function on `[a, b]`.
pub(crate) fn golden_min(f: &dyn Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_sine() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(&|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn golden_min_quadratic() {
        let (x, _) = golden_min(&|x: f64| (x - 0.3).powi(2), -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-10);
    }
}
