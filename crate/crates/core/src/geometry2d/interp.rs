//! Periodic interpolation of sampled radial data.
//!
//! Uniform grids use trigonometric interpolation (spectral accuracy for
//! smooth bodies); non-uniform grids use a periodic cubic spline.

use crate::error::{Error, Result};
use crate::geometry2d::primitives::TAU;

/// Truncated Fourier series `a0/2 + Σ a_m cos(mθ) + b_m sin(mθ)`.
#[derive(Debug, Clone)]
pub struct TrigInterp {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigInterp {
    /// Fits the interpolating series through `n` uniformly spaced samples.
    pub fn fit_uniform(samples: &[(f64, f64)]) -> Self {
        let n = samples.len();
        let half = n / 2;
        let mut a = vec![0.0; half + 1];
        let mut b = vec![0.0; half + 1];
        for m in 0..=half {
            let (mut ca, mut cb) = (0.0, 0.0);
            for &(theta, r) in samples {
                let (s, c) = (m as f64 * theta).sin_cos();
                ca += r * c;
                cb += r * s;
            }
            a[m] = 2.0 * ca / n as f64;
            b[m] = 2.0 * cb / n as f64;
        }
        if n.is_multiple_of(2) {
            // Nyquist mode carries half weight on an even grid.
            a[half] *= 0.5;
            b[half] = 0.0;
        }
        Self { a, b }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut v = 0.5 * self.a[0];
        for m in 1..self.a.len() {
            let (s, c) = (m as f64 * theta).sin_cos();
            v += self.a[m] * c + self.b[m] * s;
        }
        v
    }

    pub fn eval_d1(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for m in 1..self.a.len() {
            let mf = m as f64;
            let (s, c) = (mf * theta).sin_cos();
            v += mf * (-self.a[m] * s + self.b[m] * c);
        }
        v
    }

    pub fn eval_d2(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for m in 1..self.a.len() {
            let mf = m as f64;
            let (s, c) = (mf * theta).sin_cos();
            v -= mf * mf * (self.a[m] * c + self.b[m] * s);
        }
        v
    }
}

/// Periodic C² cubic spline through `(theta, r)` knots.
#[derive(Debug, Clone)]
pub struct PeriodicCubic {
    theta: Vec<f64>, // ascending, theta[n] = theta[0] + 2π
    value: Vec<f64>, // value[n] = value[0]
    second: Vec<f64>,
}

impl PeriodicCubic {
    pub fn fit(samples: &[(f64, f64)]) -> Result<Self> {
        let n = samples.len();
        if n < 3 {
            return Err(Error::InvalidBody("periodic spline needs >= 3 knots".into()));
        }
        let mut theta: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let mut value: Vec<f64> = samples.iter().map(|s| s.1).collect();
        theta.push(theta[0] + TAU);
        value.push(value[0]);

        let h: Vec<f64> = (0..n).map(|i| theta[i + 1] - theta[i]).collect();
        let slope: Vec<f64> = (0..n).map(|i| (value[i + 1] - value[i]) / h[i]).collect();

        // Cyclic tridiagonal system for the second derivatives, solved with
        // the Sherman-Morrison correction.
        let mut diag = vec![0.0; n];
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let hm = h[(i + n - 1) % n];
            let hp = h[i];
            lower[i] = hm / 6.0;
            diag[i] = (hm + hp) / 3.0;
            upper[i] = hp / 6.0;
            rhs[i] = slope[i] - slope[(i + n - 1) % n];
        }
        let solve_tri = |d: &[f64], rhs: &[f64]| -> Vec<f64> {
            let mut c = vec![0.0; n];
            let mut x = vec![0.0; n];
            let mut dd = vec![0.0; n];
            dd[0] = d[0];
            c[0] = upper[0] / dd[0];
            x[0] = rhs[0] / dd[0];
            for i in 1..n {
                dd[i] = d[i] - lower[i] * c[i - 1];
                c[i] = upper[i] / dd[i];
                x[i] = (rhs[i] - lower[i] * x[i - 1]) / dd[i];
            }
            for i in (0..n - 1).rev() {
                x[i] -= c[i] * x[i + 1];
            }
            x
        };
        // Corner entries: lower[0] couples to index n-1, upper[n-1] to 0.
        let gamma = -diag[0];
        let mut dmod = diag.clone();
        dmod[0] -= gamma;
        dmod[n - 1] -= lower[0] * upper[n - 1] / gamma;
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = upper[n - 1];
        let y = solve_tri(&dmod, &rhs);
        let z = solve_tri(&dmod, &u);
        let fact = (y[0] + lower[0] * y[n - 1] / gamma) / (1.0 + z[0] + lower[0] * z[n - 1] / gamma);
        let second: Vec<f64> = (0..n).map(|i| y[i] - fact * z[i]).collect();

        let mut second = second;
        second.push(second[0]);
        Ok(Self {
            theta,
            value,
            second,
        })
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let t0 = self.theta[0];
        let tt = t0 + (t - t0).rem_euclid(TAU);
        let mut lo = 0usize;
        let mut hi = self.theta.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.theta[mid] <= tt {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, tt)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (i, tt) = self.locate(t);
        let h = self.theta[i + 1] - self.theta[i];
        let a = (self.theta[i + 1] - tt) / h;
        let b = (tt - self.theta[i]) / h;
        a * self.value[i]
            + b * self.value[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / 6.0
    }

    pub fn eval_d1(&self, t: f64) -> f64 {
        let (i, tt) = self.locate(t);
        let h = self.theta[i + 1] - self.theta[i];
        let a = (self.theta[i + 1] - tt) / h;
        let b = (tt - self.theta[i]) / h;
        (self.value[i + 1] - self.value[i]) / h
            + ((3.0 * b * b - 1.0) * self.second[i + 1] - (3.0 * a * a - 1.0) * self.second[i]) * h
                / 6.0
    }

    pub fn eval_d2(&self, t: f64) -> f64 {
        let (i, tt) = self.locate(t);
        let h = self.theta[i + 1] - self.theta[i];
        let a = (self.theta[i + 1] - tt) / h;
        let b = (tt - self.theta[i]) / h;
        a * self.second[i] + b * self.second[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_samples(n: usize, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                (t, f(t))
            })
            .collect()
    }

    #[test]
    fn trig_reproduces_low_harmonics() {
        let f = |t: f64| 2.0 + 0.4 * t.cos() + 0.1 * (3.0 * t).sin();
        let interp = TrigInterp::fit_uniform(&uniform_samples(32, f));
        for k in 0..100 {
            let t = 0.0613 * k as f64;
            assert!((interp.eval(t) - f(t)).abs() < 1e-12);
            let d1 = -0.4 * t.sin() + 0.3 * (3.0 * t).cos();
            assert!((interp.eval_d1(t) - d1).abs() < 1e-11);
            let d2 = -0.4 * t.cos() - 0.9 * (3.0 * t).sin();
            assert!((interp.eval_d2(t) - d2).abs() < 1e-10);
        }
    }

    #[test]
    fn spline_interpolates_and_is_periodic() {
        let f = |t: f64| 2.0 + 0.4 * t.cos();
        let mut pts = uniform_samples(64, f);
        // perturb spacing so the non-uniform path is exercised
        for (i, p) in pts.iter_mut().enumerate() {
            if i > 0 {
                p.0 += 0.01 * ((i * 7 % 3) as f64 - 1.0) * 0.5;
                p.1 = f(p.0);
            }
        }
        let sp = PeriodicCubic::fit(&pts).unwrap();
        for &(t, r) in &pts {
            assert!((sp.eval(t) - r).abs() < 1e-12);
        }
        for k in 0..50 {
            let t = 0.13 * k as f64;
            assert!((sp.eval(t) - f(t)).abs() < 1e-5);
            assert!((sp.eval(t + TAU) - sp.eval(t)).abs() < 1e-12);
        }
    }
}
