//! Reference eigenvalues of the disc from the Bessel determinant of its
//! rotationally symmetric shear modes.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun;

/// Roots where |J₁(a)| or |J₁(b)| fall below this are discarded.
pub const POLE_GUARD: f64 = 1e-10;
const REAL_GRID_STEP: f64 = 1e-3;
const NEWTON_MAX_ITER: usize = 60;
const DUPLICATE_DISTANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscProblem {
    pub radius: f64,
    pub mu: f64,
    pub rho: f64,
}

impl Default for DiscProblem {
    fn default() -> Self {
        Self { radius: 0.5, mu: 1.0 / 16.0, rho: 4.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscRoot {
    pub omega: Complex64,
    pub abs_det: f64,
}

impl DiscProblem {
    pub fn new(radius: f64, mu: f64, rho: f64) -> Result<Self> {
        let p = Self { radius, mu, rho };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(self.radius) && ok(self.mu) && ok(self.rho)) || self.rho == 1.0 {
            return Err(Error::Material(format!(
                "disc needs R > 0, mu > 0, rho > 0 and rho != 1, got R = {}, mu = {}, rho = {}",
                self.radius, self.mu, self.rho
            )));
        }
        Ok(())
    }

    /// Scale factors of ω in the two Bessel arguments a = αω, b = βω.
    fn scales(&self) -> (f64, f64) {
        let alpha = self.radius / self.mu.sqrt();
        (alpha, alpha * self.rho.sqrt())
    }
}

/// J₁(z), J₁'(z) and J₁''(z).
fn j1_derivatives(z: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
    let (j0, j1) = specfun::bessel_j01(z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok((j1, Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)));
    }
    let d1 = j0 - j1 / z;
    let d2 = -d1 / z - (1.0 - 1.0 / (z * z)) * j1;
    Ok((j1, d1, d2))
}

/// det [[J₁(a), J₁(b)], [a J₁'(a), b J₁'(b)]] with a = ωR/√μ, b = ωR√(ρ/μ).
pub fn disc_det(problem: &DiscProblem, omega: Complex64) -> Result<Complex64> {
    Ok(det_and_derivative(problem, omega)?.0)
}

fn det_and_derivative(problem: &DiscProblem, omega: Complex64) -> Result<(Complex64, Complex64)> {
    problem.validate()?;
    if omega == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroFrequency);
    }
    let (alpha, beta) = problem.scales();
    let (a, b) = (omega * alpha, omega * beta);
    let (ja, da, dda) = j1_derivatives(a)?;
    let (jb, db, ddb) = j1_derivatives(b)?;
    let det = ja * b * db - jb * a * da;
    // d/dω of each factor via the chain rule
    let d_ja = alpha * da;
    let d_jb = beta * db;
    let d_bdb = beta * db + b * beta * ddb;
    let d_ada = alpha * da + a * alpha * dda;
    let deriv = d_ja * b * db + ja * d_bdb - d_jb * a * da - jb * d_ada;
    Ok((det, deriv))
}

fn guarded(problem: &DiscProblem, omega: Complex64) -> Result<bool> {
    let (alpha, beta) = problem.scales();
    let ja = specfun::bessel_j(specfun::Order::One, omega * alpha)?;
    let jb = specfun::bessel_j(specfun::Order::One, omega * beta)?;
    Ok(ja.norm() > POLE_GUARD && jb.norm() > POLE_GUARD)
}

/// Real roots in [lo, hi]: sign changes of the (real) determinant on a fine
/// grid, bisected to adjacent doubles.
pub fn disc_roots_real(problem: &DiscProblem, lo: f64, hi: f64) -> Result<Vec<DiscRoot>> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(Error::InvalidArgument(format!("root interval [{lo}, {hi}] must satisfy 0 < lo < hi")));
    }
    let f = |w: f64| disc_det(problem, Complex64::new(w, 0.0)).map(|d| d.re);
    let n = ((hi - lo) / REAL_GRID_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&w| f(w)).collect::<Result<_>>()?;
    let mut roots = Vec::new();
    for k in 0..n {
        let (mut a, mut b) = (grid[k], grid[k + 1]);
        let (mut fa, fb) = (values[k], values[k + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        loop {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = f(mid)?;
            if fm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        let (da, db) = (f(a)?.abs(), f(b)?.abs());
        roots.push(if da <= db { a } else { b });
    }
    if values[n] == 0.0 {
        roots.push(grid[n]);
    }
    let mut out = Vec::new();
    for w in roots {
        let omega = Complex64::new(w, 0.0);
        if guarded(problem, omega)? {
            out.push(DiscRoot { omega, abs_det: disc_det(problem, omega)?.norm() });
        }
    }
    Ok(out)
}

/// Newton's method on the analytic determinant.
fn newton(problem: &DiscProblem, start: Complex64) -> Result<Option<Complex64>> {
    let mut w = start;
    for _ in 0..NEWTON_MAX_ITER {
        let (d, dd) = det_and_derivative(problem, w)?;
        if dd.norm() == 0.0 {
            return Ok(None);
        }
        let step = d / dd;
        w -= step;
        if !w.is_finite() {
            return Ok(None);
        }
        if step.norm() <= 4.0 * f64::EPSILON * w.norm() {
            return Ok(Some(w));
        }
    }
    // accept a root that stalls at the rounding floor
    Ok((disc_det(problem, w)?.norm() < 1e-12).then_some(w))
}

/// Complex roots in [re_lo, re_hi] × [im_lo, im_hi]: local minima of |det|
/// on an n × n grid polished by Newton's method. Roots on the real axis are
/// reported with Im ω = 0.
pub fn disc_roots_complex(problem: &DiscProblem, re: (f64, f64), im: (f64, f64), n: usize) -> Result<Vec<DiscRoot>> {
    if !(re.0 < re.1 && im.0 < im.1) || n < 4 {
        return Err(Error::InvalidArgument(format!("bad root rectangle {re:?} x {im:?} with grid {n}")));
    }
    let at = |i: usize, j: usize| {
        Complex64::new(re.0 + (re.1 - re.0) * i as f64 / (n - 1) as f64, im.0 + (im.1 - im.0) * j as f64 / (n - 1) as f64)
    };
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).collect();
    let mags: Vec<f64> = cells
        .par_iter()
        .map(|&(i, j)| disc_det(problem, at(i, j)).map(|d| d.norm()).unwrap_or(f64::INFINITY))
        .collect();
    let mag = |i: usize, j: usize| mags[j * n + i];
    let mut starts = Vec::new();
    for &(i, j) in &cells {
        let v = mag(i, j);
        let mut is_min = v.is_finite();
        for dj in -1i64..=1 {
            for di in -1i64..=1 {
                let (ii, jj) = (i as i64 + di, j as i64 + dj);
                if (di, dj) == (0, 0) || ii < 0 || jj < 0 || ii >= n as i64 || jj >= n as i64 {
                    continue;
                }
                if mag(ii as usize, jj as usize) < v {
                    is_min = false;
                }
            }
        }
        if is_min {
            starts.push(at(i, j));
        }
    }
    let inside = |w: Complex64| {
        let h = 1e-12;
        w.re >= re.0 - h && w.re <= re.1 + h && w.im >= im.0 - h && w.im <= im.1 + h
    };
    let mut out: Vec<DiscRoot> = Vec::new();
    for s in starts {
        let Some(mut w) = newton(problem, s)? else { continue };
        if w.im.abs() < 1e-13 * w.re.abs() {
            w.im = 0.0;
        }
        if !inside(w) || !guarded(problem, w)? {
            continue;
        }
        let abs_det = disc_det(problem, w)?.norm();
        if abs_det >= 1e-12 {
            continue;
        }
        if out.iter().all(|r| (r.omega - w).norm() > DUPLICATE_DISTANCE) {
            out.push(DiscRoot { omega: w, abs_det });
        }
    }
    out.sort_by(|a, b| a.omega.re.total_cmp(&b.omega.re).then(a.omega.im.total_cmp(&b.omega.im)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_derivative_matches_differences() {
        let p = DiscProblem::default();
        for w in [Complex64::new(1.3, 0.0), Complex64::new(1.9, 0.3), Complex64::new(0.7, 0.9)] {
            let h = 1e-6;
            let fd = (disc_det(&p, w + h).unwrap() - disc_det(&p, w - h).unwrap()) / (2.0 * h);
            let (_, d) = det_and_derivative(&p, w).unwrap();
            assert!((fd - d).norm() < 1e-6 * d.norm().max(1.0), "{w}: {fd} vs {d}");
        }
    }

    #[test]
    fn validation() {
        assert!(DiscProblem::new(0.5, 1.0 / 16.0, 1.0).is_err());
        assert!(DiscProblem::new(-0.5, 1.0 / 16.0, 4.0).is_err());
        assert!(disc_det(&DiscProblem::default(), Complex64::new(0.0, 0.0)).is_err());
    }
}
