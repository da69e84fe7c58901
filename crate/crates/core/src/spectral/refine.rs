use num_complex::Complex64;

use super::objective::{sigma1, SpectrumSample};
use crate::assembly::MfsSystem;
use crate::error::{Error, Result};

pub const GOLDEN_WIDTH: f64 = 1e-13;
pub const SIMPLEX_DIAMETER: f64 = 1e-12;
pub const SIMPLEX_MAX_ITER: usize = 300;
const MAX_BRACKET_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefineMode {
    /// Golden-section search along the real axis. The optional bracket is
    /// trusted when the start point lies below both of its ends.
    RealLine { bracket: Option<(f64, f64)> },
    /// Nelder–Mead in (Re ω, Im ω) from a simplex with the given edge.
    ComplexPlane { initial_step: f64 },
}

pub fn refine(system: &MfsSystem, omega0: Complex64, mode: RefineMode) -> Result<SpectrumSample> {
    match mode {
        RefineMode::RealLine { bracket } => refine_real(system, omega0.re, bracket),
        RefineMode::ComplexPlane { initial_step } => refine_complex(system, omega0, initial_step),
    }
}

fn eval_real(system: &MfsSystem, w: f64) -> Result<SpectrumSample> {
    sigma1(system, Complex64::new(w, 0.0))
}

/// Widens [a, c] around b until f(b) is below both ends, walking downhill.
fn bracket_minimum(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    mut c: f64,
) -> Result<(f64, f64, f64)> {
    let (mut fa, mut fb, mut fc) = (f(a)?, f(b)?, f(c)?);
    for _ in 0..MAX_BRACKET_STEPS {
        if fb <= fa && fb <= fc {
            return Ok((a, b, c));
        }
        let h = c - a;
        if fa < fc {
            // move left
            (c, fc) = (b, fb);
            (b, fb) = (a, fa);
            a = b - 1.618 * h.max(1e-12) * 0.5;
            if a <= 0.0 {
                a = 0.5 * b;
            }
            fa = f(a)?;
        } else {
            (a, fa) = (b, fb);
            (b, fb) = (c, fc);
            c = b + 1.618 * h.max(1e-12) * 0.5;
            fc = f(c)?;
        }
    }
    Err(Error::NoBracket { omega: b })
}

/// Golden-section search on the bracket around `omega0`, without comparing
/// the result against the start.
pub(crate) fn golden_real(system: &MfsSystem, omega0: f64, bracket: Option<(f64, f64)>) -> Result<SpectrumSample> {
    let mut f = |w: f64| eval_real(system, w).map(|s| s.sigma1);
    let (lo, hi) = bracket.unwrap_or((omega0 - 1e-3, omega0 + 1e-3));
    if !(0.0 < lo && lo < omega0 && omega0 < hi) {
        return Err(Error::InvalidArgument(format!("bracket [{lo}, {hi}] must be positive and contain {omega0}")));
    }
    let (mut a, _, mut c) = bracket_minimum(&mut f, lo, omega0, hi)?;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = c - inv_phi * (c - a);
    let mut x2 = a + inv_phi * (c - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while c - a > GOLDEN_WIDTH {
        if f1 <= f2 {
            c = x2;
            (x2, f2) = (x1, f1);
            x1 = c - inv_phi * (c - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            (x1, f1) = (x2, f2);
            x2 = a + inv_phi * (c - a);
            f2 = f(x2)?;
        }
        if x1 >= x2 {
            break;
        }
    }
    eval_real(system, if f1 <= f2 { x1 } else { x2 })
}

/// Golden-section refinement that never returns a point worse than `omega0`.
pub fn refine_real(system: &MfsSystem, omega0: f64, bracket: Option<(f64, f64)>) -> Result<SpectrumSample> {
    let best = golden_real(system, omega0, bracket)?;
    let start = eval_real(system, omega0)?;
    Ok(if best.sigma1 <= start.sigma1 { best } else { start })
}

pub fn refine_complex(system: &MfsSystem, omega0: Complex64, initial_step: f64) -> Result<SpectrumSample> {
    let f = |p: [f64; 2]| sigma1(system, Complex64::new(p[0], p[1])).map(|s| s.sigma1);
    let h = if initial_step > 0.0 { initial_step } else { 1e-2 };
    let mut simplex = [[omega0.re, omega0.im], [omega0.re + h, omega0.im], [omega0.re, omega0.im + h]];
    let mut values = [f(simplex[0])?, f(simplex[1])?, f(simplex[2])?];
    let diameter = |s: &[[f64; 2]; 3]| {
        let d = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
        d(s[0], s[1]).max(d(s[0], s[2])).max(d(s[1], s[2]))
    };
    for _ in 0..SIMPLEX_MAX_ITER {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        if diameter(&simplex) < SIMPLEX_DIAMETER {
            return sigma1(system, Complex64::new(simplex[0][0], simplex[0][1]));
        }
        let centroid = [(simplex[0][0] + simplex[1][0]) / 2.0, (simplex[0][1] + simplex[1][1]) / 2.0];
        let along = |t: f64| [centroid[0] + t * (simplex[2][0] - centroid[0]), centroid[1] + t * (simplex[2][1] - centroid[1])];
        let xr = along(-1.0);
        let fr = f(xr)?;
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = f(xe)?;
            (simplex[2], values[2]) = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < values[1] {
            (simplex[2], values[2]) = (xr, fr);
        } else {
            let (xc, fc) = if fr < values[2] {
                let xc = along(-0.5);
                (xc, f(xc)?)
            } else {
                let xc = along(0.5);
                (xc, f(xc)?)
            };
            if fc < values[2].min(fr) {
                (simplex[2], values[2]) = (xc, fc);
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        simplex[0][0] + 0.5 * (simplex[k][0] - simplex[0][0]),
                        simplex[0][1] + 0.5 * (simplex[k][1] - simplex[0][1]),
                    ];
                    values[k] = f(simplex[k])?;
                }
            }
        }
    }
    let k = (0..3).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap_or(0);
    Err(Error::NonConvergence { best: Complex64::new(simplex[k][0], simplex[k][1]), sigma1: values[k] })
}
