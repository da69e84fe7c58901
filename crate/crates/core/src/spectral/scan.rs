use std::f64::consts::FRAC_PI_4;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use super::objective::{sigma1, SpectrumSample};
use crate::assembly::MfsSystem;
use crate::error::{Error, Result};

/// A grid point and the outcome of evaluating σ₁ there. Failures do not stop a scan.
#[derive(Debug)]
pub struct ScanSample {
    pub omega: Complex64,
    pub outcome: Result<SpectrumSample>,
}

impl ScanSample {
    pub fn sigma1(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|s| s.sigma1)
    }

    pub fn condition_flag(&self) -> bool {
        self.outcome.as_ref().is_ok_and(|s| s.condition_flag)
    }
}

#[derive(Debug)]
pub struct RealScan {
    pub samples: Vec<ScanSample>,
    /// Indices of grid points strictly below both neighbours.
    pub minima: Vec<usize>,
    pub step: f64,
}

impl RealScan {
    pub fn minimum_omegas(&self) -> Vec<f64> {
        self.minima.iter().map(|&k| self.samples[k].omega.re).collect()
    }
}

#[derive(Debug)]
pub struct ComplexScan {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    /// Row-major: `samples[row * re.len() + col]` sits at `re[col] + i·im[row]`.
    pub samples: Vec<ScanSample>,
    pub minima: Vec<usize>,
}

impl ComplexScan {
    pub fn at(&self, row: usize, col: usize) -> &ScanSample {
        &self.samples[row * self.re.len() + col]
    }

    pub fn minimum_omegas(&self) -> Vec<Complex64> {
        self.minima.iter().map(|&k| self.samples[k].omega).collect()
    }
}

fn evaluate(system: &MfsSystem, omegas: Vec<Complex64>) -> Vec<ScanSample> {
    omegas.into_par_iter().map(|omega| ScanSample { omega, outcome: sigma1(system, omega) }).collect()
}

/// Grid a, a + step, … ≤ b.
pub fn real_grid(a: f64, b: f64, step: f64) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite() && a > 0.0 && b > a) {
        return Err(Error::InvalidArgument(format!("scan interval [{a}, {b}] must satisfy 0 < a < b")));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument(format!("scan step must be positive, got {step}")));
    }
    let n = ((b - a) / step * (1.0 + 1e-12)).floor() as usize + 1;
    Ok((0..n).map(|k| a + k as f64 * step).collect())
}

pub fn scan_real(system: &MfsSystem, a: f64, b: f64, step: f64) -> Result<RealScan> {
    let grid = real_grid(a, b, step)?;
    let samples = evaluate(system, grid.into_iter().map(|w| Complex64::new(w, 0.0)).collect());
    let minima = (1..samples.len().saturating_sub(1))
        .filter(|&k| match (samples[k - 1].sigma1(), samples[k].sigma1(), samples[k + 1].sigma1()) {
            (Some(l), Some(c), Some(r)) => c < l && c < r,
            _ => false,
        })
        .collect();
    Ok(RealScan { samples, minima, step })
}

/// Rectangle [re_lo, re_hi] × [im_lo, im_hi] sampled on an nx × ny grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Local minima are grid points below every neighbour in the 8-neighbourhood.
/// Points on the outer edge of the rectangle are only eligible on a row lying
/// on the real axis, where real eigenvalues show up.
pub fn scan_complex(system: &MfsSystem, rect: Rect, nx: usize, ny: usize) -> Result<ComplexScan> {
    if nx < 8 || ny < 8 {
        return Err(Error::InvalidArgument(format!("grid counts must be at least 8, got {nx} x {ny}")));
    }
    if !(rect.re.0 < rect.re.1 && rect.im.0 < rect.im.1) {
        return Err(Error::InvalidArgument(format!("degenerate scan rectangle {rect:?}")));
    }
    let re = linspace(rect.re.0, rect.re.1, nx);
    let im = linspace(rect.im.0, rect.im.1, ny);
    let omegas: Vec<Complex64> = im.iter().flat_map(|&y| re.iter().map(move |&x| Complex64::new(x, y))).collect();
    if omegas.iter().any(|w| w.im < 0.0) {
        warn!("scan extends below the real axis; minima there are unreliable and mirror the upper half plane");
    }
    if omegas.iter().any(|w| w.im >= 0.0 && w.arg() >= FRAC_PI_4) {
        warn!("scan contains frequencies with arg >= pi/4, outside the sector where eigenvalues can occur");
    }
    if omegas.iter().any(|w| *w == Complex64::new(0.0, 0.0)) {
        warn!("scan grid contains omega = 0; that sample is reported invalid");
    }
    let samples = evaluate(system, omegas);
    let value = |r: usize, c: usize| samples[r * nx + c].sigma1();
    let mut minima = Vec::new();
    for r in 0..ny {
        for c in 0..nx {
            let Some(v) = value(r, c) else { continue };
            let on_edge = r == 0 || r == ny - 1 || c == 0 || c == nx - 1;
            if on_edge && !(im[r] == 0.0 && c > 0 && c < nx - 1) {
                continue;
            }
            let mut is_min = true;
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (rr, cc) = (r as i64 + dr, c as i64 + dc);
                    if rr < 0 || cc < 0 || rr >= ny as i64 || cc >= nx as i64 {
                        continue;
                    }
                    match value(rr as usize, cc as usize) {
                        Some(n) if v < n => {}
                        _ => is_min = false,
                    }
                }
            }
            if is_min {
                minima.push(r * nx + c);
            }
        }
    }
    Ok(ComplexScan { re, im, samples, minima })
}
