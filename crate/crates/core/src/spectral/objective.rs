use std::sync::Once;

use faer::{c64, Mat, MatRef, Par};
use num_complex::Complex64;

use crate::assembly::{MfsSystem, RowLayout};
use crate::error::{Error, Result};

/// R factors whose diagonal ratio min|Rᵢᵢ|/max|Rᵢᵢ| falls below this are flagged.
pub const CONDITION_THRESHOLD: f64 = 1e-14;

/// One evaluation of the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSample {
    pub omega: Complex64,
    pub sigma1: f64,
    pub m: usize,
    pub condition_flag: bool,
}

/// Economy QR of M(ω) = Q_M R_M.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub omega: Complex64,
    pub layout: RowLayout,
    pub q: Mat<c64>,
    pub r: Mat<c64>,
    /// min|Rᵢᵢ| / max|Rᵢᵢ|, a cheap reciprocal condition estimate.
    pub rcond: f64,
}

/// Each sample's factorization runs on one thread; parallelism lives in the scans.
pub(crate) fn sequential_linalg() {
    static INIT: Once = Once::new();
    INIT.call_once(|| faer::set_global_parallelism(Par::Seq));
}

impl Factorization {
    pub fn compute(system: &MfsSystem, omega: Complex64) -> Result<Self> {
        sequential_linalg();
        let a = system.assemble(omega)?;
        if !a.is_finite() {
            return Err(Error::QrBreakdown { omega });
        }
        let qr = a.entries.qr();
        let q = qr.compute_thin_Q();
        let r = qr.thin_R().to_owned();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..r.ncols() {
            let d = r[(i, i)].norm();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        // faer skips reflections on numerically dependent columns and leaves an
        // exact zero on the diagonal; that is reported through rcond = 0
        if !(hi > 0.0 && hi.is_finite()) {
            return Err(Error::QrBreakdown { omega });
        }
        Ok(Self { omega, layout: a.layout, q, r, rcond: lo / hi })
    }

    /// Boundary rows Q of Q_M.
    pub fn boundary(&self) -> MatRef<'_, c64> {
        self.q.as_ref().subrows(0, 4 * self.layout.m)
    }

    /// Interior rows Q_I of Q_M.
    pub fn interior(&self) -> MatRef<'_, c64> {
        self.q.as_ref().subrows(4 * self.layout.m, 4 * self.layout.m_i)
    }

    pub fn condition_flag(&self) -> bool {
        self.rcond < CONDITION_THRESHOLD
    }

    pub fn sigma1(&self) -> Result<f64> {
        let s = self.boundary().singular_values().map_err(|_| Error::SvdFailure { omega: self.omega })?;
        let min = s.iter().copied().fold(f64::INFINITY, f64::min);
        if !min.is_finite() {
            return Err(Error::SvdFailure { omega: self.omega });
        }
        Ok(min.clamp(0.0, 1.0))
    }

    pub fn sample(&self) -> Result<SpectrumSample> {
        Ok(SpectrumSample {
            omega: self.omega,
            sigma1: self.sigma1()?,
            m: self.layout.m,
            condition_flag: self.condition_flag(),
        })
    }
}

/// Smallest singular value of the boundary block of the orthonormalized system.
pub fn sigma1(system: &MfsSystem, omega: Complex64) -> Result<SpectrumSample> {
    Factorization::compute(system, omega)?.sample()
}
