use faer::c64;
use num_complex::Complex64;

use super::objective::Factorization;
use crate::assembly::MfsSystem;
use crate::error::{Error, Result};
use crate::kernel::{NavierKernel, Point};

/// Approximate eigenfunction pair recovered from the minimizing singular vector.
#[derive(Debug, Clone)]
pub struct EigenPairApprox {
    pub omega: Complex64,
    pub c_u: Vec<Complex64>,
    pub c_v: Vec<Complex64>,
    /// Unit vector r minimizing |Q r| over the boundary block.
    pub singular_vector: Vec<Complex64>,
    pub boundary_misfit: f64,
    /// |Q_I r|², the discrete interior norm of the pair.
    pub interior_norm_sq: f64,
    kernel_u: NavierKernel,
    kernel_v: NavierKernel,
    sources_u: Vec<Point>,
    sources_v: Vec<Point>,
}

/// c = R⁻¹ r for upper triangular R.
fn back_substitute(r: faer::MatRef<'_, c64>, rhs: &[Complex64]) -> Vec<Complex64> {
    let n = rhs.len();
    let mut x = rhs.to_vec();
    for i in (0..n).rev() {
        let mut acc = x[i];
        for (k, xk) in x.iter().enumerate().take(n).skip(i + 1) {
            acc -= r[(i, k)] * xk;
        }
        x[i] = acc / r[(i, i)];
    }
    x
}

pub fn recover_eigenfunction(system: &MfsSystem, omega: Complex64) -> Result<EigenPairApprox> {
    let f = Factorization::compute(system, omega)?;
    if f.condition_flag() {
        return Err(Error::IllConditioned { omega });
    }
    let svd = f.boundary().svd().map_err(|_| Error::SvdFailure { omega })?;
    let s = svd.S().column_vector();
    let k = (0..s.nrows())
        .min_by(|&a, &b| s[a].re.total_cmp(&s[b].re))
        .ok_or(Error::SvdFailure { omega })?;
    let v = svd.V();
    let r: Vec<Complex64> = (0..v.nrows()).map(|i| v[(i, k)]).collect();
    let c = back_substitute(f.r.as_ref(), &r);
    let two_m = 2 * f.layout.m;
    let interior = f.interior();
    let mut interior_norm_sq = 0.0;
    for i in 0..interior.nrows() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, rj) in r.iter().enumerate() {
            acc += interior[(i, j)] * rj;
        }
        interior_norm_sq += acc.norm_sqr();
    }
    let (kernel_u, kernel_v) = system.kernels(omega)?;
    let p = system.points();
    Ok(EigenPairApprox {
        omega,
        c_u: c[..two_m].to_vec(),
        c_v: c[two_m..].to_vec(),
        singular_vector: r,
        boundary_misfit: s[k].re.clamp(0.0, 1.0),
        interior_norm_sq,
        kernel_u,
        kernel_v,
        sources_u: p.sources_u.clone(),
        sources_v: p.sources_v.clone(),
    })
}

fn superpose(kernel: &NavierKernel, sources: &[Point], coeffs: &[Complex64], x: Point) -> Result<[Complex64; 2]> {
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (j, &y) in sources.iter().enumerate() {
        let phi = kernel.displacement(x, y)?;
        for (i, o) in out.iter_mut().enumerate() {
            *o += phi[i][0] * coeffs[2 * j] + phi[i][1] * coeffs[2 * j + 1];
        }
    }
    Ok(out)
}

impl EigenPairApprox {
    /// u_m(x) = Σⱼ Φ_{ω²}(x, yⱼ) c_u,ⱼ.
    pub fn u(&self, x: Point) -> Result<[Complex64; 2]> {
        superpose(&self.kernel_u, &self.sources_u, &self.c_u, x)
    }

    /// v_m(x) = −Σⱼ Φ_{ρω²}(x, yⱼ) c_v,ⱼ; the sign makes u_m − v_m the
    /// boundary misfit of the assembled system.
    pub fn v(&self, x: Point) -> Result<[Complex64; 2]> {
        let w = superpose(&self.kernel_v, &self.sources_v, &self.c_v, x)?;
        Ok([-w[0], -w[1]])
    }
}

/// Σ|u_m|² / (ρ Σ|v_m|²) over the quadrature points, which tends to 1 at a
/// non-real eigenvalue.
pub fn norm_relation_check(pair: &EigenPairApprox, rho: f64, quadrature: &[Point]) -> Result<f64> {
    if pair.omega.im.abs() <= 1e-6 {
        return Err(Error::RealFrequency { omega: pair.omega });
    }
    if quadrature.is_empty() {
        return Err(Error::TooFewPoints { what: "quadrature points", got: 0, min: 1 });
    }
    let (mut su, mut sv) = (0.0, 0.0);
    for &x in quadrature {
        let u = pair.u(x)?;
        let v = pair.v(x)?;
        su += u[0].norm_sqr() + u[1].norm_sqr();
        sv += v[0].norm_sqr() + v[1].norm_sqr();
    }
    Ok(su / (rho * sv))
}
