//! Fundamental solution of the 2D time-harmonic Navier equation and its
//! traction.
//!
//! For κ = ϱω² the displacement tensor is
//!
//! ```text
//! Φ_κ(x, y) = i/(4μ) H0(ks r) I + i/(4κ) ∇∇ᵀ [H0(ks r) − H0(kp r)]
//! ```
//!
//! with ks² = κ/μ, kp² = κ/(λ + 2μ) and r = |x − y|. It satisfies
//! (Δ* + κ) Φ_κ(·, y) = 0 away from y, where Δ* = μΔ + (λ + μ)∇div.
//!
//! Writing Φ_ij = α(r) δ_ij + β(r) d_i d_j with d = (x − y)/r, both the
//! tensor and its x-gradient follow from radial derivatives of H0 up to
//! third order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun;

pub type Point = [f64; 2];
pub type Mat2 = [[Complex64; 2]; 2];

const COINCIDENCE_TOL: f64 = 1e-14;
const NORMAL_TOL: f64 = 1e-12;
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Lamé moduli and scatterer density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    pub mu: f64,
    pub lambda: f64,
    pub rho: f64,
}

impl MaterialParams {
    pub fn new(mu: f64, lambda: f64, rho: f64) -> Result<Self> {
        let p = Self { mu, lambda, rho };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { mu, lambda, rho } = *self;
        if !(mu.is_finite() && lambda.is_finite() && rho.is_finite()) {
            return Err(Error::Material("parameters must be finite".into()));
        }
        if mu <= 0.0 {
            return Err(Error::Material(format!("mu must be positive, got {mu}")));
        }
        if 2.0 * mu + lambda <= 0.0 {
            return Err(Error::Material(format!("2 mu + lambda must be positive, got {}", 2.0 * mu + lambda)));
        }
        if rho <= 0.0 || rho == 1.0 {
            return Err(Error::Material(format!("rho must be positive and differ from 1, got {rho}")));
        }
        Ok(())
    }

    /// λ + 2μ, the compressional modulus.
    pub fn p_modulus(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self { mu: 1.0 / 16.0, lambda: 0.25, rho: 4.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumbers {
    pub ks: Complex64,
    pub kp: Complex64,
}

/// Shear and compressional wave numbers for κ = density·ω² (principal roots).
pub fn wave_numbers(material: &MaterialParams, density: f64, omega: Complex64) -> Result<WaveNumbers> {
    if omega == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroFrequency);
    }
    Ok(wave_numbers_for_kappa(material, omega * omega * density))
}

fn wave_numbers_for_kappa(material: &MaterialParams, kappa: Complex64) -> WaveNumbers {
    WaveNumbers { ks: (kappa / material.mu).sqrt(), kp: (kappa / material.p_modulus()).sqrt() }
}

/// Displacement tensor, optionally with its traction at the field point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub phi: Mat2,
    pub traction: Option<Mat2>,
}

/// Kernel evaluator with the wave numbers for one κ precomputed.
#[derive(Debug, Clone, Copy)]
pub struct NavierKernel {
    kappa: Complex64,
    waves: WaveNumbers,
    mu: f64,
    lambda: f64,
}

/// H0(kr) and its first three r-derivatives.
struct Radial {
    f: [Complex64; 4],
}

impl Radial {
    fn new(k: Complex64, r: f64) -> Result<Self> {
        let z = k * r;
        let (h0, h1) = specfun::hankel1_01(z)?;
        let h1p = h0 - h1 / z;
        let h1pp = -h1p / z - (1.0 - 1.0 / (z * z)) * h1;
        Ok(Self { f: [h0, -k * h1, -k * k * h1p, -k * k * k * h1pp] })
    }
}

/// α, β and their r-derivatives in Φ_ij = α δ_ij + β d_i d_j.
struct Profile {
    alpha: Complex64,
    beta: Complex64,
    dalpha: Complex64,
    dbeta: Complex64,
}

impl NavierKernel {
    pub fn new(material: &MaterialParams, kappa: Complex64) -> Result<Self> {
        if kappa == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroFrequency);
        }
        Ok(Self {
            kappa,
            waves: wave_numbers_for_kappa(material, kappa),
            mu: material.mu,
            lambda: material.lambda,
        })
    }

    pub fn kappa(&self) -> Complex64 {
        self.kappa
    }

    pub fn wave_numbers(&self) -> WaveNumbers {
        self.waves
    }

    fn geometry(x: Point, y: Point) -> Result<(f64, Point)> {
        let dx = [x[0] - y[0], x[1] - y[1]];
        let r = dx[0].hypot(dx[1]);
        if r < COINCIDENCE_TOL {
            return Err(Error::CoincidentPoints { distance: r });
        }
        Ok((r, [dx[0] / r, dx[1] / r]))
    }

    fn profile(&self, r: f64) -> Result<Profile> {
        let s = Radial::new(self.waves.ks, r)?;
        let p = Radial::new(self.waves.kp, r)?;
        let g: [Complex64; 4] = std::array::from_fn(|i| s.f[i] - p.f[i]);
        let a = I / (4.0 * self.mu);
        let c = I / (4.0 * self.kappa);
        let (r1, r2) = (1.0 / r, 1.0 / (r * r));
        Ok(Profile {
            alpha: a * s.f[0] + c * g[1] * r1,
            beta: c * (g[2] - g[1] * r1),
            dalpha: a * s.f[1] + c * (g[2] * r1 - g[1] * r2),
            dbeta: c * (g[3] - g[2] * r1 + g[1] * r2),
        })
    }

    fn phi_from(p: &Profile, d: Point) -> Mat2 {
        let mut phi = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                phi[i][j] = p.beta * (d[i] * d[j]);
                if i == j {
                    phi[i][j] += p.alpha;
                }
            }
        }
        phi
    }

    /// σ(Φ(·,y)e_j)ν at x, column j.
    fn traction_from(&self, p: &Profile, r: f64, d: Point, normal: Point) -> Mat2 {
        let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
        let cubic = p.dbeta - 2.0 * p.beta / r;
        let b_over_r = p.beta / r;
        // grad[i][j][k] = ∂_k Φ_ij
        let mut grad = [[[Complex64::new(0.0, 0.0); 2]; 2]; 2];
        for (i, gi) in grad.iter_mut().enumerate() {
            for (j, gij) in gi.iter_mut().enumerate() {
                for (k, g) in gij.iter_mut().enumerate() {
                    *g = p.dalpha * (d[k] * delta(i, j))
                        + cubic * (d[i] * d[j] * d[k])
                        + b_over_r * (delta(i, k) * d[j] + delta(j, k) * d[i]);
                }
            }
        }
        let mut t = [[Complex64::new(0.0, 0.0); 2]; 2];
        for j in 0..2 {
            let div = grad[0][j][0] + grad[1][j][1];
            for i in 0..2 {
                let mut shear = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    shear += (grad[i][j][k] + grad[k][j][i]) * normal[k];
                }
                t[i][j] = shear * self.mu + div * (self.lambda * normal[i]);
            }
        }
        t
    }

    pub fn displacement(&self, x: Point, y: Point) -> Result<Mat2> {
        let (r, d) = Self::geometry(x, y)?;
        Ok(Self::phi_from(&self.profile(r)?, d))
    }

    pub fn traction(&self, x: Point, y: Point, normal: Point) -> Result<Mat2> {
        Ok(self.displacement_and_traction(x, y, normal)?.1)
    }

    pub fn displacement_and_traction(&self, x: Point, y: Point, normal: Point) -> Result<(Mat2, Mat2)> {
        check_normal(normal)?;
        let (r, d) = Self::geometry(x, y)?;
        let p = self.profile(r)?;
        Ok((Self::phi_from(&p, d), self.traction_from(&p, r, d, normal)))
    }
}

fn check_normal(normal: Point) -> Result<()> {
    let norm = normal[0].hypot(normal[1]);
    if (norm - 1.0).abs() > NORMAL_TOL {
        return Err(Error::NonUnitNormal { norm });
    }
    Ok(())
}

/// Φ_κ(x, y).
pub fn displacement_kernel(x: Point, y: Point, kappa: Complex64, material: &MaterialParams) -> Result<KernelValue> {
    let phi = NavierKernel::new(material, kappa)?.displacement(x, y)?;
    Ok(KernelValue { phi, traction: None })
}

/// σ(Φ_κ(·, y) e_j)(x) ν, one column per j.
pub fn traction_kernel(x: Point, y: Point, normal: Point, kappa: Complex64, material: &MaterialParams) -> Result<Mat2> {
    NavierKernel::new(material, kappa)?.traction(x, y, normal)
}
