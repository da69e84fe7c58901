//! Block collocation matrix of the coupled trial pair (u, v).
//!
//! Row blocks, top to bottom: Dirichlet misfit (2m), traction misfit (2m),
//! interior samples of u (2m_I), interior samples of v (2m_I). Column blocks:
//! the 2m coefficients of u, then the 2m coefficients of v. Point i occupies
//! rows 2i and 2i+1 of its block, source j columns 2j and 2j+1.

use std::io::Write;
use std::ops::Range;

use faer::{c64, Mat};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{PointSets, Scatterer};
use crate::kernel::{MaterialParams, NavierKernel};

#[derive(Debug, Clone)]
pub struct MfsSystem {
    scatterer: Scatterer,
    material: MaterialParams,
    points: PointSets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowLayout {
    pub m: usize,
    pub m_i: usize,
}

impl RowLayout {
    pub fn dirichlet(&self) -> Range<usize> {
        0..2 * self.m
    }
    pub fn traction(&self) -> Range<usize> {
        2 * self.m..4 * self.m
    }
    pub fn boundary(&self) -> Range<usize> {
        0..4 * self.m
    }
    pub fn interior_u(&self) -> Range<usize> {
        4 * self.m..4 * self.m + 2 * self.m_i
    }
    pub fn interior_v(&self) -> Range<usize> {
        4 * self.m + 2 * self.m_i..self.rows()
    }
    pub fn rows(&self) -> usize {
        4 * self.m + 4 * self.m_i
    }
    pub fn u_columns(&self) -> Range<usize> {
        0..2 * self.m
    }
    pub fn v_columns(&self) -> Range<usize> {
        2 * self.m..4 * self.m
    }
    pub fn cols(&self) -> usize {
        4 * self.m
    }
}

/// Dense column-major M(ω) with its block layout.
#[derive(Debug, Clone)]
pub struct SystemMatrix {
    pub omega: Complex64,
    pub layout: RowLayout,
    pub entries: Mat<c64>,
}

impl MfsSystem {
    pub fn new(scatterer: Scatterer, material: MaterialParams, m: usize, m_i: usize, seed: u64, split_sources: bool) -> Result<Self> {
        material.validate()?;
        let points = PointSets::build(&scatterer, m, m_i, seed, split_sources)?;
        Ok(Self { scatterer, material, points })
    }

    pub fn from_points(scatterer: Scatterer, material: MaterialParams, points: PointSets) -> Result<Self> {
        material.validate()?;
        let m = points.m();
        if points.sources_u.len() != m || points.sources_v.len() != m {
            return Err(Error::Geometry(format!(
                "expected {m} sources per field, got {} and {}",
                points.sources_u.len(),
                points.sources_v.len()
            )));
        }
        Ok(Self { scatterer, material, points })
    }

    pub fn scatterer(&self) -> &Scatterer {
        &self.scatterer
    }

    pub fn material(&self) -> &MaterialParams {
        &self.material
    }

    pub fn points(&self) -> &PointSets {
        &self.points
    }

    pub fn m(&self) -> usize {
        self.points.m()
    }

    pub fn m_i(&self) -> usize {
        self.points.m_i()
    }

    pub fn layout(&self) -> RowLayout {
        RowLayout { m: self.m(), m_i: self.m_i() }
    }

    /// Kernels for the background field u (κ = ω²) and the scatterer field v (κ = ρω²).
    pub fn kernels(&self, omega: Complex64) -> Result<(NavierKernel, NavierKernel)> {
        if omega == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroFrequency);
        }
        let w2 = omega * omega;
        Ok((NavierKernel::new(&self.material, w2)?, NavierKernel::new(&self.material, self.material.rho * w2)?))
    }

    pub fn assemble(&self, omega: Complex64) -> Result<SystemMatrix> {
        let (ku, kv) = self.kernels(omega)?;
        let layout = self.layout();
        let mut a = Mat::<c64>::zeros(layout.rows(), layout.cols());
        let p = &self.points;
        let tr = layout.traction().start;

        for (field, (kernel, sources)) in [(&ku, &p.sources_u), (&kv, &p.sources_v)].into_iter().enumerate() {
            let col0 = field * 2 * layout.m;
            for (j, &y) in sources.iter().enumerate() {
                let c = col0 + 2 * j;
                for (i, b) in p.collocation.iter().enumerate() {
                    let (phi, t) = kernel.displacement_and_traction(b.point, y, b.normal)?;
                    for r in 0..2 {
                        for s in 0..2 {
                            a[(2 * i + r, c + s)] = phi[r][s];
                            a[(tr + 2 * i + r, c + s)] = t[r][s];
                        }
                    }
                }
                let row0 = if field == 0 { layout.interior_u().start } else { layout.interior_v().start };
                for (k, &x) in p.interior.iter().enumerate() {
                    let phi = kernel.displacement(x, y)?;
                    for r in 0..2 {
                        for s in 0..2 {
                            a[(row0 + 2 * k + r, c + s)] = phi[r][s];
                        }
                    }
                }
            }
        }
        Ok(SystemMatrix { omega, layout, entries: a })
    }
}

impl SystemMatrix {
    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn is_finite(&self) -> bool {
        (0..self.cols()).all(|j| (0..self.rows()).all(|i| self.entries[(i, j)].is_finite()))
    }

    /// One matrix row per line, entries as "re,im" pairs separated by commas.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for i in 0..self.rows() {
            let mut line = String::with_capacity(self.cols() * 48);
            for j in 0..self.cols() {
                if j > 0 {
                    line.push(',');
                }
                let v = self.entries[(i, j)];
                line.push_str(&crate::cli_io::format_float(v.re));
                line.push(',');
                line.push_str(&crate::cli_io::format_float(v.im));
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }
}
