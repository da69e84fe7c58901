//! Flat `key = value` run configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};
use crate::geometry::{Scatterer, Shape};
use crate::kernel::MaterialParams;

pub const MIN_M: usize = 8;
pub const MAX_M: usize = 200;
/// Trial orders outside this window are accepted with a warning.
pub const PRODUCTIVE_M: (usize, usize) = (40, 80);

/// Every setting a command may read. Unused keys are ignored by a command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub shape: Shape,
    pub mu: f64,
    pub lambda: f64,
    pub rho: f64,
    /// Source-contour factor; `None` selects the shape's default.
    pub scale: Option<f64>,
    pub m: usize,
    pub m_i: usize,
    pub seed: u64,
    pub split_sources: bool,
    pub omega_min: f64,
    pub omega_max: f64,
    pub step: f64,
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
    /// Allows complex scans and oracle searches below the real axis.
    pub lower_half: bool,
    pub omega_re: f64,
    pub omega_im: f64,
    /// Half-width of the real refinement bracket.
    pub bracket: f64,
    /// Edge of the initial simplex of the complex refinement.
    pub simplex_step: f64,
    pub m_sweep: Vec<usize>,
    pub count: usize,
    /// disc-oracle: search the complex rectangle instead of the real interval.
    pub complex: bool,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let material = MaterialParams::default();
        Self {
            shape: Shape::Disc,
            mu: material.mu,
            lambda: material.lambda,
            rho: material.rho,
            scale: None,
            m: 50,
            m_i: 10,
            seed: 1,
            split_sources: false,
            omega_min: 0.5,
            omega_max: 2.5,
            step: 0.002,
            re_min: 0.0,
            re_max: 2.5,
            im_min: 0.0,
            im_max: 2.0,
            nx: 126,
            ny: 101,
            lower_half: false,
            omega_re: 1.451,
            omega_im: 0.0,
            bracket: 0.005,
            simplex_step: 1e-2,
            m_sweep: vec![40, 50, 60, 70, 80],
            count: 4,
            complex: false,
            output: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "shape",
    "mu",
    "lambda",
    "rho",
    "scale",
    "m",
    "m_i",
    "seed",
    "split_sources",
    "omega_min",
    "omega_max",
    "step",
    "re_min",
    "re_max",
    "im_min",
    "im_max",
    "nx",
    "ny",
    "lower_half",
    "omega_re",
    "omega_im",
    "bracket",
    "simplex_step",
    "m_sweep",
    "count",
    "complex",
    "output",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| Error::Config { key: key.into(), message: format!("`{value}`: {e}") })
}

fn invalid(key: &str, message: impl Into<String>) -> Error {
    Error::Config { key: key.into(), message: message.into() }
}

impl RunConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "shape" => self.shape = v.parse()?,
            "mu" => self.mu = parse(key, v)?,
            "lambda" => self.lambda = parse(key, v)?,
            "rho" => self.rho = parse(key, v)?,
            "scale" => self.scale = Some(parse(key, v)?),
            "m" => self.m = parse(key, v)?,
            "m_i" => self.m_i = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "split_sources" => self.split_sources = parse(key, v)?,
            "omega_min" => self.omega_min = parse(key, v)?,
            "omega_max" => self.omega_max = parse(key, v)?,
            "step" => self.step = parse(key, v)?,
            "re_min" => self.re_min = parse(key, v)?,
            "re_max" => self.re_max = parse(key, v)?,
            "im_min" => self.im_min = parse(key, v)?,
            "im_max" => self.im_max = parse(key, v)?,
            "nx" => self.nx = parse(key, v)?,
            "ny" => self.ny = parse(key, v)?,
            "lower_half" => self.lower_half = parse(key, v)?,
            "omega_re" => self.omega_re = parse(key, v)?,
            "omega_im" => self.omega_im = parse(key, v)?,
            "bracket" => self.bracket = parse(key, v)?,
            "simplex_step" => self.simplex_step = parse(key, v)?,
            "m_sweep" => {
                self.m_sweep = v.split(',').map(|s| parse(key, s.trim())).collect::<Result<_>>()?;
            }
            "count" => self.count = parse(key, v)?,
            "complex" => self.complex = parse(key, v)?,
            "output" => self.output = Some(PathBuf::from(v)),
            _ => return Err(invalid(key, "unknown key")),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(&format!("line {}", n + 1), format!("expected `key = value`, got `{line}`")))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn material(&self) -> Result<MaterialParams> {
        MaterialParams::new(self.mu, self.lambda, self.rho)
    }

    pub fn scale(&self) -> f64 {
        self.scale.unwrap_or_else(|| self.shape.default_scale())
    }

    pub fn scatterer(&self) -> Result<Scatterer> {
        Scatterer::new(self.shape.clone(), self.scale()).map_err(|e| invalid("scale", e.to_string()))
    }

    fn check_m(key: &str, m: usize) -> Result<()> {
        if !(MIN_M..=MAX_M).contains(&m) {
            return Err(invalid(key, format!("trial order {m} outside [{MIN_M}, {MAX_M}]")));
        }
        if !(PRODUCTIVE_M.0..=PRODUCTIVE_M.1).contains(&m) {
            warn!("{key} = {m} is outside {}..={}, where the method is known to work well", PRODUCTIVE_M.0, PRODUCTIVE_M.1);
        }
        Ok(())
    }

    /// Checks the settings shared by all commands.
    pub fn validate(&self) -> Result<()> {
        if let Err(e) = self.material() {
            return Err(invalid("mu/lambda/rho", e.to_string()));
        }
        self.scatterer()?;
        Self::check_m("m", self.m)?;
        if self.m_i == 0 {
            return Err(invalid("m_i", "need at least one interior point"));
        }
        Ok(())
    }

    pub fn validate_real_interval(&self) -> Result<()> {
        if !(self.omega_min > 0.0 && self.omega_min < self.omega_max && self.omega_max.is_finite()) {
            return Err(invalid("omega_min/omega_max", format!("need 0 < omega_min < omega_max, got [{}, {}]", self.omega_min, self.omega_max)));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(invalid("step", format!("must be positive, got {}", self.step)));
        }
        Ok(())
    }

    pub fn validate_rect(&self) -> Result<()> {
        if !(self.re_min < self.re_max && self.im_min < self.im_max) || ![self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|x| x.is_finite()) {
            return Err(invalid("re_min/re_max/im_min/im_max", "rectangle must have positive width and height"));
        }
        if self.im_min < 0.0 && !self.lower_half {
            return Err(invalid("im_min", "negative imaginary parts need lower_half = true"));
        }
        Ok(())
    }

    pub fn validate_sweep(&self) -> Result<()> {
        if self.m_sweep.len() < 3 {
            return Err(invalid("m_sweep", "need at least three trial orders"));
        }
        if self.m_sweep.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("m_sweep", "trial orders must increase"));
        }
        for &m in &self.m_sweep {
            Self::check_m("m_sweep", m)?;
        }
        if self.count == 0 {
            return Err(invalid("count", "must be positive"));
        }
        Ok(())
    }
}

/// One `key = value` line per setting; parsing the text gives back the same config.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sweep: Vec<String> = self.m_sweep.iter().map(|m| m.to_string()).collect();
        writeln!(f, "shape = {}", self.shape)?;
        writeln!(f, "mu = {:?}", self.mu)?;
        writeln!(f, "lambda = {:?}", self.lambda)?;
        writeln!(f, "rho = {:?}", self.rho)?;
        if let Some(s) = self.scale {
            writeln!(f, "scale = {s:?}")?;
        }
        writeln!(f, "m = {}", self.m)?;
        writeln!(f, "m_i = {}", self.m_i)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "split_sources = {}", self.split_sources)?;
        writeln!(f, "omega_min = {:?}", self.omega_min)?;
        writeln!(f, "omega_max = {:?}", self.omega_max)?;
        writeln!(f, "step = {:?}", self.step)?;
        writeln!(f, "re_min = {:?}", self.re_min)?;
        writeln!(f, "re_max = {:?}", self.re_max)?;
        writeln!(f, "im_min = {:?}", self.im_min)?;
        writeln!(f, "im_max = {:?}", self.im_max)?;
        writeln!(f, "nx = {}", self.nx)?;
        writeln!(f, "ny = {}", self.ny)?;
        writeln!(f, "lower_half = {}", self.lower_half)?;
        writeln!(f, "omega_re = {:?}", self.omega_re)?;
        writeln!(f, "omega_im = {:?}", self.omega_im)?;
        writeln!(f, "bracket = {:?}", self.bracket)?;
        writeln!(f, "simplex_step = {:?}", self.simplex_step)?;
        writeln!(f, "m_sweep = {}", sweep.join(","))?;
        writeln!(f, "count = {}", self.count)?;
        writeln!(f, "complex = {}", self.complex)?;
        if let Some(p) = &self.output {
            writeln!(f, "output = {}", p.display())?;
        }
        Ok(())
    }
}
