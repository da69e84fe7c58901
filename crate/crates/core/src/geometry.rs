//! Scatterer boundaries, source contours and the point families used for
//! collocation.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::Point;

/// Interior samples are drawn from the scatterer shrunk by this factor.
pub const INTERIOR_SHRINK: f64 = 0.8;
const MAX_DRAWS: usize = 1_000_000;
const CORNER_TOL: f64 = 1e-12;
const SQUARE_HALF: f64 = 0.5;
const POLYGON_RESOLUTION: usize = 2048;

/// A closed, counterclockwise, smooth curve parameterized over [0, 2π).
pub trait ParametricCurve: fmt::Debug + Send + Sync {
    fn point(&self, t: f64) -> Point;
    fn tangent(&self, t: f64) -> Point;
}

#[derive(Debug, Clone)]
pub enum Shape {
    /// Circle of radius 0.5.
    Disc,
    /// (0.5 cos t, sin t).
    Ellipse,
    /// (0.75 cos t + 0.3 cos 2t, sin t).
    Kite,
    /// ∂([−0.5, 0.5]²), parameterized by arc length from (0.5, 0).
    Square,
    Custom(Arc<dyn ParametricCurve>),
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Disc => "disc",
            Shape::Ellipse => "ellipse",
            Shape::Kite => "kite",
            Shape::Square => "square",
            Shape::Custom(_) => "custom",
        }
    }

    /// Source-contour scale factor used for each built-in shape.
    pub fn default_scale(&self) -> f64 {
        match self {
            Shape::Disc => 2.0,
            Shape::Ellipse => 1.9,
            Shape::Kite => 1.6,
            Shape::Square => 1.3,
            Shape::Custom(_) => 1.5,
        }
    }

    /// Length of the parameter interval.
    pub fn period(&self) -> f64 {
        match self {
            Shape::Square => 8.0 * SQUARE_HALF,
            _ => TAU,
        }
    }
}

impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Shape::Custom(a), Shape::Custom(b)) => Arc::ptr_eq(a, b),
            _ => std::mem::discriminant(self) == std::mem::discriminant(other),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "disc" | "disk" => Ok(Shape::Disc),
            "ellipse" => Ok(Shape::Ellipse),
            "kite" => Ok(Shape::Kite),
            "square" => Ok(Shape::Square),
            other => Err(Error::Config { key: "shape".into(), message: format!("unknown shape `{other}`") }),
        }
    }
}

/// A point on ∂D with its outward unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub point: Point,
    pub normal: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scatterer {
    shape: Shape,
    scale: f64,
}

impl Scatterer {
    pub fn new(shape: Shape, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 1.0) {
            return Err(Error::Geometry(format!("source scale must exceed 1, got {scale}")));
        }
        let s = Self { shape, scale };
        let gap = s.source_gap(512);
        if gap <= 0.0 {
            return Err(Error::Geometry(format!("source contour touches the scatterer (gap {gap:e})")));
        }
        Ok(s)
    }

    pub fn with_default_scale(shape: Shape) -> Self {
        let scale = shape.default_scale();
        Self::new(shape, scale).expect("built-in shapes have valid default scales")
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Point and (unnormalized) tangent; total over the parameter interval.
    fn trace(&self, t: f64) -> (Point, Point) {
        match &self.shape {
            Shape::Disc => ([0.5 * t.cos(), 0.5 * t.sin()], [-0.5 * t.sin(), 0.5 * t.cos()]),
            Shape::Ellipse => ([0.5 * t.cos(), t.sin()], [-0.5 * t.sin(), t.cos()]),
            Shape::Kite => (
                [0.75 * t.cos() + 0.3 * (2.0 * t).cos(), t.sin()],
                [-0.75 * t.sin() - 0.6 * (2.0 * t).sin(), t.cos()],
            ),
            Shape::Square => square_trace(t),
            Shape::Custom(curve) => (curve.point(t), curve.tangent(t)),
        }
    }

    /// Point on ∂D at parameter t with its outward normal (y₂', −y₁')/|y'|.
    pub fn boundary_point(&self, t: f64) -> Result<BoundaryPoint> {
        let period = self.shape.period();
        if !(t.is_finite() && (0.0..period).contains(&t)) {
            return Err(Error::InvalidArgument(format!("parameter {t} outside [0, {period})")));
        }
        if self.shape == Shape::Square {
            let s = (t - SQUARE_HALF).rem_euclid(2.0 * SQUARE_HALF);
            if s < CORNER_TOL || 2.0 * SQUARE_HALF - s < CORNER_TOL {
                return Err(Error::CornerParameter { t });
            }
        }
        let (point, tangent) = self.trace(t);
        let len = tangent[0].hypot(tangent[1]);
        Ok(BoundaryPoint { point, normal: [tangent[1] / len, -tangent[0] / len] })
    }

    /// Point on Γ = s·∂D.
    pub fn source_contour_point(&self, t: f64) -> Point {
        let (p, _) = self.trace(t);
        [self.scale * p[0], self.scale * p[1]]
    }

    /// Collocation points at tᵢ = 2π i/m (smooth shapes). The square rounds m
    /// up to a multiple of 4 and uses midpoints of a uniform subdivision of
    /// each side.
    pub fn collocation_points(&self, m: usize) -> Result<Vec<BoundaryPoint>> {
        let m = self.effective_m(m)?;
        let (start, step) = self.grid(m);
        let period = self.shape.period();
        (0..m).map(|i| self.boundary_point(wrap(start + i as f64 * step, period))).collect()
    }

    /// m points on Γ on the collocation grid shifted by half a step.
    pub fn source_points(&self, m: usize) -> Result<Vec<Point>> {
        let m = self.effective_m(m)?;
        let (start, step) = self.grid(m);
        Ok((0..m).map(|i| self.source_contour_point(wrap(start + (i as f64 + 0.5) * step, self.shape.period()))).collect())
    }

    /// 2m sources on Γ; even indices drive the u-field, odd ones the v-field.
    pub fn split_source_points(&self, m: usize) -> Result<(Vec<Point>, Vec<Point>)> {
        let m = self.effective_m(m)?;
        let (start, step) = self.grid(2 * m);
        let all: Vec<Point> = (0..2 * m)
            .map(|i| self.source_contour_point(wrap(start + (i as f64 + 0.5) * step, self.shape.period())))
            .collect();
        let u = all.iter().step_by(2).copied().collect();
        let v = all.iter().skip(1).step_by(2).copied().collect();
        Ok((u, v))
    }

    /// Trial order actually used for a requested m.
    pub fn effective_m(&self, m: usize) -> Result<usize> {
        if m < 4 {
            return Err(Error::TooFewPoints { what: "trial order m", got: m, min: 4 });
        }
        Ok(match self.shape {
            Shape::Square => m.div_ceil(4) * 4,
            _ => m,
        })
    }

    /// First collocation parameter and grid step for n points.
    fn grid(&self, n: usize) -> (f64, f64) {
        let period = self.shape.period();
        let step = period / n as f64;
        match self.shape {
            // first side starts at the corner (0.5, 0.5); midpoints follow
            Shape::Square => (SQUARE_HALF + 0.5 * step, step),
            _ => (0.0, step),
        }
    }

    /// Strict inclusion test for D.
    pub fn contains(&self, p: Point) -> bool {
        let [x, y] = p;
        match &self.shape {
            Shape::Disc => x * x + y * y < 0.25,
            Shape::Ellipse => 4.0 * x * x + y * y < 1.0,
            Shape::Kite => {
                if y.abs() >= 1.0 {
                    return false;
                }
                let t1 = y.asin();
                let t2 = PI - t1;
                let xa = 0.75 * t1.cos() + 0.3 * (2.0 * t1).cos();
                let xb = 0.75 * t2.cos() + 0.3 * (2.0 * t2).cos();
                x > xa.min(xb) && x < xa.max(xb)
            }
            Shape::Square => x.abs() < SQUARE_HALF && y.abs() < SQUARE_HALF,
            Shape::Custom(curve) => {
                let poly: Vec<Point> =
                    (0..POLYGON_RESOLUTION).map(|i| curve.point(TAU * i as f64 / POLYGON_RESOLUTION as f64)).collect();
                winding_number(&poly, p) != 0
            }
        }
    }

    /// Axis-aligned bounding box of D as (min, max).
    pub fn bounding_box(&self) -> (Point, Point) {
        let n = 4096;
        let period = self.shape.period();
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for i in 0..n {
            let (p, _) = self.trace(period * i as f64 / n as f64);
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    /// m_I seeded random points inside the shrunken scatterer 0.8·D.
    pub fn interior_points(&self, m_i: usize, seed: u64) -> Result<Vec<Point>> {
        if m_i < 1 {
            return Err(Error::TooFewPoints { what: "interior sample count", got: m_i, min: 1 });
        }
        let (lo, hi) = self.bounding_box();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(m_i);
        for _ in 0..MAX_DRAWS {
            let p = [
                INTERIOR_SHRINK * rng.gen_range(lo[0]..hi[0]),
                INTERIOR_SHRINK * rng.gen_range(lo[1]..hi[1]),
            ];
            if self.contains([p[0] / INTERIOR_SHRINK, p[1] / INTERIOR_SHRINK]) && self.contains(p) {
                out.push(p);
                if out.len() == m_i {
                    return Ok(out);
                }
            }
        }
        Err(Error::SamplingExhausted { draws: MAX_DRAWS })
    }

    /// Cell centres of the coarsest square lattice that puts at least
    /// `min_points` points strictly inside D.
    pub fn quadrature_grid(&self, min_points: usize) -> Vec<Point> {
        let (lo, hi) = self.bounding_box();
        let mut n = ((min_points as f64).sqrt().ceil() as usize).max(2);
        loop {
            let h = [(hi[0] - lo[0]) / n as f64, (hi[1] - lo[1]) / n as f64];
            let pts: Vec<Point> = (0..n)
                .flat_map(|i| (0..n).map(move |j| [lo[0] + (i as f64 + 0.5) * h[0], lo[1] + (j as f64 + 0.5) * h[1]]))
                .filter(|&p| self.contains(p))
                .collect();
            if pts.len() >= min_points {
                return pts;
            }
            n += (n / 8).max(1);
        }
    }

    /// Smallest distance between ∂D and Γ over a sampling of n points each.
    pub fn source_gap(&self, n: usize) -> f64 {
        let period = self.shape.period();
        let boundary: Vec<Point> = (0..n).map(|i| self.trace(period * i as f64 / n as f64).0).collect();
        let sources: Vec<Point> = (0..n).map(|i| self.source_contour_point(period * i as f64 / n as f64)).collect();
        let mut gap = f64::INFINITY;
        for b in &boundary {
            for s in &sources {
                gap = gap.min((b[0] - s[0]).hypot(b[1] - s[1]));
            }
        }
        if sources.iter().any(|&s| self.contains(s)) {
            return 0.0;
        }
        gap
    }
}

fn wrap(t: f64, period: f64) -> f64 {
    t.rem_euclid(period)
}

fn square_trace(t: f64) -> (Point, Point) {
    let h = SQUARE_HALF;
    let side = 2.0 * h;
    // shift so that u = 0 is the corner (h, h)
    let u = (t - h).rem_euclid(4.0 * side);
    let k = (u / side).floor().min(3.0);
    let a = u - k * side;
    match k as u8 {
        0 => ([h - a, h], [-1.0, 0.0]),
        1 => ([-h, h - a], [0.0, -1.0]),
        2 => ([-h + a, -h], [1.0, 0.0]),
        _ => ([h, -h + a], [0.0, 1.0]),
    }
}

fn winding_number(poly: &[Point], p: Point) -> i32 {
    let mut wn = 0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let cross = (b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1]);
        if a[1] <= p[1] {
            if b[1] > p[1] && cross > 0.0 {
                wn += 1;
            }
        } else if b[1] <= p[1] && cross < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Collocation, source and interior points for one scatterer and trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSets {
    pub collocation: Vec<BoundaryPoint>,
    pub sources_u: Vec<Point>,
    pub sources_v: Vec<Point>,
    pub interior: Vec<Point>,
}

impl PointSets {
    pub fn build(scatterer: &Scatterer, m: usize, m_i: usize, seed: u64, split_sources: bool) -> Result<Self> {
        let collocation = scatterer.collocation_points(m)?;
        let (sources_u, sources_v) = if split_sources {
            scatterer.split_source_points(m)?
        } else {
            let s = scatterer.source_points(m)?;
            (s.clone(), s)
        };
        let interior = scatterer.interior_points(m_i, seed)?;
        Ok(Self { collocation, sources_u, sources_v, interior })
    }

    pub fn m(&self) -> usize {
        self.collocation.len()
    }

    pub fn m_i(&self) -> usize {
        self.interior.len()
    }
}
