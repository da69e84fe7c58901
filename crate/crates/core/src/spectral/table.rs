use log::{debug, warn};
use num_complex::Complex64;
use rayon::prelude::*;

use super::digits::{stable_prefix, StablePrefix};
use super::refine::{golden_real, refine_real};
use super::objective::{sigma1, SpectrumSample};
use super::scan::scan_real;
use crate::assembly::MfsSystem;
use crate::error::{Error, Result};
use crate::geometry::Scatterer;
use crate::kernel::MaterialParams;

/// A refined minimum is an eigenvalue candidate only below this misfit ...
pub const ACCEPT_SIGMA: f64 = 1e-4;
/// ... and only if it moves less than this between consecutive trial orders.
pub const ACCEPT_MOVE: f64 = 1e-2;
/// Rows closer than this are one eigenvalue reached from two scan minima.
const DUPLICATE_DISTANCE: f64 = 1e-3;
/// A minimum is followed to the next trial order by sampling
/// ±`TRACK_POINTS`·`TRACK_STEP` around it and refining the deepest sample.
const TRACK_STEP: f64 = 5e-4;
const TRACK_POINTS: i32 = 10;
/// A track ends after this many consecutive orders without a minimum.
const TRACK_MISSES: usize = 2;
/// A refined minimum further than this from the previous one is a miss.
const TRACK_JUMP: f64 = 5.0 * ACCEPT_MOVE;

#[derive(Debug, Clone)]
pub struct TableOptions {
    /// Increasing trial orders; the eigenvalues are followed through all of them.
    pub m_sweep: Vec<usize>,
    /// Trial order of the initial real scan; defaults to the first of the sweep.
    pub scan_m: Option<usize>,
    pub m_i: usize,
    pub seed: u64,
    pub split_sources: bool,
    pub window: (f64, f64),
    pub step: f64,
    /// Number of eigenvalues to report.
    pub count: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            m_sweep: vec![40, 50, 60, 70, 80],
            scan_m: None,
            m_i: 10,
            seed: 1,
            split_sources: false,
            window: (0.5, 2.5),
            step: 0.002,
            count: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackPoint {
    pub m: usize,
    pub omega: f64,
    pub sigma1: f64,
    pub condition_flag: bool,
}

#[derive(Debug, Clone)]
pub struct IteRow {
    /// Value at the unflagged trial order with the smallest misfit.
    pub omega: f64,
    pub sigma1: f64,
    pub m: usize,
    pub stable: StablePrefix,
    pub track: Vec<TrackPoint>,
}

#[derive(Debug, Clone)]
pub struct TableReport {
    pub rows: Vec<IteRow>,
    pub scan_minima: usize,
    pub rejected: Vec<Vec<TrackPoint>>,
}

/// Samples `prev ± half·TRACK_STEP` and returns the grid and the index of the
/// deepest sample.
fn window(system: &MfsSystem, prev: f64, half: i32) -> (Vec<f64>, usize) {
    let grid: Vec<f64> = (-half..=half).map(|k| prev + k as f64 * TRACK_STEP).filter(|&w| w > 0.0).collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&w| sigma1(system, Complex64::new(w, 0.0)).map(|s| s.sigma1).unwrap_or(f64::INFINITY))
        .collect();
    let k = (0..grid.len()).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    (grid, k)
}

/// Minimum of σ₁ near `prev` at the next trial order. The deepest sample of a
/// window is refined by golden section between its neighbours; taking the
/// deepest sample rather than the nearest local minimum keeps the track on the
/// eigenvalue when σ₁ has a noise floor with shallow spurious dips. If the
/// deepest sample sits on the edge of the narrow and of the doubled window,
/// golden section runs downhill from that edge.
fn relocate(system: &MfsSystem, prev: f64) -> Result<SpectrumSample> {
    let mut found = window(system, prev, TRACK_POINTS);
    if found.1 == 0 || found.1 + 1 == found.0.len() {
        found = window(system, prev, 2 * TRACK_POINTS);
    }
    let (grid, k) = found;
    let lo = if k > 0 { grid[k - 1] } else { (grid[k] - TRACK_STEP).max(0.5 * grid[k]) };
    let hi = grid.get(k + 1).copied().unwrap_or(grid[k] + TRACK_STEP);
    golden_real(system, grid[k], Some((lo, hi)))
}

/// Follows a minimum through the sweep, starting each order from the previous
/// minimizer. The plain golden-section result is kept so that the digits of
/// the track reflect the noise of the objective. An order where the minimum
/// is lost or jumps is skipped; the track ends after `TRACK_MISSES` such
/// orders in a row, or at the first order whose R factor is flagged, since σ₁
/// is unreliable from there on.
fn track(systems: &[(usize, MfsSystem)], start: f64) -> Vec<TrackPoint> {
    let mut out: Vec<TrackPoint> = Vec::with_capacity(systems.len());
    let mut prev = start;
    let mut misses = 0;
    for (m, sys) in systems {
        match relocate(sys, prev) {
            Ok(s) if (s.omega.re - prev).abs() <= TRACK_JUMP => {
                out.push(TrackPoint { m: *m, omega: s.omega.re, sigma1: s.sigma1, condition_flag: s.condition_flag });
                if s.condition_flag {
                    debug!("R factor flagged near {prev} at m = {m}");
                    break;
                }
                prev = s.omega.re;
                misses = 0;
                continue;
            }
            Ok(s) => debug!("minimum near {prev} jumped to {} at m = {m}", s.omega.re),
            Err(e) => debug!("lost track of {prev} at m = {m}: {e}"),
        }
        misses += 1;
        if misses >= TRACK_MISSES {
            break;
        }
    }
    out
}

/// Track points from well-conditioned trial orders.
fn reliable(track: &[TrackPoint]) -> Vec<TrackPoint> {
    track.iter().filter(|p| !p.condition_flag).copied().collect()
}

fn accepted(track: &[TrackPoint]) -> bool {
    reliable(track).windows(2).any(|w| {
        w[0].sigma1 < ACCEPT_SIGMA && w[1].sigma1 < ACCEPT_SIGMA && (w[1].omega - w[0].omega).abs() < ACCEPT_MOVE
    })
}

/// Scan, refine and follow real eigenvalues through a sweep of trial orders.
pub fn ite_table(scatterer: &Scatterer, material: &MaterialParams, opts: &TableOptions) -> Result<TableReport> {
    if opts.m_sweep.len() < 3 {
        return Err(Error::TooFewPoints { what: "m-sweep entries", got: opts.m_sweep.len(), min: 3 });
    }
    if opts.m_sweep.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("m-sweep must be increasing".into()));
    }
    let build = |m: usize| MfsSystem::new(scatterer.clone(), *material, m, opts.m_i, opts.seed, opts.split_sources);
    let scan_m = opts.scan_m.unwrap_or(opts.m_sweep[0]);
    let base = build(scan_m)?;
    let systems: Vec<(usize, MfsSystem)> = opts.m_sweep.iter().map(|&m| build(m).map(|s| (m, s))).collect::<Result<_>>()?;

    let scan = scan_real(&base, opts.window.0, opts.window.1, opts.step)?;
    let starts: Vec<(f64, f64, f64)> = scan
        .minima
        .iter()
        .map(|&k| (scan.samples[k - 1].omega.re, scan.samples[k].omega.re, scan.samples[k + 1].omega.re))
        .collect();
    debug!("{} scan minima at m = {scan_m}", starts.len());

    // Candidates are taken in ascending order, one batch per pool width, until
    // enough distinct eigenvalues are accepted.
    let mut unique: Vec<IteRow> = Vec::new();
    let mut rejected = Vec::new();
    let mut followed: Vec<f64> = Vec::new();
    for batch in starts.chunks(rayon::current_num_threads().max(1)) {
        let refined: Vec<f64> = batch
            .par_iter()
            .filter_map(|&(a, b, c)| match refine_real(&base, b, Some((a, c))) {
                Ok(s) => Some(s.omega.re),
                Err(e) => {
                    debug!("discarding scan minimum {b}: {e}");
                    None
                }
            })
            .collect();
        // two scan minima may refine to the same point
        let mut fresh = Vec::new();
        for w in refined {
            if followed.iter().all(|f| (f - w).abs() >= DUPLICATE_DISTANCE) {
                followed.push(w);
                fresh.push(w);
            }
        }
        let tracks: Vec<Vec<TrackPoint>> = fresh.par_iter().map(|&w| track(&systems, w)).collect();
        for t in tracks {
            match accepted_row(&t) {
                Some(row) => insert_unique(&mut unique, row),
                None => rejected.push(t),
            }
        }
        if unique.len() >= opts.count {
            break;
        }
    }
    if unique.len() < opts.count {
        warn!("found {} of {} requested eigenvalues in [{}, {}]", unique.len(), opts.count, opts.window.0, opts.window.1);
    }
    unique.truncate(opts.count);
    Ok(TableReport { rows: unique, scan_minima: scan.minima.len(), rejected })
}

fn accepted_row(t: &[TrackPoint]) -> Option<IteRow> {
    if !accepted(t) {
        return None;
    }
    let good = reliable(t);
    let best = good.iter().filter(|p| p.sigma1 < ACCEPT_SIGMA).min_by(|a, b| a.sigma1.total_cmp(&b.sigma1))?;
    let tail: Vec<f64> = good.iter().rev().take(3).rev().map(|p| p.omega).collect();
    let stable = stable_prefix(&tail);
    Some(IteRow { omega: best.omega, sigma1: best.sigma1, m: best.m, stable, track: t.to_vec() })
}

/// Keeps rows sorted; of two rows closer than the duplicate distance the one
/// with the smaller misfit survives.
fn insert_unique(rows: &mut Vec<IteRow>, row: IteRow) {
    if let Some(k) = rows.iter().position(|r| (r.omega - row.omega).abs() < DUPLICATE_DISTANCE) {
        if row.sigma1 < rows[k].sigma1 {
            rows[k] = row;
        }
        return;
    }
    let at = rows.partition_point(|r| r.omega < row.omega);
    rows.insert(at, row);
}
