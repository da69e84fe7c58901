//! The six subcommands. Each reads a validated [`RunConfig`], writes its CSV
//! atomically and returns a short text report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use log::warn;
use num_complex::Complex64;

use super::config::RunConfig;
use super::{companion_path, format_float, write_atomic};
use crate::assembly::MfsSystem;
use crate::disc_oracle::{disc_roots_complex, disc_roots_real, DiscProblem, DiscRoot};
use crate::error::{Error, Result};
use crate::spectral::{
    ite_table, refine, scan_complex, scan_real, Rect, RefineMode, ScanSample, SpectrumSample, TableOptions,
};

pub const REAL_HEADER: &str = "omega,sigma1,m";
pub const COMPLEX_HEADER: &str = "re_omega,im_omega,sigma1,m";
pub const ORACLE_HEADER: &str = "re,im,abs_det";
pub const TABLE_HEADER: &str = "index,omega,sigma1,m,stable_digits,stable_prefix";
pub const TRACK_HEADER: &str = "index,m,omega,sigma1,condition_flag";
pub const POINTS_HEADER: &str = "kind,x,y,normal_x,normal_y";

/// Disc radius used by the oracle, matching the built-in disc.
const DISC_RADIUS: f64 = 0.5;

/// Files written by a command and a human-readable summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandReport {
    pub output: PathBuf,
    pub rows: usize,
    pub companion: Option<(PathBuf, usize)>,
    pub text: String,
}

fn output_path(config: &RunConfig, command: &str) -> PathBuf {
    config.output.clone().unwrap_or_else(|| PathBuf::from(format!("{command}.csv")))
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    write_atomic(path, |w| {
        writeln!(w, "{header}")?;
        for r in rows {
            writeln!(w, "{r}")?;
        }
        Ok(())
    })
}

fn system(config: &RunConfig) -> Result<MfsSystem> {
    config.validate()?;
    MfsSystem::new(config.scatterer()?, config.material()?, config.m, config.m_i, config.seed, config.split_sources)
}

/// σ₁ as text; failed samples are written as `nan` so the grid stays complete.
fn sigma_text(sample: &ScanSample) -> String {
    match &sample.outcome {
        Ok(s) => format_float(s.sigma1),
        Err(e) => {
            warn!("sample at omega = {} failed: {e}", sample.omega);
            "nan".into()
        }
    }
}

fn real_row(sample: &ScanSample, m: usize) -> String {
    format!("{},{},{m}", format_float(sample.omega.re), sigma_text(sample))
}

fn complex_row(omega: Complex64, sigma: &str, m: usize) -> String {
    format!("{},{},{sigma},{m}", format_float(omega.re), format_float(omega.im))
}

fn flagged(samples: &[ScanSample]) -> usize {
    samples.iter().filter(|s| s.condition_flag()).count()
}

pub fn cmd_scan_real(config: &RunConfig) -> Result<CommandReport> {
    config.validate_real_interval()?;
    let sys = system(config)?;
    let scan = scan_real(&sys, config.omega_min, config.omega_max, config.step)?;
    let m = sys.m();
    let rows: Vec<String> = scan.samples.iter().map(|s| real_row(s, m)).collect();
    let minima: Vec<String> = scan.minima.iter().map(|&k| real_row(&scan.samples[k], m)).collect();
    let path = output_path(config, "scan-real");
    let minima_path = companion_path(&path, "minima");
    write_csv(&path, REAL_HEADER, &rows)?;
    write_csv(&minima_path, REAL_HEADER, &minima)?;
    let mut text = format!("{} samples, {} bracketed minima, {} flagged\n", rows.len(), minima.len(), flagged(&scan.samples));
    for w in scan.minimum_omegas() {
        let _ = writeln!(text, "  minimum near {w}");
    }
    Ok(CommandReport { output: path, rows: rows.len(), companion: Some((minima_path, minima.len())), text })
}

pub fn cmd_scan_complex(config: &RunConfig) -> Result<CommandReport> {
    config.validate_rect()?;
    let sys = system(config)?;
    let rect = Rect { re: (config.re_min, config.re_max), im: (config.im_min, config.im_max) };
    let scan = scan_complex(&sys, rect, config.nx, config.ny)?;
    let m = sys.m();
    let rows: Vec<String> = scan.samples.iter().map(|s| complex_row(s.omega, &sigma_text(s), m)).collect();
    let minima: Vec<String> = scan.minima.iter().map(|&k| rows[k].clone()).collect();
    let path = output_path(config, "scan-complex");
    let minima_path = companion_path(&path, "minima");
    write_csv(&path, COMPLEX_HEADER, &rows)?;
    write_csv(&minima_path, COMPLEX_HEADER, &minima)?;
    let mut text = format!("{} samples, {} local minima, {} flagged\n", rows.len(), minima.len(), flagged(&scan.samples));
    for w in scan.minimum_omegas() {
        let _ = writeln!(text, "  minimum near {w}");
    }
    Ok(CommandReport { output: path, rows: rows.len(), companion: Some((minima_path, minima.len())), text })
}

/// Real-line refinement when `omega_im` is zero, simplex descent otherwise.
pub fn cmd_refine(config: &RunConfig) -> Result<CommandReport> {
    let sys = system(config)?;
    let start = Complex64::new(config.omega_re, config.omega_im);
    let mode = if config.omega_im == 0.0 {
        RefineMode::RealLine { bracket: Some((config.omega_re - config.bracket, config.omega_re + config.bracket)) }
    } else {
        RefineMode::ComplexPlane { initial_step: config.simplex_step }
    };
    let s: SpectrumSample = refine(&sys, start, mode)?;
    let path = output_path(config, "refine");
    write_csv(&path, COMPLEX_HEADER, &[complex_row(s.omega, &format_float(s.sigma1), s.m)])?;
    let mut text = format!("omega = {} + {}i, sigma1 = {:e}, m = {}\n", s.omega.re, s.omega.im, s.sigma1, s.m);
    if s.condition_flag {
        text.push_str("warning: R factor is ill-conditioned at this trial order\n");
    }
    Ok(CommandReport { output: path, rows: 1, companion: None, text })
}

pub fn cmd_table(config: &RunConfig) -> Result<CommandReport> {
    config.validate()?;
    config.validate_real_interval()?;
    config.validate_sweep()?;
    let opts = TableOptions {
        m_sweep: config.m_sweep.clone(),
        scan_m: None,
        m_i: config.m_i,
        seed: config.seed,
        split_sources: config.split_sources,
        window: (config.omega_min, config.omega_max),
        step: config.step,
        count: config.count,
    };
    let report = ite_table(&config.scatterer()?, &config.material()?, &opts)?;
    let mut rows = Vec::new();
    let mut tracks = Vec::new();
    let mut text = format!("{} eigenvalues of the {} (m-sweep {:?})\n", report.rows.len(), config.shape, config.m_sweep);
    for (i, r) in report.rows.iter().enumerate() {
        let k = i + 1;
        rows.push(format!(
            "{k},{},{},{},{},{}",
            format_float(r.omega),
            format_float(r.sigma1),
            r.m,
            r.stable.digits,
            r.stable.prefix
        ));
        for p in &r.track {
            tracks.push(format!("{k},{},{},{},{}", p.m, format_float(p.omega), format_float(p.sigma1), p.condition_flag));
        }
        let _ = writeln!(text, "  {k}: {:<20} stable {:<20} ({} digits), sigma1 = {:.1e} at m = {}", r.omega, r.stable.prefix, r.stable.digits, r.sigma1, r.m);
    }
    if report.rows.len() < config.count {
        let _ = writeln!(text, "warning: found {} of {} requested eigenvalues", report.rows.len(), config.count);
    }
    let path = output_path(config, "table");
    let track_path = companion_path(&path, "tracks");
    write_csv(&path, TABLE_HEADER, &rows)?;
    write_csv(&track_path, TRACK_HEADER, &tracks)?;
    Ok(CommandReport { output: path, rows: rows.len(), companion: Some((track_path, tracks.len())), text })
}

pub fn cmd_disc_oracle(config: &RunConfig) -> Result<CommandReport> {
    let problem = DiscProblem::new(DISC_RADIUS, config.mu, config.rho)
        .map_err(|e| Error::Config { key: "mu/rho".into(), message: e.to_string() })?;
    let roots: Vec<DiscRoot> = if config.complex {
        config.validate_rect()?;
        disc_roots_complex(&problem, (config.re_min, config.re_max), (config.im_min, config.im_max), config.nx)?
    } else {
        config.validate_real_interval()?;
        disc_roots_real(&problem, config.omega_min, config.omega_max)?
    };
    let rows: Vec<String> = roots
        .iter()
        .map(|r| format!("{},{},{}", format_float(r.omega.re), format_float(r.omega.im), format_float(r.abs_det)))
        .collect();
    let path = output_path(config, "disc-oracle");
    write_csv(&path, ORACLE_HEADER, &rows)?;
    let mut text = format!("{} roots\n", rows.len());
    for r in &roots {
        let _ = writeln!(text, "  {} + {}i  |det| = {:.1e}", r.omega.re, r.omega.im, r.abs_det);
    }
    Ok(CommandReport { output: path, rows: rows.len(), companion: None, text })
}

/// Collocation points with normals, both source families and the interior
/// samples of the configured scatterer.
pub fn cmd_contour_dump(config: &RunConfig) -> Result<CommandReport> {
    let sys = system(config)?;
    let p = sys.points();
    let xy = |x: f64, y: f64| format!("{},{}", format_float(x), format_float(y));
    let mut rows = Vec::new();
    for b in &p.collocation {
        rows.push(format!("collocation,{},{}", xy(b.point[0], b.point[1]), xy(b.normal[0], b.normal[1])));
    }
    for (kind, set) in [("source_u", &p.sources_u), ("source_v", &p.sources_v), ("interior", &p.interior)] {
        for q in set {
            rows.push(format!("{kind},{},,", xy(q[0], q[1])));
        }
    }
    let path = output_path(config, "contour-dump");
    write_csv(&path, POINTS_HEADER, &rows)?;
    let text = format!(
        "{}: {} collocation, {} + {} sources, {} interior points\n",
        config.shape,
        p.collocation.len(),
        p.sources_u.len(),
        p.sources_v.len(),
        p.interior.len()
    );
    Ok(CommandReport { output: path, rows: rows.len(), companion: None, text })
}
