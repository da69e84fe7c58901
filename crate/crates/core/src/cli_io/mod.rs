//! Command-line interface, run configuration and CSV output.

mod args;
mod commands;
mod config;

pub use args::{run, Cli};
pub use commands::{
    cmd_contour_dump, cmd_disc_oracle, cmd_refine, cmd_scan_complex, cmd_scan_real, cmd_table, CommandReport,
    COMPLEX_HEADER, ORACLE_HEADER, POINTS_HEADER, REAL_HEADER, TABLE_HEADER, TRACK_HEADER,
};
pub use config::{RunConfig, KEYS, MAX_M, MIN_M, PRODUCTIVE_M};

use std::io::{BufWriter, Write};
use std::path::Path;

use tempfile::NamedTempFile;

use crate::error::Result;

/// 17 significant digits in scientific notation, lowercase `e`, no locale.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes through `fill` into a temporary file next to `path` and renames it
/// into place only on success, so a failed run leaves no partial file.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let tmp = NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Path of a companion file: `out.csv` → `out.minima.csv`.
pub fn companion_path(path: &Path, tag: &str) -> std::path::PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}.{tag}.{ext}"))
}
