//! The stabilized objective σ₁(ω), scans, refinement, digit stability and
//! eigenfunction recovery.

mod digits;
mod eigen;
mod objective;
mod refine;
mod scan;
mod table;

pub use digits::{digit_stability, stable_prefix, DigitStability, StablePrefix};
pub use eigen::{norm_relation_check, recover_eigenfunction, EigenPairApprox};
pub use objective::{sigma1, Factorization, SpectrumSample, CONDITION_THRESHOLD};
pub use refine::{refine, refine_complex, refine_real, RefineMode, GOLDEN_WIDTH, SIMPLEX_DIAMETER, SIMPLEX_MAX_ITER};
pub use scan::{real_grid, scan_complex, scan_real, ComplexScan, RealScan, Rect, ScanSample};
pub use table::{ite_table, IteRow, TableOptions, TableReport, TrackPoint, ACCEPT_MOVE, ACCEPT_SIGMA};
