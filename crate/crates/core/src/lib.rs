//! Interior transmission eigenvalues of two-dimensional isotropic elastic
//! scatterers, computed with a QR-stabilized method of fundamental solutions.

pub mod assembly;
pub mod cli_io;
pub mod disc_oracle;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
