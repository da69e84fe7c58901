use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {z} outside the supported domain (|z| <= 200, Im z >= -10)")]
    Domain { z: Complex64 },

    #[error("cylinder function of the second kind is singular at z = 0")]
    SingularArgument,

    #[error("non-finite result at z = {z}")]
    Overflow { z: Complex64 },

    #[error("frequency must be nonzero")]
    ZeroFrequency,

    #[error("source and field point coincide (r = {distance:e})")]
    CoincidentPoints { distance: f64 },

    #[error("normal vector is not of unit length (|n| = {norm})")]
    NonUnitNormal { norm: f64 },

    #[error("invalid material parameters: {0}")]
    Material(String),

    #[error("parameter t = {t} is a corner of the square")]
    CornerParameter { t: f64 },

    #[error("{what}: got {got}, need at least {min}")]
    TooFewPoints { what: &'static str, got: usize, min: usize },

    #[error("invalid scatterer: {0}")]
    Geometry(String),

    #[error("rejection sampling of interior points failed after {draws} draws")]
    SamplingExhausted { draws: usize },

    #[error("QR factorization broke down at omega = {omega}")]
    QrBreakdown { omega: Complex64 },

    #[error("singular value decomposition did not converge at omega = {omega}")]
    SvdFailure { omega: Complex64 },

    #[error("minimization did not converge; best iterate omega = {best}, sigma1 = {sigma1:e}")]
    NonConvergence { best: Complex64, sigma1: f64 },

    #[error("could not bracket a minimum near omega = {omega}")]
    NoBracket { omega: f64 },

    #[error("R factor is numerically singular at omega = {omega}; retry with a smaller trial order m")]
    IllConditioned { omega: Complex64 },

    #[error("the norm relation only holds for non-real eigenvalues, got omega = {omega}")]
    RealFrequency { omega: Complex64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 1 for usage problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidArgument(_) | Error::Io(_) => 1,
            _ => 2,
        }
    }
}
