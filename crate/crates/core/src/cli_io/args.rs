use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::error;

use super::commands::{
    cmd_contour_dump, cmd_disc_oracle, cmd_refine, cmd_scan_complex, cmd_scan_real, cmd_table, CommandReport,
};
use super::config::RunConfig;
use crate::error::{Error, Result};

/// A subcommand body.
type Runner = fn(&RunConfig) -> Result<CommandReport>;

const AFTER_HELP: &str = "\
Settings are read from the defaults, then the --config file, then --set
pairs, then the named flags; later sources win.

Scans run on the rayon thread pool; set RAYON_NUM_THREADS to limit it.
Set RUST_LOG (e.g. RUST_LOG=info) for progress messages.

Exit codes: 0 success, 1 usage or I/O error, 2 numerical failure.";

#[derive(Debug, Parser)]
#[command(name = "elastic-ite", version, about = "Interior transmission eigenvalues of 2D elastic scatterers", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample σ₁ on a real interval; minima go to <output>.minima.csv
    ScanReal {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        omega_min: Option<f64>,
        #[arg(long)]
        omega_max: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Sample σ₁ on a rectangle of the complex plane
    ScanComplex {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rect: RectArgs,
        /// Allow Im ω < 0
        #[arg(long)]
        lower_half: bool,
    },
    /// Refine a minimum: golden section if --omega-im is 0, simplex otherwise
    Refine {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        omega_re: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        omega_im: Option<f64>,
        /// Half-width of the real bracket
        #[arg(long)]
        bracket: Option<f64>,
        /// Edge of the initial simplex
        #[arg(long)]
        simplex_step: Option<f64>,
    },
    /// Scan, refine and follow the smallest real eigenvalues through an m-sweep
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        omega_min: Option<f64>,
        #[arg(long)]
        omega_max: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        /// Comma-separated increasing trial orders
        #[arg(long)]
        m_sweep: Option<String>,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Roots of the disc determinant on a real interval or complex rectangle
    DiscOracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        omega_min: Option<f64>,
        #[arg(long)]
        omega_max: Option<f64>,
        /// Search the rectangle given by --re-min .. --im-max with an nx × nx grid
        #[arg(long)]
        complex: bool,
        #[command(flatten)]
        rect: RectArgs,
        #[arg(long)]
        lower_half: bool,
    },
    /// Write the collocation, source and interior points
    ContourDump {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat key = value configuration file
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// Extra setting, repeatable
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// disc, ellipse, kite or square
    #[arg(long)]
    pub shape: Option<String>,
    /// Trial order (collocation points)
    #[arg(short, long)]
    pub m: Option<usize>,
    /// Interior sample count
    #[arg(long)]
    pub m_i: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Source-contour factor
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Separate source points for the two fields
    #[arg(long)]
    pub split_sources: bool,
}

#[derive(Debug, Args)]
pub struct RectArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub re_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub re_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub im_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub im_max: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
}

/// Collects `(key, value)` overrides from optional flags.
#[derive(Default)]
struct Overrides(Vec<(&'static str, String)>);

impl Overrides {
    fn opt<T: ToString>(&mut self, key: &'static str, value: &Option<T>) {
        if let Some(v) = value {
            self.0.push((key, v.to_string()));
        }
    }

    fn flag(&mut self, key: &'static str, on: bool) {
        if on {
            self.0.push((key, "true".into()));
        }
    }

    fn rect(&mut self, r: &RectArgs) {
        self.opt("re_min", &r.re_min);
        self.opt("re_max", &r.re_max);
        self.opt("im_min", &r.im_min);
        self.opt("im_max", &r.im_max);
        self.opt("nx", &r.nx);
        self.opt("ny", &r.ny);
    }
}

impl Common {
    fn overrides(&self, out: &mut Overrides) {
        out.opt("shape", &self.shape);
        out.opt("m", &self.m);
        out.opt("m_i", &self.m_i);
        out.opt("seed", &self.seed);
        out.opt("scale", &self.scale);
        out.opt("mu", &self.mu);
        out.opt("lambda", &self.lambda);
        out.opt("rho", &self.rho);
        out.flag("split_sources", self.split_sources);
        out.opt("output", &self.output.as_ref().map(|p| p.display().to_string()));
    }

    /// Defaults, then the config file, then `--set`, then the named flags.
    fn build(&self, flags: Overrides) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        for pair in &self.set {
            let (k, v) = pair.split_once('=').ok_or_else(|| Error::Config {
                key: pair.clone(),
                message: "expected KEY=VALUE".into(),
            })?;
            config.set(k.trim(), v)?;
        }
        let mut all = Overrides::default();
        self.overrides(&mut all);
        all.0.extend(flags.0);
        for (k, v) in all.0 {
            config.set(k, &v)?;
        }
        Ok(config)
    }
}

impl Command {
    /// The resolved configuration and the command to run on it.
    pub fn resolve(&self) -> Result<(RunConfig, Runner)> {
        let mut o = Overrides::default();
        let (common, cmd): (&Common, Runner) = match self {
            Command::ScanReal { common, omega_min, omega_max, step } => {
                o.opt("omega_min", omega_min);
                o.opt("omega_max", omega_max);
                o.opt("step", step);
                (common, cmd_scan_real)
            }
            Command::ScanComplex { common, rect, lower_half } => {
                o.rect(rect);
                o.flag("lower_half", *lower_half);
                (common, cmd_scan_complex)
            }
            Command::Refine { common, omega_re, omega_im, bracket, simplex_step } => {
                o.opt("omega_re", omega_re);
                o.opt("omega_im", omega_im);
                o.opt("bracket", bracket);
                o.opt("simplex_step", simplex_step);
                (common, cmd_refine)
            }
            Command::Table { common, omega_min, omega_max, step, m_sweep, count } => {
                o.opt("omega_min", omega_min);
                o.opt("omega_max", omega_max);
                o.opt("step", step);
                o.opt("m_sweep", m_sweep);
                o.opt("count", count);
                (common, cmd_table)
            }
            Command::DiscOracle { common, omega_min, omega_max, complex, rect, lower_half } => {
                o.opt("omega_min", omega_min);
                o.opt("omega_max", omega_max);
                o.flag("complex", *complex);
                o.rect(rect);
                o.flag("lower_half", *lower_half);
                (common, cmd_disc_oracle)
            }
            Command::ContourDump { common } => (common, cmd_contour_dump),
        };
        Ok((common.build(o)?, cmd))
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match cli.command.resolve().and_then(|(config, cmd)| cmd(&config)) {
        Ok(report) => {
            print!("{}", report.text);
            println!("wrote {} ({} rows)", report.output.display(), report.rows);
            if let Some((path, rows)) = &report.companion {
                println!("wrote {} ({rows} rows)", path.display());
            }
            0
        }
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
