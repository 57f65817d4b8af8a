//! `jacobi-cs` command-line tool.
//!
//! Exit codes: 0 ok, 1 failed invariant, 2 domain error, 3 parse error,
//! 4 the integration left the disk.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use config::{ConfigError, Format, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "jacobi-cs",
    version,
    about = "Jacobi group coherent states: evaluate, verify, simulate, transform"
)]
struct Cli {
    /// Weight k, as a decimal or a fraction such as 3/2.
    #[arg(long = "k", global = true)]
    k: Option<String>,
    /// Weight validation: strict (2k integer >= 2) or relaxed (k > 3/4).
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Cutoff N for truncated sums; also sets M unless --cutoff-m is given.
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    #[arg(long = "cutoff-m", global = true)]
    cutoff_m: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo samples for the quadrature checks.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// File of `key = value` lines. Flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn cx(s: &str) -> Result<Complex64, String> {
    parse::complex(s)
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reproducing kernel K(x; conj y): closed form and truncated double sum.
    Kernel {
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        w: Complex64,
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        zp: Complex64,
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        wp: Complex64,
    },
    /// Basis function f_{n,m}: polynomial and value at a point.
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        w: Complex64,
    },
    /// Runs invariant suites; exit 1 if any check fails.
    Verify {
        /// Comma separated: algebra, kernel, diffops, fock, dynamics, coords or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Integrates the coherent state flow of a linear Hamiltonian.
    Evolve {
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        z0: Complex64,
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        w0: Complex64,
        #[arg(long = "eps-a", default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        eps_a: Complex64,
        /// Coefficient of a+; conj(eps-a) when absent.
        #[arg(long = "eps-a-dag", value_parser = cx, allow_hyphen_values = true)]
        eps_a_dag: Option<Complex64>,
        #[arg(long = "eps0", default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        eps_0: Complex64,
        #[arg(long = "eps-plus", default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        eps_plus: Complex64,
        /// Coefficient of K-; conj(eps-plus) when absent.
        #[arg(long = "eps-minus", value_parser = cx, allow_hyphen_values = true)]
        eps_minus: Option<Complex64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
    /// Integrates a geodesic of the invariant metric.
    Geodesic {
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        z0: Complex64,
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        w0: Complex64,
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        vz: Complex64,
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        vw: Complex64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
    /// Maps between the upper half plane picture (v, u) and the disk picture (z, w).
    Transform {
        #[arg(long, value_parser = cx, allow_hyphen_values = true, conflicts_with_all = ["z", "w"])]
        v: Option<Complex64>,
        #[arg(long, value_parser = cx, allow_hyphen_values = true)]
        u: Option<Complex64>,
        #[arg(long, value_parser = cx, allow_hyphen_values = true)]
        z: Option<Complex64>,
        #[arg(long, value_parser = cx, allow_hyphen_values = true)]
        w: Option<Complex64>,
        /// SL(2,R) matrix `a,b,c,d` to decompose and carry to SU(1,1).
        #[arg(long, allow_hyphen_values = true)]
        sl2: Option<String>,
    },
    /// Group law, inverse, action on a point and multiplier.
    Group {
        /// SU(1,1) part exp([[i theta, zeta], [conj zeta, -i theta]]).
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        zeta: Complex64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value = "0", value_parser = cx, allow_hyphen_values = true)]
        alpha: Complex64,
        /// Central coordinate.
        #[arg(long = "phase", default_value_t = 0.0, allow_hyphen_values = true)]
        phase: f64,
        /// Second element as `zeta;theta;alpha;phase`, composed on the right.
        #[arg(long, allow_hyphen_values = true)]
        with: Option<String>,
        #[arg(long, value_parser = cx, allow_hyphen_values = true)]
        z: Option<Complex64>,
        #[arg(long, value_parser = cx, allow_hyphen_values = true)]
        w: Option<Complex64>,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Invariant(String),
    Domain(String),
    Parse(String),
    DiskExit(f64),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invariant(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Parse(_) => 3,
            Failure::DiskExit(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invariant(s) => write!(f, "invariant check failed: {s}"),
            Failure::Domain(s) => write!(f, "domain error: {s}"),
            Failure::Parse(s) => write!(f, "parse error: {s}"),
            Failure::DiskExit(t) => write!(f, "trajectory left the disk at t = {t}"),
        }
    }
}

impl From<jacobi_cs::Error> for Failure {
    fn from(e: jacobi_cs::Error) -> Self {
        match e {
            jacobi_cs::Error::Parse(s) => Failure::Parse(s),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Parse(s) => Failure::Parse(s),
            ConfigError::Domain(s) => Failure::Domain(s),
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("JACOBI_CS_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Parse(format!(
            "JACOBI_CS_THREADS must be a positive integer, got `{v}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Domain(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    let flags = Overrides {
        k: cli.k,
        mode: cli.mode,
        cutoff: cli.cutoff,
        cutoff_m: cli.cutoff_m,
        tol: cli.tol,
        seed: cli.seed,
        samples: cli.samples,
        out: cli.out,
        format: cli.format,
    };
    let cfg = RunConfig::resolve(cli.config.as_deref(), flags)?;
    match cli.command {
        Command::Kernel { z, w, zp, wp } => commands::kernel(&cfg, (z, w), (zp, wp)),
        Command::Basis { n, m, z, w } => commands::basis(&cfg, n, m, (z, w)),
        Command::Verify { suite } => commands::verify(&cfg, &suite),
        Command::Evolve {
            z0,
            w0,
            eps_a,
            eps_a_dag,
            eps_0,
            eps_plus,
            eps_minus,
            t0,
            t1,
            dt,
        } => {
            let h = jacobi_cs::dynamics::HamiltonianCoeffs::general(
                eps_a,
                eps_a_dag.unwrap_or(eps_a.conj()),
                eps_0,
                eps_plus,
                eps_minus.unwrap_or(eps_plus.conj()),
            );
            commands::evolve(&cfg, (z0, w0), h, (t0, t1), dt)
        }
        Command::Geodesic {
            z0,
            w0,
            vz,
            vw,
            t1,
            dt,
        } => commands::geodesic(&cfg, (z0, w0), (vz, vw), t1, dt),
        Command::Transform { v, u, z, w, sl2 } => {
            commands::transform(&cfg, (v, u), (z, w), sl2.as_deref())
        }
        Command::Group {
            zeta,
            theta,
            alpha,
            phase,
            with,
            z,
            w,
        } => commands::group(&cfg, (zeta, theta, alpha, phase), with.as_deref(), (z, w)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
