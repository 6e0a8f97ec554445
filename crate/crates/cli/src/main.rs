mod config;
mod error;
mod run;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use steklov_core::geometry::QuadratureRule;
use steklov_core::verification::{ShapeFamily, SweepConfig};
use steklov_core::{DomainSpec, PlateParams, QuadratureSizes, SolverConfig};

use crate::config::{DensityChoice, Format, RunConfig, Task};
use crate::error::CliError;

const ISOPERIMETRIC_COLUMNS: &str = "\
CSV columns: id, area (after rescaling to pi), scale, asymmetry, asymmetry_error,
lambda2, lambda2_ball, stability_bound = lambda2_ball (1 - delta_2 A^2),
margin = stability_bound - lambda2, weak_margin = lambda2_ball - lambda2,
tolerance = max(1e-3 lambda2_ball, |lambda2(degree) - lambda2(reference degree)|),
degree, degree_change, holds, error.";

#[derive(Parser, Debug)]
#[command(name = "steklov", version, about = "Biharmonic Steklov eigenvalues on balls and planar domains")]
struct Cli {
    /// Worker threads for assembly and sweeps.
    #[arg(long, global = true, env = "STEKLOV_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form spectrum of the unit ball.
    ///
    /// Eigenvalues come from ultraspherical modified Bessel functions, one per
    /// angular index l with the multiplicity of degree-l spherical harmonics.
    /// The second eigenvalue equals tau with multiplicity n, spanned by the
    /// coordinate functions.
    BallSpectrum {
        /// Ambient dimension.
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
        /// Poisson ratio, admissible in (-1/(n-1), 1).
        #[arg(long, allow_negative_numbers = true)]
        sigma: f64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rayleigh-Ritz spectrum of a planar star-shaped domain.
    ///
    /// Solves the weak form int (1-sigma) D2u:D2v + sigma Lap u Lap v + tau grad u.grad v
    /// = lambda int_{dOmega} rho u v dS, or with an interior density concentrated
    /// in a shell of width eps near the boundary (--neumann-eps, --mass).
    Solve {
        /// DomainSpec JSON file.
        #[arg(long)]
        domain: PathBuf,
        #[command(flatten)]
        plate: PlateArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Constant boundary density.
        #[arg(long, default_value_t = 1.0, conflicts_with = "neumann_eps")]
        rho: f64,
        /// Shell width of the interior density.
        #[arg(long, requires = "mass")]
        neumann_eps: Option<f64>,
        /// Total mass of the interior density.
        #[arg(long, requires = "neumann_eps")]
        mass: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Numerical checks of eigenvalue inequalities; exit code 4 when one fails.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Re-run the config embedded in a file written by this tool.
    Replay {
        /// JSON or CSV output of an earlier run.
        file: PathBuf,
        /// Write here instead of the recorded output path.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Quantitative isoperimetric inequality for lambda_2.
    ///
    /// Each shape is rescaled to area pi and compared with the unit disk:
    /// lambda_2(Omega) <= lambda_2(disk) (1 - delta_2 A(Omega)^2) with the Fraenkel
    /// asymmetry A and delta_2 = (3/16)(sqrt 2 - 1). Without --family a standard
    /// set of six ellipses and six star shapes is used.
    #[command(after_long_help = ISOPERIMETRIC_COLUMNS)]
    Isoperimetric {
        /// ShapeFamily JSON file.
        #[arg(long)]
        family: Option<PathBuf>,
        #[command(flatten)]
        plate: PlateArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Lower degree used to estimate the discretization error.
        #[arg(long, default_value_t = 12)]
        reference_degree: usize,
        /// Grid resolution for the Fraenkel asymmetry.
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Reciprocal-sum bound from coordinate trial functions.
    ///
    /// Checks 1/lambda_2 + 1/lambda_3 >= int_{dOmega} |x - c|^2 dS / (tau |Omega|)
    /// with c the boundary centroid; equality holds on disks.
    ReciprocalSum {
        #[arg(long)]
        domain: PathBuf,
        #[command(flatten)]
        plate: PlateArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Scaling law lambda(tau, sigma, Omega) = s^3 lambda(tau / s^2, sigma, s Omega).
    Scaling {
        #[arg(long)]
        domain: PathBuf,
        /// Scale factors.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        s: Vec<f64>,
        #[command(flatten)]
        plate: PlateArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Limit of interior densities concentrating on the boundary.
    ///
    /// As eps decreases, lambda_2 for the density with mass M in a shell of width
    /// eps approaches lambda_2 of the boundary problem with rho = M / |dOmega|.
    /// Fails unless the gaps decrease strictly. CSV columns: eps, lambda1,
    /// lambda2, gap, shell_value, warnings.
    MassConcentration {
        #[arg(long)]
        domain: PathBuf,
        /// Total mass; defaults to the perimeter, so that rho = 1.
        #[arg(long)]
        mass: Option<f64>,
        /// Decreasing shell widths.
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05,0.025")]
        eps: Vec<f64>,
        #[command(flatten)]
        plate: PlateArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct PlateArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    tau: f64,
    /// Poisson ratio, admissible in (-1, 1).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    sigma: f64,
}

impl PlateArgs {
    fn params(&self) -> Result<PlateParams, CliError> {
        Ok(PlateParams::planar(self.tau, self.sigma)?)
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct SolverArgs {
    /// Total polynomial degree of the trial space.
    #[arg(long, default_value_t = 14)]
    degree: usize,
    /// Gauss nodes per ray.
    #[arg(long, default_value_t = 64)]
    radial: usize,
    /// Rays of the interior rule.
    #[arg(long, default_value_t = 256)]
    angular: usize,
    /// Boundary nodes.
    #[arg(long, default_value_t = 1024)]
    boundary: usize,
    /// Gauss nodes on the shell part of each ray.
    #[arg(long, default_value_t = 32)]
    shell_radial: usize,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            degree: self.degree,
            quadrature: QuadratureSizes { radial: self.radial, angular: self.angular, boundary: self.boundary },
            shell_radial: self.shell_radial,
            keep_vectors: false,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output file (`-` for stdout); the format follows the extension.
    #[arg(long)]
    out: Option<String>,
    /// Override the output format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

impl OutputArgs {
    fn format(&self) -> Option<Format> {
        self.format.map(|f| match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        })
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn read_domain(path: &Path) -> Result<DomainSpec, CliError> {
    let spec: DomainSpec = read_json(path)?;
    spec.resolve()?;
    Ok(spec)
}

fn build(command: Command) -> Result<RunConfig, CliError> {
    let (task, out) = match command {
        Command::BallSpectrum { n, tau, sigma, count, out } => {
            (Task::BallSpectrum { params: PlateParams::new(n, tau, sigma)?, count }, out)
        }
        Command::Solve { domain, plate, solver, rho, neumann_eps, mass, out } => {
            let density = match (neumann_eps, mass) {
                (Some(eps), Some(mass)) => DensityChoice::Shell { eps, mass },
                _ => DensityChoice::Boundary { rho },
            };
            let task = Task::Solve {
                domain: read_domain(&domain)?,
                params: plate.params()?,
                solver: solver.config(),
                density,
            };
            (task, out)
        }
        Command::Verify { check } => match check {
            Check::Isoperimetric { family, plate, solver, reference_degree, resolution, out } => {
                let family = match family {
                    Some(path) => read_json(&path)?,
                    None => ShapeFamily::standard(),
                };
                let sweep = SweepConfig { solver: solver.config(), reference_degree, resolution };
                (Task::VerifyIsoperimetric { family, params: plate.params()?, sweep }, out)
            }
            Check::ReciprocalSum { domain, plate, solver, out } => (
                Task::VerifyReciprocalSum {
                    domain: read_domain(&domain)?,
                    params: plate.params()?,
                    solver: solver.config(),
                },
                out,
            ),
            Check::Scaling { domain, s, plate, solver, out } => (
                Task::VerifyScaling {
                    domain: read_domain(&domain)?,
                    params: plate.params()?,
                    s,
                    solver: solver.config(),
                },
                out,
            ),
            Check::MassConcentration { domain, mass, eps, plate, solver, out } => {
                let spec = read_domain(&domain)?;
                let cfg = solver.config();
                let mass = match mass {
                    Some(m) => m,
                    None => QuadratureRule::new(&spec.resolve()?, cfg.quadrature)?.perimeter(),
                };
                (Task::VerifyMassConcentration { domain: spec, params: plate.params()?, mass, eps, solver: cfg }, out)
            }
        },
        Command::Replay { file, out } => {
            let mut cfg = run::read_embedded_config(&file)?;
            if out.is_some() {
                cfg = RunConfig::new(cfg.task, out, None);
            }
            return Ok(cfg);
        }
    };
    let format = out.format();
    Ok(RunConfig::new(task, out.out, format))
}

fn real_main(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    }
    let config = build(cli.command)?;
    info!("running {}", serde_json::to_string(&config)?);
    let outcome = run::execute(&config)?;
    if config.output.as_deref() != Some("-") {
        for line in &outcome.summary {
            println!("{line}");
        }
    }
    run::write_outcome(&config, &outcome)?;
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
