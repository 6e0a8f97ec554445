use serde::{Deserialize, Serialize};
use steklov_core::verification::{ShapeFamily, SweepConfig};
use steklov_core::{DomainSpec, PlateParams, SolverConfig};

/// Right-hand side of a single domain solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityChoice {
    /// Constant density on the boundary.
    Boundary { rho: f64 },
    /// Interior density of total mass `mass`, concentrated in a shell of width `eps`.
    Shell { eps: f64, mass: f64 },
}

/// Everything a run computes from, with files already read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Task {
    BallSpectrum {
        params: PlateParams,
        count: usize,
    },
    Solve {
        domain: DomainSpec,
        params: PlateParams,
        solver: SolverConfig,
        density: DensityChoice,
    },
    VerifyIsoperimetric {
        family: ShapeFamily,
        params: PlateParams,
        sweep: SweepConfig,
    },
    VerifyReciprocalSum {
        domain: DomainSpec,
        params: PlateParams,
        solver: SolverConfig,
    },
    VerifyScaling {
        domain: DomainSpec,
        params: PlateParams,
        s: Vec<f64>,
        solver: SolverConfig,
    },
    VerifyMassConcentration {
        domain: DomainSpec,
        params: PlateParams,
        mass: f64,
        eps: Vec<f64>,
        solver: SolverConfig,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// A reproducible run: embedded in every file the run writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub version: String,
    #[serde(flatten)]
    pub task: Task,
    pub output: Option<String>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(task: Task, output: Option<String>, format: Option<Format>) -> Self {
        let format = format.unwrap_or_else(|| match &output {
            Some(path) if path.to_ascii_lowercase().ends_with(".csv") => Format::Csv,
            _ => Format::Json,
        });
        Self { version: env!("CARGO_PKG_VERSION").to_string(), task, output, format }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_follows_the_extension() {
        let task = Task::BallSpectrum { params: PlateParams::planar(1.0, 0.0).unwrap(), count: 3 };
        assert_eq!(RunConfig::new(task.clone(), Some("a.CSV".into()), None).format, Format::Csv);
        assert_eq!(RunConfig::new(task.clone(), Some("a.json".into()), None).format, Format::Json);
        assert_eq!(RunConfig::new(task.clone(), None, None).format, Format::Json);
        assert_eq!(RunConfig::new(task, Some("a.csv".into()), Some(Format::Json)).format, Format::Json);
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig::new(
            Task::Solve {
                domain: DomainSpec::ellipse(1.5, 0.7),
                params: PlateParams::planar(0.3, -0.1).unwrap(),
                solver: SolverConfig::with_degree(9),
                density: DensityChoice::Shell { eps: 0.05, mass: 6.1 },
            },
            Some("out.json".into()),
            None,
        );
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"subcommand\":\"solve\""));
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
    }
}
