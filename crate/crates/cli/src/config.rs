use crate::error::{CliError, Result};
use cflab_core::cayley::DEFAULT_MAX_VERTICES;
use cflab_core::gromov::DEFAULT_SAFETY;
use cflab_core::{AdmissibleFunction, Group, GroupSpec, SolverConfig};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// One experiment, read from a single JSON document.
///
/// Optional keys are filled in by [`ExperimentConfig::resolve`], so the
/// echo written to the manifest carries every value actually used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub group: GroupSpec,
    pub radius: u32,
    #[serde(default = "default_floyd")]
    pub floyd: AdmissibleFunction,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub sampling: SamplingSettings,
    /// Radius of the ball in which sphere Floyd distances are computed.
    /// Defaults to `radius`.
    #[serde(default)]
    pub floyd_ball_radius: Option<u32>,
    /// Radius of the exhaustive δ̂ scan. Defaults to `radius`.
    #[serde(default)]
    pub delta_radius: Option<u32>,
    /// Generator index for witness fields and branch indicators.
    #[serde(default)]
    pub generator: usize,
    #[serde(default)]
    pub field: FieldSpec,
    /// Scale parameter; chosen from δ̂ when absent.
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default = "default_safety")]
    pub safety: f64,
    #[serde(default = "default_max_vertices")]
    pub max_vertices: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    pub tolerance: f64,
    pub subproblem_tolerance: f64,
    pub step_tolerance: f64,
    pub max_sweeps: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let c = SolverConfig::default();
        SolverSettings {
            tolerance: c.tolerance,
            subproblem_tolerance: c.subproblem_tolerance,
            step_tolerance: c.step_tolerance,
            max_sweeps: c.max_sweeps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSettings {
    /// Pair budget for sphere scans before switching to sampling.
    pub pair_cap: usize,
    pub seed: u64,
    /// Sampled triples for δ̂; exhaustive when absent.
    #[serde(default)]
    pub delta_samples: Option<u64>,
}

impl Default for SamplingSettings {
    fn default() -> Self {
        SamplingSettings {
            pair_cap: 1_000_000,
            seed: 0,
            delta_samples: None,
        }
    }
}

/// Field fed to `solve-dirichlet` (through its trace) and `decompose`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    /// 1 on elements whose reduced form starts with the generator, else 0.
    Branch {
        generator: usize,
    },
    WordLength,
    /// Floyd distance to `s^R` for the configured generator and function.
    Witness,
    /// Uniform values in `[0, 1)` from the sampling seed.
    Random,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Branch { generator: 0 }
    }
}

fn default_floyd() -> AdmissibleFunction {
    AdmissibleFunction::Exponential {
        a: std::f64::consts::LN_2,
    }
}

fn default_p() -> f64 {
    2.0
}

fn default_safety() -> f64 {
    DEFAULT_SAFETY
}

fn default_max_vertices() -> usize {
    DEFAULT_MAX_VERTICES
}

fn default_out() -> PathBuf {
    PathBuf::from("cflab-out")
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub radius: Option<u32>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_json(&text)?;
        config.apply(overrides);
        config.resolve()?;
        Ok(config)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(r) = o.radius {
            self.radius = r;
        }
        if let Some(p) = o.p {
            self.p = p;
        }
        if let Some(s) = o.seed {
            self.sampling.seed = s;
        }
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
    }

    /// Fills derived defaults and validates everything that does not depend
    /// on the subcommand.
    pub fn resolve(&mut self) -> Result<()> {
        let group = self.build_group()?;
        self.floyd.validate()?;
        if !self.p.is_finite() || self.p <= 0.0 {
            return Err(CliError::Config(format!(
                "p must be positive and finite, got {}",
                self.p
            )));
        }
        if self.generator >= group.generator_count() {
            return Err(cflab_core::Error::InvalidGenerator {
                index: self.generator,
                available: group.generator_count(),
            }
            .into());
        }
        if let FieldSpec::Branch { generator } = self.field {
            if generator >= group.generator_count() {
                return Err(cflab_core::Error::InvalidGenerator {
                    index: generator,
                    available: group.generator_count(),
                }
                .into());
            }
        }
        let floyd_ball = *self.floyd_ball_radius.get_or_insert(self.radius);
        if floyd_ball < self.radius {
            return Err(CliError::Config(format!(
                "floyd_ball_radius {floyd_ball} is smaller than radius {}",
                self.radius
            )));
        }
        let delta_radius = *self.delta_radius.get_or_insert(self.radius);
        if delta_radius == 0 {
            return Err(CliError::Config("delta_radius must be positive".into()));
        }
        if !(self.safety > 0.0 && self.safety < 1.0) {
            return Err(CliError::Config(format!(
                "safety must lie in (0, 1), got {}",
                self.safety
            )));
        }
        if let Some(a) = self.a {
            if !(a > 0.0 && a.is_finite()) {
                return Err(CliError::Config(format!(
                    "a must be positive and finite, got {a}"
                )));
            }
        }
        if self.sampling.pair_cap == 0 {
            return Err(CliError::Config(
                "sampling.pair_cap must be positive".into(),
            ));
        }
        self.solver.validate()?;
        Ok(())
    }

    pub fn build_group(&self) -> Result<Group> {
        Ok(Group::from_spec(&self.group)?)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            p: self.p,
            tolerance: self.solver.tolerance,
            subproblem_tolerance: self.solver.subproblem_tolerance,
            step_tolerance: self.solver.step_tolerance,
            max_sweeps: self.solver.max_sweeps,
        }
    }

    pub fn floyd_ball_radius(&self) -> u32 {
        self.floyd_ball_radius.unwrap_or(self.radius)
    }

    pub fn delta_radius(&self) -> u32 {
        self.delta_radius.unwrap_or(self.radius)
    }
}

impl SolverSettings {
    fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !(positive(self.tolerance)
            && positive(self.subproblem_tolerance)
            && positive(self.step_tolerance))
        {
            return Err(CliError::Config(
                "solver tolerances must be positive".into(),
            ));
        }
        if self.max_sweeps == 0 {
            return Err(CliError::Config(
                "solver.max_sweeps must be positive".into(),
            ));
        }
        Ok(())
    }
}
