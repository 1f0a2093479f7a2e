//! JSON run configuration.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::kernel::{
    build_anyonic_kernel, build_window_kernel, validate_kernel, QKernel, SiteGrid,
};
use crate::levy::JumpMeasure;
use crate::tensor::FockTensor;

/// Largest grid the command line accepts.
pub const MAX_SITES: usize = 6;
pub const MAX_CUTOFF: usize = 6;
pub const MAX_ATOMS: usize = 4;
/// Largest word length / moment degree.
pub const MAX_ORDER: usize = 6;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("outside the supported envelope: {0}")]
    Envelope(String),
}

impl From<crate::Error> for ConfigError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::EnvelopeExceeded(_) => ConfigError::Envelope(e.to_string()),
            other => ConfigError::Invalid(other.to_string()),
        }
    }
}

/// Complex number as `{re, im}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cplx {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Cplx> for Complex64 {
    fn from(c: Cplx) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Cplx { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformGrid {
    pub m: usize,
    #[serde(default = "one")]
    pub spacing: f64,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Uniform { uniform: UniformGrid },
    Explicit { sites: Vec<f64>, weights: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelSpec {
    Boson,
    Fermion,
    Anyonic(Cplx),
    Window { r: f64 },
    Explicit { matrix: Vec<Vec<Cplx>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSpec {
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub kernel: KernelSpec,
    #[serde(default)]
    pub lambda: f64,
    pub cutoff: usize,
    #[serde(default)]
    pub jumps: Option<JumpSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Per-check tolerance overrides, keyed by check name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Site-indexed real test functions.
    #[serde(default)]
    pub functions: Vec<Vec<f64>>,
    /// Word as indices into `functions`.
    #[serde(default)]
    pub word: Option<Vec<usize>>,
    /// Largest moment/cumulant degree.
    #[serde(default)]
    pub max_order: Option<usize>,
    /// Root order for the exclusion check.
    #[serde(default)]
    pub exclusion_order: Option<usize>,
}

/// A parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct Setup {
    pub config: RunConfig,
    pub kernel: QKernel,
    pub jumps: Option<JumpMeasure>,
    pub functions: Vec<FockTensor>,
    pub max_order: usize,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .or_else(|| self.tolerances.get("default"))
            .copied()
            .unwrap_or(DEFAULT_TOLERANCE)
    }

    fn grid(&self) -> Result<SiteGrid, ConfigError> {
        let m = match &self.grid {
            GridSpec::Uniform { uniform } => uniform.m,
            GridSpec::Explicit { sites, .. } => sites.len(),
        };
        if m > MAX_SITES {
            return Err(ConfigError::Envelope(format!(
                "{m} sites (at most {MAX_SITES})"
            )));
        }
        Ok(match &self.grid {
            GridSpec::Uniform { uniform } => {
                SiteGrid::uniform(uniform.m, uniform.spacing, uniform.weight)?
            }
            GridSpec::Explicit { sites, weights } => SiteGrid::new(sites.clone(), weights.clone())?,
        })
    }

    /// Checks envelope limits and builds the kernel, jump measure and functions.
    pub fn setup(self) -> Result<Setup, ConfigError> {
        let grid = self.grid()?;
        let m = grid.len();
        if self.cutoff > MAX_CUTOFF {
            return Err(ConfigError::Envelope(format!(
                "cutoff {} (at most {MAX_CUTOFF})",
                self.cutoff
            )));
        }
        if self.cutoff < 2 {
            return Err(ConfigError::Invalid(format!(
                "cutoff {} (at least 2)",
                self.cutoff
            )));
        }
        if !self.lambda.is_finite() {
            return Err(ConfigError::Invalid("lambda is not finite".into()));
        }
        let max_order = self.max_order.unwrap_or(self.cutoff.min(4));
        if max_order > MAX_ORDER {
            return Err(ConfigError::Envelope(format!(
                "order {max_order} (at most {MAX_ORDER})"
            )));
        }
        if max_order == 0 {
            return Err(ConfigError::Invalid("max_order must be positive".into()));
        }
        if let Some(w) = &self.word {
            if w.len() > MAX_ORDER {
                return Err(ConfigError::Envelope(format!(
                    "word of length {} (at most {MAX_ORDER})",
                    w.len()
                )));
            }
            if w.len() > self.cutoff {
                return Err(ConfigError::Invalid(format!(
                    "word of length {} exceeds the cutoff",
                    w.len()
                )));
            }
            if let Some(&bad) = w.iter().find(|&&i| i >= self.functions.len()) {
                return Err(ConfigError::Invalid(format!(
                    "word refers to missing function {bad}"
                )));
            }
        }
        let kernel = match &self.kernel {
            KernelSpec::Boson => build_anyonic_kernel(grid, Complex64::new(1.0, 0.0))?,
            KernelSpec::Fermion => build_anyonic_kernel(grid, Complex64::new(-1.0, 0.0))?,
            KernelSpec::Anyonic(q) => build_anyonic_kernel(grid, (*q).into())?,
            KernelSpec::Window { r } => build_window_kernel(grid, *r)?,
            KernelSpec::Explicit { matrix } => {
                let rows = matrix
                    .iter()
                    .map(|r| r.iter().map(|&c| c.into()).collect())
                    .collect();
                QKernel::explicit(grid, rows)?
            }
        };
        let report = validate_kernel(&kernel);
        if !report.is_valid() {
            return Err(ConfigError::Invalid(format!(
                "kernel defect {:e}",
                report.max_defect()
            )));
        }
        let jumps = match &self.jumps {
            None => None,
            Some(spec) => {
                if spec.atoms.len() > MAX_ATOMS {
                    return Err(ConfigError::Envelope(format!(
                        "{} atoms (at most {MAX_ATOMS})",
                        spec.atoms.len()
                    )));
                }
                Some(JumpMeasure::new(
                    spec.atoms.iter().map(|a| (a.x, a.w)).collect(),
                )?)
            }
        };
        let mut functions = Vec::with_capacity(self.functions.len());
        for (i, f) in self.functions.iter().enumerate() {
            if f.len() != m {
                return Err(ConfigError::Invalid(format!(
                    "function {i} has {} values for {m} sites",
                    f.len()
                )));
            }
            if f.iter().any(|v| !v.is_finite()) {
                return Err(ConfigError::Invalid(format!(
                    "function {i} has a non-finite value"
                )));
            }
            functions.push(FockTensor::real_vector(f));
        }
        for (name, tol) in &self.tolerances {
            if !(*tol >= 0.0) {
                return Err(ConfigError::Invalid(format!("tolerance {name} = {tol}")));
            }
        }
        Ok(Setup {
            config: self,
            kernel,
            jumps,
            functions,
            max_order,
        })
    }
}
