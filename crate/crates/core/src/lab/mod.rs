//! Seeded verification suites that turn each statement about the geometry
//! into a randomized executable check, the Thompson conjugator search, and
//! generators of competitor paths.

mod competitors;
mod random;
mod report;
mod suites;
mod thompson;

use std::collections::BTreeMap;

pub use competitors::{perturbed_geodesic, random_polygonal, smooth_competitor};
pub use random::{ginibre, haar_unitary, random_hermitian, random_positive, trial_rng};
pub use report::{format_real, Report, Row, CSV_HEADER};
pub use suites::{run_suite, suite_names};
pub use thompson::{thompson_decompose, thompson_decompose_with, RestartDiagnostic, ThompsonOptions, ThompsonResult};

use crate::error::{Error, Result};
use crate::norms::NormSpec;

/// Inputs of a suite run. Identical configurations produce identical
/// reports, byte for byte.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Matrix dimension, in `2..=64`.
    pub dim: usize,
    pub trials: usize,
    /// Norms to check; empty means [`NormSpec::standard`].
    pub norms: Vec<NormSpec>,
    /// Replacement tolerances keyed by check name.
    pub tolerance_overrides: BTreeMap<String, f64>,
}

impl ExperimentConfig {
    pub fn new(seed: u64, dim: usize, trials: usize) -> Result<Self> {
        let cfg = ExperimentConfig { seed, dim, trials, norms: Vec::new(), tolerance_overrides: BTreeMap::new() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_norms(mut self, norms: Vec<NormSpec>) -> Self {
        self.norms = norms;
        self
    }

    pub fn with_tolerance(mut self, check: &str, tol: f64) -> Self {
        self.tolerance_overrides.insert(check.to_string(), tol);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=64).contains(&self.dim) {
            return Err(Error::Config(format!("dim must be in 2..=64, got {}", self.dim)));
        }
        if let Some((k, v)) = self.tolerance_overrides.iter().find(|(_, v)| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::Config(format!("tolerance `{k}` must be a nonnegative real, got {v}")));
        }
        Ok(())
    }

    pub fn norms(&self) -> Vec<NormSpec> {
        if self.norms.is_empty() {
            NormSpec::standard()
        } else {
            self.norms.clone()
        }
    }

    pub fn tolerance(&self, check: &str, default: f64) -> f64 {
        self.tolerance_overrides.get(check).copied().unwrap_or(default)
    }
}
