//! Tolerance and iteration budget shared by every numerical routine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances, iteration budget and RNG seed.
///
/// The invariant `tol_cert >= tol_feas >= tol_psd > 0` keeps the certificate
/// gate strictly looser than the solver gates, so a value that passes the
/// solver always re-validates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Self-adjointness gate for inputs, relative to the max entry.
    pub tol_sym: f64,
    /// Eigenvalue floor below which a block is declared not PSD.
    pub tol_psd: f64,
    /// Residual gate on affine constraints for feasible points.
    pub tol_feas: f64,
    /// Margin gate for validated certificates (both directions).
    pub tol_cert: f64,
    /// Iteration cap for the alternating-projection and search loops.
    pub max_iter: usize,
    /// Seed for every sampler; identical seeds give identical runs.
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            tol_sym: 1e-10,
            tol_psd: 1e-9,
            tol_feas: 1e-7,
            tol_cert: 1e-6,
            max_iter: 20_000,
            seed: 0,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_psd > 0.0) {
            return Err(Error::Invalid("tol_psd must be positive".into()));
        }
        if self.tol_feas < self.tol_psd || self.tol_cert < self.tol_feas {
            return Err(Error::Invalid(
                "tolerances must satisfy tol_cert >= tol_feas >= tol_psd > 0".into(),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::Invalid("max_iter must be positive".into()));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Default truncation level: "for all levels" claims are checked for n <= N.
pub const DEFAULT_TRUNCATION: usize = 4;
