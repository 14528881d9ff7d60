//! Run parameters shared by the chain, the verifier and the CLI.

use crate::bimonoid::{DEFAULT_K_MAX, DEFAULT_SOLUTION_RETRIES};
use crate::error::{Error, Result};
use crate::projective::DEFAULT_RESAMPLE_CAP;

pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_Q2_RETRIES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    /// Random points per equality test.
    pub trials: usize,
    pub k_max: u32,
    /// Fresh choices of `q2` per chain step.
    pub q2_retries: usize,
    /// Random nullspace combinations per degree.
    pub solution_retries: usize,
    /// Base-locus resamples per test.
    pub resample_cap: usize,
    /// Skip the remaining steps once `A_i` already induces the target map.
    pub early_termination: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: DEFAULT_TRIALS,
            k_max: DEFAULT_K_MAX,
            q2_retries: DEFAULT_Q2_RETRIES,
            solution_retries: DEFAULT_SOLUTION_RETRIES,
            resample_cap: DEFAULT_RESAMPLE_CAP,
            early_termination: true,
        }
    }
}

impl RunConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let caps = [
            ("trials", self.trials),
            ("q2 retries", self.q2_retries),
            ("solution retries", self.solution_retries),
            ("resample cap", self.resample_cap),
        ];
        for (name, v) in caps {
            if v == 0 {
                return Err(Error::InvalidInput(format!("{name} must be positive")));
            }
        }
        if self.k_max < 2 {
            return Err(Error::InvalidInput("k_max must be at least 2".into()));
        }
        Ok(())
    }
}
