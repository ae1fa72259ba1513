//! Run configuration: defaults, then an optional JSON config file, then
//! command-line flags.

use std::path::Path;

use serde::Deserialize;

use crate::infimum::{Mode, DEFAULT_PARTITION_CAP};
use crate::tolerances::Tolerances;

pub const DEFAULT_TRIALS: u32 = 100;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub mode: Mode,
    pub partition_cap: usize,
    pub seed: u64,
    pub trials: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            mode: Mode::Auto,
            partition_cap: DEFAULT_PARTITION_CAP,
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
        }
    }
}

/// Every field optional; unset fields keep the lower-precedence value.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub tol_eig: Option<f64>,
    pub tol_rank: Option<f64>,
    pub tol_zero: Option<f64>,
    pub tol_herm: Option<f64>,
    pub tol_proj: Option<f64>,
    pub tol_orth: Option<f64>,
    pub tol_residual: Option<f64>,
    pub mode: Option<String>,
    pub partition_cap: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<u32>,
}

impl ConfigOverrides {
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn apply(&self, config: &mut RunConfig) -> Result<(), String> {
        let t = &mut config.tolerances;
        for (slot, value) in [
            (&mut t.tol_eig, self.tol_eig),
            (&mut t.tol_rank, self.tol_rank),
            (&mut t.tol_zero, self.tol_zero),
            (&mut t.tol_herm, self.tol_herm),
            (&mut t.tol_proj, self.tol_proj),
            (&mut t.tol_orth, self.tol_orth),
            (&mut t.tol_residual, self.tol_residual),
        ] {
            if let Some(v) = value {
                *slot = v;
            }
        }
        if let Some(m) = &self.mode {
            config.mode = m.parse()?;
        }
        if let Some(c) = self.partition_cap {
            config.partition_cap = c;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(n) = self.trials {
            config.trials = n;
        }
        Ok(())
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        self.tolerances.validate().map_err(|e| e.to_string())?;
        if self.partition_cap < 1 {
            return Err("partition_cap must be at least 1".into());
        }
        if self.trials < 1 {
            return Err("trials must be at least 1".into());
        }
        Ok(())
    }
}
