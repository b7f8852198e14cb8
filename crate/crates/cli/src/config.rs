//! Flat JSON run configuration, keyed by the physics symbols.
//!
//! Unknown keys are rejected so that a typo in a parameter name fails loudly
//! instead of silently running with a default.

use std::path::Path;

use serde::Deserialize;

use dark_resonance::floquet::SolverConfig;
use dark_resonance::oracle::IntegrationConfig;
use dark_resonance::spectra::SweepSpec;
use dark_resonance::{DeltaConvention, SystemParams};

use crate::{CliError, ExitKind};

fn default_num_points() -> usize {
    2401
}
fn default_delta_p_min() -> f64 {
    -6.0
}
fn default_delta_p_max() -> f64 {
    6.0
}
fn default_omega_p_carrier() -> f64 {
    1000.0
}
fn default_max_order() -> usize {
    5
}
fn default_singularity_threshold() -> f64 {
    1e-12
}
fn default_chi_prefactor() -> f64 {
    1.0
}
fn default_omega_p_reference() -> f64 {
    0.01
}
fn default_dt() -> f64 {
    1e-3
}
fn default_transient_time() -> f64 {
    2000.0
}
fn default_extraction_periods() -> usize {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    // Physics parameters (units of the reference decay rate).
    #[serde(default)]
    pub omega_p: f64,
    #[serde(default)]
    pub omega_c: f64,
    #[serde(default)]
    pub omega_s1: f64,
    #[serde(default)]
    pub omega_s2: f64,
    #[serde(default)]
    pub delta_p: f64,
    #[serde(default)]
    pub delta_c: f64,
    #[serde(default)]
    pub delta_s1: f64,
    #[serde(default)]
    pub delta_s2: f64,
    #[serde(default)]
    pub gamma_21: f64,
    #[serde(default)]
    pub gamma_32: f64,
    #[serde(default)]
    pub gamma_34: f64,
    #[serde(default)]
    pub gamma_41: f64,
    #[serde(default)]
    pub r: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub flip_delta_convention: bool,

    // Sweep grid.
    #[serde(default = "default_delta_p_min")]
    pub delta_p_min: f64,
    #[serde(default = "default_delta_p_max")]
    pub delta_p_max: f64,
    #[serde(default = "default_num_points")]
    pub num_points: usize,
    #[serde(default = "default_omega_p_carrier")]
    pub omega_p_carrier: f64,

    // Hierarchy solver.
    #[serde(default = "default_max_order")]
    pub max_order: usize,
    #[serde(default = "default_singularity_threshold")]
    pub singularity_threshold: f64,
    #[serde(default = "default_chi_prefactor")]
    pub chi_prefactor: f64,
    #[serde(default = "default_omega_p_reference")]
    pub omega_p_reference: f64,

    // Oracle integration.
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_transient_time")]
    pub transient_time: f64,
    #[serde(default = "default_extraction_periods")]
    pub extraction_periods: usize,

    // Output.
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub emit_plot: bool,
}

impl RunConfig {
    /// Loads the config file and applies `--override key=value` pairs on top.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError {
            kind: ExitKind::Usage,
            message: format!("cannot read config `{}`: {e}", path.display()),
        })?;
        let mut value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError {
                kind: ExitKind::Usage,
                message: format!("config `{}` is not valid JSON: {e}", path.display()),
            })?;
        let map = value.as_object_mut().ok_or_else(|| CliError {
            kind: ExitKind::Usage,
            message: "config must be a flat JSON object".into(),
        })?;
        for pair in overrides {
            let (key, raw) = pair.split_once('=').ok_or_else(|| CliError {
                kind: ExitKind::Usage,
                message: format!("override `{pair}` is not KEY=VALUE"),
            })?;
            let parsed = if let Ok(b) = raw.parse::<bool>() {
                serde_json::Value::Bool(b)
            } else if let Ok(n) = raw.parse::<i64>() {
                serde_json::Value::from(n)
            } else if let Ok(x) = raw.parse::<f64>() {
                serde_json::Value::from(x)
            } else {
                serde_json::Value::String(raw.to_string())
            };
            map.insert(key.to_string(), parsed);
        }
        serde_json::from_value(value).map_err(|e| CliError {
            kind: ExitKind::Usage,
            message: format!("bad config: {e}"),
        })
    }

    pub fn params(&self) -> SystemParams {
        SystemParams {
            omega_p: self.omega_p,
            omega_c: self.omega_c,
            omega_s1: self.omega_s1,
            omega_s2: self.omega_s2,
            delta_p: self.delta_p,
            delta_c: self.delta_c,
            delta_s1: self.delta_s1,
            delta_s2: self.delta_s2,
            gamma_21: self.gamma_21,
            gamma_32: self.gamma_32,
            gamma_34: self.gamma_34,
            gamma_41: self.gamma_41,
            r: self.r,
            phi: self.phi,
            delta_convention: if self.flip_delta_convention {
                DeltaConvention::S1MinusS2
            } else {
                DeltaConvention::S2MinusS1
            },
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            delta_p_min: self.delta_p_min,
            delta_p_max: self.delta_p_max,
            num_points: self.num_points,
            omega_p_carrier: self.omega_p_carrier,
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            max_order: self.max_order,
            singularity_threshold: self.singularity_threshold,
            flip_resolvent_sign: false,
            chi_prefactor: self.chi_prefactor,
            omega_p_reference: self.omega_p_reference,
        }
    }

    pub fn integration_config(&self) -> IntegrationConfig {
        IntegrationConfig {
            dt: self.dt,
            transient_time: self.transient_time,
            extraction_periods: self.extraction_periods,
        }
    }
}
