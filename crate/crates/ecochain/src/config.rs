//! Run configurations: a flat JSON object naming the variant, the twelve
//! rates by their symbols, and optional initial state, integrator, and sweep
//! settings.
//!
//! Parsing is strict: unknown keys, duplicate keys, and non-numeric values
//! are rejected with the offending key and source position in the message.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelVariant, ParameterSet, State};
use crate::simulate::IntegratorConfig;

#[derive(Debug, Clone, Error, PartialEq)]
#[error("config error: {0}")]
pub struct ConfigError(pub String);

/// One run, as read from `--config` or stdin.
///
/// `K` may be omitted for Malthus variants (which ignore it); everything
/// past the rates is optional and falls back to defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// One of `malthus`, `logistic`, `malthus-disease-free`,
    /// `logistic-disease-free`.
    pub variant: String,
    pub g: f64,
    pub f: f64,
    pub c: f64,
    pub l: f64,
    pub q: f64,
    pub b: f64,
    pub beta: f64,
    pub tau: f64,
    pub nu: f64,
    pub mu: f64,
    pub r: f64,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    /// Initial state `[P, S, I, V]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hmax: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tmax: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_param: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_n: Option<usize>,
}

impl RunConfig {
    pub fn variant(&self) -> Result<ModelVariant, ConfigError> {
        ModelVariant::parse(&self.variant).ok_or_else(|| {
            ConfigError(format!(
                "unknown variant {:?}; expected one of malthus, logistic, \
                 malthus-disease-free, logistic-disease-free",
                self.variant
            ))
        })
    }

    /// Assemble the parameter set. Logistic variants require `K`; Malthus
    /// variants default it to infinity.
    pub fn params(&self) -> Result<ParameterSet, ConfigError> {
        let variant = self.variant()?;
        let k = match self.k {
            Some(k) => k,
            None if variant.is_logistic() => {
                return Err(ConfigError(
                    "missing required key \"K\" for logistic variant".into(),
                ));
            }
            None => f64::INFINITY,
        };
        Ok(ParameterSet::new(
            self.g, self.f, self.c, self.l, self.q, self.b, self.beta, self.tau, self.nu, self.mu,
            self.r, k,
        ))
    }

    pub fn initial_state(&self) -> Option<State> {
        self.x0.map(State::from_array)
    }

    /// Integrator settings with defaults filled in.
    pub fn integrator_config(&self) -> IntegratorConfig {
        let d = IntegratorConfig::default();
        IntegratorConfig {
            rtol: self.rtol.unwrap_or(d.rtol),
            atol: self.atol.unwrap_or(d.atol),
            h0: self.h0.unwrap_or(d.h0),
            hmax: self.hmax.unwrap_or(d.hmax),
            tmax: self.tmax.unwrap_or(d.tmax),
        }
    }
}

/// Parse a strict flat-JSON run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    match serde_path_to_error::deserialize::<_, RunConfig>(de) {
        Ok(config) => Ok(config),
        Err(err) => {
            let path = err.path().to_string();
            let inner = err.into_inner();
            if path.is_empty() || path == "." {
                Err(ConfigError(inner.to_string()))
            } else {
                Err(ConfigError(format!("key {path:?}: {inner}")))
            }
        }
    }
}

/// Serialize a config back to JSON (pretty, stable field order).
pub fn emit_config(config: &RunConfig) -> String {
    serde_json::to_string_pretty(config).expect("RunConfig always serializes")
}
