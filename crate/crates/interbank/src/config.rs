//! Key/value configuration files for model parameters.
//!
//! Format: one `key = value` pair per line; blank lines are skipped and `#`
//! starts a comment (full-line or trailing). Exactly the nine model
//! parameter keys are recognized — `n_banks`, `a`, `q`, `epsilon`, `c`,
//! `sigma`, `rho`, `horizon`, `default_level` — each at most once. A file
//! may set any subset; [`ParamPatch::apply`] layers it over a base
//! parameter set, so experiment presets, config files, and command-line
//! flags can stack in a fixed precedence order.

use crate::model::ModelParams;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line_no}: expected 'key = value', got '{line}'")]
    BadSyntax { line_no: usize, line: String },
    #[error("line {line_no}: unknown key '{key}'")]
    UnknownKey { line_no: usize, key: String },
    #[error("line {line_no}: key '{key}' was already set")]
    DuplicateKey { line_no: usize, key: String },
    #[error("line {line_no}: cannot parse '{value}' as a value for '{key}'")]
    BadValue {
        line_no: usize,
        key: String,
        value: String,
    },
}

/// A partial parameter assignment: `None` fields keep the base value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParamPatch {
    pub n_banks: Option<usize>,
    pub a: Option<f64>,
    pub q: Option<f64>,
    pub epsilon: Option<f64>,
    pub c: Option<f64>,
    pub sigma: Option<f64>,
    pub rho: Option<f64>,
    pub horizon: Option<f64>,
    pub default_level: Option<f64>,
}

impl ParamPatch {
    /// Overrides the set fields on `base` (no validation here; callers
    /// validate the final assembly once).
    pub fn apply(&self, base: ModelParams) -> ModelParams {
        ModelParams {
            n_banks: self.n_banks.unwrap_or(base.n_banks),
            a: self.a.unwrap_or(base.a),
            q: self.q.unwrap_or(base.q),
            epsilon: self.epsilon.unwrap_or(base.epsilon),
            c: self.c.unwrap_or(base.c),
            sigma: self.sigma.unwrap_or(base.sigma),
            rho: self.rho.unwrap_or(base.rho),
            horizon: self.horizon.unwrap_or(base.horizon),
            default_level: self.default_level.unwrap_or(base.default_level),
        }
    }
}

/// Parses a configuration document into a [`ParamPatch`].
pub fn parse_config(text: &str) -> Result<ParamPatch, ConfigError> {
    let mut patch = ParamPatch::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => {
                return Err(ConfigError::BadSyntax {
                    line_no,
                    line: raw.trim().to_string(),
                })
            }
        };
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::BadSyntax {
                line_no,
                line: raw.trim().to_string(),
            });
        }

        fn set_f64(
            slot: &mut Option<f64>,
            key: &str,
            value: &str,
            line_no: usize,
        ) -> Result<(), ConfigError> {
            if slot.is_some() {
                return Err(ConfigError::DuplicateKey {
                    line_no,
                    key: key.to_string(),
                });
            }
            match value.parse::<f64>() {
                Ok(v) => {
                    *slot = Some(v);
                    Ok(())
                }
                Err(_) => Err(ConfigError::BadValue {
                    line_no,
                    key: key.to_string(),
                    value: value.to_string(),
                }),
            }
        }

        match key {
            "n_banks" => {
                if patch.n_banks.is_some() {
                    return Err(ConfigError::DuplicateKey {
                        line_no,
                        key: key.to_string(),
                    });
                }
                patch.n_banks = Some(value.parse::<usize>().map_err(|_| {
                    ConfigError::BadValue {
                        line_no,
                        key: key.to_string(),
                        value: value.to_string(),
                    }
                })?);
            }
            "a" => set_f64(&mut patch.a, key, value, line_no)?,
            "q" => set_f64(&mut patch.q, key, value, line_no)?,
            "epsilon" => set_f64(&mut patch.epsilon, key, value, line_no)?,
            "c" => set_f64(&mut patch.c, key, value, line_no)?,
            "sigma" => set_f64(&mut patch.sigma, key, value, line_no)?,
            "rho" => set_f64(&mut patch.rho, key, value, line_no)?,
            "horizon" => set_f64(&mut patch.horizon, key, value, line_no)?,
            "default_level" => set_f64(&mut patch.default_level, key, value, line_no)?,
            other => {
                return Err(ConfigError::UnknownKey {
                    line_no,
                    key: other.to_string(),
                })
            }
        }
    }
    Ok(patch)
}

// ───────────────────────────── tests ─────────────────────────────
