//! Analytic scalar queries.

use interbank::equilibrium::{
    control_gain, effective_rate, effective_rate_limit, value_function,
};
use interbank::model::{EquilibriumMode, ModelParams};
use interbank::riccati::{eta_closed_form, eta_limit, mu};
use interbank::risk::{
    large_deviation_rate, single_default_prob, systemic_prob, systemic_prob_limit,
};

use crate::CliError;

/// Evaluates one named quantity. Time-dependent names use `t`; the value
/// query additionally uses `mean_dev`; mode-dependent names use `mode`.
pub fn evaluate(
    name: &str,
    t: f64,
    mean_dev: f64,
    params: &ModelParams,
    mode: EquilibriumMode,
) -> Result<f64, CliError> {
    let value = match name {
        "p" => single_default_prob(params),
        "systemic-prob" => systemic_prob(params),
        "systemic-limit" => systemic_prob_limit(params),
        "ld-rate" => large_deviation_rate(params)?,
        "eta" => eta_closed_form(t, params, mode)?,
        "eta-bar" => eta_limit(params, mode)?,
        "mu" => mu(t, params, mode)?,
        "gain" => control_gain(t, params, mode)?,
        "A" => effective_rate(t, params, mode)?,
        "A-bar" => effective_rate_limit(params, mode)?,
        "value" => value_function(t, mean_dev, params, mode)?,
        other => {
            return Err(CliError::Validation(format!(
                "unknown query '{other}' (expected p, systemic-prob, systemic-limit, \
                 ld-rate, eta, eta-bar, mu, gain, A, A-bar, or value)"
            )))
        }
    };
    Ok(value)
}
