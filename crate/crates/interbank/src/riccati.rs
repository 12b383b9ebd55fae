//! Closed-form and numerical solutions of the scalar Riccati equation.
//!
//! Every equilibrium notion of the model is parameterized by one backward
//! Riccati ODE
//!
//! ```text
//! η̇_t = 2(a+q) η_t + B η_t² − (ε − q²),        η_T = c,
//! ```
//!
//! where the squared-term coefficient `B` is the only mode-dependent piece:
//! `1 − 1/N²` (closed-loop), `1 − 1/N` (open-loop, conventionally written
//! φ_t), `1` (mean-field limit). With
//!
//! ```text
//! R = (a+q)² + B(ε − q²) > 0,     δ± = −(a+q) ± √R,
//! ```
//!
//! the solution admits the closed form (written here in the overflow-safe
//! scaled variant, `w = e^{−2√R (T−t)} ∈ (0, 1]`):
//!
//! ```text
//!        −(ε−q²)(1 − w) − c(δ⁺ − δ⁻ w)
//! η_t = ─────────────────────────────────
//!        (δ⁻ − δ⁺ w) − c B (1 − w)
//! ```
//!
//! whose denominator stays strictly negative for t ≤ T, so η is finite; it is
//! nonnegative whenever `q² ≤ ε` and `c ≥ 0`. For `c = 0` the long-horizon
//! limit is `η̄ = (ε−q²)/(−δ⁻)`, the attracting fixed point of the ODE
//! (equivalently `B η̄ = δ⁺`, so `a+q+Bη̄ = √R`).
//!
//! [`integrate_riccati`] provides an independent fixed-step RK4 integration
//! of the same ODE, used as a cross-check oracle for the closed form, and
//! [`mu`] evaluates the state-independent value-function offset
//! `μ_t = ½ σ²(1−ρ²) F ∫_t^T η_s ds` (`F = 1−1/N` closed-loop, `F = 1` MFG)
//! by composite Simpson quadrature.

use crate::model::{EquilibriumMode, ModelParams};
use thiserror::Error;

/// Failures of the Riccati closed form and its derived quantities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiccatiError {
    /// `R = 0` (both `a+q = 0` and `ε = q²`): the closed form's denominator
    /// structure collapses. Callers should fall back to [`integrate_riccati`].
    #[error("degenerate Riccati: R = 0 because a+q = {a_plus_q} and epsilon - q^2 = {cost_gap}; use the ODE integrator instead")]
    DegenerateRiccati { a_plus_q: f64, cost_gap: f64 },
    /// The long-horizon limit `η̄` is only defined here for `c = 0`.
    #[error("unsupported terminal cost c = {c}: the long-horizon limit is only available for c = 0")]
    UnsupportedTerminalCost { c: f64 },
    /// The requested quantity has no open-loop variant.
    #[error("unsupported mode {mode}: this quantity is defined for closed-loop and mean-field modes only")]
    UnsupportedMode { mode: EquilibriumMode },
    /// `integrate_riccati` requires at least 10 steps across the horizon.
    #[error("integration step {step} too large for horizon {horizon}: need step <= horizon/10")]
    StepTooLarge { step: f64, horizon: f64 },
}

/// The mode-dependent constants of the Riccati closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiCoefficients {
    /// Coefficient of the squared term, in (0, 1].
    pub b: f64,
    /// Discriminant `(a+q)² + B(ε−q²)`, strictly positive.
    pub r: f64,
    /// `δ⁺ = −(a+q) + √R` (≥ 0 under validation).
    pub delta_plus: f64,
    /// `δ⁻ = −(a+q) − √R` (always < 0).
    pub delta_minus: f64,
}

impl RiccatiCoefficients {
    /// `√R = (δ⁺ − δ⁻)/2`.
    pub fn sqrt_r(&self) -> f64 {
        self.r.sqrt()
    }
}

/// Coefficient `B` of the squared Riccati term for the given mode:
/// `1 − 1/N²` (closed-loop), `1 − 1/N` (open-loop), `1` (mean-field).
pub fn square_coefficient(mode: EquilibriumMode, n_banks: usize) -> f64 {
    let n = n_banks as f64;
    match mode {
        EquilibriumMode::ClosedLoop => 1.0 - 1.0 / (n * n),
        EquilibriumMode::OpenLoop => 1.0 - 1.0 / n,
        EquilibriumMode::MeanFieldGame => 1.0,
    }
}

/// Computes `(B, R, δ⁺, δ⁻)` for validated parameters.
///
/// Fails with [`RiccatiError::DegenerateRiccati`] when `R = 0`, which under
/// validation happens exactly when `a+q = 0` and `ε = q²`.
pub fn roots(params: &ModelParams, mode: EquilibriumMode) -> Result<RiccatiCoefficients, RiccatiError> {
    let b = square_coefficient(mode, params.n_banks);
    let a_plus_q = params.a + params.q;
    let cost_gap = params.cost_gap();
    let r = a_plus_q * a_plus_q + b * cost_gap;
    if r <= 0.0 {
        return Err(RiccatiError::DegenerateRiccati { a_plus_q, cost_gap });
    }
    let sqrt_r = r.sqrt();
    Ok(RiccatiCoefficients {
        b,
        r,
        delta_plus: -a_plus_q + sqrt_r,
        delta_minus: -a_plus_q - sqrt_r,
    })
}

/// Evaluates the scaled closed form at time-to-maturity `ttm = T − t ≥ 0`.
#[inline]
fn eta_at(co: &RiccatiCoefficients, cost_gap: f64, c: f64, ttm: f64) -> f64 {
    if ttm <= 0.0 {
        // Terminal condition, exact by definition (the generic expression
        // would evaluate c·(δ⁺−δ⁻)/(δ⁺−δ⁻) and pick up one rounding).
        return c;
    }
    let w = (-2.0 * co.sqrt_r() * ttm).exp(); // in (0, 1]
    let num = -cost_gap * (1.0 - w) - c * (co.delta_plus - co.delta_minus * w);
    let den = (co.delta_minus - co.delta_plus * w) - c * co.b * (1.0 - w);
    debug_assert!(den < 0.0, "Riccati denominator must stay negative (den = {den})");
    num / den
}

/// The Riccati coefficient η_t (φ_t in open-loop mode) by the closed form.
///
/// `t` must lie in `[0, T]`; the terminal value is hit exactly:
/// `eta_closed_form(T, …) == c` bit-for-bit.
pub fn eta_closed_form(t: f64, params: &ModelParams, mode: EquilibriumMode) -> Result<f64, RiccatiError> {
    let co = roots(params, mode)?;
    Ok(eta_at(&co, params.cost_gap(), params.c, params.horizon - t))
}

/// Same evaluation with precomputed coefficients, for callers sampling the
/// closed form on dense grids.
pub(crate) fn eta_closed_form_with(co: &RiccatiCoefficients, params: &ModelParams, t: f64) -> f64 {
    eta_at(co, params.cost_gap(), params.c, params.horizon - t)
}

/// Long-horizon limit `η̄ = (ε−q²)/(−δ⁻)`, the attracting fixed point of the
/// Riccati ODE; defined here only for `c = 0`.
pub fn eta_limit(params: &ModelParams, mode: EquilibriumMode) -> Result<f64, RiccatiError> {
    if params.c != 0.0 {
        return Err(RiccatiError::UnsupportedTerminalCost { c: params.c });
    }
    let co = roots(params, mode)?;
    Ok(params.cost_gap() / (-co.delta_minus))
}

/// The Riccati coefficient on a uniform time grid.
///
/// Produced either from the closed form ([`closed_form_solution`]) or by
/// independent RK4 integration ([`integrate_riccati`]); the two agree to
/// better than 1e−8 in sup norm at step 1e−4·T, which the test suite pins.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiSolution {
    pub mode: EquilibriumMode,
    pub coeffs: RiccatiCoefficients,
    /// Terminal condition c.
    pub terminal_value: f64,
    /// Uniform grid over [0, T], inclusive of both endpoints, increasing.
    pub grid: Vec<f64>,
    /// η (or φ) at each grid point.
    pub values: Vec<f64>,
}

/// Uniform inclusive grid with `n` intervals over `[0, T]`; endpoint exact.
fn uniform_grid(horizon: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| horizon * (k as f64 / n as f64)).collect()
}

/// Samples the closed form on a uniform grid with `n_intervals ≥ 1` steps.
pub fn closed_form_solution(
    params: &ModelParams,
    mode: EquilibriumMode,
    n_intervals: usize,
) -> Result<RiccatiSolution, RiccatiError> {
    assert!(n_intervals >= 1, "need at least one grid interval");
    let co = roots(params, mode)?;
    let grid = uniform_grid(params.horizon, n_intervals);
    let cost_gap = params.cost_gap();
    let values = grid
        .iter()
        .map(|&t| eta_at(&co, cost_gap, params.c, params.horizon - t))
        .collect();
    Ok(RiccatiSolution {
        mode,
        coeffs: co,
        terminal_value: params.c,
        grid,
        values,
    })
}

/// Independent oracle: classical fixed-step RK4 integration of the Riccati
/// ODE backward from `η_T = c` on a uniform grid of step ≈ `step`
/// (the horizon is divided into `round(T/step)` equal intervals).
///
/// The solution is globally bounded under `q² ≤ ε`, `c ≥ 0` (η stays between
/// 0 and `max(c, η̄⁺)`), so fixed-step integration is stable; the fixed step
/// keeps the oracle bit-reproducible.
pub fn integrate_riccati(
    params: &ModelParams,
    mode: EquilibriumMode,
    step: f64,
) -> Result<RiccatiSolution, RiccatiError> {
    let t_end = params.horizon;
    if !(step > 0.0) || step > t_end / 10.0 {
        return Err(RiccatiError::StepTooLarge {
            step,
            horizon: t_end,
        });
    }
    // B and the ODE right-hand side do not require R > 0, but the solution
    // container carries the coefficients, so compute them (and surface the
    // degenerate case the same way the closed form does).
    let co = roots(params, mode)?;
    let n = (t_end / step).round().max(10.0) as usize;
    let h = t_end / n as f64;
    let a_plus_q = params.a + params.q;
    let cost_gap = params.cost_gap();
    let b = co.b;
    // Backward in t == forward in s = T − t: dη/ds = −f(η).
    let rhs = |y: f64| -> f64 { -(2.0 * a_plus_q * y + b * y * y - cost_gap) };

    let mut values = vec![0.0; n + 1];
    values[n] = params.c;
    let mut y = params.c;
    for j in (0..n).rev() {
        let k1 = rhs(y);
        let k2 = rhs(y + 0.5 * h * k1);
        let k3 = rhs(y + 0.5 * h * k2);
        let k4 = rhs(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        values[j] = y;
    }
    Ok(RiccatiSolution {
        mode,
        coeffs: co,
        terminal_value: params.c,
        grid: uniform_grid(t_end, n),
        values,
    })
}

/// Default Simpson panel count for [`mu`] and the η integrals.
pub const MU_SIMPSON_PANELS: usize = 1000;

/// `∫_t^T η_s ds` by composite Simpson on the closed form (`panels` even).
fn eta_integral(
    t: f64,
    params: &ModelParams,
    mode: EquilibriumMode,
    panels: usize,
) -> Result<f64, RiccatiError> {
    debug_assert!(panels >= 2 && panels % 2 == 0);
    let co = roots(params, mode)?;
    let cost_gap = params.cost_gap();
    let width = params.horizon - t;
    if width <= 0.0 {
        return Ok(0.0);
    }
    let h = width / panels as f64;
    let f = |k: usize| eta_at(&co, cost_gap, params.c, width - k as f64 * h);
    let mut sum = f(0) + f(panels);
    for k in (1..panels).step_by(2) {
        sum += 4.0 * f(k);
    }
    for k in (2..panels).step_by(2) {
        sum += 2.0 * f(k);
    }
    Ok(sum * h / 3.0)
}

/// State-independent value-function offset
/// `μ_t = ½ σ² (1−ρ²) F ∫_t^T η_s ds`, with `F = 1 − 1/N` for closed-loop
/// and `F = 1` for the mean-field limit. Open-loop mode has no such
/// decomposition and is rejected.
pub fn mu(t: f64, params: &ModelParams, mode: EquilibriumMode) -> Result<f64, RiccatiError> {
    let factor = match mode {
        EquilibriumMode::ClosedLoop => params.one_minus_inv_n(),
        EquilibriumMode::MeanFieldGame => 1.0,
        EquilibriumMode::OpenLoop => return Err(RiccatiError::UnsupportedMode { mode }),
    };
    let integral = eta_integral(t, params, mode, MU_SIMPSON_PANELS)?;
    let sigma2 = params.sigma * params.sigma;
    Ok(0.5 * sigma2 * (1.0 - params.rho * params.rho) * factor * integral)
}

// ───────────────────────────── tests ─────────────────────────────
