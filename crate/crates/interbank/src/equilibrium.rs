//! Equilibrium control laws, effective interbank rates, and value functions.
//!
//! With η_t the mode's Riccati coefficient (φ_t in open-loop mode), the
//! equilibrium control of bank i is the feedback rule `κ_t (x̄ − xⁱ)` with
//! gain
//!
//! ```text
//! κ_t = q + (1−1/N) η_t    (closed-loop, open-loop)
//! κ_t = q + η_t            (mean-field limit)
//! ```
//!
//! so every bank effectively lends/borrows at the rate `A_t = a + κ_t`,
//! whose long-horizon constant (c = 0) is `A = a + q + (1−1/N) η̄` (factor 1
//! in the mean-field limit; then `A = √R` exactly).
//!
//! Two independent expressions of the equilibrium value are provided:
//!
//! * the feedback ansatz `V(t, x̄−xⁱ) = ½ η_t (x̄−xⁱ)² + μ_t`
//!   (closed-loop and mean-field modes), and
//! * the time-0 cost integral
//!   `V(d₀) = ½ ∫₀ᵀ [ε−q² + (1−1/N)² η_t²] E[(X̄_t−X_tⁱ)²] dt
//!    + ½ c E[(X̄_T−X_Tⁱ)²]`,
//!   where the expected squared deviation solves a one-dimensional linear
//!   ODE and is evaluated here from the cumulative integral of the rate
//!   `A_t` on a fine grid (step `t/10⁴`), composing exponentials from it —
//!   O(grid) rather than nested-quadrature O(grid²).
//!
//! The two expressions agree (they describe the same equilibrium cost); the
//! test suite pins the agreement to 1e−6 and better. Open-loop mode has no
//! ansatz decomposition, so only the integral form applies there; the
//! mean-field variants of the integral form are the N→∞ limits of the
//! finite-N formulas (all `1−1/N` factors replaced by 1).

use crate::model::{EquilibriumMode, ModelParams};
use crate::riccati::{self, RiccatiError};

/// Number of intervals of the fine grid used for the cumulative rate
/// integral (step `t_end / 10⁴`).
const FINE_GRID_INTERVALS: usize = 10_000;

/// The factor multiplying η in gains and rates: `1 − 1/N` for the finite-N
/// modes, `1` for the mean-field limit.
pub fn gain_factor(params: &ModelParams, mode: EquilibriumMode) -> f64 {
    match mode {
        EquilibriumMode::OpenLoop | EquilibriumMode::ClosedLoop => params.one_minus_inv_n(),
        EquilibriumMode::MeanFieldGame => 1.0,
    }
}

/// Feedback gain κ_t: the realized control of bank i is `κ_t (x̄ − xⁱ)`.
///
/// Always ≥ q (η is nonnegative under validation).
pub fn control_gain(t: f64, params: &ModelParams, mode: EquilibriumMode) -> Result<f64, RiccatiError> {
    let eta = riccati::eta_closed_form(t, params, mode)?;
    Ok(params.q + gain_factor(params, mode) * eta)
}

/// Effective interbank rate `A_t = a + κ_t`.
pub fn effective_rate(t: f64, params: &ModelParams, mode: EquilibriumMode) -> Result<f64, RiccatiError> {
    Ok(params.a + control_gain(t, params, mode)?)
}

/// Long-horizon effective rate `A = a + q + (1−1/N) η̄` (factor 1 for the
/// mean-field limit). Defined, like η̄, only for c = 0.
pub fn effective_rate_limit(params: &ModelParams, mode: EquilibriumMode) -> Result<f64, RiccatiError> {
    let eta_bar = riccati::eta_limit(params, mode)?;
    Ok(params.a + params.q + gain_factor(params, mode) * eta_bar)
}

/// Feedback-form value function `½ η_t · mean_dev² + μ_t`.
///
/// `mean_dev = x̄ − xⁱ`. Closed-loop and mean-field modes only; open-loop
/// has no such decomposition.
pub fn value_function(
    t: f64,
    mean_dev: f64,
    params: &ModelParams,
    mode: EquilibriumMode,
) -> Result<f64, RiccatiError> {
    if mode == EquilibriumMode::OpenLoop {
        return Err(RiccatiError::UnsupportedMode { mode });
    }
    let eta = riccati::eta_closed_form(t, params, mode)?;
    Ok(0.5 * eta * mean_dev * mean_dev + riccati::mu(t, params, mode)?)
}

/// Gains κ evaluated at each time of `grid` (used by the simulator and for
/// CSV emission).
pub fn gain_schedule(
    params: &ModelParams,
    mode: EquilibriumMode,
    grid: &[f64],
) -> Result<Vec<f64>, RiccatiError> {
    grid.iter().map(|&t| control_gain(t, params, mode)).collect()
}

/// Fine-grid machinery shared by [`expected_sq_deviation`] and
/// [`value_time0`]: the rate `A`, its cumulative integral `C`, the decay
/// `e^{−2C}` and the inner convolution `∫₀^t e^{−2(C(t)−C(s))} ds`, all on a
/// uniform grid over `[0, t_end]`.
struct DeviationGrid {
    h: f64,
    /// η (φ in open-loop) at the grid points.
    eta: Vec<f64>,
    /// e^{−2 C(t_k)} with C the cumulative integral of the rate.
    decay: Vec<f64>,
    /// ∫₀^{t_k} e^{−2 (C(t_k) − C(s))} ds.
    inner: Vec<f64>,
}

/// Cumulative integral of uniformly sampled values (4th-order accurate:
/// composite Simpson at even indices, quadratic half-panel rule at odd
/// indices). `values.len()` must be odd (an even interval count).
fn cumulative_integral(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len() - 1;
    debug_assert!(n >= 2 && n % 2 == 0, "need an even number of intervals");
    let mut out = vec![0.0; n + 1];
    for m in 0..n / 2 {
        let (f0, f1, f2) = (values[2 * m], values[2 * m + 1], values[2 * m + 2]);
        out[2 * m + 1] = out[2 * m] + h * (5.0 * f0 + 8.0 * f1 - f2) / 12.0;
        out[2 * m + 2] = out[2 * m] + h * (f0 + 4.0 * f1 + f2) / 3.0;
    }
    out
}

impl DeviationGrid {
    fn build(t_end: f64, params: &ModelParams, mode: EquilibriumMode) -> Result<Self, RiccatiError> {
        debug_assert!(t_end > 0.0);
        let n = FINE_GRID_INTERVALS;
        let h = t_end / n as f64;
        let factor = gain_factor(params, mode);
        // Sampling the closed form directly keeps this O(grid) with no ODE
        // solves; the coefficients are computed once.
        let co = riccati::roots(params, mode)?;
        let sol_at = |t: f64| -> f64 {
            // Reuse the public closed form through the crate API would
            // re-derive the coefficients per call; inline the evaluation.
            crate::riccati::eta_closed_form_with(&co, params, t)
        };
        let eta: Vec<f64> = (0..=n)
            .map(|k| sol_at(t_end * (k as f64 / n as f64)))
            .collect();
        let rate: Vec<f64> = eta.iter().map(|&e| params.a + params.q + factor * e).collect();
        let cum = cumulative_integral(&rate, h);

        let decay: Vec<f64> = cum.iter().map(|&c| (-2.0 * c).exp()).collect();

        // Moving-frame recursion for the inner convolution: with
        // g_k(s) = e^{−2(C(t_k) − C(s))},
        //   inner_{k} = e^{−2(C_k − C_{k−1})} inner_{k−1} + ∫_{t_{k−1}}^{t_k} g_k(s) ds,
        // and the local integral uses the quadratic through three grid
        // values of g_k. Working with local exponent differences keeps every
        // exponential in [0, e^{O(h)}], so nothing overflows even for long
        // horizons or large rates.
        let mut inner = vec![0.0; n + 1];
        for k in 1..=n {
            let step_decay = (-2.0 * (cum[k] - cum[k - 1])).exp();
            let local = if k >= 2 {
                // points t_{k−2}, t_{k−1}, t_k; integrate over the last interval
                let f0 = (-2.0 * (cum[k] - cum[k - 2])).exp();
                let f1 = step_decay;
                let f2 = 1.0;
                h * (-f0 + 8.0 * f1 + 5.0 * f2) / 12.0
            } else {
                // first interval: points t_0, t_1, t_2 relative to C(t_1)
                let f0 = step_decay;
                let f1 = 1.0;
                let f2 = (2.0 * (cum[2] - cum[1])).exp();
                h * (5.0 * f0 + 8.0 * f1 - f2) / 12.0
            };
            inner[k] = step_decay * inner[k - 1] + local;
        }
        Ok(DeviationGrid { h, eta, decay, inner })
    }

    /// The variance inflow coefficient: `(1−1/N) σ² (1−ρ²)` in the finite-N
    /// modes, `σ² (1−ρ²)` in the mean-field limit.
    fn variance_coefficient(params: &ModelParams, mode: EquilibriumMode) -> f64 {
        let nf = match mode {
            EquilibriumMode::OpenLoop | EquilibriumMode::ClosedLoop => params.one_minus_inv_n(),
            EquilibriumMode::MeanFieldGame => 1.0,
        };
        nf * params.sigma * params.sigma * (1.0 - params.rho * params.rho)
    }

    fn expected_sq_dev(&self, k: usize, initial_dev: f64, vcoef: f64) -> f64 {
        initial_dev * initial_dev * self.decay[k] + vcoef * self.inner[k]
    }
}

/// `E[(X̄_t − X_tⁱ)²]` along the equilibrium of the given mode, starting from
/// deviation `initial_dev = x̄₀ − x₀ⁱ`:
///
/// ```text
/// E(t) = d₀² e^{−2∫₀ᵗ A_s ds} + (1−1/N) σ²(1−ρ²) ∫₀ᵗ e^{−2∫ₛᵗ A_u du} ds,
/// ```
///
/// with `A_s = a + q + (1−1/N) η_s` (φ in open-loop mode; factors 1 in the
/// mean-field limit). Requires `t ∈ [0, T]`.
pub fn expected_sq_deviation(
    t: f64,
    initial_dev: f64,
    params: &ModelParams,
    mode: EquilibriumMode,
) -> Result<f64, RiccatiError> {
    assert!(
        (0.0..=params.horizon).contains(&t),
        "t = {t} outside [0, {}]",
        params.horizon
    );
    if t == 0.0 {
        return Ok(initial_dev * initial_dev);
    }
    let grid = DeviationGrid::build(t, params, mode)?;
    let vcoef = DeviationGrid::variance_coefficient(params, mode);
    Ok(grid.expected_sq_dev(FINE_GRID_INTERVALS, initial_dev, vcoef))
}

/// `E[(X̄_t − X_tⁱ)²]` sampled at `n_out + 1` uniform times over the full
/// horizon, from a single fine-grid pass (`n_out` must divide the fine grid
/// size). Matches pointwise calls to [`expected_sq_deviation`] up to grid
/// resolution.
pub fn expected_sq_deviation_curve(
    params: &ModelParams,
    mode: EquilibriumMode,
    initial_dev: f64,
    n_out: usize,
) -> Result<Vec<(f64, f64)>, RiccatiError> {
    assert!(
        n_out >= 1 && FINE_GRID_INTERVALS % n_out == 0,
        "n_out must divide {FINE_GRID_INTERVALS}"
    );
    let grid = DeviationGrid::build(params.horizon, params, mode)?;
    let vcoef = DeviationGrid::variance_coefficient(params, mode);
    let stride = FINE_GRID_INTERVALS / n_out;
    Ok((0..=n_out)
        .map(|j| {
            let k = j * stride;
            let t = params.horizon * (j as f64 / n_out as f64);
            (t, grid.expected_sq_dev(k, initial_dev, vcoef))
        })
        .collect())
}

/// Time-0 equilibrium cost per bank, by the deviation-integral form:
///
/// ```text
/// V(d₀) = ½ ∫₀ᵀ [ε − q² + ((1−1/N) η_t)²] E[(X̄_t−X_tⁱ)²] dt
///         + ½ c E[(X̄_T−X_Tⁱ)²].
/// ```
///
/// Open-loop mode replaces η by φ; the mean-field variant is the N→∞ limit
/// (factors 1). The outer integral is composite Simpson on the same fine
/// grid as the deviation terms.
pub fn value_time0(
    initial_dev: f64,
    params: &ModelParams,
    mode: EquilibriumMode,
) -> Result<f64, RiccatiError> {
    let grid = DeviationGrid::build(params.horizon, params, mode)?;
    let vcoef = DeviationGrid::variance_coefficient(params, mode);
    let factor = gain_factor(params, mode);
    let cost_gap = params.cost_gap();

    let n = FINE_GRID_INTERVALS;
    let weighted = |k: usize| -> f64 {
        let fe = factor * grid.eta[k];
        (cost_gap + fe * fe) * grid.expected_sq_dev(k, initial_dev, vcoef)
    };
    let mut sum = weighted(0) + weighted(n);
    for k in (1..n).step_by(2) {
        sum += 4.0 * weighted(k);
    }
    for k in (2..n).step_by(2) {
        sum += 2.0 * weighted(k);
    }
    let integral = sum * grid.h / 3.0;
    let terminal = params.c * grid.expected_sq_dev(n, initial_dev, vcoef);
    Ok(0.5 * integral + 0.5 * terminal)
}

// ───────────────────────────── tests ─────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EquilibriumMode::{ClosedLoop, MeanFieldGame, OpenLoop};
    use crate::riccati::{eta_closed_form, RiccatiError};

    fn comparison(c: f64) -> ModelParams {
        ModelParams { c, ..ModelParams::default() }.validate().unwrap()
    }

    fn with_rho(c: f64, rho: f64) -> ModelParams {
        ModelParams { c, rho, ..ModelParams::default() }.validate().unwrap()
    }

    const ALL_MODES: [EquilibriumMode; 3] = [OpenLoop, ClosedLoop, MeanFieldGame];

    #[test]
    fn gain_reduces_to_q_when_eta_vanishes() {
        // Terminal time with c = 0.
        let p = comparison(0.0);
        assert_eq!(control_gain(p.horizon, &p, ClosedLoop).unwrap(), p.q);
        // Zero cost gap and zero terminal cost: η ≡ 0.
        let flat = ModelParams { q: 2.0, epsilon: 4.0, ..ModelParams::default() }
            .validate()
            .unwrap();
        for mode in ALL_MODES {
            for t in [0.0, 0.4, 1.0] {
                assert_eq!(control_gain(t, &flat, mode).unwrap(), flat.q);
            }
        }
    }

    #[test]
    fn open_loop_gain_exceeds_closed_loop_gain_at_time_zero() {
        let p = comparison(0.0);
        let g_ol = control_gain(0.0, &p, OpenLoop).unwrap();
        let g_cl = control_gain(0.0, &p, ClosedLoop).unwrap();
        assert!(g_ol > g_cl, "{g_ol} vs {g_cl}");
    }

    #[test]
    fn gain_floor_is_q() {
        for c in [0.0, 1.0, 10.0] {
            let p = comparison(c);
            for mode in ALL_MODES {
                for j in 0..=50 {
                    let t = p.horizon * j as f64 / 50.0;
                    assert!(control_gain(t, &p, mode).unwrap() >= p.q);
                }
            }
        }
    }

    #[test]
    fn effective_rate_examples() {
        // a = 0, ε = q², c = 0 ⇒ rate ≡ q.
        let flat = ModelParams { a: 0.0, q: 2.0, epsilon: 4.0, ..ModelParams::default() }
            .validate()
            .unwrap();
        assert_eq!(effective_rate(0.3, &flat, ClosedLoop).unwrap(), flat.q);
        // Terminal time (closed-loop): a + q + (1−1/N)c.
        let p = comparison(1.0);
        let expected = p.a + p.q + 0.9 * p.c;
        assert!((effective_rate(p.horizon, &p, ClosedLoop).unwrap() - expected).abs() < 1e-15);
        // Long horizon, mean-field: A_0 → √13.
        let long = ModelParams { horizon: 100.0, ..comparison(0.0) };
        let a0 = effective_rate(0.0, &long, MeanFieldGame).unwrap();
        assert!((a0 - 13.0_f64.sqrt()).abs() < 1e-10, "a0 = {a0}");
    }

    #[test]
    fn effective_rate_limits_match_frozen_values() {
        let p = comparison(0.0);
        let ol = effective_rate_limit(&p, OpenLoop).unwrap();
        let cl = effective_rate_limit(&p, ClosedLoop).unwrap();
        let mfg = effective_rate_limit(&p, MeanFieldGame).unwrap();
        assert!((ol - 12.1_f64.sqrt()).abs() < 1e-12, "open-loop A = {ol}");
        assert!(
            (cl - (2.0 + 0.9 * 9.0 / (2.0 + 12.91_f64.sqrt()))).abs() < 1e-12,
            "closed-loop A = {cl}"
        );
        assert!((cl - 3.448_226_222_403_942).abs() < 1e-10);
        assert!((mfg - 13.0_f64.sqrt()).abs() < 1e-12, "mean-field A = {mfg}");
        // The identity A = √R holds when the gain factor equals B.
        assert!((ol - crate::riccati::roots(&p, OpenLoop).unwrap().r.sqrt()).abs() < 1e-12);
        assert!((mfg - crate::riccati::roots(&p, MeanFieldGame).unwrap().r.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn effective_rate_limit_requires_zero_terminal_cost() {
        let p = comparison(1.0);
        assert!(matches!(
            effective_rate_limit(&p, ClosedLoop),
            Err(RiccatiError::UnsupportedTerminalCost { .. })
        ));
    }

    /// Open-loop limit > closed-loop limit for every N, both increasing in N
    /// toward the mean-field value.
    #[test]
    fn monotone_liquidity_across_population_sizes() {
        let mfg = effective_rate_limit(&comparison(0.0), MeanFieldGame).unwrap();
        let mut last_ol = f64::NEG_INFINITY;
        let mut last_cl = f64::NEG_INFINITY;
        for n in [2usize, 5, 10, 50, 200] {
            let p = ModelParams { n_banks: n, ..comparison(0.0) };
            let ol = effective_rate_limit(&p, OpenLoop).unwrap();
            let cl = effective_rate_limit(&p, ClosedLoop).unwrap();
            assert!(ol > cl, "N={n}: open {ol} vs closed {cl}");
            assert!(ol > last_ol && cl > last_cl, "not increasing at N={n}");
            assert!(ol < mfg && cl < mfg, "N={n} exceeds the limit");
            last_ol = ol;
            last_cl = cl;
        }
    }

    #[test]
    fn value_function_terminal_and_degenerate_cases() {
        let p = comparison(10.0);
        for d in [0.0, 0.5, -1.0] {
            let v = value_function(p.horizon, d, &p, ClosedLoop).unwrap();
            assert!((v - 0.5 * p.c * d * d).abs() < 1e-15);
        }
        // mean_dev = 0 and ρ = 1: both terms vanish.
        let p1 = with_rho(1.0, 1.0);
        assert_eq!(value_function(0.0, 0.0, &p1, ClosedLoop).unwrap(), 0.0);
        // Open-loop mode has no ansatz form.
        assert!(matches!(
            value_function(0.0, 1.0, &comparison(0.0), OpenLoop),
            Err(RiccatiError::UnsupportedMode { .. })
        ));
    }

    #[test]
    fn expected_sq_deviation_at_time_zero_is_the_initial_square() {
        let p = with_rho(0.0, 0.2);
        for mode in ALL_MODES {
            assert_eq!(expected_sq_deviation(0.0, 1.5, &p, mode).unwrap(), 2.25);
        }
    }

    #[test]
    fn expected_sq_deviation_vanishes_under_full_correlation() {
        let p = with_rho(0.0, 1.0);
        for mode in ALL_MODES {
            for t in [0.25, 1.0] {
                assert_eq!(expected_sq_deviation(t, 0.0, &p, mode).unwrap(), 0.0);
            }
        }
    }

    /// Independent oracle: brute-force nested Simpson quadrature of the same
    /// expression (the O(grid²) scheme the engine avoids).
    #[test]
    fn expected_sq_deviation_matches_nested_quadrature() {
        let p = with_rho(1.0, 0.2);
        for mode in ALL_MODES {
            let factor = gain_factor(&p, mode);
            let vcoef = DeviationGrid::variance_coefficient(&p, mode);
            let rate = |t: f64| -> f64 {
                p.a + p.q + factor * eta_closed_form(t, &p, mode).unwrap()
            };
            // Simpson with `panels` panels of f over [lo, hi].
            let simpson = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, panels: usize| -> f64 {
                let h = (hi - lo) / panels as f64;
                let mut s = f(lo) + f(hi);
                for k in 1..panels {
                    s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(lo + k as f64 * h);
                }
                s * h / 3.0
            };
            for t in [0.25, 0.7, 1.0] {
                for d0 in [0.0, 1.0] {
                    let outer = |s: f64| -> f64 {
                        (-2.0 * simpson(&rate, s, t, 200)).exp()
                    };
                    let reference =
                        d0 * d0 * (-2.0 * simpson(&rate, 0.0, t, 400)).exp()
                            + vcoef * simpson(&outer, 0.0, t, 400);
                    let engine = expected_sq_deviation(t, d0, &p, mode).unwrap();
                    assert!(
                        (engine - reference).abs() < 1e-7,
                        "mode {mode}, t={t}, d0={d0}: engine {engine} vs nested {reference}"
                    );
                }
            }
        }
    }

    /// Below the stationary level the deviation grows; far above, it decays.
    #[test]
    fn expected_sq_deviation_monotone_regimes() {
        let p = comparison(0.0);
        for mode in ALL_MODES {
            let probe: Vec<f64> = (0..=40).map(|j| p.horizon * j as f64 / 40.0).collect();
            let from_zero: Vec<f64> = probe
                .iter()
                .map(|&t| expected_sq_deviation(t, 0.0, &p, mode).unwrap())
                .collect();
            let from_ten: Vec<f64> = probe
                .iter()
                .map(|&t| expected_sq_deviation(t, 10.0, &p, mode).unwrap())
                .collect();
            for w in from_zero.windows(2) {
                assert!(w[1] >= w[0], "expected nondecreasing from d0 = 0");
            }
            for w in from_ten.windows(2) {
                assert!(w[1] <= w[0], "expected nonincreasing from d0 = 10");
            }
        }
        // Constant-rate regime (ε = q², c = 0): exact stationary level
        // s²(1−1/N)/(2(a+q)); strict monotone approach from either side.
        let flat = ModelParams { q: 2.0, epsilon: 4.0, ..ModelParams::default() }
            .validate()
            .unwrap();
        let stationary = flat.one_minus_inv_n() * flat.sigma * flat.sigma / (2.0 * (flat.a + flat.q));
        let e_mid = expected_sq_deviation(0.5, stationary.sqrt(), &flat, ClosedLoop).unwrap();
        assert!((e_mid - stationary).abs() < 1e-6, "stationary start should stay put");
    }

    /// The two value expressions describe the same quantity.
    #[test]
    fn value_function_matches_value_time0() {
        for c in [0.0, 10.0] {
            for rho in [0.0, 0.2, 0.9] {
                let p = with_rho(c, rho);
                for mode in [ClosedLoop, MeanFieldGame] {
                    for d in [0.0, 0.5, -0.5, 1.0, -1.0] {
                        let ansatz = value_function(0.0, d, &p, mode).unwrap();
                        let integral = value_time0(d, &p, mode).unwrap();
                        assert!(
                            (ansatz - integral).abs() < 1e-6,
                            "mode {mode}, c={c}, rho={rho}, d={d}: {ansatz} vs {integral}"
                        );
                    }
                }
            }
        }
        // One spot check at much tighter tolerance.
        let p = with_rho(10.0, 0.2);
        let ansatz = value_function(0.0, 1.0, &p, ClosedLoop).unwrap();
        let integral = value_time0(1.0, &p, ClosedLoop).unwrap();
        assert!((ansatz - integral).abs() < 1e-8, "{ansatz} vs {integral}");
    }

    #[test]
    fn value_time0_trivial_zeroes() {
        // ε = q², c = 0: every cost weight vanishes.
        let flat = ModelParams { q: 2.0, epsilon: 4.0, ..ModelParams::default() }
            .validate()
            .unwrap();
        for mode in ALL_MODES {
            for d in [0.0, 1.0, -2.0] {
                assert_eq!(value_time0(d, &flat, mode).unwrap(), 0.0);
            }
        }
        // ρ = 1 and zero initial deviation: E ≡ 0.
        let p1 = with_rho(10.0, 1.0);
        for mode in ALL_MODES {
            assert_eq!(value_time0(0.0, &p1, mode).unwrap(), 0.0);
        }
    }

    /// Frozen against an independent high-resolution RK4 integration of the
    /// coupled (E, V) system (200 000 steps). Note the open-loop cost is
    /// slightly *below* the closed-loop cost here: its larger coefficient
    /// raises the running weight but also speeds up mean reversion, and the
    /// second effect wins at these parameters.
    #[test]
    fn value_time0_matches_independent_ode_oracle() {
        let p = with_rho(0.0, 0.2);
        let cases = [
            (OpenLoop, 0.0, 0.585_612_225_501_177),
            (ClosedLoop, 0.0, 0.585_879_583_325_998),
            (OpenLoop, 1.0, 1.388_795_289_140_403),
            (ClosedLoop, 1.0, 1.389_667_300_835_260),
        ];
        for (mode, d0, expected) in cases {
            let v = value_time0(d0, &p, mode).unwrap();
            assert!(
                (v - expected).abs() < 1e-9,
                "mode {mode}, d0 = {d0}: {v} vs oracle {expected}"
            );
        }
    }

    #[test]
    fn deviation_curve_matches_pointwise_evaluation() {
        let p = with_rho(1.0, 0.2);
        for mode in ALL_MODES {
            let curve = expected_sq_deviation_curve(&p, mode, 0.5, 10).unwrap();
            assert_eq!(curve.len(), 11);
            for &(t, e) in &curve {
                let pointwise = expected_sq_deviation(t, 0.5, &p, mode).unwrap();
                assert!(
                    (e - pointwise).abs() < 1e-9,
                    "mode {mode}, t={t}: {e} vs {pointwise}"
                );
            }
        }
    }

    #[test]
    fn gain_schedule_matches_pointwise_gains() {
        let p = comparison(1.0);
        let grid: Vec<f64> = (0..=10).map(|k| p.horizon * k as f64 / 10.0).collect();
        let sched = gain_schedule(&p, ClosedLoop, &grid).unwrap();
        for (k, &t) in grid.iter().enumerate() {
            assert_eq!(sched[k], control_gain(t, &p, ClosedLoop).unwrap());
        }
    }
}
