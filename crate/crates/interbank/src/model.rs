//! Model parameters and equilibrium-mode selection.
//!
//! The model is a system of N coupled diffusions ("log-monetary reserves")
//!
//! ```text
//! dXᵢ = [a(X̄ − Xᵢ) + αᵢ] dt + σ(√(1−ρ²) dWᵢ + ρ dW⁰),     X̄ = (1/N) Σⱼ Xⱼ,
//! ```
//!
//! where each bank controls its lending/borrowing rate αᵢ to minimize
//!
//! ```text
//! E[ ∫₀ᵀ ( ½αᵢ² − q αᵢ(X̄−Xᵢ) + ½ε(X̄−Xᵢ)² ) dt + ½c(X̄_T−X_T ⁱ)² ].
//! ```
//!
//! The running cost is jointly convex exactly when `q² ≤ ε`, which
//! [`ModelParams::validate`] enforces. A bank defaults when its reserve
//! reaches the level `default_level < 0` before the horizon.
//!
//! All downstream modules consume a validated [`ModelParams`] plus an
//! [`EquilibriumMode`] choosing which Nash-equilibrium notion the Riccati
//! coefficient refers to.

use thiserror::Error;

/// All scalar constants of the N-bank model.
///
/// Construct with struct syntax and pass through [`ModelParams::validate`]
/// before handing to any other module; every other operation in this crate
/// assumes the invariants below already hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// N — number of banks (≥ 1).
    pub n_banks: usize,
    /// a — baseline mean-reversion rate toward the ensemble average (1/time, ≥ 0).
    pub a: f64,
    /// q — incentive weight on the cross term of the running cost (1/time, ≥ 0).
    pub q: f64,
    /// ε — running deviation penalty (≥ q², which implies ≥ 0).
    pub epsilon: f64,
    /// c — terminal deviation penalty (≥ 0).
    pub c: f64,
    /// σ — diffusion coefficient (> 0).
    pub sigma: f64,
    /// ρ — common-noise correlation (in [−1, 1]).
    pub rho: f64,
    /// T — time horizon (> 0).
    pub horizon: f64,
    /// D — default barrier (< 0); a bank defaults when its path reaches D.
    pub default_level: f64,
}

/// Which Nash-equilibrium notion the Riccati coefficient refers to.
///
/// The three variants share one scalar Riccati equation and differ only in
/// the coefficient `B` of the squared term (see `riccati::square_coefficient`):
/// `1 − 1/N²` (closed-loop), `1 − 1/N` (open-loop), `1` (mean-field limit).
/// `MeanFieldGame` ignores `n_banks` in every coefficient formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquilibriumMode {
    /// Nash equilibrium over controls adapted to the driving noise.
    OpenLoop,
    /// Markovian (feedback) Nash equilibrium.
    ClosedLoop,
    /// The N → ∞ mean-field-game limit.
    MeanFieldGame,
}

impl std::fmt::Display for EquilibriumMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EquilibriumMode::OpenLoop => "open-loop",
            EquilibriumMode::ClosedLoop => "closed-loop",
            EquilibriumMode::MeanFieldGame => "mfg",
        };
        f.write_str(s)
    }
}

/// Validation failure for a [`ModelParams`] value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    /// The running cost is non-convex: `q² > ε`.
    #[error("convexity violated: q^2 = {q_squared} exceeds epsilon = {epsilon} (require q^2 <= epsilon)")]
    ConvexityViolated { q_squared: f64, epsilon: f64 },
    /// A field is outside its admissible range (or not finite).
    #[error("parameter `{field}` = {value} out of range: must be {requirement}")]
    DomainError {
        field: &'static str,
        value: f64,
        requirement: &'static str,
    },
}

impl ModelParams {
    /// Checks every invariant and returns the unchanged parameter set on success.
    ///
    /// Range checks run field by field (each failure names the offending
    /// field); the convexity condition `q² ≤ ε` is checked last. Non-finite
    /// values are domain errors. Boundary cases `q² = ε`, `ρ = ±1`, `a = 0`
    /// and `c = 0` are accepted.
    pub fn validate(self) -> Result<Self, ParamError> {
        fn check(
            field: &'static str,
            value: f64,
            requirement: &'static str,
            ok: bool,
        ) -> Result<(), ParamError> {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(ParamError::DomainError {
                    field,
                    value,
                    requirement,
                })
            }
        }

        if self.n_banks < 1 {
            return Err(ParamError::DomainError {
                field: "n_banks",
                value: self.n_banks as f64,
                requirement: "a positive integer",
            });
        }
        check("a", self.a, "finite and >= 0", self.a >= 0.0)?;
        check("q", self.q, "finite and >= 0", self.q >= 0.0)?;
        check("epsilon", self.epsilon, "finite and >= 0", self.epsilon >= 0.0)?;
        check("c", self.c, "finite and >= 0", self.c >= 0.0)?;
        check("sigma", self.sigma, "finite and > 0", self.sigma > 0.0)?;
        check(
            "rho",
            self.rho,
            "finite and in [-1, 1]",
            (-1.0..=1.0).contains(&self.rho),
        )?;
        check("horizon", self.horizon, "finite and > 0", self.horizon > 0.0)?;
        check(
            "default_level",
            self.default_level,
            "finite and < 0",
            self.default_level < 0.0,
        )?;
        if self.q * self.q > self.epsilon {
            return Err(ParamError::ConvexityViolated {
                q_squared: self.q * self.q,
                epsilon: self.epsilon,
            });
        }
        Ok(self)
    }

    /// `ε − q²`, the constant term of the Riccati equation (≥ 0 after validation).
    pub fn cost_gap(&self) -> f64 {
        self.epsilon - self.q * self.q
    }

    /// `1 − 1/N`, the deviation-variance factor that appears in the
    /// finite-N control gains and value formulas.
    pub fn one_minus_inv_n(&self) -> f64 {
        1.0 - 1.0 / self.n_banks as f64
    }
}

impl Default for ModelParams {
    /// A canonical, valid parameter set used as the starting point for
    /// experiments: 10 banks, unit incentive and diffusion, strong running
    /// penalty, independent noise, unit horizon, barrier at −0.7.
    fn default() -> Self {
        ModelParams {
            n_banks: 10,
            a: 1.0,
            q: 1.0,
            epsilon: 10.0,
            c: 0.0,
            sigma: 1.0,
            rho: 0.0,
            horizon: 1.0,
            default_level: -0.7,
        }
    }
}

// ───────────────────────────── tests ─────────────────────────────
