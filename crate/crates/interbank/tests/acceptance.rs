//! Acceptance gate: ten end-to-end checks, one per release criterion.
//!
//! Each test prints a single `PASS`/`FAIL` line with its measured error and
//! pinned tolerance (visible under `cargo test --test acceptance -- --nocapture`)
//! and then asserts. Monte-Carlo checks use fixed seeds, so every number here
//! is reproducible bit for bit.

use std::sync::OnceLock;

use interbank::equilibrium::{effective_rate_limit, value_function, value_time0};
use interbank::model::{EquilibriumMode, ModelParams};
use interbank::riccati::{
    closed_form_solution, eta_closed_form, eta_limit, integrate_riccati,
};
use interbank::risk::{
    binomial_pmf, large_deviation_rate, single_default_prob, systemic_prob,
    systemic_prob_limit, systemic_prob_log, systemic_prob_mc,
};
use interbank::simulate::{
    equilibrium_cost_mc, euler_simulate, generate_noise, summarize_paths, PathSummary,
    PolicySpec,
};

const MODES: [EquilibriumMode; 3] = [
    EquilibriumMode::OpenLoop,
    EquilibriumMode::ClosedLoop,
    EquilibriumMode::MeanFieldGame,
];

/// Reference configuration: ten banks, a = q = 1, ε = 10, c = 0, σ = 1,
/// ρ = 0, horizon 1, default level −0.7.
fn base() -> ModelParams {
    ModelParams::default()
}

fn with(f: impl FnOnce(&mut ModelParams)) -> ModelParams {
    let mut p = base();
    f(&mut p);
    p.validate().expect("valid test parameters")
}

fn check(ok: bool, line: String) {
    println!("{} {line}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{line}");
}

/// 01 — the closed-form Riccati solution matches fixed-step RK4 integration
/// at step 1e-4 to 1e-8 in sup norm, for every mode and three parameter sets.
#[test]
fn a01_closed_form_riccati_matches_rk4_integration() {
    let sets = [
        ("eps10_c0", base()),
        ("eps10_c1", with(|p| p.c = 1.0)),
        ("eps2_c0", with(|p| p.epsilon = 2.0)),
    ];
    let mut sup = 0.0f64;
    for (_, params) in &sets {
        for mode in MODES {
            let rk4 = integrate_riccati(params, mode, 1e-4).unwrap();
            let exact = closed_form_solution(params, mode, rk4.grid.len() - 1).unwrap();
            assert_eq!(rk4.grid, exact.grid);
            for (a, b) in rk4.values.iter().zip(&exact.values) {
                sup = sup.max((a - b).abs());
            }
        }
    }
    check(
        sup <= 1e-8,
        format!("01 closed-form vs RK4 Riccati: sup error {sup:.3e} (tol 1e-8)"),
    );
}

/// 02 — with a long horizon the mean-field Riccati solution starts on its
/// stationary level (ε − q²)/((a+q) + √R).
#[test]
fn a02_long_horizon_riccati_sits_on_stationary_level() {
    let params = with(|p| {
        p.epsilon = 2.0;
        p.horizon = 100.0;
    });
    let stationary = 0.236_067_977_499_789_70; // 1/(2 + √5)
    let eta0 = eta_closed_form(0.0, &params, EquilibriumMode::MeanFieldGame).unwrap();
    let bar = eta_limit(&params, EquilibriumMode::MeanFieldGame).unwrap();
    let err = (eta0 - stationary).abs();
    check(
        err <= 1e-6 && (bar - stationary).abs() <= 1e-14,
        format!("02 long-horizon eta(0) vs stationary level: error {err:.3e} (tol 1e-6)"),
    );
}

/// Shared 10⁴-path run of isolated banks (a = 0) at step 1e-4, used by the
/// default-frequency and loss-shape checks.
fn isolated_run() -> &'static [PathSummary] {
    static RUN: OnceLock<Vec<PathSummary>> = OnceLock::new();
    RUN.get_or_init(|| {
        let params = with(|p| p.a = 0.0);
        let initial = vec![0.0; params.n_banks];
        summarize_paths(
            &params,
            PolicySpec::Independent,
            &initial,
            1e-4,
            10_000,
            2026,
            10_000,
        )
        .unwrap()
    })
}

/// 03 — the per-bank default frequency of isolated banks matches the
/// reflection-principle probability 2Φ(D/(σ√T)) within 0.02, and the
/// discretization bias is non-positive (up to Monte-Carlo noise).
#[test]
fn a03_isolated_default_frequency_matches_reflection_principle() {
    let params = base();
    let summaries = isolated_run();
    let n_samples = (summaries.len() * params.n_banks) as f64;
    let defaults: usize = summaries.iter().map(|s| s.n_defaults).sum();
    let p_hat = defaults as f64 / n_samples;
    let p = single_default_prob(&params);
    let se = (p * (1.0 - p) / n_samples).sqrt();
    let err = (p_hat - p).abs();
    check(
        err <= 0.02 && p_hat <= p + 3.0 * se,
        format!(
            "03 isolated default frequency {p_hat:.5} vs analytic {p:.5}: \
             error {err:.3e} (tol 0.02, bias gate p_hat <= p + 3se = {:.5})",
            p + 3.0 * se
        ),
    );
}

/// 04 — the loss distribution of isolated banks is Binomial(N, p): total
/// variation distance of the empirical pmf at most 0.05.
#[test]
fn a04_isolated_loss_distribution_is_binomial() {
    let params = base();
    let summaries = isolated_run();
    let mut counts = vec![0u64; params.n_banks + 1];
    for s in summaries {
        counts[s.n_defaults] += 1;
    }
    let reference = binomial_pmf(params.n_banks, single_default_prob(&params));
    let tv: f64 = counts
        .iter()
        .zip(&reference)
        .map(|(&c, r)| (c as f64 / summaries.len() as f64 - r).abs())
        .sum::<f64>()
        / 2.0;
    check(
        tv <= 0.05,
        format!("04 loss distribution vs Binomial: TV distance {tv:.4} (tol 0.05)"),
    );
}

/// 05 — under strong lending (a = 100) paths flock: the frequency of the
/// ensemble mean reaching the default level matches its analytic probability
/// within 0.01, and zero-default outcomes outweigh the Binomial reference.
#[test]
fn a05_strong_lending_concentrates_losses_on_the_mean() {
    let params = with(|p| p.a = 100.0);
    let initial = vec![0.0; params.n_banks];
    let summaries = summarize_paths(
        &params,
        PolicySpec::Uncontrolled,
        &initial,
        1e-4,
        10_000,
        2027,
        10_000,
    )
    .unwrap();
    let n_paths = summaries.len() as f64;
    let hit_freq = summaries.iter().filter(|s| s.mean_hit).count() as f64 / n_paths;
    let analytic = systemic_prob(&params);
    let err = (hit_freq - analytic).abs();

    let zero_freq = summaries.iter().filter(|s| s.n_defaults == 0).count() as f64 / n_paths;
    let zero_ref = binomial_pmf(params.n_banks, single_default_prob(&params))[0];
    check(
        err <= 0.01 && zero_freq > zero_ref,
        format!(
            "05 flocking: mean-hit frequency {hit_freq:.5} vs analytic {analytic:.5} \
             (error {err:.3e}, tol 0.01); zero-default mass {zero_freq:.3} > Binomial {zero_ref:.5}"
        ),
    );
}

/// 06 — lending only redistributes reserves: under common random numbers the
/// ensemble mean path is invariant across no-lending, fixed-rate, and
/// equilibrium policies (100 seeds, pairwise sup 1e-12).
#[test]
fn a06_mean_path_is_invariant_to_the_lending_policy() {
    let params = with(|p| {
        p.a = 10.0;
        p.rho = 0.2;
    });
    let initial = vec![0.0; params.n_banks];
    let mut sup = 0.0f64;
    for seed in 0..100 {
        let noise = generate_noise(seed, params.n_banks, 100, 0.01);
        let runs = [
            euler_simulate(&params, PolicySpec::Uncontrolled, &initial, &noise).unwrap(),
            euler_simulate(&params, PolicySpec::Independent, &initial, &noise).unwrap(),
            euler_simulate(
                &params,
                PolicySpec::Equilibrium(EquilibriumMode::ClosedLoop),
                &initial,
                &noise,
            )
            .unwrap(),
        ];
        for i in 0..runs.len() {
            for j in i + 1..runs.len() {
                for (a, b) in runs[i].mean_path.iter().zip(&runs[j].mean_path) {
                    sup = sup.max((a - b).abs());
                }
            }
        }
    }
    check(
        sup <= 1e-12,
        format!("06 policy-invariant mean path over 100 seeds: sup gap {sup:.3e} (tol 1e-12)"),
    );
}

/// 07 — with common noise ρ = 0.5 the analytic systemic probability matches
/// its closed form, a 10⁴-path Monte-Carlo estimate, and the
/// infinite-population limit 2Φ(D/(σρ√T)).
#[test]
fn a07_common_noise_systemic_probability() {
    let params = with(|p| p.rho = 0.5);
    let analytic = systemic_prob(&params);
    let pinned = 0.219_491_557_701_987_86;
    let analytic_err = (analytic - pinned).abs();

    let (p_hat, se) = systemic_prob_mc(&params, PolicySpec::Uncontrolled, 10_000, 2028, 1e-4).unwrap();
    let mc_err = (p_hat - analytic).abs();

    let limit = systemic_prob_limit(&params);
    let limit_err = (limit - 0.161_513_318_467_542_09).abs(); // 2Φ(−1.4)
    check(
        analytic_err <= 1e-4 && mc_err <= 3.0 * se && limit_err <= 1e-12,
        format!(
            "07 common-noise systemic probability: closed form {analytic:.8} \
             (err {analytic_err:.2e}, tol 1e-4), MC {p_hat:.4} within {mc_err:.4} <= 3se={:.4}, \
             limit err {limit_err:.2e} (tol 1e-12)",
            3.0 * se
        ),
    );
}

/// 08 — the closed-loop value function is consistent: the time-0 ansatz
/// matches the integrated running cost to 1e-6 across initial deviations,
/// terminal weights, and correlations, and 10⁵ simulated equilibrium paths
/// reproduce it within three standard errors.
#[test]
fn a08_value_function_matches_integrated_and_simulated_cost() {
    let mut sup = 0.0f64;
    for c in [0.0, 1.0, 10.0] {
        for rho in [0.0, 0.2] {
            let params = with(|p| {
                p.c = c;
                p.rho = rho;
            });
            for d in [0.0, 0.5, -0.5, 1.0, -1.0] {
                let ansatz =
                    value_function(0.0, d, &params, EquilibriumMode::ClosedLoop).unwrap();
                let integral = value_time0(d, &params, EquilibriumMode::ClosedLoop).unwrap();
                sup = sup.max((ansatz - integral).abs());
            }
        }
    }

    let params = with(|p| {
        p.c = 10.0;
        p.rho = 0.2;
    });
    let initial = vec![0.0; params.n_banks];
    let estimate = equilibrium_cost_mc(
        &params,
        EquilibriumMode::ClosedLoop,
        &initial,
        1e-4,
        10_000,
        2029,
        100_000,
    )
    .unwrap();
    let value = value_time0(0.0, &params, EquilibriumMode::ClosedLoop).unwrap();
    let mc_err = (estimate.mean - value).abs();
    check(
        sup <= 1e-6 && mc_err <= 3.0 * estimate.std_err,
        format!(
            "08 value consistency: ansatz vs integral sup {sup:.3e} (tol 1e-6); \
             simulated cost {:.6} vs value {value:.6} within {mc_err:.2e} <= 3se={:.2e}",
            estimate.mean,
            3.0 * estimate.std_err
        ),
    );
}

/// 09 — equilibrium ordering and population limits: the open-loop Riccati
/// curve dominates the closed-loop one; long-horizon effective rates order
/// open > closed, increase with N, and tend to √13; stationary-level errors
/// shrink like 1/N² (closed) and 1/N (open) under population doubling.
#[test]
fn a09_equilibrium_ordering_and_population_limits() {
    for c in [0.0, 1.0] {
        let params = with(|p| p.c = c);
        let open = closed_form_solution(&params, EquilibriumMode::OpenLoop, 1000).unwrap();
        let closed = closed_form_solution(&params, EquilibriumMode::ClosedLoop, 1000).unwrap();
        for (o, cl) in open.values.iter().zip(&closed.values) {
            assert!(o + 1e-12 >= *cl, "open-loop curve fell below closed-loop");
        }
    }

    let rate = |n: usize, mode| {
        effective_rate_limit(&with(|p| p.n_banks = n), mode).unwrap()
    };
    let mut prev = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for n in [2usize, 5, 10, 50, 200] {
        let open = rate(n, EquilibriumMode::OpenLoop);
        let closed = rate(n, EquilibriumMode::ClosedLoop);
        assert!(open > closed, "rate ordering failed at N = {n}");
        assert!(open > prev.0 && closed > prev.1, "rates not increasing at N = {n}");
        prev = (open, closed);
    }
    let mfg = effective_rate_limit(&base(), EquilibriumMode::MeanFieldGame).unwrap();
    let mfg_err = (mfg - 13.0f64.sqrt()).abs();

    // Error of the stationary Riccati level against its mean-field limit:
    // halving checks the 1/N² (closed) and 1/N (open) rates.
    let bar_limit = eta_limit(&base(), EquilibriumMode::MeanFieldGame).unwrap();
    let mut ratios = Vec::new();
    for (mode, expected) in [
        (EquilibriumMode::ClosedLoop, 4.0),
        (EquilibriumMode::OpenLoop, 2.0),
    ] {
        let err = |n: usize| {
            (eta_limit(&with(|p| p.n_banks = n), mode).unwrap() - bar_limit).abs()
        };
        let (e10, e20, e40) = (err(10), err(20), err(40));
        for ratio in [e10 / e20, e20 / e40] {
            assert!(
                (ratio - expected).abs() <= 0.15 * expected,
                "{mode} doubling ratio {ratio} not within 15% of {expected}"
            );
            ratios.push(ratio);
        }
    }
    check(
        mfg_err <= 1e-10,
        format!(
            "09 ordering and limits: mean-field rate vs sqrt(13) err {mfg_err:.2e} (tol 1e-10); \
             doubling ratios {ratios:.3?} vs [4, 4, 2, 2] +-15%"
        ),
    );
}

/// 10 — the per-bank log systemic probability without common noise converges
/// monotonically from above to the rate D²/(2σ²T) = 0.245 as N grows.
#[test]
fn a10_large_deviation_rate_convergence() {
    let rate = large_deviation_rate(&base()).unwrap();
    let r = |n: usize| {
        let params = with(|p| p.n_banks = n);
        -systemic_prob_log(&params) / n as f64
    };
    let (r2, r3, r4) = (r(100), r(1000), r(10_000));
    let gap = r4 - rate;
    check(
        r2 > r3 && r3 > r4 && r4 > rate && gap < 0.02,
        format!(
            "10 large-deviation convergence: r(100)={r2:.6} > r(1000)={r3:.6} > \
             r(10000)={r4:.6} > {rate:.3}, final gap {gap:.2e} (tol 0.02)"
        ),
    );
}
