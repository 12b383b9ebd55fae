//! Named experiments: each emits a fixed set of CSV files plus a manifest
//! with a SHA-256 hash per file, all byte-reproducible for a given seed.

use std::path::Path;

use sha2::{Digest, Sha256};

use interbank::config::ParamPatch;
use interbank::csv_io::{bool_cell, float_cell, int_cell, render_csv};
use interbank::equilibrium::{
    control_gain, effective_rate, effective_rate_limit, expected_sq_deviation_curve,
    value_function, value_time0,
};
use interbank::model::{EquilibriumMode, ModelParams};
use interbank::riccati::{closed_form_solution, eta_limit};
use interbank::risk::{
    binomial_pmf, large_deviation_rate, single_default_prob, systemic_prob,
    systemic_prob_limit, LossHistogram,
};
use interbank::simulate::{
    euler_simulate, generate_noise, summarize_paths, PathEnsemble, PolicySpec,
};

use crate::{CliError, ParamFlags};

const MODES: [(EquilibriumMode, &str); 3] = [
    (EquilibriumMode::OpenLoop, "open"),
    (EquilibriumMode::ClosedLoop, "closed"),
    (EquilibriumMode::MeanFieldGame, "mfg"),
];

/// Population sizes scanned by the value and rate comparisons.
const VALUE_SCAN: [usize; 7] = [2, 5, 10, 20, 50, 100, 200];
const RATE_SCAN: [usize; 9] = [2, 5, 10, 20, 50, 100, 200, 500, 1000];
/// Correlations tabulated by the common-noise experiment.
const RHO_SCAN: [f64; 4] = [0.0, 0.2, 0.5, 0.9];
/// Population sizes tabulated by the common-noise experiment.
const N_SCAN: [usize; 4] = [10, 100, 1000, 10_000];
/// Output grid for analytic curves.
const CURVE_POINTS: usize = 1000;

/// Collects (name, bytes) pairs, then writes them plus `manifest.csv`.
struct Emitter {
    files: Vec<(String, String)>,
}

impl Emitter {
    fn new() -> Self {
        Emitter { files: Vec::new() }
    }

    fn emit(&mut self, name: impl Into<String>, content: String) {
        self.files.push((name.into(), content));
    }

    fn finish(
        self,
        out_dir: &Path,
        experiment: &str,
        params: &ModelParams,
        seed: u64,
        dt: f64,
        paths: usize,
        policy: Option<PolicySpec>,
    ) -> Result<(), CliError> {
        std::fs::create_dir_all(out_dir)?;
        let mut manifest_rows: Vec<Vec<String>> = vec![
            vec!["experiment".into(), experiment.into()],
            vec!["version".into(), env!("CARGO_PKG_VERSION").into()],
            vec!["seed".into(), seed.to_string()],
            vec!["dt".into(), float_cell(dt)],
            vec!["paths".into(), paths.to_string()],
            vec![
                "policy".into(),
                policy.map(|p| p.to_string()).unwrap_or_default(),
            ],
            vec!["n_banks".into(), params.n_banks.to_string()],
            vec!["a".into(), float_cell(params.a)],
            vec!["q".into(), float_cell(params.q)],
            vec!["epsilon".into(), float_cell(params.epsilon)],
            vec!["c".into(), float_cell(params.c)],
            vec!["sigma".into(), float_cell(params.sigma)],
            vec!["rho".into(), float_cell(params.rho)],
            vec!["horizon".into(), float_cell(params.horizon)],
            vec!["default_level".into(), float_cell(params.default_level)],
        ];
        for (name, content) in &self.files {
            std::fs::write(out_dir.join(name), content)?;
            let hash = Sha256::digest(content.as_bytes());
            manifest_rows.push(vec![format!("sha256:{name}"), format!("{hash:x}")]);
        }
        let manifest = render_csv(&["key", "value"], &manifest_rows);
        std::fs::write(out_dir.join("manifest.csv"), manifest)?;
        Ok(())
    }
}

/// Built-in parameter presets applied before config files and flags.
fn preset(experiment: &str) -> ParamPatch {
    match experiment {
        // One realization of strongly coupled banks.
        "trajectories" => ParamPatch { a: Some(10.0), ..ParamPatch::default() },
        // Long-horizon stationary level needs the small running penalty.
        "eta-horizon" => ParamPatch { epsilon: Some(2.0), ..ParamPatch::default() },
        _ => ParamPatch::default(),
    }
}

fn resolve_dt(params: &ModelParams, dt_flag: Option<f64>) -> Result<f64, CliError> {
    let dt = dt_flag.unwrap_or(1e-4 * params.horizon);
    if !(dt.is_finite() && dt > 0.0 && dt <= params.horizon) {
        return Err(CliError::Validation(format!(
            "dt must lie in (0, horizon]; got {dt}"
        )));
    }
    Ok(dt)
}

fn steps_for(params: &ModelParams, dt: f64) -> usize {
    ((params.horizon / dt).round() as usize).max(1)
}

pub fn run(
    experiment: &str,
    out_dir: &Path,
    seed: u64,
    dt_flag: Option<f64>,
    paths: usize,
    policy_flag: Option<&str>,
    flags: &ParamFlags,
) -> Result<(), CliError> {
    let params = flags.resolve(preset(experiment))?;
    let dt = resolve_dt(&params, dt_flag)?;
    let policy = policy_flag
        .map(|token| token.parse::<PolicySpec>().map_err(CliError::Validation))
        .transpose()?;

    let mut emitter = Emitter::new();
    let used_policy = match experiment {
        "trajectories" => Some(trajectories(&mut emitter, &params, seed, dt, policy)?),
        "loss-dist" => {
            loss_dist(&mut emitter, &params, seed, dt, paths)?;
            None
        }
        "common-noise" => {
            common_noise(&mut emitter, &params)?;
            None
        }
        "riccati-compare" => {
            riccati_compare(&mut emitter, &params)?;
            None
        }
        "value-compare" => {
            value_compare(&mut emitter, &params)?;
            None
        }
        "eta-horizon" => {
            eta_horizon(&mut emitter, &params)?;
            None
        }
        "effective-rate-scan" => {
            effective_rate_scan(&mut emitter, &params)?;
            None
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown experiment '{other}' (expected trajectories, loss-dist, \
                 common-noise, riccati-compare, value-compare, eta-horizon, or \
                 effective-rate-scan)"
            )))
        }
    };
    emitter.finish(out_dir, experiment, &params, seed, dt, paths, used_policy)
}

/// CSV dump of one ensemble: `t,x1,…,xN,mean`.
fn ensemble_csv(ensemble: &PathEnsemble) -> String {
    let n = ensemble.states.len();
    let mut header: Vec<String> = Vec::with_capacity(n + 2);
    header.push("t".into());
    for i in 1..=n {
        header.push(format!("x{i}"));
    }
    header.push("mean".into());
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();

    let rows: Vec<Vec<String>> = (0..ensemble.time_grid.len())
        .map(|k| {
            let mut row = Vec::with_capacity(n + 2);
            row.push(float_cell(ensemble.time_grid[k]));
            for path in &ensemble.states {
                row.push(float_cell(path[k]));
            }
            row.push(float_cell(ensemble.mean_path[k]));
            row
        })
        .collect();
    render_csv(&header_refs, &rows)
}

/// One noise realization dumped three ways under common random numbers:
/// the chosen policy (default: uncontrolled lending), isolated banks, and
/// the same dynamics with a common-noise component.
fn trajectories(
    emitter: &mut Emitter,
    params: &ModelParams,
    seed: u64,
    dt: f64,
    policy: Option<PolicySpec>,
) -> Result<PolicySpec, CliError> {
    let policy = policy.unwrap_or(PolicySpec::Uncontrolled);
    let n_steps = steps_for(params, dt);
    let noise = generate_noise(seed, params.n_banks, n_steps, dt);
    let initial = vec![0.0; params.n_banks];

    let coupled = euler_simulate(params, policy, &initial, &noise)?;
    emitter.emit("trajectories_coupled.csv", ensemble_csv(&coupled));

    let independent = euler_simulate(params, PolicySpec::Independent, &initial, &noise)?;
    emitter.emit("trajectories_independent.csv", ensemble_csv(&independent));

    let rho = if params.rho != 0.0 { params.rho } else { 0.5 };
    let correlated_params = ModelParams { rho, ..*params }
        .validate()
        .map_err(CliError::validation)?;
    let correlated = euler_simulate(&correlated_params, policy, &initial, &noise)?;
    emitter.emit("trajectories_correlated.csv", ensemble_csv(&correlated));
    Ok(policy)
}

fn histogram_csv(hist: &LossHistogram) -> String {
    let freqs = hist.frequencies();
    let tails = hist.tail_frequencies();
    let ref_tail = hist.reference_tail();
    let rows: Vec<Vec<String>> = (0..hist.counts.len())
        .map(|k| {
            vec![
                int_cell(k as u64),
                int_cell(hist.counts[k]),
                float_cell(freqs[k]),
                hist.reference
                    .as_ref()
                    .map(|r| float_cell(r[k]))
                    .unwrap_or_default(),
                float_cell(tails[k]),
                ref_tail.as_ref().map(|r| float_cell(r[k])).unwrap_or_default(),
            ]
        })
        .collect();
    render_csv(
        &["k", "count", "frequency", "reference_pmf", "tail_frequency", "reference_tail"],
        &rows,
    )
}

/// Loss distributions at lending strengths a ∈ {0, 10, 100}; the a = 0 run
/// uses isolated banks and carries the Binomial reference.
fn loss_dist(
    emitter: &mut Emitter,
    params: &ModelParams,
    seed: u64,
    dt: f64,
    paths: usize,
) -> Result<(), CliError> {
    let n_steps = steps_for(params, dt);
    let initial = vec![0.0; params.n_banks];
    for (tag, a, policy) in [
        ("a0", 0.0, PolicySpec::Independent),
        ("a10", 10.0, PolicySpec::Uncontrolled),
        ("a100", 100.0, PolicySpec::Uncontrolled),
    ] {
        let p = ModelParams { a, ..*params }
            .validate()
            .map_err(CliError::validation)?;
        let summaries = summarize_paths(&p, policy, &initial, dt, n_steps, seed, paths)?;
        let mut hist = LossHistogram::from_summaries(&p, policy, seed, &summaries);
        // Coupled runs get the no-lending Binomial attached as the
        // comparison overlay (p does not depend on the lending rate).
        if hist.reference.is_none() {
            hist.reference = Some(binomial_pmf(p.n_banks, single_default_prob(&p)));
        }
        emitter.emit(format!("loss_dist_{tag}.csv"), histogram_csv(&hist));

        let rows: Vec<Vec<String>> = summaries
            .iter()
            .map(|s| {
                vec![
                    int_cell(s.path_index),
                    int_cell(s.n_defaults as u64),
                    bool_cell(s.mean_hit),
                    float_cell(s.min_mean),
                ]
            })
            .collect();
        emitter.emit(
            format!("summaries_{tag}.csv"),
            render_csv(&["path_id", "n_defaults", "mean_hit", "min_mean"], &rows),
        );
    }
    Ok(())
}

/// Analytic systemic-risk scaling: one `N,analytic,limit,ld_rate` table per
/// correlation (the rate column is defined only for ρ = 0).
fn common_noise(emitter: &mut Emitter, params: &ModelParams) -> Result<(), CliError> {
    for rho in RHO_SCAN {
        let rows: Vec<Vec<String>> = N_SCAN
            .iter()
            .map(|&n| {
                let p = ModelParams { n_banks: n, rho, ..*params }
                    .validate()
                    .map_err(CliError::validation)?;
                Ok(vec![
                    int_cell(n as u64),
                    float_cell(systemic_prob(&p)),
                    float_cell(systemic_prob_limit(&p)),
                    large_deviation_rate(&p)
                        .map(float_cell)
                        .unwrap_or_default(),
                ])
            })
            .collect::<Result<_, CliError>>()?;
        emitter.emit(
            format!("common_noise_rho{rho}.csv"),
            render_csv(&["N", "analytic", "limit", "ld_rate"], &rows),
        );
    }
    Ok(())
}

fn curve_csv(header: &[&str], points: &[(f64, f64)]) -> String {
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|&(t, v)| vec![float_cell(t), float_cell(v)])
        .collect();
    render_csv(header, &rows)
}

/// Open- vs closed-loop Riccati coefficients for c ∈ {0, 1}.
fn riccati_compare(emitter: &mut Emitter, params: &ModelParams) -> Result<(), CliError> {
    for c in [0.0, 1.0] {
        let p = ModelParams { c, ..*params }
            .validate()
            .map_err(CliError::validation)?;
        for (mode, tag) in &MODES[..2] {
            let sol = closed_form_solution(&p, *mode, CURVE_POINTS)?;
            let points: Vec<(f64, f64)> = sol
                .grid
                .iter()
                .cloned()
                .zip(sol.values.iter().cloned())
                .collect();
            emitter.emit(
                format!("riccati_{tag}_c{c:.0}.csv"),
                curve_csv(&["t", "eta"], &points),
            );
        }
    }
    Ok(())
}

/// Time-0 values over the population size (open/closed with the mean-field
/// asymptote), plus gain/rate and deviation/value time series at the base
/// population size.
fn value_compare(emitter: &mut Emitter, params: &ModelParams) -> Result<(), CliError> {
    let mfg_value = value_time0(0.0, params, EquilibriumMode::MeanFieldGame)?;
    let rows: Vec<Vec<String>> = VALUE_SCAN
        .iter()
        .map(|&n| {
            let p = ModelParams { n_banks: n, ..*params }
                .validate()
                .map_err(CliError::validation)?;
            Ok(vec![
                int_cell(n as u64),
                float_cell(value_time0(0.0, &p, EquilibriumMode::OpenLoop)?),
                float_cell(value_time0(0.0, &p, EquilibriumMode::ClosedLoop)?),
                float_cell(mfg_value),
            ])
        })
        .collect::<Result<_, CliError>>()?;
    emitter.emit(
        "value_compare.csv",
        render_csv(&["N", "open_loop", "closed_loop", "mfg_limit"], &rows),
    );

    let grid: Vec<f64> = (0..=CURVE_POINTS)
        .map(|k| params.horizon * (k as f64 / CURVE_POINTS as f64))
        .collect();
    for (mode, tag) in MODES {
        let rows: Vec<Vec<String>> = grid
            .iter()
            .map(|&t| {
                Ok(vec![
                    float_cell(t),
                    float_cell(control_gain(t, params, mode)?),
                    float_cell(effective_rate(t, params, mode)?),
                ])
            })
            .collect::<Result<_, CliError>>()?;
        emitter.emit(
            format!("gain_{tag}.csv"),
            render_csv(&["t", "gain", "effective_rate"], &rows),
        );
    }
    // The ansatz value exists for the closed-loop and mean-field modes.
    for (mode, tag) in [(EquilibriumMode::ClosedLoop, "closed"), (EquilibriumMode::MeanFieldGame, "mfg")]
    {
        let curve = expected_sq_deviation_curve(params, mode, 0.0, CURVE_POINTS)?;
        let rows: Vec<Vec<String>> = curve
            .iter()
            .map(|&(t, e)| {
                Ok(vec![
                    float_cell(t),
                    float_cell(e),
                    float_cell(value_function(t, 0.0, params, mode)?),
                ])
            })
            .collect::<Result<_, CliError>>()?;
        emitter.emit(
            format!("deviation_value_{tag}.csv"),
            render_csv(&["t", "expected_sq_dev", "value"], &rows),
        );
    }
    Ok(())
}

/// Mean-field Riccati coefficient at horizons 1 and 100 with its
/// infinite-horizon level.
fn eta_horizon(emitter: &mut Emitter, params: &ModelParams) -> Result<(), CliError> {
    for horizon in [1.0, 100.0] {
        let p = ModelParams { horizon, ..*params }
            .validate()
            .map_err(CliError::validation)?;
        let sol = closed_form_solution(&p, EquilibriumMode::MeanFieldGame, CURVE_POINTS)?;
        let points: Vec<(f64, f64)> = sol
            .grid
            .iter()
            .cloned()
            .zip(sol.values.iter().cloned())
            .collect();
        emitter.emit(
            format!("eta_T{horizon:.0}.csv"),
            curve_csv(&["t", "eta"], &points),
        );
    }
    let bar = eta_limit(params, EquilibriumMode::MeanFieldGame)?;
    emitter.emit(
        "eta_bar.csv",
        render_csv(&["eta_bar"], &[vec![float_cell(bar)]]),
    );
    Ok(())
}

/// Long-horizon effective rate over the population size.
fn effective_rate_scan(emitter: &mut Emitter, params: &ModelParams) -> Result<(), CliError> {
    let mfg = effective_rate_limit(params, EquilibriumMode::MeanFieldGame)?;
    let rows: Vec<Vec<String>> = RATE_SCAN
        .iter()
        .map(|&n| {
            let p = ModelParams { n_banks: n, ..*params }
                .validate()
                .map_err(CliError::validation)?;
            Ok(vec![
                int_cell(n as u64),
                float_cell(effective_rate_limit(&p, EquilibriumMode::OpenLoop)?),
                float_cell(effective_rate_limit(&p, EquilibriumMode::ClosedLoop)?),
                float_cell(mfg),
            ])
        })
        .collect::<Result<_, CliError>>()?;
    emitter.emit(
        "effective_rate_scan.csv",
        render_csv(&["N", "open_loop", "closed_loop", "mfg_limit"], &rows),
    );
    Ok(())
}
