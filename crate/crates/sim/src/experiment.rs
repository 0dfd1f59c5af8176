//! Monte-Carlo sweeps.
//!
//! Every trial owns two RNG streams derived from the master seed, the sweep
//! point and the trial index: one draws the state and observables, the other
//! drives measurement and channel noise. Both are shared by all schemes at a
//! point, so schemes are compared on the same states. Trials run in
//! parallel and are reduced in index order, so results do not depend on the
//! thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use shadowlink_core::baselines::{cqcr_estimate, cqcr_roundtrip};
use shadowlink_core::harness::{
    derive_seed, match_budget, sample_observables, wilson_interval, BudgetContext, Scheme,
    SchemeTemplate, WeightMode,
};
use shadowlink_core::protocol::run_link;
use shadowlink_core::shadows::acquire;
use shadowlink_core::{ChannelSpec, Error, StateVector};

use crate::config::{ChannelSetting, ExperimentConfig, SchemeSpec, SweepKind};

/// One line of the results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scheme: String,
    pub sweep_value: f64,
    #[serde(rename = "B_actual")]
    pub bits_actual: usize,
    #[serde(rename = "N")]
    pub copies: usize,
    #[serde(rename = "P_succ")]
    pub p_succ: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub outage_rate: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// Payload bits actually put on the channel, CRC excluded.
    pub bits: usize,
    pub outage: bool,
    pub success: bool,
    pub max_abs_error: Option<f64>,
}

/// Everything a single trial needs besides its seeds.
#[derive(Debug, Clone, Copy)]
pub struct TrialSetup {
    pub n: usize,
    pub observables: usize,
    pub weights: WeightMode,
    pub epsilon: f64,
    pub scheme: Scheme,
    pub channel: ChannelSpec,
}

pub fn run_trial(setup: &TrialSetup, state_seed: u64, link_seed: u64) -> shadowlink_core::Result<TrialResult> {
    let mut state_rng = ChaCha8Rng::seed_from_u64(state_seed);
    let state = StateVector::haar_random(setup.n, &mut state_rng)?;
    let observables = sample_observables(setup.n, setup.observables, setup.weights, &mut state_rng)?;
    let truths = observables.iter().map(|o| state.expectation(o)).collect::<Result<Vec<_>, _>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(link_seed);
    if let Some(cqcr) = setup.scheme.cqcr_config(setup.channel) {
        let run = cqcr_roundtrip(&state, &cqcr?, &mut rng)?;
        let mut worst = 0.0f64;
        for (obs, truth) in observables.iter().zip(&truths) {
            worst = worst.max((cqcr_estimate(&run.state, obs)? - truth).abs());
        }
        return Ok(TrialResult {
            bits: run.budget,
            outage: false,
            success: worst <= setup.epsilon,
            max_abs_error: Some(worst),
        });
    }

    let cfg = setup.scheme.uep_config(setup.channel).expect("shadow scheme")?;
    let copies = setup.scheme.copies().expect("shadow scheme");
    let batch = acquire(&state, copies, &mut rng)?;
    let run = run_link(&batch, &cfg, &observables, &mut rng)?;
    let bits = run.budget.total();
    Ok(match run.report {
        None => TrialResult { bits, outage: true, success: false, max_abs_error: None },
        Some(mut report) => {
            let success = report.score(&truths, setup.epsilon)?;
            let worst = report
                .estimates()
                .zip(&truths)
                .map(|(e, t)| (e - t).abs())
                .fold(0.0, f64::max);
            TrialResult { bits, outage: false, success, max_abs_error: Some(worst) }
        }
    })
}

/// The channel at a sweep point.
pub fn channel_at(cfg: &ExperimentConfig, value: f64) -> shadowlink_core::Result<ChannelSpec> {
    match cfg.sweep {
        SweepKind::Crossover => ChannelSpec::bsc(value),
        SweepKind::SnrDb => ChannelSpec::from_snr_db(value, 1.0),
        _ => match cfg.channel {
            ChannelSetting::Crossover(p) => ChannelSpec::bsc(p),
            ChannelSetting::SnrDb(s) => ChannelSpec::from_snr_db(s, 1.0),
        },
    }
}

/// Fixes every parameter of `spec` at a sweep point. `Ok(None)` means no
/// configuration fits the requested budget.
pub fn resolve_scheme(
    cfg: &ExperimentConfig,
    spec: SchemeSpec,
    value: f64,
    channel: ChannelSpec,
) -> shadowlink_core::Result<Option<Scheme>> {
    let copies = match cfg.sweep {
        SweepKind::Copies => Some(value as usize),
        SweepKind::Budget => None,
        _ => cfg.copies,
    };
    let template = match spec {
        SchemeSpec::SttUep { outcome_code, basis_code } => {
            SchemeTemplate::SttUep { outcome_code, basis_code, copies }
        }
        SchemeSpec::SttCc { code } => SchemeTemplate::SttCc { code, copies },
        SchemeSpec::Cqcr { bits_per_amplitude, code } => SchemeTemplate::Cqcr { bits_per_amplitude, code },
    };
    if cfg.sweep != SweepKind::Budget {
        // every parameter is fixed; validation guarantees the codes are set
        return Ok(Some(match template {
            SchemeTemplate::SttUep { outcome_code, basis_code, copies } => Scheme::SttUep {
                outcome_code,
                basis_code: basis_code.expect("fixed"),
                copies: copies.expect("fixed"),
            },
            SchemeTemplate::SttCc { code, copies } => {
                Scheme::SttCc { code: code.expect("fixed"), copies: copies.expect("fixed") }
            }
            SchemeTemplate::Cqcr { bits_per_amplitude, code } => {
                Scheme::Cqcr { bits_per_amplitude, code: code.expect("fixed") }
            }
        }));
    }
    let ctx = BudgetContext { n: cfg.n, channel, code_grid: &cfg.code_grid, max_outage: cfg.max_outage };
    match match_budget(value as usize, template, &ctx) {
        Ok(m) => Ok(Some(m.scheme)),
        Err(Error::InfeasibleBudget { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs `trials` trials of `setup` at sweep point `point` and reduces them
/// to a row.
pub fn run_point(
    setup: &TrialSetup,
    label: String,
    sweep_value: f64,
    seed: u64,
    point: usize,
    trials: usize,
) -> shadowlink_core::Result<SweepRow> {
    let results: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let state_seed = derive_seed(seed, point as u64, t as u64);
            run_trial(setup, state_seed, derive_seed(state_seed, 1, 0))
        })
        .collect::<Result<_, _>>()?;
    let successes = results.iter().filter(|r| r.success).count();
    let outages = results.iter().filter(|r| r.outage).count();
    let (ci_low, ci_high) = wilson_interval(successes, trials);
    Ok(SweepRow {
        scheme: label,
        sweep_value,
        bits_actual: results.first().map_or(0, |r| r.bits),
        copies: setup.scheme.copies().unwrap_or(0),
        p_succ: successes as f64 / trials as f64,
        ci_low,
        ci_high,
        outage_rate: outages as f64 / trials as f64,
        trials,
        seed,
    })
}

/// Runs the whole sweep. Rows are ordered by curve, then sweep point.
pub fn run_experiment(cfg: &ExperimentConfig) -> anyhow::Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for spec in &cfg.schemes {
        for (mode, weight) in cfg.weights.modes() {
            let label = match weight {
                Some(w) => format!("{spec}/w={w}"),
                None => spec.to_string(),
            };
            for (point, &value) in cfg.sweep_values.iter().enumerate() {
                let channel = channel_at(cfg, value)?;
                let row = match resolve_scheme(cfg, *spec, value, channel)? {
                    Some(scheme) => {
                        let setup = TrialSetup {
                            n: cfg.n,
                            observables: cfg.observables,
                            weights: mode,
                            epsilon: cfg.epsilon,
                            scheme,
                            channel,
                        };
                        run_point(&setup, label.clone(), value, cfg.seed, point, cfg.trials)?
                    }
                    None => SweepRow {
                        scheme: label.clone(),
                        sweep_value: value,
                        bits_actual: 0,
                        copies: 0,
                        p_succ: 0.0,
                        ci_low: 0.0,
                        ci_high: 0.0,
                        outage_rate: 0.0,
                        trials: 0,
                        seed: cfg.seed,
                    },
                };
                rows.push(row);
            }
        }
    }
    Ok(rows)
}
