//! Experiment configuration and reproducible trial orchestration.
//!
//! Trial `t` of an experiment uses seed `derive_seed(master, kind, t)`, so a
//! single row can be replayed from the config and its index alone. Rows go to
//! CSV; the summary goes to a JSON sidecar. Wall-time is the only field that
//! varies between identical runs.

mod config;
mod run;

pub use config::{ExperimentConfig, ExperimentKind, Resolved, Target};
pub use run::{
    columns, estimated_draws, header, metric_name, run_experiment, run_trial, run_trials,
    summary_json, summary_path, trial_seed, write_csv, ExperimentOutput, Summary, TrialRecord,
};

use crate::error::{Error, Result};
use crate::stats::ceil_snapped;

/// Upper limit on the oracle draws of one experiment.
pub const HARNESS_DRAW_BUDGET: u128 = 10_000_000_000;

/// Process exit code for a harness error: 2 for configuration problems,
/// 3 for an exceeded budget, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Io(_) | Error::OracleFailure => 1,
        _ => 2,
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} outside (0, 1]"
        )));
    }
    Ok(())
}

/// Smallest `m` with `2 exp(-2 lambda^2 m) <= delta` for `[0,1]`-valued
/// outcomes: `ceil(ln(2/delta) / (2 lambda^2))`.
pub fn chernoff_trials(lambda: f64, delta: f64) -> Result<u64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda} outside (0, 1)"
        )));
    }
    check_delta(delta)?;
    Ok(ceil_snapped((2.0 / delta).ln() / (2.0 * lambda * lambda)))
}

/// Half-width `sqrt(ln(2/delta) / (2m))` of the two-sided interval around a
/// mean of `m` `[0,1]`-valued outcomes.
pub fn chernoff_half_width(m: usize, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    Ok(((2.0 / delta).ln() / (2.0 * m as f64)).sqrt())
}
