use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentKind, Resolved, Target};
use super::{chernoff_half_width, HARNESS_DRAW_BUDGET};
use crate::boolfn::{
    make_junta, make_parity, realize_accept, realize_reject, AcceptInstance, JuntaSpec,
    RejectInstance, SubsetMask, TruthTable, VarSet,
};
use crate::error::{Error, Result};
use crate::learning::{hypothesis_error, influential_query_count, learn_junta, max_ex_draws};
use crate::oracles::{derive_seed, ExampleOracle, FsOracle, RngStream};
use crate::stats::chi_square_gof;
use crate::testing::{
    collision_distinguisher, feature_histogram, histogram_tv, junta_test, sample_scenario,
    scenario_distinguisher, scenario_query_count, tester_query_count, Decision, Family, Scenario,
    TranscriptFeatures,
};

/// Seed of trial `trial`: `derive_seed(master, kind name, trial)`.
pub fn trial_seed(master: u64, kind: ExperimentKind, trial: usize) -> u64 {
    derive_seed(master, kind.name(), trial as u64)
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    /// Kind-specific fields, in the order of [`columns`].
    pub fields: Vec<String>,
    /// The `[0,1]`-valued quantity averaged into the summary.
    pub outcome: f64,
    pub wall_time_ms: f64,
}

/// Kind-specific CSV columns between `seed` and `outcome`.
pub fn columns(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::TestJunta => &["decision", "queries", "exposed"],
        ExperimentKind::LearnJunta => &[
            "status",
            "vars_found",
            "fs_calls",
            "ex_calls",
            "encountered",
            "error",
        ],
        ExperimentKind::LbCollision => &[
            "accept_decision",
            "accept_collisions",
            "accept_inconsistent",
            "reject_decision",
            "reject_collisions",
            "reject_inconsistent",
        ],
        ExperimentKind::LbTv => &[
            "accept_collisions",
            "accept_inconsistent",
            "reject_collisions",
            "reject_inconsistent",
        ],
        ExperimentKind::Scenario => &["guess_i", "guess_ii"],
        ExperimentKind::FsDist => &["statistic", "dof", "p_value"],
    }
}

/// Name of the summary's headline metric, the mean of `outcome`.
pub fn metric_name(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::TestJunta => "accept_rate",
        ExperimentKind::LearnJunta => "mean_error",
        ExperimentKind::LbCollision | ExperimentKind::Scenario => "success_rate",
        ExperimentKind::LbTv => "features_differ_rate",
        ExperimentKind::FsDist => "pass_rate",
    }
}

pub fn header(kind: ExperimentKind) -> Vec<&'static str> {
    let mut h = vec!["trial", "seed"];
    h.extend_from_slice(columns(kind));
    h.extend_from_slice(&["outcome", "wall_time_ms"]);
    h
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub trials: usize,
    pub metric: String,
    pub mean: f64,
    pub delta: f64,
    pub half_width: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Further rates and means, keyed by name.
    pub extra: BTreeMap<String, f64>,
    pub params: Resolved,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<TrialRecord>,
    pub summary: Summary,
}

/// Upper estimate of the oracle draws an experiment makes.
pub fn estimated_draws(res: &Resolved) -> Result<u128> {
    let per_trial: u128 = match res.kind {
        ExperimentKind::TestJunta => tester_query_count(res.k, res.eps)? as u128,
        ExperimentKind::LearnJunta => {
            influential_query_count(res.k, res.eps)? as u128
                + max_ex_draws(res.k, res.eps, res.big_c)? as u128
        }
        ExperimentKind::LbCollision | ExperimentKind::LbTv => 2 * res.draws as u128,
        ExperimentKind::Scenario => 2 * scenario_query_count(res.k, res.c)? as u128,
        ExperimentKind::FsDist => res.fs_draws as u128,
    };
    Ok(per_trial * res.trials as u128)
}

fn stream(seed: u64, label: &str) -> RngStream {
    RngStream::new(seed, label, 0)
}

fn random_vars(n: usize, count: usize, rng: &mut RngStream) -> VarSet {
    VarSet::from_unsorted(sample(rng, n, count).into_vec())
}

fn features_fields(f: &TranscriptFeatures) -> [String; 2] {
    [f.collisions.to_string(), f.inconsistent.to_string()]
}

/// Runs a single trial. Depends only on the resolved parameters and the index.
pub fn run_trial(res: &Resolved, trial: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let seed = trial_seed(res.seed, res.kind, trial);
    let mut inst = stream(seed, "instance");
    let (fields, outcome): (Vec<String>, f64) = match res.kind {
        ExperimentKind::TestJunta => {
            let fs_rng = stream(seed, "fs");
            let mut fs = match res.target {
                Target::Junta => {
                    FsOracle::from_junta(&JuntaSpec::random(res.n, res.k, &mut inst)?, fs_rng)
                }
                Target::Parity => {
                    FsOracle::parity(res.n, random_vars(res.n, res.k + 1, &mut inst), fs_rng)?
                }
                Target::Reject => {
                    FsOracle::reject(&RejectInstance::random(res.r, res.n, &mut inst)?, fs_rng)
                }
                Target::Accept => {
                    FsOracle::accept(&AcceptInstance::random(res.r, res.n, &mut inst)?, fs_rng)
                }
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "target `{}` not supported by test-junta",
                        other.name()
                    )))
                }
            };
            let v = junta_test(&mut fs, res.k, res.eps)?;
            let accepted = v.decision == Decision::Accept;
            (
                vec![
                    v.decision.as_str().to_string(),
                    v.queries_used.to_string(),
                    v.exposed.len().to_string(),
                ],
                if accepted { 1.0 } else { 0.0 },
            )
        }
        ExperimentKind::LearnJunta => {
            let spec = match res.target {
                Target::Parity => {
                    let vars = random_vars(res.n, res.k, &mut inst);
                    let inner = make_parity(res.k, SubsetMask::full(res.k))?;
                    JuntaSpec::new(res.n, vars.as_slice().to_vec(), inner)?
                }
                _ => JuntaSpec::random(res.n, res.k, &mut inst)?,
            };
            let table = Arc::new(make_junta(&spec)?);
            let mut fs = FsOracle::from_junta(&spec, stream(seed, "fs"));
            let mut ex = ExampleOracle::new(Arc::clone(&table), stream(seed, "ex"));
            let cap = max_ex_draws(res.k, res.eps, res.big_c)?;
            let report = learn_junta(&mut fs, &mut ex, res.k, res.eps, cap)?;
            let err = hypothesis_error(&table, &report.hypothesis)?;
            let err_f = *err.numer() as f64 / *err.denom() as f64;
            let enc = report.encountered_fraction;
            (
                vec![
                    report.status.as_str().to_string(),
                    report.hypothesis.vars().len().to_string(),
                    report.fs_calls.to_string(),
                    report.ex_calls.to_string(),
                    (*enc.numer() as f64 / *enc.denom() as f64).to_string(),
                    err_f.to_string(),
                ],
                err_f,
            )
        }
        ExperimentKind::LbCollision | ExperimentKind::LbTv => {
            let mut outcomes = Vec::with_capacity(2);
            for family in [Family::Accept, Family::Reject] {
                let label = format!("fs-{}", family.as_str());
                let mut fs = family.sample_oracle(res.r, res.n, &mut inst, stream(seed, &label))?;
                outcomes.push((family, collision_distinguisher(&mut fs, res.r, res.draws)?));
            }
            let (_, a) = &outcomes[0];
            let (_, b) = &outcomes[1];
            if res.kind == ExperimentKind::LbCollision {
                let correct = outcomes
                    .iter()
                    .filter(|(fam, o)| o.decision == fam.expected())
                    .count();
                let mut fields = vec![a.decision.as_str().to_string()];
                fields.extend(features_fields(&a.features));
                fields.push(b.decision.as_str().to_string());
                fields.extend(features_fields(&b.features));
                (fields, correct as f64 / 2.0)
            } else {
                let mut fields = features_fields(&a.features).to_vec();
                fields.extend(features_fields(&b.features));
                (fields, if a.features != b.features { 1.0 } else { 0.0 })
            }
        }
        ExperimentKind::Scenario => {
            let mut guesses = Vec::with_capacity(2);
            for which in [Scenario::I, Scenario::II] {
                let sf = sample_scenario(which, res.k, res.n, &mut inst)?;
                let label = format!("fs-{which}");
                let mut fs = FsOracle::from_junta(&sf.spec, stream(seed, &label));
                guesses.push((which, scenario_distinguisher(&mut fs, res.k, res.c)?));
            }
            let correct = guesses.iter().filter(|(w, g)| w == g).count();
            (
                guesses.iter().map(|(_, g)| g.to_string()).collect(),
                correct as f64 / 2.0,
            )
        }
        ExperimentKind::FsDist => {
            let table = fs_dist_table(res, &mut inst)?;
            let mut fs = FsOracle::from_table(&table, stream(seed, "fs"));
            let dist = fs.distribution().expect("table oracle has a distribution");
            let total: u64 = dist.iter().map(|&(_, w)| w).sum();
            let index: HashMap<u32, usize> = dist
                .iter()
                .enumerate()
                .map(|(i, &(m, _))| (m.bits(), i))
                .collect();
            let mut observed = vec![0u64; dist.len()];
            for _ in 0..res.fs_draws {
                let m = fs.draw_mask()?;
                observed[index[&m.bits()]] += 1;
            }
            let probs: Vec<f64> = dist.iter().map(|&(_, w)| w as f64 / total as f64).collect();
            let chi = chi_square_gof(&observed, &probs)?;
            (
                vec![
                    chi.statistic.to_string(),
                    chi.dof.to_string(),
                    chi.p_value.to_string(),
                ],
                if chi.p_value >= res.alpha { 1.0 } else { 0.0 },
            )
        }
    };
    Ok(TrialRecord {
        trial,
        seed,
        fields,
        outcome,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn fs_dist_table(res: &Resolved, inst: &mut RngStream) -> Result<TruthTable> {
    match res.target {
        Target::And2 => TruthTable::from_values(2, vec![1, 1, 1, -1]),
        Target::Random => TruthTable::random(res.n, inst),
        Target::Junta => make_junta(&JuntaSpec::random(res.n, res.k, inst)?),
        Target::Parity => {
            let vars = random_vars(res.n, res.k, inst);
            make_parity(res.n, vars.to_mask().expect("n is at most 24"))
        }
        Target::Reject => realize_reject(&RejectInstance::random(res.r, res.n, inst)?),
        Target::Accept => realize_accept(&AcceptInstance::random(res.r, res.n, inst)?),
    }
}

fn summarize(res: &Resolved, rows: &[TrialRecord]) -> Result<Summary> {
    let m = rows.len();
    let mean = rows.iter().map(|r| r.outcome).sum::<f64>() / m as f64;
    let half_width = chernoff_half_width(m, res.delta)?;
    let col = |name: &str| columns(res.kind).iter().position(|c| *c == name).unwrap();
    let rate = |pred: &dyn Fn(&TrialRecord) -> bool| {
        rows.iter().filter(|r| pred(r)).count() as f64 / m as f64
    };
    let mean_of = |name: &str| {
        let i = col(name);
        rows.iter()
            .map(|r| r.fields[i].parse::<f64>().unwrap_or(f64::NAN))
            .sum::<f64>()
            / m as f64
    };
    let mut extra = BTreeMap::new();
    match res.kind {
        ExperimentKind::TestJunta => {
            let d = col("decision");
            extra.insert("reject_rate".into(), rate(&|r| r.fields[d] == "reject"));
            extra.insert("mean_queries".into(), mean_of("queries"));
        }
        ExperimentKind::LearnJunta => {
            let e = col("error");
            let s = col("status");
            let eps = res.eps;
            extra.insert(
                "within_eps_rate".into(),
                rate(&|r| r.fields[e].parse::<f64>().is_ok_and(|x| x <= eps)),
            );
            extra.insert(
                "success_status_rate".into(),
                rate(&|r| r.fields[s] == "success"),
            );
            extra.insert("mean_fs_calls".into(), mean_of("fs_calls"));
            extra.insert("mean_ex_calls".into(), mean_of("ex_calls"));
        }
        ExperimentKind::LbCollision => {
            let a = col("accept_decision");
            let b = col("reject_decision");
            extra.insert(
                "accept_correct_rate".into(),
                rate(&|r| r.fields[a] == "accept"),
            );
            extra.insert(
                "reject_correct_rate".into(),
                rate(&|r| r.fields[b] == "reject"),
            );
            extra.insert(
                "accept_parity_violations".into(),
                mean_of("accept_inconsistent") * m as f64,
            );
        }
        ExperimentKind::LbTv => {
            let feats = |prefix: &str| -> Vec<TranscriptFeatures> {
                let c = col(&format!("{prefix}_collisions"));
                let i = col(&format!("{prefix}_inconsistent"));
                rows.iter()
                    .map(|r| TranscriptFeatures {
                        collisions: r.fields[c].parse().unwrap_or(0),
                        inconsistent: r.fields[i].parse().unwrap_or(0),
                    })
                    .collect()
            };
            let (fa, fb) = (feats("accept"), feats("reject"));
            let tv = histogram_tv(&feature_histogram(&fa), &feature_histogram(&fb), m);
            extra.insert("tv_lower_bound".into(), tv);
            extra.insert(
                "accept_parity_violations".into(),
                fa.iter().map(|f| f.inconsistent).sum::<usize>() as f64,
            );
        }
        ExperimentKind::Scenario => {
            let a = col("guess_i");
            let b = col("guess_ii");
            extra.insert(
                "scenario_i_correct_rate".into(),
                rate(&|r| r.fields[a] == "I"),
            );
            extra.insert(
                "scenario_ii_correct_rate".into(),
                rate(&|r| r.fields[b] == "II"),
            );
        }
        ExperimentKind::FsDist => {
            extra.insert("mean_p_value".into(), mean_of("p_value"));
        }
    }
    Ok(Summary {
        kind: res.kind,
        seed: res.seed,
        trials: m,
        metric: metric_name(res.kind).to_string(),
        mean,
        delta: res.delta,
        half_width,
        ci_low: (mean - half_width).max(0.0),
        ci_high: (mean + half_width).min(1.0),
        extra,
        params: res.clone(),
    })
}

/// Runs every trial and builds the summary without touching the filesystem.
///
/// `threads = Some(1)` runs sequentially; otherwise trials fan out over a
/// rayon pool. Rows come back ordered by trial index either way.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let res = cfg.resolve()?;
    let needed = estimated_draws(&res)?;
    if needed > HARNESS_DRAW_BUDGET {
        return Err(Error::BudgetExceeded {
            needed,
            budget: HARNESS_DRAW_BUDGET,
        });
    }
    let rows: Vec<TrialRecord> = match cfg.threads {
        Some(1) => (0..res.trials)
            .map(|t| run_trial(&res, t))
            .collect::<Result<_>>()?,
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(|| {
                (0..res.trials)
                    .into_par_iter()
                    .map(|i| run_trial(&res, i))
                    .collect::<Result<_>>()
            })?,
        None => (0..res.trials)
            .into_par_iter()
            .map(|i| run_trial(&res, i))
            .collect::<Result<_>>()?,
    };
    let summary = summarize(&res, &rows)?;
    Ok(ExperimentOutput { rows, summary })
}

pub fn write_csv<W: Write>(out: &ExperimentOutput, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    wr.write_record(header(out.summary.kind)).map_err(csv_err)?;
    for row in &out.rows {
        let mut rec = vec![row.trial.to_string(), row.seed.to_string()];
        rec.extend(row.fields.iter().cloned());
        rec.push(row.outcome.to_string());
        rec.push(format!("{:.3}", row.wall_time_ms));
        wr.write_record(&rec).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn summary_json(summary: &Summary) -> String {
    serde_json::to_string_pretty(summary).expect("summary serializes") + "\n"
}

/// Sidecar path for the summary: the CSV path with extension `summary.json`.
pub fn summary_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("summary.json")
}

/// Runs the experiment and, when `cfg.out` is set, writes the CSV rows there
/// and the summary next to it (see [`summary_path`]).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let out = run_trials(cfg)?;
    if let Some(path) = &cfg.out {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        write_csv(&out, file)?;
        std::fs::write(summary_path(path), summary_json(&out.summary))?;
    }
    Ok(out)
}
