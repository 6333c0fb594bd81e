use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boolfn::{N_MAX, R_BITS_MAX};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    TestJunta,
    LearnJunta,
    LbCollision,
    LbTv,
    Scenario,
    FsDist,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::TestJunta,
        ExperimentKind::LearnJunta,
        ExperimentKind::LbCollision,
        ExperimentKind::LbTv,
        ExperimentKind::Scenario,
        ExperimentKind::FsDist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::TestJunta => "test-junta",
            ExperimentKind::LearnJunta => "learn-junta",
            ExperimentKind::LbCollision => "lb-collision",
            ExperimentKind::LbTv => "lb-tv",
            ExperimentKind::Scenario => "scenario",
            ExperimentKind::FsDist => "fs-dist",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown experiment kind `{s}`")))
    }
}

/// Function family a trial is run against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Uniformly random inner function on `k` random variables.
    Junta,
    /// Parity on random variables (`k+1` of them for test-junta, `k` for learn-junta).
    Parity,
    /// Addressing reject instance with `r` address bits.
    Reject,
    /// Addressing accept instance with `r` address bits.
    Accept,
    /// AND of the first two variables on `n = 2`.
    And2,
    /// Uniformly random function on `n` variables.
    Random,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Junta => "junta",
            Target::Parity => "parity",
            Target::Reject => "reject",
            Target::Accept => "accept",
            Target::And2 => "and2",
            Target::Random => "random",
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Target::Junta,
            Target::Parity,
            Target::Reject,
            Target::Accept,
            Target::And2,
            Target::Random,
        ]
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown target `{s}`")))
    }
}

/// Experiment description. Every parameter is optional; unset ones take the
/// per-kind defaults applied by [`ExperimentConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Failure probability for the reported two-sided Chernoff interval.
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub target: Option<Target>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub r: Option<usize>,
    #[serde(default)]
    pub eps: Option<f64>,
    /// Transcript length `N` for the lower-bound experiments.
    #[serde(default)]
    pub draws: Option<usize>,
    /// Scenario distinguisher constant.
    #[serde(default)]
    pub c: Option<f64>,
    /// Learner example-cap constant.
    #[serde(default)]
    pub big_c: Option<f64>,
    /// FS draws per trial for fs-dist.
    #[serde(default)]
    pub fs_draws: Option<u64>,
    /// Significance level for fs-dist.
    #[serde(default)]
    pub alpha: Option<f64>,
}

fn default_trials() -> usize {
    100
}

fn default_delta() -> f64 {
    0.05
}

/// Parameters after defaults and validation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub trials: usize,
    pub delta: f64,
    pub target: Target,
    pub k: usize,
    pub n: usize,
    pub r: usize,
    pub eps: f64,
    pub draws: usize,
    pub c: f64,
    pub big_c: f64,
    pub fs_draws: u64,
    pub alpha: f64,
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            seed: 0,
            trials: default_trials(),
            delta: default_delta(),
            out: None,
            threads: None,
            target: None,
            k: None,
            n: None,
            r: None,
            eps: None,
            draws: None,
            c: None,
            big_c: None,
            fs_draws: None,
            alpha: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fills defaults for the experiment kind and checks every bound.
    pub fn resolve(&self) -> Result<Resolved> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1".into()));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(invalid(format!("delta {} outside (0, 1]", self.delta)));
        }
        if self.threads == Some(0) {
            return Err(invalid("threads must be at least 1".into()));
        }
        let eps = self.eps.unwrap_or(0.1);
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(invalid(format!("eps {eps} outside (0, 1]")));
        }
        let alpha = self.alpha.unwrap_or(1e-3);
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(invalid(format!("alpha {alpha} outside (0, 1)")));
        }
        let c = self.c.unwrap_or(8.0);
        if c.is_nan() || c < 1.0 {
            return Err(invalid(format!("c {c} below 1")));
        }
        let big_c = self.big_c.unwrap_or(8.0);
        if big_c.is_nan() || big_c <= 0.0 {
            return Err(invalid(format!("big_c {big_c} must be positive")));
        }
        let check_r = |r: usize| -> Result<usize> {
            if r == 0 || r > R_BITS_MAX {
                return Err(invalid(format!("r = {r} outside 1..={R_BITS_MAX}")));
            }
            Ok(r)
        };
        let table_n = |n: usize| -> Result<usize> {
            if n == 0 {
                return Err(Error::NoVariables);
            }
            if n > N_MAX {
                return Err(Error::TooManyVariables { n, max: N_MAX });
            }
            Ok(n)
        };

        let mut res = Resolved {
            kind: self.kind,
            seed: self.seed,
            trials: self.trials,
            delta: self.delta,
            target: Target::Junta,
            k: 0,
            n: 0,
            r: 0,
            eps,
            draws: 0,
            c,
            big_c,
            fs_draws: self.fs_draws.unwrap_or(100_000),
            alpha,
        };

        match self.kind {
            ExperimentKind::TestJunta => {
                res.target = self.target.unwrap_or(Target::Junta);
                match res.target {
                    Target::Junta => {
                        res.k = self.k.unwrap_or(4);
                        res.n = table_n(self.n.unwrap_or(12))?;
                        if res.k > res.n {
                            return Err(invalid(format!("k = {} exceeds n = {}", res.k, res.n)));
                        }
                    }
                    Target::Parity => {
                        res.k = self.k.unwrap_or(4);
                        res.n = self.n.unwrap_or(res.k + 1);
                        if res.k + 1 > res.n {
                            return Err(invalid(format!(
                                "a (k+1)-parity needs n >= {}",
                                res.k + 1
                            )));
                        }
                    }
                    Target::Reject | Target::Accept => {
                        res.r = check_r(self.r.unwrap_or(5))?;
                        let big_r = 1usize << res.r;
                        res.k = self.k.unwrap_or(res.r + big_r / 2);
                        res.n = self.n.unwrap_or(res.r + big_r);
                        let min = if res.target == Target::Reject {
                            res.r + big_r
                        } else {
                            res.r + big_r / 2
                        };
                        if res.n < min {
                            return Err(invalid(format!("n must be at least {min}")));
                        }
                    }
                    other => {
                        return Err(invalid(format!(
                            "target `{}` not supported by test-junta",
                            other.name()
                        )))
                    }
                }
            }
            ExperimentKind::LearnJunta => {
                res.target = self.target.unwrap_or(Target::Junta);
                if !matches!(res.target, Target::Junta | Target::Parity) {
                    return Err(invalid(format!(
                        "target `{}` not supported by learn-junta",
                        res.target.name()
                    )));
                }
                res.k = self.k.unwrap_or(8);
                res.n = table_n(self.n.unwrap_or(20))?;
                if res.k == 0 || res.k > res.n || res.k > 20 {
                    return Err(invalid(format!("k = {} must lie in 1..=min(n, 20)", res.k)));
                }
            }
            ExperimentKind::LbCollision | ExperimentKind::LbTv => {
                res.target = Target::Reject;
                let (r_default, n_default) = if self.kind == ExperimentKind::LbCollision {
                    (7, 60)
                } else {
                    (9, 3)
                };
                res.r = check_r(self.r.unwrap_or(r_default))?;
                res.draws = self.draws.unwrap_or(n_default);
                if res.draws == 0 {
                    return Err(invalid("draws must be at least 1".into()));
                }
                res.n = self.n.unwrap_or(res.r + (1 << res.r));
                if res.n < res.r + (1 << res.r) {
                    return Err(invalid(format!(
                        "n must be at least r + R = {}",
                        res.r + (1 << res.r)
                    )));
                }
            }
            ExperimentKind::Scenario => {
                res.k = self.k.unwrap_or(14);
                res.n = table_n(self.n.unwrap_or(res.k + 1))?;
                if res.k + 1 > res.n {
                    return Err(invalid(format!("n must be at least k + 1 = {}", res.k + 1)));
                }
            }
            ExperimentKind::FsDist => {
                res.target = self.target.unwrap_or(Target::And2);
                match res.target {
                    Target::And2 => res.n = 2,
                    Target::Random => res.n = table_n(self.n.unwrap_or(6))?,
                    Target::Junta => {
                        res.n = table_n(self.n.unwrap_or(10))?;
                        res.k = self.k.unwrap_or(4);
                        if res.k > res.n {
                            return Err(invalid(format!("k = {} exceeds n = {}", res.k, res.n)));
                        }
                    }
                    Target::Reject => {
                        res.r = check_r(self.r.unwrap_or(2))?;
                        res.n = table_n(self.n.unwrap_or(res.r + (1 << res.r)))?;
                        if res.n < res.r + (1 << res.r) {
                            return Err(invalid("n must be at least r + R".into()));
                        }
                    }
                    Target::Accept => {
                        res.r = check_r(self.r.unwrap_or(2))?;
                        res.n = table_n(self.n.unwrap_or(res.r + (1 << res.r) / 2))?;
                        if res.n < res.r + (1 << res.r) / 2 {
                            return Err(invalid("n must be at least r + R/2".into()));
                        }
                    }
                    Target::Parity => {
                        res.n = table_n(self.n.unwrap_or(6))?;
                        res.k = self.k.unwrap_or(3);
                        if res.k > res.n {
                            return Err(invalid(format!("k = {} exceeds n = {}", res.k, res.n)));
                        }
                    }
                }
                if res.fs_draws == 0 {
                    return Err(invalid("fs_draws must be at least 1".into()));
                }
            }
        }
        Ok(res)
    }
}
