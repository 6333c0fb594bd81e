//! Two-stage junta learner: FS sampling finds the influential variables, then
//! uniform examples fill in a table over them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::boolfn::{project_index, Fraction, TruthTable};
use crate::error::{Error, Result};
use crate::oracles::{ExampleSource, FsOracle, LabeledExample};
use crate::stats::{ceil_snapped, check_eps};

/// Label emitted for assignments never seen in stage 2: True.
pub const UNSEEN_DEFAULT: i8 = -1;

/// A table over assignments to the variables `vars`. Cell `a` holds the label
/// of the first example whose projection onto `vars` was `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    vars: Vec<usize>,
    entries: Vec<Option<i8>>,
}

impl Hypothesis {
    /// All cells unseen. `vars` is sorted and deduplicated.
    pub fn unseen(mut vars: Vec<usize>) -> Result<Self> {
        vars.sort_unstable();
        vars.dedup();
        if vars.len() > 30 {
            return Err(Error::InvalidParameter(format!(
                "hypothesis over {} variables is too large",
                vars.len()
            )));
        }
        let entries = vec![None; 1 << vars.len()];
        Ok(Hypothesis { vars, entries })
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn entries(&self) -> &[Option<i8>] {
        &self.entries
    }

    pub fn cell_of(&self, x: usize) -> usize {
        project_index(x, &self.vars)
    }

    /// Stores the example's label if its cell is still empty. Returns whether
    /// the cell was newly filled.
    pub fn record(&mut self, ex: LabeledExample) -> bool {
        let cell = self.cell_of(ex.x);
        match self.entries[cell] {
            Some(_) => false,
            None => {
                self.entries[cell] = Some(ex.y);
                true
            }
        }
    }

    pub fn seen(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn encountered_fraction(&self) -> Fraction {
        Ratio::new(self.seen() as u64, self.entries.len() as u64)
    }

    #[inline]
    pub fn eval(&self, x: usize) -> i8 {
        self.entries[self.cell_of(x)].unwrap_or(UNSEEN_DEFAULT)
    }
}

/// Two lines: `A=<comma-separated indices>` then one of `+`, `-`, `?` per cell.
impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.vars.iter().map(|v| v.to_string()).collect();
        writeln!(f, "A={}", vars.join(","))?;
        let row: String = self
            .entries
            .iter()
            .map(|e| match e {
                Some(v) if *v < 0 => '-',
                Some(_) => '+',
                None => '?',
            })
            .collect();
        write!(f, "{row}")
    }
}

impl FromStr for Hypothesis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim);
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let list = header
            .strip_prefix("A=")
            .ok_or_else(|| Error::Parse(format!("expected `A=...`, got `{header}`")))?;
        let vars = if list.is_empty() {
            Vec::new()
        } else {
            list.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad index `{t}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        if vars.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("indices must be strictly increasing".into()));
        }
        let mut h = Hypothesis::unseen(vars)?;
        let row = lines.next().unwrap_or("");
        if row.chars().count() != h.entries.len() {
            return Err(Error::LengthMismatch {
                expected: h.entries.len(),
                actual: row.chars().count(),
            });
        }
        for (cell, c) in h.entries.iter_mut().zip(row.chars()) {
            *cell = match c {
                '+' => Some(1),
                '-' => Some(-1),
                '?' => None,
                other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
            };
        }
        Ok(h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnStatus {
    Success,
    /// Stage 1 exposed more than `k` variables, impossible for a true k-junta.
    StageOneOverflow,
    /// Stage 2 hit its example cap before covering enough assignments.
    StageTwoTimeout,
}

impl LearnStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LearnStatus::Success => "success",
            LearnStatus::StageOneOverflow => "stage_one_overflow",
            LearnStatus::StageTwoTimeout => "stage_two_timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerReport {
    pub hypothesis: Hypothesis,
    pub fs_calls: u64,
    pub ex_calls: u64,
    pub encountered_fraction: Fraction,
    pub status: LearnStatus,
}

/// Stage 1 draw count `ceil((10k/eps) ln(10k))`: the influence threshold is
/// `theta = eps/(10k)` and `(1-theta)^N <= exp(-theta N) <= 1/(10k)`.
pub fn influential_query_count(k: usize, eps: f64) -> Result<u64> {
    check_eps(eps)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let ten_k = 10.0 * k as f64;
    Ok(ceil_snapped(ten_k / eps * ten_k.ln()))
}

/// Stage 2 cap `ceil(c * 2^k * ln(max(1/eps, e)))`.
pub fn max_ex_draws(k: usize, eps: f64, c: f64) -> Result<u64> {
    check_eps(eps)?;
    if c.is_nan() || c <= 0.0 || k > 62 {
        return Err(Error::InvalidParameter(format!(
            "example cap needs c > 0 and k <= 62, got c = {c}, k = {k}"
        )));
    }
    let log_term = (1.0 / eps).ln().max(1.0);
    Ok(ceil_snapped(c * (1u64 << k) as f64 * log_term))
}

/// Default stage 2 cap, [`max_ex_draws`] with `c = 8`.
pub fn default_max_ex_draws(k: usize, eps: f64) -> Result<u64> {
    max_ex_draws(k, eps, 8.0)
}

/// Union of every variable returned by `influential_query_count(k, eps)` FS
/// draws. Every returned variable is relevant, since `f^(S) != 0` forces
/// each member of `S` to matter.
pub fn find_influential(fs: &mut FsOracle, k: usize, eps: f64) -> Result<BTreeSet<usize>> {
    let m = influential_query_count(k, eps)?;
    let mut found = BTreeSet::new();
    for _ in 0..m {
        found.extend(fs.draw()?.iter());
    }
    Ok(found)
}

/// Learns a promised k-junta to accuracy `eps`.
///
/// Stage 2 stops once at least a `1 - eps/3` fraction of assignments to the
/// stage 1 variables have been seen, or with [`LearnStatus::StageTwoTimeout`]
/// after `max_ex_draws` examples.
pub fn learn_junta<E: ExampleSource + ?Sized>(
    fs: &mut FsOracle,
    ex: &mut E,
    k: usize,
    eps: f64,
    max_ex_draws: u64,
) -> Result<LearnerReport> {
    let fs_before = fs.calls();
    let ex_before = ex.queries().ex_calls;
    let found = find_influential(fs, k, eps)?;
    let fs_calls = fs.calls() - fs_before;
    let mut hypothesis = Hypothesis::unseen(found.into_iter().collect())?;

    if hypothesis.vars().len() > k {
        return Ok(LearnerReport {
            encountered_fraction: hypothesis.encountered_fraction(),
            hypothesis,
            fs_calls,
            ex_calls: 0,
            status: LearnStatus::StageOneOverflow,
        });
    }

    let cells = hypothesis.entries().len();
    let required = ceil_snapped((1.0 - eps / 3.0) * cells as f64) as usize;
    let mut seen = 0usize;
    let mut ex_calls = 0u64;
    let mut status = LearnStatus::Success;
    loop {
        if ex_calls >= max_ex_draws {
            status = LearnStatus::StageTwoTimeout;
            break;
        }
        let example = ex.draw_example();
        ex_calls += 1;
        if hypothesis.record(example) {
            seen += 1;
        }
        if seen >= required {
            break;
        }
    }
    debug_assert_eq!(ex.queries().ex_calls - ex_before, ex_calls);

    Ok(LearnerReport {
        encountered_fraction: hypothesis.encountered_fraction(),
        hypothesis,
        fs_calls,
        ex_calls,
        status,
    })
}

/// Exact fraction of inputs where `h` disagrees with `f`; unseen cells count as True.
pub fn hypothesis_error(f: &TruthTable, h: &Hypothesis) -> Result<Fraction> {
    if let Some(&v) = h.vars().iter().find(|&&v| v >= f.n()) {
        return Err(Error::VariableOutOfRange { index: v, n: f.n() });
    }
    let wrong = (0..f.len()).filter(|&x| f.at(x) != h.eval(x)).count() as u64;
    Ok(Ratio::new(wrong, f.len() as u64))
}
