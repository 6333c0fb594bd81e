use std::fmt;

use rand::Rng;

use crate::boolfn::{make_junta, JuntaSpec, TruthTable};
use crate::error::{Error, Result};
use crate::oracles::FsOracle;
use crate::stats::ceil_snapped;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Uniform over functions of the first `k+1` variables.
    I,
    /// As `I`, but one uniformly chosen variable among the first `k+1` is ignored.
    II,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::I => "I",
            Scenario::II => "II",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioFunction {
    pub which: Scenario,
    pub table: TruthTable,
    pub spec: JuntaSpec,
    /// The dropped variable for Scenario II.
    pub ignored: Option<usize>,
}

pub fn sample_scenario<G: Rng + ?Sized>(
    which: Scenario,
    k: usize,
    n: usize,
    rng: &mut G,
) -> Result<ScenarioFunction> {
    if k + 1 > n {
        return Err(Error::InvalidParameter(format!(
            "scenario needs n >= k + 1, got k = {k}, n = {n}"
        )));
    }
    let (relevant, ignored): (Vec<usize>, Option<usize>) = match which {
        Scenario::I => ((0..=k).collect(), None),
        Scenario::II => {
            let i = rng.gen_range(0..=k);
            ((0..=k).filter(|&j| j != i).collect(), Some(i))
        }
    };
    let spec = if relevant.is_empty() {
        JuntaSpec::constant(n, if rng.gen::<bool>() { -1 } else { 1 })?
    } else {
        let inner = TruthTable::random(relevant.len(), rng)?;
        JuntaSpec::new(n, relevant, inner)?
    };
    let table = make_junta(&spec)?;
    Ok(ScenarioFunction {
        which,
        table,
        spec,
        ignored,
    })
}

/// `ceil(c * log2(k + 2))`.
pub fn scenario_query_count(k: usize, c: f64) -> Result<u64> {
    if c.is_nan() || c < 1.0 {
        return Err(Error::InvalidParameter(format!("constant c = {c} below 1")));
    }
    Ok(ceil_snapped(c * ((k + 2) as f64).log2()))
}

/// Guesses Scenario I iff `ceil(c log2(k+2))` FS draws expose at least `k+1`
/// distinct variables.
pub fn scenario_distinguisher(fs: &mut FsOracle, k: usize, c: f64) -> Result<Scenario> {
    let m = scenario_query_count(k, c)?;
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..m {
        seen.extend(fs.draw()?.iter());
    }
    Ok(if seen.len() > k {
        Scenario::I
    } else {
        Scenario::II
    })
}
