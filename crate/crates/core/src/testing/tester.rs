use std::collections::BTreeSet;

use crate::error::Result;
use crate::oracles::FsOracle;
use crate::stats::{ceil_snapped, check_eps};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TesterVerdict {
    pub decision: Decision,
    pub queries_used: u64,
    /// Union of every variable returned by the oracle.
    pub exposed: BTreeSet<usize>,
}

/// `ceil(10 (k+1) / eps)`.
pub fn tester_query_count(k: usize, eps: f64) -> Result<u64> {
    check_eps(eps)?;
    Ok(ceil_snapped(10.0 * (k as f64 + 1.0) / eps))
}

/// Non-adaptive k-junta tester: draw `ceil(10(k+1)/eps)` FS samples and
/// accept iff at most `k` distinct variables were exposed.
///
/// Every k-junta is accepted with probability 1, since FS only returns sets
/// of relevant variables.
pub fn junta_test(fs: &mut FsOracle, k: usize, eps: f64) -> Result<TesterVerdict> {
    let m = tester_query_count(k, eps)?;
    let mut exposed = BTreeSet::new();
    for _ in 0..m {
        exposed.extend(fs.draw()?.iter());
    }
    let decision = if exposed.len() <= k {
        Decision::Accept
    } else {
        Decision::Reject
    };
    Ok(TesterVerdict {
        decision,
        queries_used: m,
        exposed,
    })
}
