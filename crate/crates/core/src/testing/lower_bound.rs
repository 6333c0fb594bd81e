//! Distinguishers for the accept/reject addressing families.
//!
//! Every FS response of either family has the shape `{y_j} ∪ X` with `X` a
//! subset of the `r` address variables. Under the accept family the parity of
//! `|X|` is fixed per `y_j`; under the reject family it is a fresh fair coin
//! on every draw. Seeing some `y_j` twice with different parities therefore
//! proves the instance came from the reject family.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use super::tester::Decision;
use crate::boolfn::{AcceptInstance, RejectInstance, VarSet};
use crate::error::{Error, Result};
use crate::oracles::{FsOracle, RngStream};

/// Which addressing family an instance is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Accept,
    Reject,
}

impl Family {
    /// The decision a correct distinguisher should output.
    pub fn expected(self) -> Decision {
        match self {
            Family::Accept => Decision::Accept,
            Family::Reject => Decision::Reject,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Accept => "accept",
            Family::Reject => "reject",
        }
    }

    /// Smallest ambient variable count the family supports for address width `r`.
    pub fn min_n(self, r: usize) -> usize {
        match self {
            Family::Accept => r + (1 << r) / 2,
            Family::Reject => r + (1 << r),
        }
    }

    /// Draws a fresh instance from the family with `rng` and wraps it in an
    /// analytic FS oracle running on `fs_rng`.
    pub fn sample_oracle<G: Rng + ?Sized>(
        self,
        r: usize,
        n: usize,
        rng: &mut G,
        fs_rng: RngStream,
    ) -> Result<FsOracle> {
        Ok(match self {
            Family::Accept => FsOracle::accept(&AcceptInstance::random(r, n, rng)?, fs_rng),
            Family::Reject => FsOracle::reject(&RejectInstance::random(r, n, rng)?, fs_rng),
        })
    }
}

/// Splits an addressing-instance response into `(y variable, |X| is odd)`.
pub fn split_response(s: &VarSet, r: usize) -> Result<(usize, bool)> {
    let mut y = None;
    let mut x_count = 0usize;
    for v in s.iter() {
        if v < r {
            x_count += 1;
        } else if y.replace(v).is_some() {
            return Err(Error::MalformedResponse(s.as_slice().to_vec()));
        }
    }
    let y = y.ok_or_else(|| Error::MalformedResponse(s.as_slice().to_vec()))?;
    Ok((y, x_count % 2 == 1))
}

/// Collision statistics of a transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TranscriptFeatures {
    /// Draws whose `y` had already appeared: `N - distinct`.
    pub collisions: usize,
    /// Distinct `y` seen with both parities of `|X|`.
    pub inconsistent: usize,
}

pub fn transcript_features(responses: &[VarSet], r: usize) -> Result<TranscriptFeatures> {
    // per y: (seen even, seen odd)
    let mut parities: HashMap<usize, (bool, bool)> = HashMap::new();
    let mut collisions = 0;
    for s in responses {
        let (y, odd) = split_response(s, r)?;
        let entry = parities.entry(y).or_insert((false, false));
        if entry.0 || entry.1 {
            collisions += 1;
        }
        if odd {
            entry.1 = true;
        } else {
            entry.0 = true;
        }
    }
    let inconsistent = parities.values().filter(|&&(e, o)| e && o).count();
    Ok(TranscriptFeatures {
        collisions,
        inconsistent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionOutcome {
    pub decision: Decision,
    pub features: TranscriptFeatures,
}

/// Draws `draws` responses. Rejects iff some `y` appears with both parities;
/// otherwise accepts, whether or not any collision happened.
///
/// The accept default on a collision-free transcript is a fixed rule of this
/// crate. Collision-free transcripts are in fact slightly more likely under
/// the reject family, so the rule's operating point is reported by the
/// harness rather than assumed.
pub fn collision_distinguisher(
    fs: &mut FsOracle,
    r: usize,
    draws: usize,
) -> Result<CollisionOutcome> {
    let responses = (0..draws).map(|_| fs.draw()).collect::<Result<Vec<_>>>()?;
    let features = transcript_features(&responses, r)?;
    let decision = if features.inconsistent > 0 {
        Decision::Reject
    } else {
        Decision::Accept
    };
    Ok(CollisionOutcome { decision, features })
}

/// Upper limit on `draws * trials` per source for [`transcript_tv_estimate`].
pub const TV_DRAW_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct TvEstimate {
    /// Total-variation distance between the empirical feature histograms.
    ///
    /// This is the advantage of the best classifier that sees only the
    /// collision features, and so lower-bounds the transcript distance up to
    /// sampling error.
    pub lower_bound: f64,
    pub trials: usize,
    pub histogram_a: BTreeMap<TranscriptFeatures, u64>,
    pub histogram_b: BTreeMap<TranscriptFeatures, u64>,
}

/// Estimates how far apart two transcript distributions are through the
/// collision features of length-`draws` transcripts.
///
/// Each source closure receives the trial index and must return a fresh
/// oracle (normally a fresh instance from a family).
pub fn transcript_tv_estimate<A, B>(
    mut source_a: A,
    mut source_b: B,
    draws: usize,
    trials: usize,
    r: usize,
) -> Result<TvEstimate>
where
    A: FnMut(usize) -> Result<FsOracle>,
    B: FnMut(usize) -> Result<FsOracle>,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let needed = draws as u128 * trials as u128;
    if needed > TV_DRAW_BUDGET {
        return Err(Error::BudgetExceeded {
            needed,
            budget: TV_DRAW_BUDGET,
        });
    }
    let mut histogram_a = BTreeMap::new();
    let mut histogram_b = BTreeMap::new();
    for t in 0..trials {
        let fa = collision_distinguisher(&mut source_a(t)?, r, draws)?.features;
        *histogram_a.entry(fa).or_insert(0u64) += 1;
        let fb = collision_distinguisher(&mut source_b(t)?, r, draws)?.features;
        *histogram_b.entry(fb).or_insert(0u64) += 1;
    }
    let lower_bound = histogram_tv(&histogram_a, &histogram_b, trials);
    Ok(TvEstimate {
        lower_bound,
        trials,
        histogram_a,
        histogram_b,
    })
}

/// Counts how often each feature pair occurs.
pub fn feature_histogram<'a, I>(features: I) -> BTreeMap<TranscriptFeatures, u64>
where
    I: IntoIterator<Item = &'a TranscriptFeatures>,
{
    let mut h = BTreeMap::new();
    for f in features {
        *h.entry(*f).or_insert(0u64) += 1;
    }
    h
}

/// Plug-in total-variation distance between two histograms of `trials`
/// samples each.
pub fn histogram_tv(
    a: &BTreeMap<TranscriptFeatures, u64>,
    b: &BTreeMap<TranscriptFeatures, u64>,
    trials: usize,
) -> f64 {
    let mut keys: Vec<_> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let diff: u64 = keys
        .iter()
        .map(|k| {
            let x = a.get(k).copied().unwrap_or(0);
            let y = b.get(k).copied().unwrap_or(0);
            x.abs_diff(y)
        })
        .sum();
    diff as f64 / (2.0 * trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(v: &[usize]) -> VarSet {
        VarSet::from_unsorted(v.to_vec())
    }

    #[test]
    fn response_split() {
        assert_eq!(split_response(&vs(&[0, 2, 9]), 3).unwrap(), (9, false));
        assert_eq!(split_response(&vs(&[1, 5]), 3).unwrap(), (5, true));
        assert!(split_response(&vs(&[0, 1]), 3).is_err());
        assert!(split_response(&vs(&[4, 5]), 3).is_err());
    }

    #[test]
    fn features_count_collisions_and_conflicts() {
        let t = [vs(&[5]), vs(&[0, 5]), vs(&[6]), vs(&[0, 1, 6]), vs(&[5])];
        let f = transcript_features(&t, 2).unwrap();
        assert_eq!(f.collisions, 3);
        assert_eq!(f.inconsistent, 1);
    }

    #[test]
    fn accept_family_never_conflicts() {
        let mut rng = RngStream::new(7, "inst", 0);
        for t in 0..300 {
            let mut fs = Family::Accept
                .sample_oracle(3, 20, &mut rng, RngStream::new(7, "fs", t))
                .unwrap();
            let out = collision_distinguisher(&mut fs, 3, 30).unwrap();
            assert_eq!(out.features.inconsistent, 0);
            assert_eq!(out.decision, Decision::Accept);
        }
    }

    #[test]
    fn identical_histograms_have_zero_tv() {
        let mut a = BTreeMap::new();
        a.insert(
            TranscriptFeatures {
                collisions: 1,
                inconsistent: 0,
            },
            10,
        );
        assert_eq!(histogram_tv(&a, &a.clone(), 10), 0.0);
        assert_eq!(histogram_tv(&a, &BTreeMap::new(), 10), 0.5);
    }

    #[test]
    fn tv_budget() {
        let r = transcript_tv_estimate(
            |_| Ok(FsOracle::constant(2, RngStream::new(0, "a", 0))),
            |_| Ok(FsOracle::constant(2, RngStream::new(0, "b", 0))),
            1 << 20,
            1 << 20,
            1,
        );
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }
}
