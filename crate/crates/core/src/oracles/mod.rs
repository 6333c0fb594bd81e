//! Simulated information sources: Fourier sampling (FS), uniform examples
//! (EX) and membership queries (MQ).
//!
//! FS is a perfect sampler built from the exact spectrum, or an analytic
//! sampler for the addressing instance families when no table fits in memory.

mod example;
mod fs;
mod rng;

use std::ops::Add;

pub use example::{ExampleOracle, ExampleSource, LabeledExample};
pub use fs::{fs_draw_accept_analytic, fs_draw_reject_analytic, FsOracle};
pub use rng::{derive_seed, RngStream};

/// Per-oracle call counts. Each oracle call increments exactly one field once.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryCounter {
    pub fs_calls: u64,
    pub ex_calls: u64,
    pub mq_calls: u64,
}

impl Add for QueryCounter {
    type Output = QueryCounter;

    fn add(self, rhs: QueryCounter) -> QueryCounter {
        QueryCounter {
            fs_calls: self.fs_calls + rhs.fs_calls,
            ex_calls: self.ex_calls + rhs.ex_calls,
            mq_calls: self.mq_calls + rhs.mq_calls,
        }
    }
}
