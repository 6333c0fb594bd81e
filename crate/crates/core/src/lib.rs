//! Classical simulation of Fourier-sampling algorithms for juntas.
//!
//! - [`boolfn`]: exact truth tables, juntas, parities and the addressing
//!   instances used for lower bounds.
//! - [`fourier`]: exact integer Walsh–Hadamard spectra.
//! - [`oracles`]: FS, EX and MQ oracles with query accounting.
//! - [`testing`]: the FS junta tester and the lower-bound distinguishers.
//! - [`learning`]: the two-stage FS + EX junta learner.
//! - [`harness`]: reproducible experiment orchestration behind the CLI.

pub mod boolfn;
pub mod error;
pub mod fourier;
pub mod harness;
pub mod learning;
pub mod oracles;
pub mod stats;
pub mod testing;

pub use error::{Error, Result};
