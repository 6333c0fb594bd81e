use std::io::{self, Write};

use rand::Rng;

use super::rng::RngStream;
use super::QueryCounter;
use crate::boolfn::{AcceptInstance, JuntaSpec, RejectInstance, SubsetMask, TruthTable, VarSet};
use crate::error::{Error, Result};
use crate::fourier::{parseval_check, wht, Spectrum};

/// Draws `{y_tau(i)} ∪ X` with `i` uniform on `0..R` and `X` a uniform subset
/// of the address variables. Needs no truth table, so `n` may be large.
pub fn fs_draw_reject_analytic<G: Rng + ?Sized>(inst: &RejectInstance, rng: &mut G) -> VarSet {
    let r = inst.r();
    let leaf = rng.gen_range(0..inst.big_r());
    let x_bits: u32 = rng.gen_range(0..1u32 << r);
    let mut vars: Vec<usize> = SubsetMask(x_bits).indices().collect();
    vars.push(r + inst.tau()[leaf]);
    VarSet::from_unsorted(vars)
}

/// Draws `{y_tau(i)} ∪ X` with `i` uniform on `0..R/2` and `X` uniform among
/// address subsets whose size is even when `s_i = +1` and odd when `s_i = -1`.
pub fn fs_draw_accept_analytic<G: Rng + ?Sized>(inst: &AcceptInstance, rng: &mut G) -> VarSet {
    let r = inst.r();
    let leaf = rng.gen_range(0..inst.big_r() / 2);
    // free bits for x_2..x_r, then x_1 fixes the parity
    let mut x_bits: u32 = rng.gen_range(0..1u32 << (r - 1)) << 1;
    let want_odd = inst.signs()[leaf] < 0;
    if (x_bits.count_ones() % 2 == 1) != want_odd {
        x_bits |= 1;
    }
    let mut vars: Vec<usize> = SubsetMask(x_bits).indices().collect();
    vars.push(r + inst.tau()[leaf]);
    VarSet::from_unsorted(vars)
}

#[derive(Debug, Clone)]
enum Source {
    /// Nonzero-weight masks with inclusive prefix sums of `F(S)^2`; total is `4^n`.
    Table {
        masks: Vec<SubsetMask>,
        cumulative: Vec<u64>,
    },
    Reject(RejectInstance),
    Accept(AcceptInstance),
    /// Point mass: parities and constants.
    Point(VarSet),
}

/// Simulated Fourier-sampling oracle: each call returns `S` with probability
/// `f^(S)^2`.
///
/// One oracle is one consumer; its RNG and counter advance on every call.
#[derive(Debug, Clone)]
pub struct FsOracle {
    n: usize,
    source: Source,
    rng: RngStream,
    counter: QueryCounter,
    failure_prob: f64,
    transcript: Option<Vec<VarSet>>,
}

impl FsOracle {
    fn with_source(n: usize, source: Source, rng: RngStream) -> Self {
        FsOracle {
            n,
            source,
            rng,
            counter: QueryCounter::default(),
            failure_prob: 0.0,
            transcript: None,
        }
    }

    /// Builds the exact sampler for a spectrum. Spectra failing Parseval are refused.
    pub fn from_spectrum(sp: &Spectrum, rng: RngStream) -> Result<Self> {
        if !parseval_check(sp) {
            return Err(Error::InvalidSpectrum {
                sum: sp.sum_of_squares(),
                expected: sp.total_weight(),
            });
        }
        let mut masks = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0u64;
        for (s, c) in sp.nonzero() {
            acc += (c * c) as u64;
            masks.push(s);
            cumulative.push(acc);
        }
        Ok(Self::with_source(
            sp.n(),
            Source::Table { masks, cumulative },
            rng,
        ))
    }

    pub fn from_table(f: &TruthTable, rng: RngStream) -> Self {
        Self::from_spectrum(&wht(f), rng).expect("spectra of Boolean tables satisfy Parseval")
    }

    /// Samples a lifted junta from the spectrum of its inner table alone.
    pub fn from_junta(spec: &JuntaSpec, rng: RngStream) -> Self {
        let Some(inner) = spec.inner() else {
            return Self::constant(spec.n(), rng);
        };
        let sp = wht(inner);
        let k = inner.n();
        let mut masks = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0u64;
        // inner spectrum sums to 4^k; rescale to 4^n so probabilities are unchanged
        let scale = 1u64 << (2 * (spec.n() - k));
        for (s, c) in sp.nonzero() {
            let lifted = s.indices().fold(0u32, |m, j| m | 1 << spec.relevant()[j]);
            acc += (c * c) as u64 * scale;
            masks.push(SubsetMask(lifted));
            cumulative.push(acc);
        }
        Self::with_source(spec.n(), Source::Table { masks, cumulative }, rng)
    }

    pub fn reject(inst: &RejectInstance, rng: RngStream) -> Self {
        Self::with_source(inst.n(), Source::Reject(inst.clone()), rng)
    }

    pub fn accept(inst: &AcceptInstance, rng: RngStream) -> Self {
        Self::with_source(inst.n(), Source::Accept(inst.clone()), rng)
    }

    /// Oracle for `chi_S` on `n` variables; every call returns `S`.
    pub fn parity(n: usize, s: VarSet, rng: RngStream) -> Result<Self> {
        if let Some(&last) = s.as_slice().last() {
            if last >= n {
                return Err(Error::VariableOutOfRange { index: last, n });
            }
        }
        Ok(Self::with_source(n, Source::Point(s), rng))
    }

    pub fn constant(n: usize, rng: RngStream) -> Self {
        Self::with_source(n, Source::Point(VarSet::empty()), rng)
    }

    /// Makes each call fail with probability `delta`, as an imperfect
    /// quantum-example simulation would. The default is 0.
    pub fn with_failure_prob(mut self, delta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!(
                "failure probability {delta} outside [0, 1)"
            )));
        }
        self.failure_prob = delta;
        Ok(self)
    }

    /// Starts keeping every response for later inspection.
    pub fn record_transcript(&mut self) {
        self.transcript.get_or_insert_with(Vec::new);
    }

    pub fn transcript(&self) -> Option<&[VarSet]> {
        self.transcript.as_deref()
    }

    /// Writes the recorded transcript, one `fs<TAB><sorted variable list>` line per draw.
    pub fn write_transcript<W: Write>(&self, mut w: W) -> io::Result<()> {
        for s in self.transcript.iter().flatten() {
            writeln!(w, "fs\t{s}")?;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn queries(&self) -> QueryCounter {
        self.counter
    }

    pub fn calls(&self) -> u64 {
        self.counter.fs_calls
    }

    /// Exact distribution as `(mask, weight)` pairs summing to `4^n`, for
    /// table-backed and point-mass oracles over at most 32 variables.
    pub fn distribution(&self) -> Option<Vec<(SubsetMask, u64)>> {
        match &self.source {
            Source::Table { masks, cumulative } => {
                let mut prev = 0;
                Some(
                    masks
                        .iter()
                        .zip(cumulative)
                        .map(|(&m, &c)| {
                            let w = c - prev;
                            prev = c;
                            (m, w)
                        })
                        .collect(),
                )
            }
            Source::Point(s) if self.n <= 31 => Some(vec![(s.to_mask()?, 1u64 << (2 * self.n))]),
            _ => None,
        }
    }

    /// One FS call.
    pub fn draw(&mut self) -> Result<VarSet> {
        self.counter.fs_calls += 1;
        if self.failure_prob > 0.0 && self.rng.gen::<f64>() < self.failure_prob {
            return Err(Error::OracleFailure);
        }
        let out = match &self.source {
            Source::Table { masks, cumulative } => {
                let total = *cumulative.last().expect("nonempty spectrum");
                let u = self.rng.gen_range(0..total);
                let idx = cumulative.partition_point(|&c| c <= u);
                masks[idx].to_var_set()
            }
            Source::Reject(inst) => fs_draw_reject_analytic(inst, &mut self.rng),
            Source::Accept(inst) => fs_draw_accept_analytic(inst, &mut self.rng),
            Source::Point(s) => s.clone(),
        };
        if let Some(t) = self.transcript.as_mut() {
            t.push(out.clone());
        }
        Ok(out)
    }

    /// One FS call, packed into a mask. Fails for responses naming variables
    /// beyond bit 31.
    pub fn draw_mask(&mut self) -> Result<SubsetMask> {
        let s = self.draw()?;
        s.to_mask().ok_or_else(|| Error::VariableOutOfRange {
            index: s.as_slice().last().copied().unwrap_or(0),
            n: 32,
        })
    }
}
