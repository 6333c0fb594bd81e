//! Exact integer Walsh–Hadamard spectra.
//!
//! A [`Spectrum`] stores `F(S) = sum_x f(x) chi_S(x)`, which is the Fourier
//! coefficient scaled by `2^n`. With `n <= 24` every `F(S)` fits in 25 bits and
//! every square in 50, so all identities below are checked with exact integers.

use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::boolfn::{Fraction, SubsetMask, TruthTable};
use crate::error::{Error, Result};

const BLOCK: usize = 1 << 12;
const PAR_MIN_LEN: usize = 1 << 16;

fn butterfly_seq(data: &mut [i64]) {
    let len = data.len();
    let mut h = 1;
    while h < len {
        for chunk in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        h *= 2;
    }
}

/// In-place unnormalised Walsh–Hadamard butterfly over a power-of-two slice.
///
/// Position `S` ends up holding `sum_x data[x] * (-1)^{|x & S|}`. Large inputs
/// are split across threads; integer arithmetic keeps the output identical to
/// the sequential pass.
pub fn butterfly(data: &mut [i64]) {
    let len = data.len();
    assert!(
        len.is_power_of_two(),
        "butterfly length must be a power of two"
    );
    if len < PAR_MIN_LEN {
        butterfly_seq(data);
        return;
    }
    data.par_chunks_mut(BLOCK).for_each(butterfly_seq);
    let mut h = BLOCK;
    while h < len {
        data.par_chunks_mut(2 * h).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(h);
            lo.par_chunks_mut(BLOCK)
                .zip(hi.par_chunks_mut(BLOCK))
                .for_each(|(lo, hi)| {
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        let (u, v) = (*a, *b);
                        *a = u + v;
                        *b = u - v;
                    }
                });
        });
        h *= 2;
    }
}

/// Integer-scaled Fourier spectrum of a function on `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<i64>,
}

impl Spectrum {
    /// Wraps raw coefficients. No Parseval check is made; see [`parseval_check`].
    pub fn from_coeffs(n: usize, coeffs: Vec<i64>) -> Result<Self> {
        let expected = 1usize << n;
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: coeffs.len(),
            });
        }
        Ok(Spectrum { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, s: SubsetMask) -> i64 {
        self.coeffs[s.bits() as usize]
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    /// `(S, F(S))` for every nonzero coefficient, masks ascending.
    pub fn nonzero(&self) -> impl Iterator<Item = (SubsetMask, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, &c)| (SubsetMask(s as u32), c))
    }

    /// `4^n`, the squared-coefficient total of any Boolean function.
    pub fn total_weight(&self) -> u128 {
        1u128 << (2 * self.n)
    }

    pub fn sum_of_squares(&self) -> u128 {
        self.coeffs
            .iter()
            .map(|&c| (c as i128 * c as i128) as u128)
            .sum()
    }

    /// `sum_{S not subset of T} F(S)^2`.
    pub fn weight_outside(&self, t: SubsetMask) -> u128 {
        self.nonzero()
            .filter(|(s, _)| !s.is_subset_of(t))
            .map(|(_, c)| (c as i128 * c as i128) as u128)
            .sum()
    }

    /// Debug dump: one `mask<TAB>F(S)` line per nonzero coefficient, masks
    /// ascending and written as decimal integers.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (s, c) in self.nonzero() {
            let _ = writeln!(out, "{}\t{}", s.bits(), c);
        }
        out
    }
}

pub fn wht(f: &TruthTable) -> Spectrum {
    let mut coeffs: Vec<i64> = f.values().iter().map(|&v| v as i64).collect();
    butterfly(&mut coeffs);
    Spectrum { n: f.n(), coeffs }
}

/// Recovers the table from its spectrum. Fails if the spectrum is not that
/// of a `{-1,+1}`-valued function.
pub fn inverse_wht(sp: &Spectrum) -> Result<TruthTable> {
    let mut values = sp.coeffs.clone();
    butterfly(&mut values);
    let scale = 1i64 << sp.n;
    let signs = values
        .iter()
        .enumerate()
        .map(|(x, &v)| match v / scale {
            1 if v % scale == 0 => Ok(1i8),
            -1 if v % scale == 0 => Ok(-1i8),
            _ => Err(Error::InvalidEntry {
                index: x,
                value: v / scale,
            }),
        })
        .collect::<Result<Vec<i8>>>()?;
    TruthTable::from_values(sp.n, signs)
}

/// True iff `sum_S F(S)^2 = 4^n` exactly.
pub fn parseval_check(sp: &Spectrum) -> bool {
    sp.sum_of_squares() == sp.total_weight()
}

/// `Inf_i(f) = sum_{S containing i} f^(S)^2`.
pub fn influence_spectral(sp: &Spectrum, i: usize) -> Result<Fraction> {
    if i >= sp.n {
        return Err(Error::VariableOutOfRange { index: i, n: sp.n });
    }
    let mass: u128 = sp
        .nonzero()
        .filter(|(s, _)| s.contains(i))
        .map(|(_, c)| (c as i128 * c as i128) as u128)
        .sum();
    Ok(Ratio::new(mass as u64, sp.total_weight() as u64))
}

/// `sum_S |S| f^(S)^2`.
pub fn total_influence(sp: &Spectrum) -> Fraction {
    let mass: u128 = sp
        .nonzero()
        .map(|(s, c)| s.len() as u128 * (c as i128 * c as i128) as u128)
        .sum();
    Ratio::new(mass as u64, sp.total_weight() as u64)
}

/// `2^n * g(x)` for every input, where `g = sum_{S subset of T} f^(S) chi_S`.
pub fn projection_sums(sp: &Spectrum, t: SubsetMask) -> Result<Vec<i64>> {
    t.check_within(sp.n)?;
    let mut values: Vec<i64> = sp
        .coeffs
        .iter()
        .enumerate()
        .map(|(s, &c)| {
            if SubsetMask(s as u32).is_subset_of(t) {
                c
            } else {
                0
            }
        })
        .collect();
    butterfly(&mut values);
    Ok(values)
}

/// `sgn(sum_{S subset of T} f^(S) chi_S(x))` with `sgn(0) = +1`.
///
/// The zero convention is a choice of this crate; wherever the projection
/// vanishes the output is `+1` (False).
pub fn sign_projection(f: &TruthTable, t: SubsetMask) -> Result<TruthTable> {
    let sums = projection_sums(&wht(f), t)?;
    TruthTable::from_fn(f.n(), |x| if sums[x] < 0 { -1 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{make_parity, realize_reject, RejectInstance};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn and2() -> TruthTable {
        TruthTable::from_values(2, vec![1, 1, 1, -1]).unwrap()
    }

    /// Direct O(4^n) evaluation of the defining sum.
    fn naive(f: &TruthTable) -> Vec<i64> {
        (0..f.len())
            .map(|s| {
                (0..f.len())
                    .map(|x| {
                        let chi = if (x & s).count_ones() % 2 == 1 { -1 } else { 1 };
                        f.at(x) as i64 * chi
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn parity_is_point_mass() {
        let f = make_parity(4, SubsetMask(0b1010)).unwrap();
        let sp = wht(&f);
        for (s, &c) in sp.coeffs().iter().enumerate() {
            assert_eq!(c, if s == 0b1010 { 16 } else { 0 });
        }
    }

    #[test]
    fn and2_spectrum() {
        assert_eq!(wht(&and2()).coeffs(), &[2, 2, 2, -2]);
    }

    #[test]
    fn matches_defining_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=7 {
            let f = TruthTable::random(n, &mut rng).unwrap();
            assert_eq!(wht(&f).coeffs(), naive(&f).as_slice());
        }
    }

    #[test]
    fn parallel_path_matches_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = TruthTable::random(17, &mut rng).unwrap();
        let mut seq: Vec<i64> = f.values().iter().map(|&v| v as i64).collect();
        butterfly_seq(&mut seq);
        assert_eq!(wht(&f).coeffs(), seq.as_slice());
    }

    #[test]
    fn round_trip_and_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = TruthTable::random(9, &mut rng).unwrap();
        let sp = wht(&f);
        assert_eq!(inverse_wht(&sp).unwrap(), f);
        let mut twice = sp.coeffs().to_vec();
        butterfly(&mut twice);
        assert!(twice
            .iter()
            .zip(f.values())
            .all(|(&a, &v)| a == (v as i64) << 9));
    }

    #[test]
    fn inverse_rejects_non_boolean() {
        let sp = Spectrum::from_coeffs(1, vec![1, 1]).unwrap();
        assert!(inverse_wht(&sp).is_err());
    }

    #[test]
    fn parseval_examples() {
        let sp = wht(&and2());
        assert!(parseval_check(&sp));
        let mut c = sp.clone().into_coeffs();
        c[1] = 0;
        assert!(!parseval_check(&Spectrum::from_coeffs(2, c).unwrap()));
        assert!(!parseval_check(
            &Spectrum::from_coeffs(2, vec![0; 4]).unwrap()
        ));
    }

    #[test]
    fn reject_coefficients_are_flat() {
        let inst = RejectInstance::new(2, 6, vec![0, 1, 2, 3]).unwrap();
        let sp = wht(&realize_reject(&inst).unwrap());
        let squares: Vec<u128> = sp.nonzero().map(|(_, c)| (c * c) as u128).collect();
        assert_eq!(squares.len(), 16);
        assert!(squares.iter().all(|&q| q * 16 == sp.total_weight()));
    }

    #[test]
    fn spectral_influence_examples() {
        let chi = make_parity(3, SubsetMask(0b011)).unwrap();
        assert_eq!(
            influence_spectral(&wht(&chi), 1).unwrap(),
            Ratio::from_integer(1)
        );
        assert_eq!(
            influence_spectral(&wht(&and2()), 0).unwrap(),
            Ratio::new(1, 2)
        );
        assert!(influence_spectral(&wht(&and2()), 2).is_err());
    }

    #[test]
    fn sign_projection_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = TruthTable::random(6, &mut rng).unwrap();
        assert_eq!(sign_projection(&f, SubsetMask::full(6)).unwrap(), f);
        let chi = make_parity(5, SubsetMask(0b00110)).unwrap();
        assert_eq!(sign_projection(&chi, SubsetMask(0b10110)).unwrap(), chi);
    }

    #[test]
    fn dump_lists_nonzero_ascending() {
        assert_eq!(wht(&and2()).dump(), "0\t2\n1\t2\n2\t2\n3\t-2\n");
    }
}
