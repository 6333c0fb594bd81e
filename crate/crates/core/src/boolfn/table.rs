use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::Rng;

use super::mask::SubsetMask;
use crate::error::{Error, Result};

/// Largest variable count a dense table may have.
pub const N_MAX: usize = 24;

/// Exact fraction of the `2^n` inputs.
pub type Fraction = Ratio<u64>;

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::NoVariables);
    }
    if n > N_MAX {
        return Err(Error::TooManyVariables { n, max: N_MAX });
    }
    Ok(())
}

/// Value of variable `i` at input `x`: `-1` when bit `i` of the index is set.
#[inline]
pub fn var_value(x: usize, i: usize) -> i8 {
    if x >> i & 1 == 1 {
        -1
    } else {
        1
    }
}

/// Gathers the bits of `x` at `positions` into a dense index, first position lowest.
#[inline]
pub fn project_index(x: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &p)| acc | (x >> p & 1) << j)
}

/// A Boolean function `{-1,1}^n -> {-1,1}` stored densely.
///
/// Bit `i` of an input index is 1 exactly when `x_{i+1} = -1`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    values: Vec<i8>,
}

impl TruthTable {
    pub fn from_values(n: usize, values: Vec<i8>) -> Result<Self> {
        check_n(n)?;
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        if let Some((index, &v)) = values.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(Error::InvalidEntry {
                index,
                value: v as i64,
            });
        }
        Ok(TruthTable { n, values })
    }

    /// Tabulates `f` over all inputs. Any non-negative output maps to `+1`.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> i8) -> Result<Self> {
        check_n(n)?;
        let values = (0..1usize << n)
            .map(|x| if f(x) < 0 { -1 } else { 1 })
            .collect();
        Ok(TruthTable { n, values })
    }

    pub fn constant(n: usize, value: i8) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    /// Uniformly random function on `n` variables.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        let values = (0..1usize << n)
            .map(|_| if rng.gen::<bool>() { -1 } else { 1 })
            .collect();
        Ok(TruthTable { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn eval(&self, x: usize) -> Result<i8> {
        self.values.get(x).copied().ok_or(Error::InputOutOfRange {
            index: x,
            n: self.n,
        })
    }

    /// Unchecked evaluation for hot loops; panics on out-of-range input.
    #[inline]
    pub fn at(&self, x: usize) -> i8 {
        self.values[x]
    }

    pub fn negate(&self) -> TruthTable {
        TruthTable {
            n: self.n,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    fn check_same_n(&self, other: &TruthTable) -> Result<()> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Number of inputs on which the two tables disagree.
    pub fn disagreements(&self, other: &TruthTable) -> Result<u64> {
        self.check_same_n(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| a != b)
            .count() as u64)
    }

    /// Fraction of inputs on which `self` and `other` differ.
    pub fn distance(&self, other: &TruthTable) -> Result<Fraction> {
        let d = self.disagreements(other)?;
        Ok(Ratio::new(d, 1u64 << self.n))
    }

    /// `P_x[f(x with x_i=-1) != f(x with x_i=+1)]`, computed by flipping bit `i`.
    pub fn influence(&self, i: usize) -> Result<Fraction> {
        if i >= self.n {
            return Err(Error::VariableOutOfRange {
                index: i,
                n: self.n,
            });
        }
        let bit = 1usize << i;
        let flips = (0..self.values.len())
            .filter(|&x| x & bit == 0 && self.values[x] != self.values[x | bit])
            .count() as u64;
        Ok(Ratio::new(flips, 1u64 << (self.n - 1)))
    }

    /// Indices of every variable with nonzero influence.
    pub fn relevant_variables(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| {
                let bit = 1usize << i;
                (0..self.values.len())
                    .any(|x| x & bit == 0 && self.values[x] != self.values[x | bit])
            })
            .collect()
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 6 {
            write!(f, "TruthTable({self})")
        } else {
            write!(f, "TruthTable {{ n: {} }}", self.n)
        }
    }
}

/// Two-line text form: `n=<int>` then `2^n` characters from `{+,-}` in index order.
impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        let row: String = self
            .values
            .iter()
            .map(|&v| if v < 0 { '-' } else { '+' })
            .collect();
        write!(f, "{row}")
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("expected `n=<int>`, got `{header}`")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad variable count: {e}")))?;
        let row = lines.next().unwrap_or("");
        let values = row
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::Parse(format!("unexpected character `{other}`"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing content `{extra}`")));
        }
        TruthTable::from_values(n, values)
    }
}

/// The parity `chi_S(x) = prod_{i in S} x_i`.
pub fn make_parity(n: usize, s: SubsetMask) -> Result<TruthTable> {
    check_n(n)?;
    s.check_within(n)?;
    let bits = s.bits() as usize;
    TruthTable::from_fn(n, |x| {
        if (x & bits).count_ones() % 2 == 1 {
            -1
        } else {
            1
        }
    })
}

/// Description of a k-junta: an inner table on the `relevant` variables of an
/// `n`-variable function. `relevant[j]` feeds variable `j` of `inner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JuntaSpec {
    n: usize,
    relevant: Vec<usize>,
    inner: Option<TruthTable>,
    constant: i8,
}

impl JuntaSpec {
    pub fn new(n: usize, relevant: Vec<usize>, inner: TruthTable) -> Result<Self> {
        check_n(n)?;
        if relevant.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedJunta(
                "relevant indices must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = relevant.last() {
            if last >= n {
                return Err(Error::VariableOutOfRange { index: last, n });
            }
        }
        if inner.n() != relevant.len() {
            return Err(Error::MalformedJunta(format!(
                "inner table has {} variables but {} are relevant",
                inner.n(),
                relevant.len()
            )));
        }
        Ok(JuntaSpec {
            n,
            relevant,
            inner: Some(inner),
            constant: 1,
        })
    }

    /// The 0-junta with the given constant value.
    pub fn constant(n: usize, value: i8) -> Result<Self> {
        check_n(n)?;
        Ok(JuntaSpec {
            n,
            relevant: Vec::new(),
            inner: None,
            constant: if value < 0 { -1 } else { 1 },
        })
    }

    /// Uniformly random inner function on `k` uniformly chosen variables.
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        if k > n {
            return Err(Error::MalformedJunta(format!("k = {k} exceeds n = {n}")));
        }
        if k == 0 {
            let v = if rng.gen::<bool>() { -1 } else { 1 };
            return Self::constant(n, v);
        }
        let mut relevant = rand::seq::index::sample(rng, n, k).into_vec();
        relevant.sort_unstable();
        let inner = TruthTable::random(k, rng)?;
        Self::new(n, relevant, inner)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.relevant.len()
    }

    pub fn relevant(&self) -> &[usize] {
        &self.relevant
    }

    pub fn inner(&self) -> Option<&TruthTable> {
        self.inner.as_ref()
    }

    pub fn relevant_mask(&self) -> SubsetMask {
        SubsetMask::from_indices(self.relevant.iter().copied()).unwrap_or_default()
    }

    /// Value at input `x` of the lifted `n`-variable function.
    #[inline]
    pub fn eval(&self, x: usize) -> i8 {
        match &self.inner {
            Some(inner) => inner.at(project_index(x, &self.relevant)),
            None => self.constant,
        }
    }
}

/// Lifts a junta description to its full `n`-variable table.
pub fn make_junta(spec: &JuntaSpec) -> Result<TruthTable> {
    TruthTable::from_fn(spec.n, |x| spec.eval(x))
}
