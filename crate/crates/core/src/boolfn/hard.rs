//! The addressing function and the two hard-instance families built from it.
//!
//! Variable layout for an instance with `r` address bits on `n` variables:
//! indices `0..r` are the address variables `x_1..x_r`, and index `r + j` is
//! the addressee candidate `y_j` for `j` in `0..n-r`.
//!
//! The address of an input is the integer whose binary digits, most
//! significant first, are `(1-x_1)/2, ..., (1-x_r)/2`. Under the table index
//! encoding this is the low `r` index bits read in reverse, so `x_1 = -1`
//! contributes `2^(r-1)`.

use rand::Rng;

use super::table::{check_n, var_value, TruthTable};
use crate::error::{Error, Result};

/// Largest address width the analytic instance descriptions accept.
pub const R_BITS_MAX: usize = 20;

/// Address selected by the first `r` variables of input `x`.
#[inline]
pub fn address_of(x: usize, r: usize) -> usize {
    (0..r).fold(0, |acc, j| acc << 1 | (x >> j & 1))
}

fn check_r(r: usize) -> Result<()> {
    if r == 0 || r > R_BITS_MAX {
        return Err(Error::InvalidParameter(format!(
            "address width r = {r} must lie in 1..={R_BITS_MAX}"
        )));
    }
    Ok(())
}

fn check_distinct(tau: &[usize], limit: usize) -> Result<()> {
    let mut seen = vec![false; limit];
    for &t in tau {
        if t >= limit {
            return Err(Error::MalformedInstance(format!(
                "y-index {t} out of range 0..{limit}"
            )));
        }
        if std::mem::replace(&mut seen[t], true) {
            return Err(Error::MalformedInstance(format!("y-index {t} repeated")));
        }
    }
    Ok(())
}

/// The addressing function on `r + 2^r` variables: output is `z_address`.
pub fn make_addressing(r: usize) -> Result<TruthTable> {
    check_r(r)?;
    let big_r = 1usize << r;
    check_n(r + big_r)?;
    TruthTable::from_fn(r + big_r, |x| var_value(x, r + address_of(x, r)))
}

/// Far-from-junta instance: leaf `i` of the address tree reads `y_{tau(i)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectInstance {
    r: usize,
    n: usize,
    tau: Vec<usize>,
}

impl RejectInstance {
    pub fn new(r: usize, n: usize, tau: Vec<usize>) -> Result<Self> {
        check_r(r)?;
        let big_r = 1usize << r;
        if n < r + big_r {
            return Err(Error::MalformedInstance(format!(
                "n = {n} is below r + R = {}",
                r + big_r
            )));
        }
        if tau.len() != big_r {
            return Err(Error::MalformedInstance(format!(
                "tau has {} entries, expected R = {big_r}",
                tau.len()
            )));
        }
        check_distinct(&tau, n - r)?;
        Ok(RejectInstance { r, n, tau })
    }

    /// Uniform draw from the reject family: `R` distinct y-variables in random order.
    pub fn random<G: Rng + ?Sized>(r: usize, n: usize, rng: &mut G) -> Result<Self> {
        check_r(r)?;
        let big_r = 1usize << r;
        if n < r + big_r {
            return Err(Error::MalformedInstance(format!(
                "n = {n} is below r + R = {}",
                r + big_r
            )));
        }
        let tau = rand::seq::index::sample(rng, n - r, big_r).into_vec();
        Ok(RejectInstance { r, n, tau })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn big_r(&self) -> usize {
        1 << self.r
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    /// Junta size the family is tested against: `r + R/2`.
    pub fn junta_bound(&self) -> usize {
        self.r + self.big_r() / 2
    }

    pub fn relevant_variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.r)
            .chain(self.tau.iter().map(|t| self.r + t))
            .collect();
        v.sort_unstable();
        v
    }
}

/// Junta instance: leaf `i < R/2` reads `y_{tau(i)}`, and the antipodal leaf
/// `R-1-i` reads `s_i * y_{tau(i)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptInstance {
    r: usize,
    n: usize,
    tau: Vec<usize>,
    signs: Vec<i8>,
}

impl AcceptInstance {
    pub fn new(r: usize, n: usize, tau: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        check_r(r)?;
        let half = (1usize << r) / 2;
        if n < r + half {
            return Err(Error::MalformedInstance(format!(
                "n = {n} is below r + R/2 = {}",
                r + half
            )));
        }
        if tau.len() != half || signs.len() != half {
            return Err(Error::MalformedInstance(format!(
                "tau and s need R/2 = {half} entries, got {} and {}",
                tau.len(),
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::MalformedInstance("signs must be -1 or +1".into()));
        }
        check_distinct(&tau, n - r)?;
        Ok(AcceptInstance { r, n, tau, signs })
    }

    /// Uniform draw from the accept family: `R/2` distinct y-variables in
    /// random order and independent uniform signs.
    pub fn random<G: Rng + ?Sized>(r: usize, n: usize, rng: &mut G) -> Result<Self> {
        check_r(r)?;
        let half = (1usize << r) / 2;
        if n < r + half {
            return Err(Error::MalformedInstance(format!(
                "n = {n} is below r + R/2 = {}",
                r + half
            )));
        }
        let tau = rand::seq::index::sample(rng, n - r, half).into_vec();
        let signs = (0..half)
            .map(|_| if rng.gen::<bool>() { -1 } else { 1 })
            .collect();
        Ok(AcceptInstance { r, n, tau, signs })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn big_r(&self) -> usize {
        1 << self.r
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn junta_bound(&self) -> usize {
        self.r + self.big_r() / 2
    }

    pub fn relevant_variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.r)
            .chain(self.tau.iter().map(|t| self.r + t))
            .collect();
        v.sort_unstable();
        v
    }
}

pub fn realize_reject(inst: &RejectInstance) -> Result<TruthTable> {
    check_n(inst.n)?;
    let r = inst.r;
    TruthTable::from_fn(inst.n, |x| var_value(x, r + inst.tau[address_of(x, r)]))
}

pub fn realize_accept(inst: &AcceptInstance) -> Result<TruthTable> {
    check_n(inst.n)?;
    let r = inst.r;
    let big_r = inst.big_r();
    let half = big_r / 2;
    TruthTable::from_fn(inst.n, |x| {
        let a = address_of(x, r);
        if a < half {
            var_value(x, r + inst.tau[a])
        } else {
            let i = big_r - 1 - a;
            inst.signs[i] * var_value(x, r + inst.tau[i])
        }
    })
}
