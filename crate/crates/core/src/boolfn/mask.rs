use std::fmt;

use crate::error::{Error, Result};

/// A subset of variables packed into a machine word. Bit `i` set means
/// variable `x_{i+1}` is a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        if n == 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut bits = 0u32;
        for i in indices {
            if i >= 32 {
                return Err(Error::VariableOutOfRange { index: i, n: 32 });
            }
            bits |= 1 << i;
        }
        Ok(SubsetMask(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    /// Checks the mask only names variables below `n`.
    pub fn check_within(self, n: usize) -> Result<()> {
        if n < 32 && self.0 >> n != 0 {
            let index = 31 - self.0.leading_zeros() as usize;
            return Err(Error::VariableOutOfRange { index, n });
        }
        Ok(())
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn to_var_set(self) -> VarSet {
        VarSet(self.indices().collect())
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_var_set())
    }
}

/// Sparse subset of variables as a strictly increasing index list.
///
/// Used wherever the ambient variable count can exceed a machine word,
/// e.g. FS responses for addressing instances with thousands of variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VarSet(Vec<usize>);

impl VarSet {
    pub fn empty() -> Self {
        VarSet(Vec::new())
    }

    /// Builds a set from arbitrary indices, sorting and dropping duplicates.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        VarSet(indices)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Packs into a [`SubsetMask`] when every index fits in 32 bits.
    pub fn to_mask(&self) -> Option<SubsetMask> {
        SubsetMask::from_indices(self.0.iter().copied()).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl From<SubsetMask> for VarSet {
    fn from(mask: SubsetMask) -> Self {
        mask.to_var_set()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, i) in self.0.iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}
