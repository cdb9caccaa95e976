//! Coalitions as bit vectors over at most [`MAX_VOTERS`] voters.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_VOTERS: usize = 24;

/// A subset of the voter set; bit `i` stands for voter `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(pub u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn full(n: usize) -> Coalition {
        Coalition(full_mask(n))
    }

    /// Builds a coalition from 1-based voter labels.
    pub fn from_voters(n: usize, voters: &[usize]) -> Result<Coalition> {
        check_n(n)?;
        let mut bits = 0u32;
        for &v in voters {
            if v == 0 || v > n {
                return Err(Error::input(format!("voter {v} outside 1..={n}")));
            }
            bits |= 1 << (v - 1);
        }
        Ok(Coalition(bits))
    }

    /// Validates that no bit at or above `n` is set.
    pub fn checked(self, n: usize) -> Result<Coalition> {
        if self.0 & !full_mask(n) != 0 {
            return Err(Error::input(format!(
                "coalition {self} does not fit {n} voters"
            )));
        }
        Ok(self)
    }

    /// Zero-based membership test.
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Coalition {
        Coalition(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Coalition {
        Coalition(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, n: usize) -> Coalition {
        Coalition(!self.0 & full_mask(n))
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// Zero-based member indices in increasing order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |&i| bits >> i & 1 == 1)
    }

    /// 1-based voter labels, as used in files and reports.
    pub fn voters(self) -> Vec<usize> {
        self.members().map(|i| i + 1).collect()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.voters().iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::input("a game needs at least one voter"));
    }
    if n > MAX_VOTERS {
        return Err(Error::capacity(format!("{n} voters"), MAX_VOTERS));
    }
    Ok(())
}
