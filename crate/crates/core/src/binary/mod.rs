//! Binary simple games: winning coalitions over at most 24 voters.

mod families;
mod indices;
mod nucleolus;
mod properties;

pub use families::{classify_coalitions, CoalitionFamilies};
pub use indices::{bzi_binary, ssi_binary, swing_counts, transfer_check};
pub use nucleolus::{nucleolus_binary, sorted_excesses};
pub use properties::{
    desirability, is_complete, is_simple, null_voters, properties, quota_interval, Desirability,
    Properties,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::coalition::{check_n, full_mask, Coalition};
use crate::error::{Error, Result};
use crate::rational::lcm_of_denominators;

/// Quota and weights; a coalition wins when its weight reaches the quota.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedRep {
    pub quota: BigRational,
    pub weights: Vec<BigRational>,
    scaled_quota: u128,
    scaled_weights: Vec<u128>,
}

impl WeightedRep {
    pub fn new(quota: BigRational, weights: Vec<BigRational>) -> Result<WeightedRep> {
        if !quota.is_positive() {
            return Err(Error::input("quota must be positive"));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::input("weights must be nonnegative"));
        }
        if weights.iter().all(|w| w.is_zero()) {
            return Err(Error::domain("at least one weight must be positive"));
        }
        let scale = lcm_of_denominators(weights.iter().chain(std::iter::once(&quota)));
        let to_int = |r: &BigRational| -> Result<u128> {
            (r * BigRational::from_integer(scale.clone()))
                .to_integer()
                .to_u128()
                .ok_or_else(|| Error::input("weights too large for exact integer scaling"))
        };
        let scaled_weights = weights.iter().map(to_int).collect::<Result<Vec<_>>>()?;
        let scaled_quota = to_int(&quota)?;
        scaled_weights
            .iter()
            .try_fold(0u128, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| Error::input("weights too large for exact integer scaling"))?;
        Ok(WeightedRep {
            quota,
            weights,
            scaled_quota,
            scaled_weights,
        })
    }

    pub fn from_integers(quota: i64, weights: &[i64]) -> Result<WeightedRep> {
        WeightedRep::new(
            BigRational::from_integer(BigInt::from(quota)),
            weights
                .iter()
                .map(|&w| BigRational::from_integer(BigInt::from(w)))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Same game with weights summing to one.
    pub fn normalized(&self) -> WeightedRep {
        let total: BigRational = self.weights.iter().cloned().sum();
        WeightedRep::new(
            &self.quota / &total,
            self.weights.iter().map(|w| w / &total).collect(),
        )
        .expect("rescaling keeps a valid representation")
    }

    pub fn weight_of(&self, s: Coalition) -> BigRational {
        s.members().map(|i| self.weights[i].clone()).sum()
    }

    pub(crate) fn scaled_weight(&self, s: Coalition) -> u128 {
        s.members().map(|i| self.scaled_weights[i]).sum()
    }

    /// Integer weights and their common scale: `w_i = scaled_i / scale`.
    pub(crate) fn scaled(&self) -> (&[u128], u128) {
        (&self.scaled_weights, self.scaled_quota)
    }

    pub fn wins(&self, s: Coalition) -> bool {
        self.scaled_weight(s) >= self.scaled_quota
    }
}

/// Dense winning table, one bit per coalition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinTable {
    n: usize,
    words: Vec<u64>,
}

impl WinTable {
    pub fn from_fn(n: usize, f: impl Fn(Coalition) -> bool + Sync) -> WinTable {
        let size = 1usize << n;
        let nwords = size.div_ceil(64);
        let words = (0..nwords)
            .into_par_iter()
            .map(|w| {
                let mut word = 0u64;
                for b in 0..64 {
                    let mask = w * 64 + b;
                    if mask < size && f(Coalition(mask as u32)) {
                        word |= 1 << b;
                    }
                }
                word
            })
            .collect();
        WinTable { n, words }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, s: Coalition) -> bool {
        let m = s.0 as usize;
        self.words[m >> 6] >> (m & 63) & 1 == 1
    }

    pub fn winning(&self) -> impl Iterator<Item = Coalition> + '_ {
        (0..1u32 << self.n)
            .map(Coalition)
            .filter(move |&s| self.get(s))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GameBody {
    Table(WinTable),
    Weighted(WeightedRep),
    Meet(Vec<BinaryGame>),
    Join(Vec<BinaryGame>),
}

/// A Boolean game on `n` voters. Simplicity (monotonicity plus the boundary
/// values) is a property checked by [`is_simple`], not a construction invariant,
/// so that malformed tables can still be inspected.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryGame {
    n: usize,
    body: GameBody,
}

impl BinaryGame {
    pub fn weighted(rep: WeightedRep) -> Result<BinaryGame> {
        check_n(rep.n())?;
        Ok(BinaryGame {
            n: rep.n(),
            body: GameBody::Weighted(rep),
        })
    }

    /// `[quota; w_1, ..., w_n]` with integer entries.
    pub fn weighted_int(quota: i64, weights: &[i64]) -> Result<BinaryGame> {
        BinaryGame::weighted(WeightedRep::from_integers(quota, weights)?)
    }

    /// Exactly the listed coalitions win.
    pub fn from_winning(n: usize, winning: &[Coalition]) -> Result<BinaryGame> {
        check_n(n)?;
        let mut set = vec![false; 1 << n];
        for &s in winning {
            set[s.checked(n)?.0 as usize] = true;
        }
        Ok(BinaryGame::from_fn(n, |s| set[s.0 as usize]))
    }

    /// Every superset of a listed coalition wins.
    pub fn from_minimal_winning(n: usize, minimal: &[Coalition]) -> Result<BinaryGame> {
        check_n(n)?;
        for &s in minimal {
            s.checked(n)?;
        }
        let minimal = minimal.to_vec();
        Ok(BinaryGame::from_fn(n, move |s| {
            minimal.iter().any(|m| m.is_subset_of(s))
        }))
    }

    pub fn from_fn(n: usize, f: impl Fn(Coalition) -> bool + Sync) -> BinaryGame {
        BinaryGame {
            n,
            body: GameBody::Table(WinTable::from_fn(n, f)),
        }
    }

    pub fn meet(parts: Vec<BinaryGame>) -> Result<BinaryGame> {
        let n = common_n(&parts)?;
        Ok(BinaryGame {
            n,
            body: GameBody::Meet(parts),
        })
    }

    pub fn join(parts: Vec<BinaryGame>) -> Result<BinaryGame> {
        let n = common_n(&parts)?;
        Ok(BinaryGame {
            n,
            body: GameBody::Join(parts),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn body(&self) -> &GameBody {
        &self.body
    }

    pub fn as_weighted(&self) -> Option<&WeightedRep> {
        match &self.body {
            GameBody::Weighted(rep) => Some(rep),
            _ => None,
        }
    }

    /// Value of a coalition, checking its width.
    pub fn eval(&self, s: Coalition) -> Result<u8> {
        s.checked(self.n)?;
        Ok(self.wins(s) as u8)
    }

    /// Unchecked membership in the winning set.
    pub fn wins(&self, s: Coalition) -> bool {
        match &self.body {
            GameBody::Table(t) => t.get(s),
            GameBody::Weighted(rep) => rep.wins(s),
            GameBody::Meet(parts) => parts.iter().all(|g| g.wins(s)),
            GameBody::Join(parts) => parts.iter().any(|g| g.wins(s)),
        }
    }

    /// Materializes the winning table. Cheap for table bodies.
    pub fn table(&self) -> WinTable {
        match &self.body {
            GameBody::Table(t) => t.clone(),
            _ => WinTable::from_fn(self.n, |s| self.wins(s)),
        }
    }

    /// Same game with the winning set stored as a table.
    pub fn tabulated(&self) -> BinaryGame {
        BinaryGame {
            n: self.n,
            body: GameBody::Table(self.table()),
        }
    }

    pub fn winning(&self) -> Vec<Coalition> {
        (0..1u32 << self.n)
            .map(Coalition)
            .filter(|&s| self.wins(s))
            .collect()
    }

    /// True when both games have the same winning coalitions.
    pub fn same_game(&self, other: &BinaryGame) -> bool {
        self.n == other.n
            && (0..1u32 << self.n).all(|m| self.wins(Coalition(m)) == other.wins(Coalition(m)))
    }

    pub(crate) fn full(&self) -> Coalition {
        Coalition(full_mask(self.n))
    }
}

fn common_n(parts: &[BinaryGame]) -> Result<usize> {
    let first = parts
        .first()
        .ok_or_else(|| Error::input("meet/join needs at least one game"))?;
    if parts.iter().any(|g| g.n != first.n) {
        return Err(Error::input("meet/join of games with different voter counts"));
    }
    Ok(first.n)
}
