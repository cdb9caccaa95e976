use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::{BinaryGame, WeightedRep};
use crate::coalition::Coalition;
use crate::error::{Error, Result};

/// Boundary values plus monotonicity along every covering pair `S ⊂ S ∪ {i}`.
pub fn is_simple(game: &BinaryGame) -> bool {
    let table = game.table();
    let n = game.n();
    if table.get(Coalition::EMPTY) || !table.get(game.full()) {
        return false;
    }
    (0..1u32 << n).into_par_iter().all(|m| {
        let s = Coalition(m);
        !table.get(s) || (0..n).all(|i| s.contains(i) || table.get(s.with(i)))
    })
}

pub(crate) fn require_simple(game: &BinaryGame) -> Result<()> {
    if is_simple(game) {
        Ok(())
    } else {
        Err(Error::domain("game is not a simple game (monotone with g(∅)=0, g(N)=1)"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Properties {
    pub proper: bool,
    pub strong: bool,
    pub constant_sum: bool,
    /// A winning coalition whose complement also wins.
    pub proper_witness: Option<Coalition>,
    /// A losing coalition whose complement also loses.
    pub strong_witness: Option<Coalition>,
}

pub fn properties(game: &BinaryGame) -> Result<Properties> {
    require_simple(game)?;
    let n = game.n();
    let table = game.table();
    let mut proper_witness = None;
    let mut strong_witness = None;
    for m in 0..1u32 << n {
        let s = Coalition(m);
        let t = s.complement(n);
        let (ws, wt) = (table.get(s), table.get(t));
        if ws && wt && proper_witness.is_none() {
            proper_witness = Some(s);
        }
        if !ws && !wt && strong_witness.is_none() {
            strong_witness = Some(s);
        }
        if proper_witness.is_some() && strong_witness.is_some() {
            break;
        }
    }
    let proper = proper_witness.is_none();
    let strong = strong_witness.is_none();
    Ok(Properties {
        proper,
        strong,
        constant_sum: proper && strong,
        proper_witness,
        strong_witness,
    })
}

/// The half-open interval `(q_lo, q_hi]` of quotas that, together with the
/// normalized weights, induce the same game.
pub fn quota_interval(rep: &WeightedRep) -> Result<(BigRational, BigRational)> {
    let n = rep.n();
    let (weights, quota) = rep.scaled();
    let total: u128 = weights.iter().sum();
    if total == 0 {
        return Err(Error::domain("all weights are zero"));
    }
    let mut max_losing: Option<u128> = None;
    let mut min_winning: Option<u128> = None;
    for m in 0..1u32 << n {
        let w: u128 = Coalition(m).members().map(|i| weights[i]).sum();
        if w >= quota {
            min_winning = Some(min_winning.map_or(w, |x| x.min(w)));
        } else {
            max_losing = Some(max_losing.map_or(w, |x| x.max(w)));
        }
    }
    let frac = |x: u128| BigRational::new(x.into(), total.into());
    let lo = max_losing.map(frac).unwrap_or_else(BigRational::zero);
    // Quota above the grand total: nobody wins; report the empty interval at 1.
    let hi = min_winning.map(frac).unwrap_or_else(|| frac(total));
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Desirability {
    Equivalent,
    /// The first voter is strictly more desirable.
    FirstMore,
    SecondMore,
    Incomparable,
}

/// Compares voters `i` and `j` (zero-based) over all `S ⊆ N \ {i, j}`.
pub fn desirability(game: &BinaryGame, i: usize, j: usize) -> Result<Desirability> {
    if i == j {
        return Err(Error::input("desirability needs two distinct voters"));
    }
    if i >= game.n() || j >= game.n() {
        return Err(Error::input("voter index out of range"));
    }
    require_simple(game)?;
    Ok(desirability_table(&game.table(), i, j))
}

pub(crate) fn desirability_table(table: &super::WinTable, i: usize, j: usize) -> Desirability {
    let (mut i_better, mut j_better) = (false, false);
    for m in 0..1u32 << table.n() {
        let s = Coalition(m);
        if s.contains(i) || s.contains(j) {
            continue;
        }
        let (wi, wj) = (table.get(s.with(i)), table.get(s.with(j)));
        i_better |= wi && !wj;
        j_better |= wj && !wi;
        if i_better && j_better {
            return Desirability::Incomparable;
        }
    }
    match (i_better, j_better) {
        (false, false) => Desirability::Equivalent,
        (true, false) => Desirability::FirstMore,
        (false, true) => Desirability::SecondMore,
        (true, true) => Desirability::Incomparable,
    }
}

pub fn is_complete(game: &BinaryGame) -> Result<bool> {
    require_simple(game)?;
    let table = game.table();
    let n = game.n();
    Ok((0..n).all(|i| {
        (i + 1..n).all(|j| desirability_table(&table, i, j) != Desirability::Incomparable)
    }))
}

/// Zero-based indices of voters that never turn a losing coalition into a winning one.
pub fn null_voters(game: &BinaryGame) -> Result<Vec<usize>> {
    require_simple(game)?;
    let table = game.table();
    let n = game.n();
    Ok((0..n)
        .filter(|&i| {
            (0..1u32 << n)
                .map(Coalition)
                .filter(|s| !s.contains(i))
                .all(|s| table.get(s) == table.get(s.with(i)))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn game(q: i64, w: &[i64]) -> BinaryGame {
        BinaryGame::weighted_int(q, w).unwrap()
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&game(2, &[1, 1, 0])));
        let bad = BinaryGame::from_winning(2, &[Coalition(0b01), Coalition(0b11)]).unwrap();
        assert!(is_simple(&bad));
        let non_monotone = BinaryGame::from_winning(2, &[Coalition(0b01)]).unwrap();
        assert!(!is_simple(&non_monotone));
        let empty_wins = BinaryGame::from_fn(2, |_| true);
        assert!(!is_simple(&empty_wins));
    }

    #[test]
    fn proper_strong_examples() {
        let p = properties(&game(2, &[1, 1, 1])).unwrap();
        assert!(p.proper && p.strong && p.constant_sum);
        let p = properties(&game(3, &[1, 1, 1])).unwrap();
        assert!(p.proper && !p.strong);
        let w = p.strong_witness.unwrap();
        assert_eq!(w.len() == 1 || w.len() == 2, true);
        let p = properties(&game(1, &[1, 1])).unwrap();
        assert!(!p.proper);
    }

    #[test]
    fn quota_intervals() {
        let rep = WeightedRep::from_integers(2, &[1, 1, 1]).unwrap();
        assert_eq!(quota_interval(&rep).unwrap(), (ratio(1, 3), ratio(2, 3)));
        let rep = WeightedRep::from_integers(1, &[1]).unwrap();
        assert_eq!(quota_interval(&rep).unwrap(), (ratio(0, 1), ratio(1, 1)));
        let rep = WeightedRep::from_integers(3, &[2, 1, 1, 1]).unwrap();
        assert_eq!(quota_interval(&rep).unwrap(), (ratio(2, 5), ratio(3, 5)));
    }

    #[test]
    fn desirability_examples() {
        let g = game(2, &[1, 1, 0]);
        assert_eq!(desirability(&g, 0, 1).unwrap(), Desirability::Equivalent);
        assert_eq!(desirability(&g, 1, 2).unwrap(), Desirability::FirstMore);
        assert!(desirability(&g, 1, 1).is_err());
        let two_pairs =
            BinaryGame::from_minimal_winning(4, &[Coalition(0b0011), Coalition(0b1100)]).unwrap();
        assert_eq!(desirability(&two_pairs, 0, 2).unwrap(), Desirability::Incomparable);
        assert!(!is_complete(&two_pairs).unwrap());
        assert!(is_complete(&g).unwrap());
    }

    #[test]
    fn null_voter_examples() {
        assert_eq!(null_voters(&game(2, &[1, 1, 0])).unwrap(), vec![2]);
        assert!(null_voters(&game(2, &[1, 1, 1])).unwrap().is_empty());
        assert_eq!(null_voters(&game(1, &[1, 0, 0])).unwrap(), vec![1, 2]);
    }
}
