use super::properties::{desirability_table, require_simple, Desirability};
use super::BinaryGame;
use crate::coalition::Coalition;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoalitionFamilies {
    pub winning: Vec<Coalition>,
    pub losing: Vec<Coalition>,
    pub minimal_winning: Vec<Coalition>,
    pub maximal_losing: Vec<Coalition>,
    /// Present only for complete games whose voters are listed in
    /// non-increasing desirability.
    pub shift_minimal_winning: Option<Vec<Coalition>>,
    pub shift_maximal_losing: Option<Vec<Coalition>>,
}

/// Splits all coalitions into the standard families. With `want_shifts`, the
/// shift families are computed too; that needs `1 ⪰ 2 ⪰ … ⪰ n`.
pub fn classify_coalitions(game: &BinaryGame, want_shifts: bool) -> Result<CoalitionFamilies> {
    require_simple(game)?;
    let n = game.n();
    let table = game.table();
    let mut fam = CoalitionFamilies::default();
    for m in 0..1u32 << n {
        let s = Coalition(m);
        if table.get(s) {
            fam.winning.push(s);
            if s.members().all(|i| !table.get(s.without(i))) {
                fam.minimal_winning.push(s);
            }
        } else {
            fam.losing.push(s);
            if (0..n).all(|i| s.contains(i) || table.get(s.with(i))) {
                fam.maximal_losing.push(s);
            }
        }
    }
    if want_shifts {
        for i in 0..n {
            for j in i + 1..n {
                match desirability_table(&table, i, j) {
                    Desirability::Equivalent | Desirability::FirstMore => {}
                    Desirability::SecondMore => {
                        return Err(Error::domain(format!(
                            "voters are not ordered by desirability: {} is more desirable than {}",
                            j + 1,
                            i + 1
                        )))
                    }
                    Desirability::Incomparable => {
                        return Err(Error::domain(format!(
                            "game is not complete: voters {} and {} are incomparable",
                            i + 1,
                            j + 1
                        )))
                    }
                }
            }
        }
        fam.shift_minimal_winning = Some(
            fam.minimal_winning
                .iter()
                .copied()
                .filter(|&s| right_shifts(s, n).all(|t| !table.get(t)))
                .collect(),
        );
        fam.shift_maximal_losing = Some(
            fam.losing
                .iter()
                .copied()
                .filter(|&s| left_shifts(s, n).all(|t| table.get(t)))
                .collect(),
        );
    }
    Ok(fam)
}

/// Direct right-shifts: move a member to the next, less desirable voter, or drop voter n.
fn right_shifts(s: Coalition, n: usize) -> impl Iterator<Item = Coalition> {
    (0..n).filter_map(move |i| {
        if !s.contains(i) {
            None
        } else if i + 1 < n {
            (!s.contains(i + 1)).then(|| s.without(i).with(i + 1))
        } else {
            Some(s.without(i))
        }
    })
}

/// Direct left-shifts: move a member to the previous voter, or add voter n.
fn left_shifts(s: Coalition, n: usize) -> impl Iterator<Item = Coalition> {
    let add_last = (!s.contains(n - 1)).then(|| s.with(n - 1));
    (1..n)
        .filter_map(move |i| (s.contains(i) && !s.contains(i - 1)).then(|| s.without(i).with(i - 1)))
        .chain(add_last)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[usize]) -> Coalition {
        Coalition::from_voters(3, v).unwrap()
    }

    #[test]
    fn small_example_families() {
        let g = BinaryGame::from_winning(3, &[c(&[1, 2]), c(&[1, 2, 3])]).unwrap();
        let f = classify_coalitions(&g, true).unwrap();
        assert_eq!(f.minimal_winning, vec![c(&[1, 2])]);
        assert_eq!(f.maximal_losing, vec![c(&[1, 3]), c(&[2, 3])]);
        assert_eq!(f.shift_minimal_winning.unwrap(), vec![c(&[1, 2])]);
        assert_eq!(f.shift_maximal_losing.unwrap(), vec![c(&[1, 3])]);
        assert_eq!(f.winning.len() + f.losing.len(), 8);
    }

    #[test]
    fn unanimity_families() {
        let n = 4;
        let g = BinaryGame::from_winning(n, &[Coalition::full(n)]).unwrap();
        let f = classify_coalitions(&g, false).unwrap();
        assert_eq!(f.minimal_winning, vec![Coalition::full(n)]);
        assert_eq!(f.maximal_losing.len(), n);
        assert!(f.maximal_losing.iter().all(|s| s.len() == n - 1));
    }

    #[test]
    fn shift_families_need_completeness() {
        let g = BinaryGame::from_minimal_winning(4, &[Coalition(0b0011), Coalition(0b1100)]).unwrap();
        assert!(matches!(classify_coalitions(&g, true), Err(Error::Domain(_))));
        assert!(classify_coalitions(&g, false).is_ok());
        let misordered = BinaryGame::weighted_int(2, &[0, 1, 1]).unwrap();
        assert!(classify_coalitions(&misordered, true).is_err());
    }
}
