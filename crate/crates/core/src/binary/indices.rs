use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{BinaryGame, WinTable};
use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::profile::PowerProfile;

/// `counts[i][s]`: number of losing coalitions of size `s` without voter `i`
/// that voter `i` turns winning.
pub fn swing_counts(game: &BinaryGame) -> Vec<Vec<u64>> {
    let n = game.n();
    let table = game.table();
    let flat = count_swings(&table);
    flat.chunks(n).map(|c| c.to_vec()).collect()
}

fn count_swings(table: &WinTable) -> Vec<u64> {
    let n = table.n();
    let size = 1u64 << n;
    let chunk = 1u64 << 12;
    (0..size.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0u64; n * n];
            for m in c * chunk..((c + 1) * chunk).min(size) {
                let s = Coalition(m as u32);
                if !table.get(s) {
                    continue;
                }
                let size_without = s.len() - 1;
                for i in s.members() {
                    if !table.get(s.without(i)) {
                        acc[i * n + size_without] += 1;
                    }
                }
            }
            acc
        })
        .reduce(
            || vec![0u64; n * n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::from(1), |acc, v| acc * v)
}

/// Shapley-Shubik index, exact.
pub fn ssi_binary(game: &BinaryGame) -> PowerProfile {
    let n = game.n();
    let counts = swing_counts(game);
    let n_fact = factorial(n);
    let weights: Vec<BigInt> = (0..n).map(|s| factorial(s) * factorial(n - 1 - s)).collect();
    let values = counts
        .iter()
        .map(|row| {
            let num: BigInt = row
                .iter()
                .zip(&weights)
                .map(|(&c, w)| BigInt::from(c) * w)
                .sum();
            BigRational::new(num, n_fact.clone())
        })
        .collect();
    PowerProfile::from_exact(values)
}

/// Absolute Banzhaf index, exact: swings over `2^(n-1)`.
pub fn bzi_binary(game: &BinaryGame) -> PowerProfile {
    let n = game.n();
    let counts = swing_counts(game);
    let den = BigInt::from(1u64) << (n - 1);
    let values = counts
        .iter()
        .map(|row| BigRational::new(BigInt::from(row.iter().sum::<u64>()), den.clone()))
        .collect();
    PowerProfile::from_exact(values)
}

/// Checks `P(g1) + P(g2) = P(g1 ∧ g2) + P(g1 ∨ g2)` in exact arithmetic.
pub fn transfer_check(
    index: impl Fn(&BinaryGame) -> PowerProfile,
    g1: &BinaryGame,
    g2: &BinaryGame,
) -> Result<bool> {
    if g1.n() != g2.n() {
        return Err(Error::input("transfer check needs games on the same voters"));
    }
    let meet = BinaryGame::meet(vec![g1.clone(), g2.clone()])?;
    let join = BinaryGame::join(vec![g1.clone(), g2.clone()])?;
    let exact = |g: &BinaryGame| {
        index(g)
            .exact
            .ok_or_else(|| Error::Mode("transfer check needs an exact index".into()))
    };
    let (a, b, c, d) = (exact(g1)?, exact(g2)?, exact(&meet)?, exact(&join)?);
    Ok((0..g1.n()).all(|i| &a[i] + &b[i] == &c[i] + &d[i]))
}
