use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use powidx::binary::{bzi_binary, ssi_binary, BinaryGame};
use powidx::jk::{
    bzi_jk, embed_binary, pivot, pivot_counts, queues, ssi_jk, swings, telescoping_swings,
    three_level_example, JkGame,
};
use powidx::Coalition;

/// All monotone Boolean functions on `n` voters, as truth tables (bit m is
/// the value on coalition m).
fn monotone_tables(n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![0, 1];
    }
    let smaller = monotone_tables(n - 1);
    let half = 1u32 << (n - 1);
    let mut out = Vec::new();
    for &lo in &smaller {
        for &hi in &smaller {
            if lo & !hi == 0 {
                out.push(lo | (hi << half));
            }
        }
    }
    out
}

#[test]
fn dedekind_counts() {
    let counts: Vec<usize> = (0..=4).map(|n| monotone_tables(n).len()).collect();
    assert_eq!(counts, vec![2, 3, 6, 20, 168]);
}

#[test]
fn embedding_is_exact_for_every_simple_game_up_to_five_voters() {
    for n in 1..=5usize {
        let mut checked = 0;
        for table in monotone_tables(n) {
            // Simple games lose on the empty coalition and win on the grand one.
            if table & 1 == 1 || table >> ((1 << n) - 1) & 1 == 0 {
                continue;
            }
            let g = BinaryGame::from_fn(n, |s: Coalition| table >> s.0 & 1 == 1);
            let e = embed_binary(&g).unwrap();
            assert_eq!(ssi_jk(&e).unwrap().exact, ssi_binary(&g).exact, "n={n} table={table:#x}");
            assert_eq!(bzi_jk(&e).unwrap().exact, bzi_binary(&g).exact, "n={n} table={table:#x}");
            checked += 1;
        }
        let expected = [0, 1, 4, 18, 166, 7579][n];
        assert_eq!(checked, expected);
    }
}

/// A monotone (j,k) game: the output level counts how many thresholds the
/// weighted sum of level drops reaches.
fn random_jk() -> impl Strategy<Value = JkGame> {
    (1usize..=4, 2u8..=4, 2u8..=4).prop_flat_map(|(n, j, k)| {
        let max = n as u32 * (j as u32 - 1) * 3;
        (
            prop::collection::vec(1u32..=3, n),
            prop::collection::vec(1u32..=max, (k - 1) as usize),
            Just((n, j, k)),
        )
            .prop_map(|(w, mut t, (n, j, k))| {
                let top: u32 = w.iter().map(|x| x * (j as u32 - 1)).sum();
                t.iter_mut().for_each(|x| *x = (*x).min(top).max(1));
                JkGame::from_fn(n, j, k, |p| {
                    let s: u32 = p.iter().zip(&w).map(|(&l, &wi)| (l as u32 - 1) * wi).sum();
                    1 + t.iter().filter(|&&x| s >= x).count() as u8
                })
                .unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ssi_jk_sums_to_the_boundary_count(g in random_jk()) {
        // One pivot per boundary, so only two-output games are efficient.
        let total: BigRational = ssi_jk(&g).unwrap().exact.unwrap().into_iter().sum();
        prop_assert_eq!(total, BigRational::from_integer((g.k() as i64 - 1).into()));
    }

    #[test]
    fn two_output_games_are_efficient(g in random_jk().prop_filter("k = 2", |g| g.k() == 2)) {
        let total: BigRational = ssi_jk(&g).unwrap().exact.unwrap().into_iter().sum();
        prop_assert_eq!(total, BigRational::one());
    }

    #[test]
    fn one_pivot_per_profile_and_boundary(g in random_jk()) {
        let per_profile = (g.num_profiles() as u64) * (g.k() as u64 - 1);
        for (_, counts) in pivot_counts(&g).unwrap() {
            prop_assert_eq!(counts.iter().sum::<u64>(), per_profile);
        }
    }

    #[test]
    fn swings_telescope(g in random_jk()) {
        for i in 0..g.n() {
            prop_assert_eq!(swings(&g, i).unwrap(), telescoping_swings(&g, i));
        }
    }
}

#[test]
fn example_pivots_are_unique_and_sum_to_the_counts() {
    let g = three_level_example();
    let counts = pivot_counts(&g).unwrap();
    for (q, c) in &counts {
        let mut tally = vec![0u64; 3];
        for idx in 0..27usize {
            let profile = [(idx % 3) as u8 + 1, (idx / 3 % 3) as u8 + 1, (idx / 9) as u8 + 1];
            tally[pivot(&g, q, &profile, 1).unwrap()] += 1;
        }
        assert_eq!(&tally, c, "queue {q:?}");
    }
    // The six stated triples reproduce the index.
    let stated = [[18, 6, 3], [18, 3, 6], [24, 0, 3], [24, 0, 3], [24, 3, 0], [24, 3, 0]];
    let total: Vec<u64> = (0..3).map(|i| stated.iter().map(|t| t[i]).sum()).collect();
    let ssi = ssi_jk(&g).unwrap().exact.unwrap();
    for i in 0..3 {
        assert_eq!(ssi[i], BigRational::new((total[i] as i64).into(), (6 * 27).into()));
    }
    assert_eq!(queues(3).len(), counts.len());
}
