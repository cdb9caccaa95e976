use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use powidx::binary::{
    bzi_binary, is_complete, nucleolus_binary, properties, quota_interval, sorted_excesses,
    ssi_binary, BinaryGame, WeightedRep,
};
use powidx::rational::ratio;
use powidx::Coalition;

fn weighted() -> impl Strategy<Value = (i64, Vec<i64>)> {
    (1usize..=8)
        .prop_flat_map(|n| prop::collection::vec(0i64..6, n))
        .prop_filter("some weight", |w| w.iter().sum::<i64>() > 0)
        .prop_flat_map(|w| {
            let total: i64 = w.iter().sum();
            (1..=total, Just(w))
        })
}

/// Shapley-Shubik by walking every ordering of the voters.
fn ssi_by_orderings(g: &BinaryGame) -> Vec<BigRational> {
    let n = g.n();
    let mut counts = vec![0i64; n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i64;
    permute(&mut perm, 0, &mut |p| {
        total += 1;
        let mut s = Coalition::EMPTY;
        for &i in p {
            let t = s.with(i);
            if g.wins(t) && !g.wins(s) {
                counts[i] += 1;
            }
            s = t;
        }
    });
    counts.iter().map(|&c| ratio(c, total)).collect()
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quota_interval_matches_proper_and_strong((quota, w) in weighted()) {
        let rep = WeightedRep::from_integers(quota, &w).unwrap();
        let g = BinaryGame::weighted(rep.clone()).unwrap();
        let (lo, hi) = quota_interval(&rep).unwrap();
        let p = properties(&g).unwrap();
        let half = ratio(1, 2);
        prop_assert_eq!(p.proper, hi > half);
        prop_assert_eq!(p.strong, lo < half);
        prop_assert_eq!(p.constant_sum, lo < half && half < hi);
        prop_assert!(is_complete(&g).unwrap());
    }

    #[test]
    fn every_quota_in_the_interval_gives_the_same_game((quota, w) in weighted(), t in 1i64..8) {
        let rep = WeightedRep::from_integers(quota, &w).unwrap();
        let g = BinaryGame::weighted(rep.clone()).unwrap();
        let (lo, hi) = quota_interval(&rep).unwrap();
        // A point strictly inside, and the upper end itself.
        let inside = &lo + (&hi - &lo) * ratio(t, 8);
        for q in [inside, hi] {
            let other = WeightedRep::new(q, rep.normalized().weights.clone()).unwrap();
            prop_assert!(g.same_game(&BinaryGame::weighted(other).unwrap()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ssi_agrees_with_orderings_and_is_efficient((quota, w) in weighted()) {
        prop_assume!(w.len() <= 6);
        let g = BinaryGame::weighted_int(quota, &w).unwrap();
        let p = ssi_binary(&g);
        let exact = p.exact.clone().unwrap();
        prop_assert_eq!(&exact, &ssi_by_orderings(&g));
        prop_assert_eq!(exact.iter().cloned().sum::<BigRational>(), BigRational::one());
        for (i, wi) in w.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                if wi == wj {
                    prop_assert_eq!(&exact[i], &exact[j]);
                }
            }
        }
    }

    #[test]
    fn null_voters_get_nothing((quota, mut w) in weighted()) {
        prop_assume!(w.len() < 8);
        w.push(0);
        let g = BinaryGame::weighted_int(quota, &w).unwrap();
        let last = w.len() - 1;
        prop_assert!(ssi_binary(&g).exact.unwrap()[last].is_zero());
        prop_assert!(bzi_binary(&g).exact.unwrap()[last].is_zero());
    }

    #[test]
    fn nucleolus_beats_random_imputations((quota, w) in weighted(), seed in any::<u64>()) {
        prop_assume!(w.len() >= 2 && w.len() <= 6);
        use rand::{Rng, SeedableRng};
        let g = BinaryGame::weighted_int(quota, &w).unwrap();
        let x = nucleolus_binary(&g).unwrap().values;
        prop_assert!(x.iter().all(|&v| v >= -1e-9));
        prop_assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let ours = sorted_excesses(&g, &x);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let raw: Vec<f64> = (0..w.len()).map(|_| -rng.random::<f64>().ln()).collect();
            let s: f64 = raw.iter().sum();
            let y: Vec<f64> = raw.iter().map(|v| v / s).collect();
            let theirs = sorted_excesses(&g, &y);
            // Lexicographic comparison with a small tolerance.
            let first = ours.iter().zip(&theirs).find(|(a, b)| (*a - *b).abs() > 1e-9);
            if let Some((a, b)) = first {
                prop_assert!(a < b, "random imputation {:?} beats the nucleolus {:?}", y, x);
            }
        }
    }
}
