use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use powidx::continuous::ContinuousGame;
use powidx::nucleolus::{
    compare_curves, excess, excess_curve, max_excess, nucleolus_search, Comparison,
};
use powidx::numerics::NumericsSpec;

fn simplex_point(raw: &[f64]) -> Vec<f64> {
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v / s).collect()
}

/// Separable games `Σ c_i x_i^{e_i}` with positive weights.
fn separable() -> impl Strategy<Value = (ContinuousGame, Vec<(f64, u32)>)> {
    prop::collection::vec((1i64..6, 1u32..5), 2..=4).prop_map(|parts| {
        let n = parts.len();
        let den: i64 = parts.iter().map(|p| p.0).sum();
        let exps: Vec<Vec<u32>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { parts[i].1 } else { 0 }).collect())
            .collect();
        let terms: Vec<(i64, &[u32])> = parts.iter().zip(&exps).map(|(p, e)| (p.0, e.as_slice())).collect();
        let g = ContinuousGame::monomials(den, &terms).unwrap();
        let coeffs = parts.iter().map(|p| (p.0 as f64 / den as f64, p.1)).collect();
        (g, coeffs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn excess_stays_in_range((g, _) in separable(), seed in any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = g.n();
        for _ in 0..1000 {
            let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
            let w = simplex_point(&(0..n).map(|_| rng.random::<f64>() + 1e-9).collect::<Vec<_>>());
            let e = excess(&g, &x, &w);
            prop_assert!((-1.0..=1.0).contains(&e));
        }
    }

    #[test]
    fn separable_max_excess_matches_a_dense_scan((g, coeffs) in separable(), raw in prop::collection::vec(0.01f64..1.0, 4)) {
        let n = g.n();
        let w = simplex_point(&raw[..n]);
        let m = max_excess(&g, &w);
        prop_assert!(!m.heuristic);
        // Independent: maximize each coordinate's part on a fine grid.
        let steps = 100_000;
        let scan: f64 = (0..n)
            .map(|i| {
                let (c, e) = coeffs[i];
                (0..=steps)
                    .map(|k| {
                        let t = k as f64 / steps as f64;
                        c * t.powi(e as i32) - w[i] * t
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum();
        prop_assert!((m.value - scan).abs() < 1e-9, "{} vs {}", m.value, scan);
        // And no corner beats it.
        for mask in 0..1u32 << n {
            let x: Vec<f64> = (0..n).map(|i| ((mask >> i) & 1) as f64).collect();
            prop_assert!(excess(&g, &x, &w) <= m.value + 1e-12);
        }
    }
}

fn ghat() -> ContinuousGame {
    ContinuousGame::monomials(6, &[(1, &[2, 0, 0]), (2, &[0, 2, 0]), (3, &[0, 0, 2])]).unwrap()
}

fn grid() -> Vec<f64> {
    (0..32).map(|k| 0.3 - 0.02 * k as f64).collect()
}

#[test]
fn excess_curves_do_not_increase() {
    let spec = NumericsSpec::monte_carlo(200_000, 9);
    let c = excess_curve(&ghat(), &[0.3, 0.3, 0.4], &grid(), &spec).unwrap();
    for k in 1..c.grid.len() {
        let slack = 3.0 * c.stderr[k].hypot(c.stderr[k - 1]);
        assert!(c.volumes[k] + slack >= c.volumes[k - 1]);
    }
}

#[test]
fn curve_comparison_is_antisymmetric() {
    let a = excess_curve(&ghat(), &[1.0 / 6.0, 2.0 / 6.0, 0.5], &grid(), &NumericsSpec::monte_carlo(200_000, 1)).unwrap();
    let b = excess_curve(&ghat(), &[0.4, 0.3, 0.3], &grid(), &NumericsSpec::monte_carlo(200_000, 2)).unwrap();
    assert_eq!(compare_curves(&a, &a).unwrap(), Comparison::Indistinguishable);
    let ab = compare_curves(&a, &b).unwrap();
    let ba = compare_curves(&b, &a).unwrap();
    assert_eq!(ab, Comparison::ALess);
    assert_eq!(ba, Comparison::BLess);
}

#[test]
fn search_results_are_imputations() {
    let games = [
        ghat(),
        ContinuousGame::monomials(1, &[(1, &[1, 2])]).unwrap(),
        ContinuousGame::monomials(2, &[(1, &[2, 0]), (1, &[0, 2])]).unwrap(),
    ];
    for g in &games {
        let r = nucleolus_search(g, &NumericsSpec::monte_carlo(100_000, 3)).unwrap();
        assert!(r.w_star.iter().all(|&v| v >= 0.0));
        assert!((r.w_star.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (k, &(lo, hi)) in r.box_bounds.iter().enumerate() {
            assert!(lo <= r.w_star[k] + 1e-12 && r.w_star[k] <= hi + 1e-12);
        }
    }
    let r = nucleolus_search(&ghat(), &NumericsSpec::monte_carlo(1000, 3)).unwrap();
    assert!(r.max_excess.abs() <= 1e-8);
}
