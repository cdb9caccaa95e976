//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines show up in plain
//! `cargo test` output. Exits nonzero only when a criterion outside
//! `KNOWN_FAILURES` fails.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use powidx::binary::{nucleolus_binary, properties, quota_interval, ssi_binary, BinaryGame, WeightedRep};
use powidx::continuous::{
    bzi_continuous, median_example_densities, median_example_stated, median_region_exact,
    median_region_mc, median_region_quadrature, ssi_continuous, ssi_queue_mc, ssi_queue_terms,
    ContinuousGame, QuotaFunction, Term, ThresholdRep, Weights,
};
use powidx::jk::{bzi_jk, embed_binary, pivot_counts, queues, ssi_jk, swings, three_level_example};
use powidx::nucleolus::nucleolus_search;
use powidx::numerics::NumericsSpec;
use powidx::profile::l1_distance;
use powidx::rational::{format_rational, ratio, to_f64};
use powidx::reproduce::{
    ghat, gtilde, median_5321_queue_value, queue_value, x1_x2_squared, GTILDE_TABLES,
};
use powidx::{Coalition, PowerProfile};

const SEED: u64 = 20_240_601;

/// Criteria expected to fail, with the reason printed next to the verdict.
const KNOWN_FAILURES: [(u32, &str); 1] = [(
    5,
    "two rows of the voter-1 table carry each other's queue labels; see the decisions log",
)];

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn fmt(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn fmt_f(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", parts.join(", "))
}

fn q(v: &[(i64, i64)]) -> Vec<BigRational> {
    v.iter().map(|&(a, b)| ratio(a, b)).collect()
}

fn exact(p: &PowerProfile) -> Vec<BigRational> {
    p.exact.clone().unwrap_or_default()
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

fn criterion_1() -> Verdict {
    let g = BinaryGame::weighted_int(3, &[2, 1, 1, 1]).unwrap();
    let got = exact(&ssi_binary(&g));
    // Oracle: walk all 24 orderings.
    let mut counts = [0i64; 4];
    permute(&mut (0..4).collect(), 0, &mut |p| {
        let mut s = Coalition::EMPTY;
        for &i in p {
            if !g.wins(s) && g.wins(s.with(i)) {
                counts[i] += 1;
            }
            s = s.with(i);
        }
    });
    let oracle: Vec<BigRational> = counts.iter().map(|&c| ratio(c, 24)).collect();
    let want = q(&[(1, 2), (1, 6), (1, 6), (1, 6)]);
    verdict(got == want && oracle == want, format!("{} (orderings oracle {})", fmt(&got), fmt(&oracle)))
}

fn criterion_2() -> Verdict {
    let g = BinaryGame::weighted_int(3, &[2, 1, 1, 1]).unwrap();
    let p = nucleolus_binary(&g).unwrap();
    let want = [0.4, 0.2, 0.2, 0.2];
    let dev = p.max_abs_diff(&want);
    verdict(dev <= 1e-9, format!("{} max deviation {dev:.1e}", fmt_f(&p.values)))
}

fn criterion_3() -> Verdict {
    let g = three_level_example();
    let ssi = exact(&ssi_jk(&g).unwrap());
    let stated: [(usize, usize, usize, [u64; 3]); 6] = [
        (1, 2, 3, [18, 6, 3]),
        (1, 3, 2, [18, 3, 6]),
        (2, 1, 3, [24, 0, 3]),
        (2, 3, 1, [24, 0, 3]),
        (3, 1, 2, [24, 3, 0]),
        (3, 2, 1, [24, 3, 0]),
    ];
    let counts = pivot_counts(&g).unwrap();
    let counts_ok = stated.iter().all(|&(a, b, c, t)| {
        counts.iter().any(|(qq, cc)| qq == &vec![a - 1, b - 1, c - 1] && cc.as_slice() == t)
    });
    let eta: Vec<u64> = (0..3).map(|i| swings(&g, i).unwrap()).collect();
    let bzi = bzi_jk(&g).unwrap();
    let norm = exact(&bzi.normalize().unwrap());
    let l1 = l1_distance(&ssi, &norm);
    let ok = ssi == q(&[(22, 27), (5, 54), (5, 54)])
        && counts_ok
        && eta == [8, 1, 1]
        && norm == q(&[(4, 5), (1, 10), (1, 10)])
        && l1 == ratio(4, 135);
    verdict(
        ok,
        format!(
            "ssi {} pivot counts {} eta {:?} normalized bzi {} l1 {}",
            fmt(&ssi),
            if counts_ok { "6/6 match" } else { "mismatch" },
            eta,
            fmt(&norm),
            format_rational(&l1)
        ),
    )
}

fn criterion_4() -> Verdict {
    let g = ghat();
    let p = exact(&ssi_continuous(&g, &NumericsSpec::exact()).unwrap());
    let terms = ssi_queue_terms(&g, &NumericsSpec::exact()).unwrap();
    let mut matched = 0;
    for t in &terms {
        for (i, v) in t.exact.as_ref().unwrap().iter().enumerate() {
            if *v == ratio(i as i64 + 1, 6) {
                matched += 1;
            }
        }
    }
    verdict(
        p == q(&[(1, 6), (1, 3), (1, 2)]) && matched == 18,
        format!("{} and {matched}/18 per-queue integrals equal i/6", fmt(&p)),
    )
}

fn criterion_5() -> Verdict {
    let g = gtilde();
    let p = exact(&ssi_continuous(&g, &NumericsSpec::exact()).unwrap());
    let terms = ssi_queue_terms(&g, &NumericsSpec::exact()).unwrap();
    let mut matched = 0;
    let mut misses = Vec::new();
    for (voter, table) in GTILDE_TABLES.iter().enumerate() {
        for (queue, (a, b)) in table {
            let got = queue_value(&terms, queue, voter).unwrap();
            if got == ratio(*a, *b) {
                matched += 1;
            } else {
                misses.push(format!(
                    "voter {} queue {:?}: table {a}/{b}, computed {}",
                    voter + 1,
                    queue,
                    format_rational(&got)
                ));
            }
        }
    }
    let total_ok = p == q(&[(35, 144), (50, 144), (59, 144)]);
    let mut detail = format!("{} and {matched}/18 per-queue integrals match", fmt(&p));
    if !misses.is_empty() {
        detail = format!("{detail}; {}", misses.join("; "));
    }
    verdict(total_ok && matched == 18, detail)
}

fn criterion_6() -> Verdict {
    let a = bzi_continuous(&ghat(), &NumericsSpec::exact()).unwrap();
    let b = bzi_continuous(&gtilde(), &NumericsSpec::exact()).unwrap();
    let bn = b.normalize().unwrap();
    let ok = exact(&a) == q(&[(1, 6), (2, 6), (3, 6)])
        && exact(&b) == q(&[(1, 12), (1, 8), (1, 6)])
        && exact(&bn) == q(&[(2, 9), (3, 9), (4, 9)]);
    verdict(ok, format!("g^ {} g~ {} normalized {}", fmt(&exact(&a)), fmt(&exact(&b)), fmt(&exact(&bn))))
}

fn criterion_7() -> Verdict {
    let g = ContinuousGame::weighted_median_int(&[5, 3, 2, 1]).unwrap();
    let p = ssi_continuous(&g, &NumericsSpec::monte_carlo(1_000_000, SEED)).unwrap();
    let want = [0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
    let se = p.std_errors.clone().unwrap();
    let total_ok = (0..4).all(|i| {
        let d = (p.values[i] - want[i]).abs();
        d <= 3.0 * se[i] && d <= 5e-3
    });
    let mut worst = 0.0f64;
    for (k, queue) in queues(4).iter().enumerate() {
        let (vals, _) = ssi_queue_mc(&g, queue, 200_000, SEED + k as u64, None).unwrap();
        for v in 0..4 {
            worst = worst.max((vals[v] - to_f64(&median_5321_queue_value(queue, v))).abs());
        }
    }
    verdict(
        total_ok && worst <= 5e-3,
        format!("{} se {} per-queue max deviation {worst:.1e} over 96 terms", fmt_f(&p.values), fmt_f(&se)),
    )
}

fn criterion_8() -> Verdict {
    let r = nucleolus_search(&ghat(), &NumericsSpec::monte_carlo(1_000_000, SEED)).unwrap();
    let want = [1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0];
    let dev = r.w_star.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    verdict(
        dev <= 1e-4 && r.max_excess <= 1e-8,
        format!("w* {} deviation {dev:.1e} max excess {:.1e}", fmt_f(&r.w_star), r.max_excess),
    )
}

fn criterion_9() -> Verdict {
    let r = nucleolus_search(&x1_x2_squared(), &NumericsSpec::monte_carlo(1_000_000, SEED)).unwrap();
    let (b1, b2) = (r.box_bounds[0], r.box_bounds[1]);
    let meets = |b: (f64, f64), lo: f64, hi: f64| b.0 <= hi && b.1 >= lo;
    let ok = meets(b1, 0.4553, 0.4555) && meets(b2, 0.5545, 0.5547) && (0.45..=0.46).contains(&r.w_star[0]);
    verdict(
        ok,
        format!(
            "w* {} w1 box [{:.4}, {:.4}] w2 box [{:.4}, {:.4}]",
            fmt_f(&r.w_star),
            b1.0,
            b1.1,
            b2.0,
            b2.1
        ),
    )
}

fn int_weights(rng: &mut ChaCha8Rng, n: usize) -> Weights {
    Weights::new((0..n).map(|_| ratio(rng.random_range(1..10), 1)).collect()).unwrap()
}

fn monomial_game(rng: &mut ChaCha8Rng, n: usize) -> ContinuousGame {
    let count = rng.random_range(1..4);
    let raw: Vec<(i64, Vec<u32>)> = (0..count)
        .map(|_| {
            let mut e: Vec<u32> = (0..n).map(|_| rng.random_range(0..4)).collect();
            if e.iter().all(|&x| x == 0) {
                e[0] = 1;
            }
            (rng.random_range(1..6), e)
        })
        .collect();
    let den: i64 = raw.iter().map(|t| t.0).sum();
    ContinuousGame::monomial_sum(n, raw.into_iter().map(|(c, e)| Term::new(ratio(c, den), e)).collect()).unwrap()
}

fn threshold_rep(rng: &mut ChaCha8Rng, n: usize) -> ThresholdRep {
    ThresholdRep::new(ratio(rng.random_range(1..=20), 20), int_weights(rng, n)).unwrap()
}

fn family_game(family: usize, rng: &mut ChaCha8Rng, n: usize) -> ContinuousGame {
    match family {
        0 => monomial_game(rng, n),
        1 => ContinuousGame::linear_weighted(int_weights(rng, n)).unwrap(),
        2 => ContinuousGame::threshold(threshold_rep(rng, n)).unwrap(),
        3 => {
            let e = rng.random_range(1..4);
            let quota = QuotaFunction::polynomial(vec![(ratio(1, 2), 1), (ratio(1, 2), e)]).unwrap();
            ContinuousGame::quota_weighted(int_weights(rng, n), quota).unwrap()
        }
        4 => loop {
            let w: Vec<i64> = (0..n).map(|_| rng.random_range(0..6)).collect();
            if w.iter().sum::<i64>() > 0 {
                break ContinuousGame::weighted_median_int(&w).unwrap();
            }
        },
        5 => ContinuousGame::median(n).unwrap(),
        6 => ContinuousGame::meet(vec![
            monomial_game(rng, n),
            ContinuousGame::linear_weighted(int_weights(rng, n)).unwrap(),
        ])
        .unwrap(),
        7 => ContinuousGame::join(vec![
            monomial_game(rng, n),
            ContinuousGame::linear_weighted(int_weights(rng, n)).unwrap(),
        ])
        .unwrap(),
        8 => ContinuousGame::threshold_intersection(vec![threshold_rep(rng, n), threshold_rep(rng, n)]).unwrap(),
        _ => loop {
            let w: Vec<i64> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let total: i64 = w.iter().sum();
            if total > 0 {
                let g = BinaryGame::weighted_int(rng.random_range(1..=total), &w).unwrap();
                break ContinuousGame::embedding(g).unwrap();
            }
        },
    }
}

fn efficiency_suite(rng: &mut ChaCha8Rng) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for family in 0..10 {
        for k in 0..50 {
            let n = rng.random_range(2..=4);
            let g = family_game(family, rng, n);
            let spec = if g.as_polynomial().is_some() || g.family() == "embedding" {
                NumericsSpec::exact()
            } else {
                NumericsSpec::monte_carlo(20_000, SEED + k)
            };
            let p = ssi_continuous(&g, &spec).unwrap();
            let ok = match &p.exact {
                Some(e) => e.iter().cloned().sum::<BigRational>() == BigRational::one(),
                None => {
                    let se: f64 = p.std_errors.as_ref().unwrap().iter().map(|s| s * s).sum::<f64>().sqrt();
                    (p.sum() - 1.0).abs() <= (3.0 * se).max(1e-9)
                }
            };
            if !ok {
                bad.push(format!("{} sums to {}", g.family(), p.sum()));
            }
            checked += 1;
        }
    }
    (checked, bad)
}

fn quota_suite(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let half = ratio(1, 2);
    let mut bad = 0;
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let w: Vec<i64> = loop {
            let w: Vec<i64> = (0..n).map(|_| rng.random_range(0..6)).collect();
            if w.iter().sum::<i64>() > 0 {
                break w;
            }
        };
        let quota = rng.random_range(1..=w.iter().sum::<i64>());
        let rep = WeightedRep::from_integers(quota, &w).unwrap();
        let g = BinaryGame::weighted(rep.clone()).unwrap();
        let (lo, hi) = quota_interval(&rep).unwrap();
        let p = properties(&g).unwrap();
        if p.proper != (hi > half) || p.strong != (lo < half) {
            bad += 1;
        }
    }
    (200, bad)
}

/// Every simple game on up to five voters, enumerated as monotone truth tables.
fn embedding_suite() -> (usize, usize) {
    fn monotone(n: usize) -> Vec<u64> {
        if n == 0 {
            return vec![0, 1];
        }
        let smaller = monotone(n - 1);
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
    let (mut checked, mut bad) = (0, 0);
    for n in 1..=5usize {
        for table in monotone(n) {
            if table & 1 == 1 || table >> ((1 << n) - 1) & 1 == 0 {
                continue;
            }
            let g = BinaryGame::from_fn(n, |s: Coalition| table >> s.0 & 1 == 1);
            let e = embed_binary(&g).unwrap();
            let same = ssi_jk(&e).unwrap().exact == ssi_binary(&g).exact
                && bzi_jk(&e).unwrap().exact == powidx::binary::bzi_binary(&g).exact;
            checked += 1;
            if !same {
                bad += 1;
            }
        }
    }
    (checked, bad)
}

fn determinism_suite() -> bool {
    let games = [ContinuousGame::weighted_median_int(&[5, 3, 2, 1]).unwrap(), ghat(), gtilde()];
    games.iter().all(|g| {
        let runs: Vec<Vec<u64>> = [1usize, 2, 8]
            .iter()
            .map(|&w| {
                let spec = NumericsSpec::monte_carlo(200_000, SEED).with_workers(w);
                let p = ssi_continuous(g, &spec).unwrap();
                let b = bzi_continuous(g, &spec).unwrap();
                p.values
                    .iter()
                    .chain(p.std_errors.as_ref().unwrap())
                    .chain(&b.values)
                    .map(|v| v.to_bits())
                    .collect()
            })
            .collect();
        runs[0] == runs[1] && runs[0] == runs[2]
    })
}

fn criterion_10() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (eff_n, eff_bad) = efficiency_suite(&mut rng);
    let (quota_n, quota_bad) = quota_suite(&mut rng);
    let (emb_n, emb_bad) = embedding_suite();
    let det = determinism_suite();
    let ok = eff_bad.is_empty() && quota_bad == 0 && emb_n == 1 + 4 + 18 + 166 + 7579 && emb_bad == 0 && det;
    let mut detail = format!(
        "efficiency {}/{eff_n}; quota interval {}/{quota_n}; embedding {}/{emb_n}; workers 1/2/8 {}",
        eff_n - eff_bad.len(),
        quota_n - quota_bad,
        emb_n - emb_bad,
        if det { "identical" } else { "differ" }
    );
    if !eff_bad.is_empty() {
        detail = format!("{detail}; {}", eff_bad.join("; "));
    }
    verdict(ok, detail)
}

fn criterion_11() -> (Verdict, String) {
    let f = median_example_densities();
    let quad = median_region_quadrature(&f, 24);
    let (mc, _) = median_region_mc(&f, 1_000_000, SEED);
    let gap = quad.iter().zip(&mc).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let exact = median_region_exact(&f).unwrap();
    let stated = median_example_stated();
    let sum = |v: &[BigRational]| format_rational(&v.iter().cloned().sum::<BigRational>());
    let note = format!(
        "stated 554/13440, 563/13440, 563/13440 (sum {}) vs computed {} (sum {}): {}",
        sum(&stated),
        fmt(&exact),
        sum(&exact),
        if exact == stated { "agree" } else { "disagree" }
    );
    (
        verdict(gap <= 1e-6, format!("quadrature {} MC {} max gap {gap:.1e}", fmt_f(&quad), fmt_f(&mc))),
        note,
    )
}

fn main() {
    let checks: [(u32, &str, Option<Duration>, fn() -> Verdict); 10] = [
        (1, "binary SSI of [3;2,1,1,1]", Some(Duration::from_secs(1)), criterion_1),
        (2, "binary nucleolus of [3;2,1,1,1]", Some(Duration::from_secs(1)), criterion_2),
        (3, "(3,2) worked example", Some(Duration::from_secs(1)), criterion_3),
        (4, "continuous SSI of g^", Some(Duration::from_secs(1)), criterion_4),
        (5, "continuous SSI of g~ and its per-queue tables", None, criterion_5),
        (6, "continuous BZI of g^ and g~", None, criterion_6),
        (7, "weighted median (5,3,2,1) by Monte Carlo", Some(Duration::from_secs(60)), criterion_7),
        (8, "nucleolus search on g^", Some(Duration::from_secs(60)), criterion_8),
        (9, "nucleolus search on x1 x2^2", Some(Duration::from_secs(600)), criterion_9),
        (10, "property suites", None, criterion_10),
    ];
    let mut unexpected = Vec::new();
    let mut report = |id: u32, name: &str, limit: Option<Duration>, v: Verdict, took: Duration| {
        let in_time = limit.is_none_or(|l| took <= l);
        let pass = v.ok && in_time;
        let limit_note = limit.map(|l| format!(" (limit {} s)", l.as_secs())).unwrap_or_default();
        println!(
            "[{}] {id:>2} {name}: {} [{:.2} s{limit_note}]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64()
        );
        if !pass {
            match KNOWN_FAILURES.iter().find(|k| k.0 == id) {
                Some((_, why)) => println!("       known failure: {why}"),
                None => unexpected.push(id),
            }
        }
    };
    for (id, name, limit, run) in checks {
        let start = Instant::now();
        let v = run();
        report(id, name, limit, v, start.elapsed());
    }
    let start = Instant::now();
    let (v, note) = criterion_11();
    report(11, "density example, quadrature vs Monte Carlo", None, v, start.elapsed());
    println!("       {note}");

    if unexpected.is_empty() {
        println!("acceptance: no unexpected failures");
    } else {
        println!("acceptance: unexpected failures in criteria {unexpected:?}");
        std::process::exit(1);
    }
}
