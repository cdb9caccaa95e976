use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::game::{Body, ContinuousGame, QuotaFunction, Weights};
use crate::binary::{ssi_binary, BinaryGame, WeightedRep};
use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::numerics::rng::{block_rng, with_workers, BLOCK_SIZE};
use crate::numerics::NumericsSpec;
use crate::profile::PowerProfile;
use crate::rational::{lcm_of_denominators, to_f64};

const TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails { witness: Vec<Vec<f64>>, detail: String },
    NoCounterexample,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Fails { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Analytic,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub basis: Basis,
}

impl Check {
    fn analytic(verdict: Verdict) -> Check {
        Check {
            verdict,
            basis: Basis::Analytic,
        }
    }

    fn sampled(witness: Option<(Vec<Vec<f64>>, String)>) -> Check {
        Check {
            verdict: match witness {
                Some((witness, detail)) => Verdict::Fails { witness, detail },
                None => Verdict::NoCounterexample,
            },
            basis: Basis::Sampled,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub proper: Check,
    pub strong: Check,
    pub constant_sum: Check,
    pub complete: Check,
    /// 0-based voters found (or known) to be null.
    pub null_voters: Vec<usize>,
    pub null_basis: Basis,
}

/// Searches seeded random points for a counterexample, in a deterministic order.
fn find_witness<T: Send>(
    samples: u64,
    seed: u64,
    workers: Option<usize>,
    probe: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Option<T> + Sync,
) -> Option<T> {
    let blocks = samples.div_ceil(BLOCK_SIZE);
    with_workers(workers, || {
        (0..blocks).into_par_iter().find_map_first(|b| {
            let mut rng = block_rng(seed, b);
            let count = BLOCK_SIZE.min(samples - b * BLOCK_SIZE);
            (0..count).find_map(|_| probe(&mut rng))
        })
    })
}

fn random_point(r: &mut impl Rng, n: usize) -> Vec<f64> {
    // Mix in coarse grid values so boundaries such as 1/2 get hit exactly.
    (0..n)
        .map(|_| {
            if r.random::<f64>() < 0.25 {
                r.random_range(0..=8) as f64 / 8.0
            } else {
                r.random::<f64>()
            }
        })
        .collect()
}

fn flipped(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| 1.0 - v).collect()
}

/// `g(y·𝟏)` and `g((1−y)·𝟏)` at `y`, as a witness pair.
fn diagonal(n: usize, y: f64) -> Vec<Vec<f64>> {
    vec![vec![y; n], vec![1.0 - y; n]]
}

/// Proper/strong/constant-sum verdicts for a quota function.
fn quota_sum_checks(n: usize, q: &QuotaFunction) -> (Check, Check, Check) {
    // q(y) + q(1−y) is piecewise linear with kinks at b and 1−b, or a
    // polynomial; test the kinks, or a fine grid plus an exact identity test.
    let mut ys: Vec<f64> = match q {
        QuotaFunction::PiecewiseLinear(pts) => {
            pts.iter().flat_map(|p| [p.0, 1.0 - p.0]).collect()
        }
        QuotaFunction::Polynomial(_) => (0..=10_000).map(|k| k as f64 / 10_000.0).collect(),
    };
    ys.sort_by(f64::total_cmp);
    let s = |y: f64| q.eval(y) + q.eval(1.0 - y);
    let over = ys.iter().cloned().find(|&y| s(y) > 1.0 + TOL);
    let under = ys.iter().cloned().find(|&y| s(y) < 1.0 - TOL);
    let fail = |y: f64, what: &str| Verdict::Fails {
        witness: diagonal(n, y),
        detail: format!("q({y}) + q({}) = {} {what} 1", 1.0 - y, s(y)),
    };
    let proper = over.map_or(Verdict::Holds, |y| fail(y, ">"));
    let strong = under.map_or(Verdict::Holds, |y| fail(y, "<"));
    let mut constant = match (over, under) {
        (Some(y), _) | (None, Some(y)) => fail(y, "≠"),
        _ => Verdict::Holds,
    };
    if let (QuotaFunction::Polynomial(terms), Verdict::Holds) = (q, &constant) {
        if !polynomial_reflection_is_one(terms) {
            constant = Verdict::Fails {
                witness: vec![],
                detail: "q(y) + q(1−y) − 1 is a nonzero polynomial".into(),
            };
        }
    }
    (
        Check::analytic(proper),
        Check::analytic(strong),
        Check::analytic(constant),
    )
}

/// Exact test of `q(y) + q(1 − y) ≡ 1`.
fn polynomial_reflection_is_one(terms: &[(BigRational, u32)]) -> bool {
    let deg = terms.iter().map(|t| t.1 as usize).max().unwrap_or(0);
    let mut coeffs = vec![BigRational::zero(); deg + 1];
    for (c, e) in terms {
        let e = *e as usize;
        coeffs[e] += c;
        // (1 − y)^e = Σ C(e,k) (−1)^k y^k
        let mut binom = BigInt::one();
        for k in 0..=e {
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            coeffs[k] += c * BigRational::from_integer(&binom * sign);
            binom = binom * BigInt::from(e - k) / BigInt::from(k + 1);
        }
    }
    coeffs[0] -= BigRational::one();
    coeffs.iter().all(|c| c.is_zero())
}

fn weighted_nulls(w: &Weights) -> Vec<usize> {
    w.exact
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// Proper, strong, constant-sum, completeness and null voters. Closed-form
/// families get analytic verdicts; the rest are falsified on
/// `spec.mc_samples` seeded points.
pub fn structural_checks(game: &ContinuousGame, spec: &NumericsSpec) -> Result<StructureReport> {
    let n = game.n();
    let half = vec![0.5; n];
    let analytic = match game.body() {
        Body::LinearWeighted(w) => Some((
            Check::analytic(Verdict::Holds),
            Check::analytic(Verdict::Holds),
            Check::analytic(Verdict::Holds),
            weighted_nulls(w),
        )),
        Body::Threshold(rep) => {
            let q_gt_half = rep.quota > BigRational::new(1.into(), 2.into());
            let fail = |what: &str| Verdict::Fails {
                witness: vec![half.clone(), half.clone()],
                detail: format!("g(½·𝟏) + g(½·𝟏) = {what}"),
            };
            let (proper, strong) = if q_gt_half {
                (Verdict::Holds, fail("0"))
            } else {
                (fail("2"), Verdict::Holds)
            };
            let constant = if q_gt_half { fail("0") } else { fail("2") };
            Some((
                Check::analytic(proper),
                Check::analytic(strong),
                Check::analytic(constant),
                weighted_nulls(&rep.weights),
            ))
        }
        Body::QuotaWeighted { weights, quota } => {
            let (p, s, c) = quota_sum_checks(n, quota);
            Some((p, s, c, weighted_nulls(weights)))
        }
        _ => None,
    };
    if let Some((proper, strong, constant_sum, null_voters)) = analytic {
        // Weighted families are complete: the heavier voter is at least as desirable.
        return Ok(StructureReport {
            proper,
            strong,
            constant_sum,
            complete: Check::analytic(Verdict::Holds),
            null_voters,
            null_basis: Basis::Analytic,
        });
    }
    let samples = spec.mc_samples.max(1);
    let seed = spec.seed;
    let sum_witness = |pred: fn(f64) -> bool, label: &'static str| {
        find_witness(samples, seed, spec.workers, |r| {
            let x = random_point(r, n);
            let y = flipped(&x);
            let s = game.value(&x) + game.value(&y);
            pred(s).then(|| (vec![x, y], format!("g(x) + g(𝟏−x) = {s} {label} 1")))
        })
    };
    let proper = Check::sampled(sum_witness(|s| s > 1.0 + TOL, ">"));
    let strong = Check::sampled(sum_witness(|s| s < 1.0 - TOL, "<"));
    let constant_sum = Check::sampled(sum_witness(|s| (s - 1.0).abs() > TOL, "≠"));

    let null_voters: Vec<usize> = match game.as_polynomial() {
        Some(terms) => (0..n)
            .filter(|&i| terms.iter().all(|t| t.exponents[i] == 0 || t.coef.is_zero()))
            .collect(),
        None => (0..n)
            .filter(|&i| {
                find_witness(samples, seed ^ (i as u64 + 1), spec.workers, |r| {
                    let mut x = random_point(r, n);
                    let a = game.value(&x);
                    x[i] = r.random::<f64>();
                    ((game.value(&x) - a).abs() > TOL).then_some(())
                })
                .is_none()
            })
            .collect(),
    };
    let null_basis = if game.as_polynomial().is_some() {
        Basis::Analytic
    } else {
        Basis::Sampled
    };

    let complete = Check::sampled(incomparable_pair(game, samples, seed, spec.workers));
    Ok(StructureReport {
        proper,
        strong,
        constant_sum,
        complete,
        null_voters,
        null_basis,
    })
}

/// Witness that `i` is not at least as desirable as `j`: a point with
/// `x_i ≤ x_j` where handing `i` the larger vote lowers `g`.
fn not_desirable(
    game: &ContinuousGame,
    i: usize,
    j: usize,
    samples: u64,
    seed: u64,
    workers: Option<usize>,
) -> Option<Vec<f64>> {
    find_witness(samples, seed, workers, |r| {
        let mut x = random_point(r, game.n());
        if x[i] > x[j] {
            x.swap(i, j);
        }
        let mut t = x.clone();
        t.swap(i, j);
        (game.value(&t) < game.value(&x) - TOL).then_some(x)
    })
}

fn incomparable_pair(
    game: &ContinuousGame,
    samples: u64,
    seed: u64,
    workers: Option<usize>,
) -> Option<(Vec<Vec<f64>>, String)> {
    let n = game.n();
    let per_pair = (samples / (n * n.saturating_sub(1)).max(1) as u64).max(1_000);
    for i in 0..n {
        for j in i + 1..n {
            let s = seed ^ ((i * n + j) as u64) << 20;
            let a = not_desirable(game, i, j, per_pair, s, workers);
            let b = not_desirable(game, j, i, per_pair, s ^ 1, workers);
            if let (Some(a), Some(b)) = (a, b) {
                return Some((
                    vec![a, b],
                    format!("voters {} and {} are incomparable", i + 1, j + 1),
                ));
            }
        }
    }
    None
}

/// Continuous SSI of the weighted median via the binary game `[‖w‖₁/2; w]`.
/// Refuses weights with a subset summing to exactly half.
pub fn median_ssi_shortcut(weights: &[BigRational]) -> Result<PowerProfile> {
    let n = weights.len();
    crate::coalition::check_n(n)?;
    if weights.iter().any(|w| w < &BigRational::zero()) || weights.iter().all(|w| w.is_zero()) {
        return Err(Error::input("median weights must be nonnegative with a positive sum"));
    }
    let scale = BigRational::from_integer(lcm_of_denominators(weights));
    let scaled: Vec<u128> = weights
        .iter()
        .map(|w| {
            (w * &scale)
                .to_integer()
                .to_u128()
                .ok_or_else(|| Error::input("median weights too large"))
        })
        .collect::<Result<_>>()?;
    let total: u128 = scaled.iter().sum();
    if total % 2 == 0 {
        let target = total / 2;
        let tie = (0u64..1 << n).into_par_iter().find_first(|&mask| {
            let s: u128 = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| scaled[k]).sum();
            s == target
        });
        if let Some(mask) = tie {
            return Err(Error::Precondition(format!(
                "coalition {} holds exactly half the weight, so the weighted median voter is not unique",
                Coalition(mask as u32)
            )));
        }
    }
    let total: BigRational = weights.iter().cloned().sum();
    let half = total / BigRational::from_integer(2.into());
    let game = BinaryGame::weighted(WeightedRep::new(half, weights.to_vec())?)?;
    Ok(ssi_binary(&game))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Recovered {
    LinearWeighted { weights: Vec<f64> },
    QuotaWeighted { weights: Vec<f64>, diagonal: Vec<(f64, f64)> },
    Threshold { quota: f64, weights: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub recovered: Recovered,
    /// Largest deviation from the stored representation.
    pub max_deviation: f64,
    pub matches: bool,
}

pub const PROBE_TOL: f64 = 1e-9;

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Recovers the representation of a weighted-type game from evaluations
/// alone and compares it with the stored one.
pub fn uniqueness_probe(game: &ContinuousGame) -> Result<ProbeReport> {
    let n = game.n();
    let (recovered, dev) = match game.body() {
        Body::LinearWeighted(w) => {
            let probed: Vec<f64> = (0..n)
                .map(|i| {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    game.value(&e)
                })
                .collect();
            let dev = max_dev(&probed, &w.float);
            (Recovered::LinearWeighted { weights: probed }, dev)
        }
        Body::QuotaWeighted { weights, quota } => {
            let diagonal: Vec<(f64, f64)> = (0..=100)
                .map(|k| {
                    let y = k as f64 / 100.0;
                    (y, game.value(&vec![y; n]))
                })
                .collect();
            let diag_dev = diagonal
                .iter()
                .map(|&(y, v)| (v - quota.eval(y)).abs())
                .fold(0.0, f64::max);
            let probed = quota_weights(game)?;
            let dev = max_dev(&probed, &weights.float).max(diag_dev);
            (
                Recovered::QuotaWeighted {
                    weights: probed,
                    diagonal,
                },
                dev,
            )
        }
        Body::Threshold(rep) => {
            let (quota, weights) = threshold_probe(game)?;
            let dev = max_dev(&weights, &rep.weights.float).max((quota - to_f64(&rep.quota)).abs());
            (Recovered::Threshold { quota, weights }, dev)
        }
        _ => {
            return Err(Error::input(format!(
                "uniqueness probe covers linear_weighted, quota_weighted and threshold games, not {}",
                game.family()
            )))
        }
    };
    Ok(ProbeReport {
        recovered,
        max_deviation: dev,
        matches: dev <= PROBE_TOL,
    })
}

/// Weights of a quota game from symmetric differences along each axis at a
/// diagonal point where the quota function is steep.
fn quota_weights(game: &ContinuousGame) -> Result<Vec<f64>> {
    let n = game.n();
    let diag = |y: f64| game.value(&vec![y; n]);
    let y0 = (0..90)
        .map(|k| 0.0537 + k as f64 / 100.0)
        .max_by(|&a, &b| {
            let sa = diag(a + 0.004) - diag(a - 0.004);
            let sb = diag(b + 0.004) - diag(b - 0.004);
            sa.total_cmp(&sb)
        })
        .expect("nonempty grid");
    let diff = |i: usize, eps: f64| {
        let mut up = vec![y0; n];
        let mut down = vec![y0; n];
        up[i] += eps;
        down[i] -= eps;
        game.value(&up) - game.value(&down)
    };
    let eps = 1e-3;
    // Richardson step removes the cubic term of the symmetric difference.
    let d: Vec<f64> = (0..n)
        .map(|i| (8.0 * diff(i, eps / 2.0) - diff(i, eps)) / 3.0)
        .collect();
    let total: f64 = d.iter().sum();
    if total <= 0.0 {
        return Err(Error::Precondition(
            "quota function is flat around every probe point".into(),
        ));
    }
    Ok(d.iter().map(|v| v / total).collect())
}

fn bisect(mut lo: f64, mut hi: f64, wins: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if wins(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Quota from the diagonal jump, then each weight from the point where
/// raising one vote from just below the boundary starts winning.
fn threshold_probe(game: &ContinuousGame) -> Result<(f64, Vec<f64>)> {
    let n = game.n();
    let quota = bisect(0.0, 1.0, |t| game.value(&vec![t; n]) >= 1.0);
    if quota >= 1.0 - 1e-12 {
        return Err(Error::Precondition(
            "quota 1: every winning vote vector puts all non-null voters at 1, so the weights are not determined".into(),
        ));
    }
    let mut weights = vec![0.0; n];
    for (i, w) in weights.iter_mut().enumerate() {
        let mut eta = 0.5 * quota.min(1.0 - quota);
        while eta > 1e-13 {
            let a = quota - eta;
            let at = |z: f64| {
                let mut x = vec![a; n];
                x[i] = z;
                game.value(&x) >= 1.0
            };
            if at(1.0) {
                let z = bisect(a, 1.0, at);
                *w = eta / (z - a);
                break;
            }
            eta /= 1024.0;
        }
    }
    Ok((quota, weights))
}
