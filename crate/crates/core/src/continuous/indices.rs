use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use super::game::{Body, ContinuousGame, Term};
use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::jk::queues;
use crate::numerics::gauss::gauss_legendre;
use crate::numerics::rng::{sample_moments, with_workers};
use crate::numerics::{Mode, NumericsSpec, MAX_QUADRATURE_DIM};
use crate::profile::{Method, PowerProfile};

/// Largest electorate for the exhaustive sum over queues.
pub const MAX_SSI_VOTERS: usize = 8;
/// Cap on game evaluations in one quadrature run.
pub const MAX_QUADRATURE_EVALS: f64 = 4e9;

/// `τ̄`: voters in the first `t` queue positions keep their votes, the rest vote 1.
pub fn tau_bar(x: &[f64], queue: &[usize], t: usize) -> Vec<f64> {
    let mut y = vec![1.0; x.len()];
    for &i in &queue[..t] {
        y[i] = x[i];
    }
    y
}

/// `τ̲`: like [`tau_bar`] with the unrevealed voters at 0.
pub fn tau_under(x: &[f64], queue: &[usize], t: usize) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for &i in &queue[..t] {
        y[i] = x[i];
    }
    y
}

/// Per-queue integrals: `values[i]` is voter `i`'s term for `queue`.
#[derive(Clone, Debug, PartialEq)]
pub struct QueueTerms {
    pub queue: Vec<usize>,
    pub values: Vec<f64>,
    pub exact: Option<Vec<BigRational>>,
    pub std_errors: Option<Vec<f64>>,
}

/// Adds every voter's SSI integrand at `x` for one queue into `out`.
/// `hi` and `lo` are scratch buffers of length n.
fn queue_integrand(
    game: &ContinuousGame,
    x: &[f64],
    queue: &[usize],
    hi: &mut [f64],
    lo: &mut [f64],
    out: &mut [f64],
) {
    hi.iter_mut().for_each(|v| *v = 1.0);
    lo.iter_mut().for_each(|v| *v = 0.0);
    let mut upper = game.value(hi);
    let mut lower = game.value(lo);
    for &i in queue {
        hi[i] = x[i];
        lo[i] = x[i];
        let u = game.value(hi);
        let l = game.value(lo);
        out[i] += (upper - u) + (l - lower);
        upper = u;
        lower = l;
    }
}

fn check_ssi_size(n: usize) -> Result<()> {
    if n > MAX_SSI_VOTERS {
        return Err(Error::capacity(
            format!("continuous SSI with {n} voters"),
            MAX_SSI_VOTERS,
        ));
    }
    Ok(())
}

/// Integrals of the polynomial with the voters outside `prefix` pinned at 1
/// (`upper`) or at 0 (`lower`).
fn pinned_integrals(terms: &[Term], prefix: Coalition) -> (BigRational, BigRational) {
    let mut upper = BigRational::zero();
    let mut lower = BigRational::zero();
    for t in terms {
        let mut den = BigInt::one();
        let mut outside = false;
        for (j, &e) in t.exponents.iter().enumerate() {
            if prefix.contains(j) {
                den *= e + 1;
            } else if e > 0 {
                outside = true;
            }
        }
        let v = &t.coef / BigRational::from_integer(den);
        if !outside {
            lower += &v;
        }
        upper += v;
    }
    (upper, lower)
}

fn exact_queue_terms(game: &ContinuousGame) -> Result<Vec<QueueTerms>> {
    let n = game.n();
    if let Some(terms) = game.as_polynomial() {
        return Ok(queues(n)
            .into_par_iter()
            .map(|queue| {
                let mut exact = vec![BigRational::zero(); n];
                let mut prefix = Coalition::EMPTY;
                let (mut up, mut low) = pinned_integrals(&terms, prefix);
                for &i in &queue {
                    prefix = prefix.with(i);
                    let (u, l) = pinned_integrals(&terms, prefix);
                    exact[i] = (&up - &u) + (&l - &low);
                    up = u;
                    low = l;
                }
                QueueTerms {
                    values: exact.iter().map(crate::rational::to_f64).collect(),
                    queue,
                    exact: Some(exact),
                    std_errors: None,
                }
            })
            .collect());
    }
    if let Body::Embedding(_) = game.body() {
        // Each vote is "yes" with probability 1/2, so the integral is an average
        // over the 2^n yes/no patterns.
        let patterns = 1u64 << n;
        return Ok(queues(n)
            .into_par_iter()
            .map(|queue| {
                let mut counts = vec![0.0; n];
                let (mut hi, mut lo) = (vec![0.0; n], vec![0.0; n]);
                let mut x = vec![0.0; n];
                for bits in 0..patterns {
                    for (k, v) in x.iter_mut().enumerate() {
                        *v = ((bits >> k) & 1) as f64;
                    }
                    queue_integrand(game, &x, &queue, &mut hi, &mut lo, &mut counts);
                }
                let den = BigInt::from(patterns);
                let exact: Vec<BigRational> = counts
                    .iter()
                    .map(|&c| BigRational::new(BigInt::from(c as i64), den.clone()))
                    .collect();
                QueueTerms {
                    values: exact.iter().map(crate::rational::to_f64).collect(),
                    queue,
                    exact: Some(exact),
                    std_errors: None,
                }
            })
            .collect());
    }
    Err(Error::Mode(format!(
        "exact mode needs a polynomial game, got {}",
        game.family()
    )))
}

/// Tensor Gauss-Legendre integral of a vector integrand over `[0,1]^dim`.
fn tensor_vector(
    order: usize,
    dim: usize,
    width: usize,
    f: &(dyn Fn(&[f64], &mut [f64]) + Sync),
) -> Vec<f64> {
    let (nodes, weights) = gauss_legendre(order, 0.0, 1.0);
    let total = order.pow(dim as u32);
    let chunk = order.max(1);
    (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; width];
            let mut out = vec![0.0; width];
            let mut x = vec![0.0; dim];
            for idx in c * chunk..((c + 1) * chunk).min(total) {
                let mut rest = idx;
                let mut w = 1.0;
                for xk in x.iter_mut() {
                    let d = rest % order;
                    rest /= order;
                    *xk = nodes[d];
                    w *= weights[d];
                }
                out.iter_mut().for_each(|v| *v = 0.0);
                f(&x, &mut out);
                for (a, o) in acc.iter_mut().zip(&out) {
                    *a += w * o;
                }
            }
            acc
        })
        .reduce(
            || vec![0.0; width],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn check_quadrature(game: &ContinuousGame, dim: usize, per_point: f64, order: usize) -> Result<()> {
    if game.has_jumps() {
        return Err(Error::Mode(format!(
            "quadrature is not used on the discontinuous {} family; use mc",
            game.family()
        )));
    }
    if dim > MAX_QUADRATURE_DIM {
        return Err(Error::capacity(
            format!("quadrature in dimension {dim}"),
            MAX_QUADRATURE_DIM,
        ));
    }
    let work = per_point * (order as f64).powi(dim as i32);
    if work > MAX_QUADRATURE_EVALS {
        return Err(Error::capacity(
            format!("{work:.2e} game evaluations"),
            MAX_QUADRATURE_EVALS,
        ));
    }
    Ok(())
}

fn quadrature_queue_terms(game: &ContinuousGame, spec: &NumericsSpec) -> Result<Vec<QueueTerms>> {
    let n = game.n();
    let order = spec.quadrature_order.max(1);
    let all = queues(n);
    check_quadrature(game, n, (all.len() * 2 * (n + 1)) as f64, order)?;
    let integrate = |order: usize, queue: &[usize]| {
        tensor_vector(order, n, n, &|x, out| {
            let (mut hi, mut lo) = (vec![0.0; n], vec![0.0; n]);
            queue_integrand(game, x, queue, &mut hi, &mut lo, out);
        })
    };
    Ok(with_workers(spec.workers, || {
        all.into_iter()
            .map(|queue| {
                let values = integrate(order, &queue);
                let coarse = integrate(order.div_ceil(2), &queue);
                let errs = values.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
                QueueTerms {
                    queue,
                    values,
                    exact: None,
                    std_errors: Some(errs),
                }
            })
            .collect()
    }))
}

fn mc_queue_terms(game: &ContinuousGame, spec: &NumericsSpec) -> Result<Vec<QueueTerms>> {
    let n = game.n();
    let all = queues(n);
    let strata = all.len();
    if spec.mc_samples < 2 * strata as u64 {
        return Err(Error::input(format!(
            "need at least {} samples for {} queues",
            2 * strata,
            strata
        )));
    }
    let moments = sample_moments(spec.mc_samples, spec.seed, n, strata, spec.workers, |r, idx, out| {
        let s = (idx % strata as u64) as usize;
        let x: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
        let (mut hi, mut lo) = (vec![0.0; n], vec![0.0; n]);
        queue_integrand(game, &x, &all[s], &mut hi, &mut lo, out);
        s
    });
    Ok(all
        .into_iter()
        .enumerate()
        .map(|(s, queue)| {
            let m = moments.count[s] as f64;
            let mut values = vec![0.0; n];
            let mut errs = vec![0.0; n];
            for k in 0..n {
                let mu = moments.sum[s * n + k] / m;
                let var = ((moments.sum_sq[s * n + k] / m - mu * mu) * m / (m - 1.0)).max(0.0);
                values[k] = mu;
                errs[k] = (var / m).sqrt();
            }
            QueueTerms {
                queue,
                values,
                exact: None,
                std_errors: Some(errs),
            }
        })
        .collect())
}

/// The integral for every queue, in lexicographic queue order.
pub fn ssi_queue_terms(game: &ContinuousGame, spec: &NumericsSpec) -> Result<Vec<QueueTerms>> {
    check_ssi_size(game.n())?;
    match spec.mode {
        Mode::Exact => exact_queue_terms(game),
        Mode::Quadrature => quadrature_queue_terms(game, spec),
        Mode::MonteCarlo => mc_queue_terms(game, spec),
    }
}

/// Monte Carlo estimate of one queue's integrals with its own sample budget.
/// Returns per-voter values and standard errors.
pub fn ssi_queue_mc(
    game: &ContinuousGame,
    queue: &[usize],
    samples: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = game.n();
    let mut seen = vec![false; n];
    if queue.len() != n || queue.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::input("queue must be a permutation of the voters"));
    }
    if samples < 2 {
        return Err(Error::input("Monte Carlo needs at least two samples"));
    }
    let moments = sample_moments(samples, seed, n, 1, workers, |r, _, out| {
        let x: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
        let (mut hi, mut lo) = (vec![0.0; n], vec![0.0; n]);
        queue_integrand(game, &x, queue, &mut hi, &mut lo, out);
        0
    });
    Ok(moments.stratified_mean())
}

/// Continuous Shapley-Shubik index.
pub fn ssi_continuous(game: &ContinuousGame, spec: &NumericsSpec) -> Result<PowerProfile> {
    let n = game.n();
    let terms = ssi_queue_terms(game, spec)?;
    let count = terms.len();
    if spec.mode == Mode::Exact {
        let den = BigRational::from_integer(BigInt::from(count));
        let mut total = vec![BigRational::zero(); n];
        for t in &terms {
            for (a, b) in total.iter_mut().zip(t.exact.as_ref().expect("exact terms")) {
                *a += b;
            }
        }
        return Ok(PowerProfile::from_exact(
            total.into_iter().map(|v| v / &den).collect(),
        ));
    }
    let mut values = vec![0.0; n];
    let mut var = vec![0.0; n];
    let mut quad_err = vec![0.0; n];
    for t in &terms {
        let errs = t.std_errors.as_ref().expect("error estimates");
        for k in 0..n {
            values[k] += t.values[k] / count as f64;
            var[k] += (errs[k] / count as f64).powi(2);
            quad_err[k] += errs[k] / count as f64;
        }
    }
    Ok(estimate_profile(values, var, quad_err, spec))
}

fn estimate_profile(
    values: Vec<f64>,
    var: Vec<f64>,
    quad_err: Vec<f64>,
    spec: &NumericsSpec,
) -> PowerProfile {
    match spec.mode {
        Mode::MonteCarlo => {
            let se: Vec<f64> = var.iter().map(|v| v.sqrt()).collect();
            let bound = 3.0 * se.iter().cloned().fold(0.0, f64::max);
            let mut p = PowerProfile::from_estimates(values, Method::MonteCarlo, bound);
            p.seed = Some(spec.seed);
            p.std_errors = Some(se);
            p
        }
        _ => {
            let bound = quad_err.iter().cloned().fold(0.0, f64::max);
            PowerProfile::from_estimates(values, Method::Quadrature, bound)
        }
    }
}

/// Adds `g(x | x_i = 1) − g(x | x_i = 0)` for every voter into `out`.
fn banzhaf_integrand(game: &ContinuousGame, x: &[f64], y: &mut [f64], out: &mut [f64]) {
    y.copy_from_slice(x);
    for i in 0..x.len() {
        y[i] = 1.0;
        let top = game.value(y);
        y[i] = 0.0;
        let bottom = game.value(y);
        y[i] = x[i];
        out[i] += top - bottom;
    }
}

/// Continuous (absolute) Banzhaf index.
pub fn bzi_continuous(game: &ContinuousGame, spec: &NumericsSpec) -> Result<PowerProfile> {
    let n = game.n();
    match spec.mode {
        Mode::Exact => {
            if let Some(terms) = game.as_polynomial() {
                let values = (0..n)
                    .map(|i| {
                        terms
                            .iter()
                            .filter(|t| t.exponents[i] > 0)
                            .map(|t| {
                                let den: BigInt = t
                                    .exponents
                                    .iter()
                                    .enumerate()
                                    .filter(|&(j, _)| j != i)
                                    .map(|(_, &e)| BigInt::from(e + 1))
                                    .product();
                                &t.coef / BigRational::from_integer(den)
                            })
                            .sum()
                    })
                    .collect();
                return Ok(PowerProfile::from_exact(values));
            }
            if let Body::Embedding(g) = game.body() {
                return Ok(crate::binary::bzi_binary(g));
            }
            Err(Error::Mode(format!(
                "exact mode needs a polynomial game, got {}",
                game.family()
            )))
        }
        Mode::Quadrature => {
            let order = spec.quadrature_order.max(1);
            check_quadrature(game, n, (2 * n) as f64, order)?;
            let run = |order: usize| {
                with_workers(spec.workers, || {
                    tensor_vector(order, n, n, &|x, out| {
                        let mut y = vec![0.0; n];
                        banzhaf_integrand(game, x, &mut y, out);
                    })
                })
            };
            let values = run(order);
            let coarse = run(order.div_ceil(2));
            let err = values.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
            Ok(estimate_profile(values, vec![0.0; n], err, spec))
        }
        Mode::MonteCarlo => {
            if spec.mc_samples < 2 {
                return Err(Error::input("Monte Carlo needs at least two samples"));
            }
            let moments = sample_moments(spec.mc_samples, spec.seed, n, 1, spec.workers, |r, _, out| {
                let x: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
                let mut y = vec![0.0; n];
                banzhaf_integrand(game, &x, &mut y, out);
                0
            });
            let (values, se) = moments.stratified_mean();
            let var = se.iter().map(|s| s * s).collect();
            Ok(estimate_profile(values, var, vec![0.0; n], spec))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::{ssi_binary, BinaryGame};
    use crate::rational::ratio;

    fn ghat() -> ContinuousGame {
        ContinuousGame::monomials(6, &[(1, &[2, 0, 0]), (2, &[0, 2, 0]), (3, &[0, 0, 2])]).unwrap()
    }

    fn gtilde() -> ContinuousGame {
        ContinuousGame::monomials(1, &[(1, &[1, 2, 3])]).unwrap()
    }

    #[test]
    fn tau_prefixes_follow_the_queue() {
        let x = [0.3, 0.6, 0.9];
        let q = [1, 0, 2];
        assert_eq!(tau_bar(&x, &q, 0), vec![1.0; 3]);
        assert_eq!(tau_under(&x, &q, 0), vec![0.0; 3]);
        assert_eq!(tau_bar(&x, &q, 1), vec![1.0, 0.6, 1.0]);
        assert_eq!(tau_under(&x, &q, 3), x.to_vec());
    }

    #[test]
    fn exact_monomial_indices() {
        let s = ssi_continuous(&ghat(), &NumericsSpec::exact()).unwrap();
        assert!(s.equals_exact(&[ratio(1, 6), ratio(2, 6), ratio(3, 6)]));
        let s = ssi_continuous(&gtilde(), &NumericsSpec::exact()).unwrap();
        assert!(s.equals_exact(&[ratio(35, 144), ratio(50, 144), ratio(59, 144)]));
        let b = bzi_continuous(&gtilde(), &NumericsSpec::exact()).unwrap();
        assert!(b.equals_exact(&[ratio(1, 12), ratio(1, 8), ratio(1, 6)]));
        let terms = ssi_queue_terms(&gtilde(), &NumericsSpec::exact()).unwrap();
        // Queue (1,2,3), voter 1.
        assert_eq!(terms[0].exact.as_ref().unwrap()[0], ratio(1, 2));
    }

    #[test]
    fn quadrature_and_mc_match_exact() {
        let exact = [1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0];
        let q = ssi_continuous(&ghat(), &NumericsSpec::quadrature(8)).unwrap();
        assert!(q.max_abs_diff(&exact) < 1e-12);
        let m = ssi_continuous(&gtilde(), &NumericsSpec::monte_carlo(60_000, 7)).unwrap();
        let target = [35.0 / 144.0, 50.0 / 144.0, 59.0 / 144.0];
        assert!(m.error_bound.unwrap() > 0.0);
        assert!(m.max_abs_diff(&target) <= m.error_bound.unwrap());
        let b = bzi_continuous(&ghat(), &NumericsSpec::quadrature(8)).unwrap();
        assert!(b.max_abs_diff(&exact) < 1e-12);
    }

    #[test]
    fn embedding_matches_binary() {
        let b = BinaryGame::weighted_int(3, &[2, 1, 1, 1]).unwrap();
        let g = ContinuousGame::embedding(b.clone()).unwrap();
        let s = ssi_continuous(&g, &NumericsSpec::exact()).unwrap();
        assert_eq!(s.exact, ssi_binary(&b).exact);
        assert!(ssi_continuous(&g, &NumericsSpec::quadrature(8)).is_err());
    }

    #[test]
    fn exact_mode_refuses_median() {
        let g = ContinuousGame::median(3).unwrap();
        assert!(matches!(
            ssi_continuous(&g, &NumericsSpec::exact()),
            Err(Error::Mode(_))
        ));
    }
}
