use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use super::game::ContinuousGame;
use super::indices::{MAX_QUADRATURE_EVALS, MAX_SSI_VOTERS};
use crate::error::{Error, Result};
use crate::jk::queues;
use crate::numerics::gauss::gauss_legendre;
use crate::numerics::rng::{sample_moments, with_workers};
use crate::numerics::{Mode, NumericsSpec, MAX_QUADRATURE_DIM};
use crate::profile::{Method, PowerProfile};
use crate::rational::{ratio, to_f64};

/// Polynomial with exact coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![BigRational::zero()];
        for (k, c) in self.0.iter().enumerate() {
            out.push(c / BigRational::from_integer(BigInt::from(k + 1)));
        }
        Poly(out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly(
            (0..len)
                .map(|k| {
                    self.0.get(k).cloned().unwrap_or_default()
                        + other.0.get(k).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly(vec![c])
    }

    /// Definite integral over `[a, b]`.
    pub fn integral(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let p = self.antiderivative();
        p.eval(b) - p.eval(a)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub lo: BigRational,
    pub hi: BigRational,
    pub poly: Poly,
    bounds: (f64, f64),
    coeffs: Vec<f64>,
    /// Mass below this piece.
    offset: f64,
}

impl Piece {
    fn pdf(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn partial_mass(&self, x: f64) -> f64 {
        // Antiderivative evaluated in floats.
        let anti = |t: f64| {
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (k, c)| acc * t + c / (k + 1) as f64)
                * t
        };
        anti(x) - anti(self.bounds.0)
    }
}

/// Piecewise-polynomial density on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Density {
    pub support: (BigRational, BigRational),
    pub pieces: Vec<Piece>,
}

impl Density {
    /// Validates sorted, non-overlapping pieces inside the support, a
    /// nonnegative density and total mass 1 (to 1e-9).
    pub fn new(
        support: (BigRational, BigRational),
        pieces: Vec<(BigRational, BigRational, Vec<BigRational>)>,
    ) -> Result<Density> {
        if support.0 >= support.1 {
            return Err(Error::input("density support must have lo < hi"));
        }
        if pieces.is_empty() {
            return Err(Error::input("density needs at least one piece"));
        }
        let mut built = Vec::with_capacity(pieces.len());
        let mut prev = support.0.clone();
        let mut mass = 0.0;
        for (lo, hi, coeffs) in pieces {
            if lo < prev || hi <= lo || hi > support.1 {
                return Err(Error::input(
                    "density pieces must be ordered, disjoint and inside the support",
                ));
            }
            prev = hi.clone();
            let poly = Poly(coeffs);
            let piece = Piece {
                bounds: (to_f64(&lo), to_f64(&hi)),
                coeffs: poly.0.iter().map(to_f64).collect(),
                offset: mass,
                lo,
                hi,
                poly,
            };
            let (a, b) = piece.bounds;
            for k in 0..=256 {
                let x = a + (b - a) * k as f64 / 256.0;
                if piece.pdf(x) < -1e-12 {
                    return Err(Error::input(format!("density is negative at {x}")));
                }
            }
            mass += piece.partial_mass(b);
            built.push(piece);
        }
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::input(format!("density integrates to {mass}, not 1")));
        }
        Ok(Density {
            support,
            pieces: built,
        })
    }

    pub fn uniform(lo: BigRational, hi: BigRational) -> Result<Density> {
        let height = BigRational::one() / (&hi - &lo);
        Density::new((lo.clone(), hi.clone()), vec![(lo, hi, vec![height])])
    }

    pub fn support_f64(&self) -> (f64, f64) {
        (to_f64(&self.support.0), to_f64(&self.support.1))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.pieces
            .iter()
            .find(|p| p.bounds.0 <= x && x <= p.bounds.1)
            .map_or(0.0, |p| p.pdf(x))
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let mut last = 0.0;
        for p in &self.pieces {
            if x < p.bounds.0 {
                return p.offset;
            }
            if x <= p.bounds.1 {
                return p.offset + p.partial_mass(x);
            }
            last = p.offset + p.partial_mass(p.bounds.1);
        }
        last
    }

    /// Inverse CDF by bisection.
    pub fn quantile(&self, u: f64) -> f64 {
        let (mut a, mut b) = self.support_f64();
        for _ in 0..64 {
            let m = 0.5 * (a + b);
            if self.cdf(m) < u {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    /// Exact CDF as a polynomial on each piece: `(lo, hi, F)`.
    pub fn exact_cdf_pieces(&self) -> Vec<(BigRational, BigRational, Poly)> {
        let mut below = BigRational::zero();
        let mut out = Vec::new();
        for p in &self.pieces {
            let anti = p.poly.antiderivative();
            let shift = &below - anti.eval(&p.lo);
            out.push((p.lo.clone(), p.hi.clone(), anti.add(&Poly::constant(shift))));
            below += p.poly.integral(&p.lo, &p.hi);
        }
        out
    }
}

/// One density per voter on a common support.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityVector {
    pub densities: Vec<Density>,
}

impl DensityVector {
    pub fn new(densities: Vec<Density>) -> Result<DensityVector> {
        let first = densities
            .first()
            .ok_or_else(|| Error::input("density vector is empty"))?;
        if densities.iter().any(|d| d.support != first.support) {
            return Err(Error::input("densities must share one support"));
        }
        Ok(DensityVector { densities })
    }

    pub fn uniform(n: usize) -> DensityVector {
        let d = Density::uniform(BigRational::zero(), BigRational::one()).expect("uniform");
        DensityVector {
            densities: vec![d; n],
        }
    }

    pub fn len(&self) -> usize {
        self.densities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.densities.is_empty()
    }

    fn to_unit(&self, v: f64) -> f64 {
        let (lo, hi) = self.densities[0].support_f64();
        ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
    }

    /// Gauss-Legendre rule per voter, with nodes mapped into `[0,1]` and the
    /// density folded into the weights.
    fn rules(&self, order: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
        self.densities
            .iter()
            .map(|d| {
                let mut nodes = Vec::new();
                let mut weights = Vec::new();
                for p in &d.pieces {
                    let (x, w) = gauss_legendre(order, p.bounds.0, p.bounds.1);
                    for (xi, wi) in x.into_iter().zip(w) {
                        nodes.push(self.to_unit(xi));
                        weights.push(wi * p.pdf(xi));
                    }
                }
                (nodes, weights)
            })
            .collect()
    }

    fn sample(&self, r: &mut impl Rng, x: &mut [f64]) {
        for (xi, d) in x.iter_mut().zip(&self.densities) {
            *xi = self.to_unit(d.quantile(r.random::<f64>()));
        }
    }
}

fn product_rule(
    rules: &[(Vec<f64>, Vec<f64>)],
    width: usize,
    f: &(dyn Fn(&[f64], &mut [f64]) + Sync),
) -> Vec<f64> {
    let dim = rules.len();
    let sizes: Vec<usize> = rules.iter().map(|r| r.0.len()).collect();
    let total: usize = sizes.iter().product();
    let chunk = sizes[0].max(1);
    (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; width];
            let mut out = vec![0.0; width];
            let mut x = vec![0.0; dim];
            for idx in c * chunk..((c + 1) * chunk).min(total) {
                let mut rest = idx;
                let mut w = 1.0;
                for k in 0..dim {
                    let d = rest % sizes[k];
                    rest /= sizes[k];
                    x[k] = rules[k].0[d];
                    w *= rules[k].1[d];
                }
                out.iter_mut().for_each(|v| *v = 0.0);
                f(&x, &mut out);
                acc.iter_mut().zip(&out).for_each(|(a, o)| *a += w * o);
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

fn ssi_sample(game: &ContinuousGame, x: &[f64], queue: &[usize], out: &mut [f64]) {
    let n = x.len();
    let mut hi = vec![1.0; n];
    let mut lo = vec![0.0; n];
    let mut upper = game.value(&hi);
    let mut lower = game.value(&lo);
    for &i in queue {
        hi[i] = x[i];
        lo[i] = x[i];
        let u = game.value(&hi);
        let l = game.value(&lo);
        out[i] += (upper - u) + (l - lower);
        upper = u;
        lower = l;
    }
}

fn bzi_sample(game: &ContinuousGame, x: &[f64], out: &mut [f64]) {
    let mut y = x.to_vec();
    for i in 0..x.len() {
        y[i] = 1.0;
        let top = game.value(&y);
        y[i] = 0.0;
        let bottom = game.value(&y);
        y[i] = x[i];
        out[i] += top - bottom;
    }
}

fn check(game: &ContinuousGame, f: &DensityVector, spec: &NumericsSpec) -> Result<()> {
    if f.len() != game.n() {
        return Err(Error::input(format!(
            "{} densities for {} voters",
            f.len(),
            game.n()
        )));
    }
    match spec.mode {
        Mode::Exact => Err(Error::Mode(
            "density indices are computed by quadrature or mc".into(),
        )),
        Mode::Quadrature if game.has_jumps() => Err(Error::Mode(format!(
            "quadrature is not used on the discontinuous {} family; use mc",
            game.family()
        ))),
        Mode::Quadrature if game.n() > MAX_QUADRATURE_DIM => Err(Error::capacity(
            format!("quadrature in dimension {}", game.n()),
            MAX_QUADRATURE_DIM,
        )),
        Mode::MonteCarlo if spec.mc_samples < 2 => {
            Err(Error::input("Monte Carlo needs at least two samples"))
        }
        _ => Ok(()),
    }
}

fn finish(values: Vec<f64>, err: Vec<f64>, spec: &NumericsSpec) -> PowerProfile {
    if spec.mode == Mode::MonteCarlo {
        let bound = 3.0 * err.iter().cloned().fold(0.0, f64::max);
        let mut p = PowerProfile::from_estimates(values, Method::MonteCarlo, bound);
        p.seed = Some(spec.seed);
        p.std_errors = Some(err);
        p
    } else {
        let bound = err.iter().cloned().fold(0.0, f64::max);
        PowerProfile::from_estimates(values, Method::Quadrature, bound)
    }
}

/// Shapley-Shubik index with independent voter densities.
pub fn ssi_density(
    game: &ContinuousGame,
    f: &DensityVector,
    spec: &NumericsSpec,
) -> Result<PowerProfile> {
    check(game, f, spec)?;
    let n = game.n();
    if n > MAX_SSI_VOTERS {
        return Err(Error::capacity(format!("continuous SSI with {n} voters"), MAX_SSI_VOTERS));
    }
    let all = queues(n);
    let count = all.len() as f64;
    if spec.mode == Mode::Quadrature {
        let run = |order: usize| -> Result<Vec<f64>> {
            let rules = f.rules(order);
            let points: f64 = rules.iter().map(|r| r.0.len() as f64).product();
            if points * count * 2.0 * (n as f64 + 1.0) > MAX_QUADRATURE_EVALS {
                return Err(Error::capacity("density quadrature work", MAX_QUADRATURE_EVALS));
            }
            Ok(with_workers(spec.workers, || {
                product_rule(&rules, n, &|x, out| {
                    for q in &all {
                        ssi_sample(game, x, q, out);
                    }
                    out.iter_mut().for_each(|v| *v /= count);
                })
            }))
        };
        let order = spec.quadrature_order.max(1);
        let values = run(order)?;
        let coarse = run(order.div_ceil(2))?;
        let err = values.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
        return Ok(finish(values, err, spec));
    }
    let strata = all.len();
    let moments = sample_moments(spec.mc_samples, spec.seed, n, strata, spec.workers, |r, idx, out| {
        let s = (idx % strata as u64) as usize;
        let mut x = vec![0.0; n];
        f.sample(r, &mut x);
        ssi_sample(game, &x, &all[s], out);
        s
    });
    let (values, se) = moments.stratified_mean();
    Ok(finish(values, se, spec))
}

/// Banzhaf index with independent voter densities.
pub fn bzi_density(
    game: &ContinuousGame,
    f: &DensityVector,
    spec: &NumericsSpec,
) -> Result<PowerProfile> {
    check(game, f, spec)?;
    let n = game.n();
    if spec.mode == Mode::Quadrature {
        let run = |order: usize| {
            let rules = f.rules(order);
            with_workers(spec.workers, || {
                product_rule(&rules, n, &|x, out| bzi_sample(game, x, out))
            })
        };
        let order = spec.quadrature_order.max(1);
        let values = run(order);
        let coarse = run(order.div_ceil(2));
        let err = values.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
        return Ok(finish(values, err, spec));
    }
    let moments = sample_moments(spec.mc_samples, spec.seed, n, 1, spec.workers, |r, _, out| {
        let mut x = vec![0.0; n];
        f.sample(r, &mut x);
        bzi_sample(game, &x, out);
        0
    });
    let (values, se) = moments.stratified_mean();
    Ok(finish(values, se, spec))
}

/// The three-voter median example with `f₁ = ¾(1−x²)` and `f₂ = f₃ = ⅜(1+x²)`
/// on `[−1, 1]`.
pub fn median_example_densities() -> DensityVector {
    let lo = ratio(-1, 1);
    let hi = ratio(1, 1);
    let d1 = Density::new(
        (lo.clone(), hi.clone()),
        vec![(lo.clone(), hi.clone(), vec![ratio(3, 4), ratio(0, 1), ratio(-3, 4)])],
    )
    .expect("valid density");
    let d2 = Density::new(
        (lo.clone(), hi.clone()),
        vec![(lo, hi, vec![ratio(3, 8), ratio(0, 1), ratio(3, 8)])],
    )
    .expect("valid density");
    DensityVector {
        densities: vec![d1, d2.clone(), d2],
    }
}

/// Values stated for the example, for comparison in reports.
pub fn median_example_stated() -> [BigRational; 3] {
    [ratio(554, 13440), ratio(563, 13440), ratio(563, 13440)]
}

/// `I_i = Σ_{a≠b≠i} ∫ f_i(x_i) ∫_{x_i}^{hi} f_a ∫_{lo}^{x_i} f_b`: the
/// probability that voter `i` holds the median vote. Exact, from polynomial
/// antiderivatives. Needs single-piece densities on a common support.
pub fn median_region_exact(f: &DensityVector) -> Result<Vec<BigRational>> {
    let n = f.len();
    if n != 3 || f.densities.iter().any(|d| d.pieces.len() != 1) {
        return Err(Error::input(
            "the region integrals take three single-piece densities",
        ));
    }
    let (lo, hi) = f.densities[0].support.clone();
    let cdf: Vec<Poly> = f
        .densities
        .iter()
        .map(|d| d.exact_cdf_pieces().remove(0).2)
        .collect();
    let one = Poly::constant(BigRational::one());
    let minus = |p: &Poly| Poly(p.0.iter().map(|c| -c).collect());
    Ok((0..3)
        .map(|i| {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            let above_a = one.add(&minus(&cdf[a]));
            let above_b = one.add(&minus(&cdf[b]));
            let inner = above_a.mul(&cdf[b]).add(&above_b.mul(&cdf[a]));
            f.densities[i].pieces[0].poly.mul(&inner).integral(&lo, &hi)
        })
        .collect())
}

/// The same region integrals by nested Gauss-Legendre over the literal
/// variable limits.
pub fn median_region_quadrature(f: &DensityVector, order: usize) -> Vec<f64> {
    let (lo, hi) = f.densities[0].support_f64();
    let pdf = |k: usize, x: f64| f.densities[k].pdf(x);
    (0..3)
        .map(|i| {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            let (xs, ws) = gauss_legendre(order, lo, hi);
            let mut total = 0.0;
            for (&xi, &wi) in xs.iter().zip(&ws) {
                // Middle variable on [lo, x_i], inner on [x_i, hi].
                let (ms, mw) = gauss_legendre(order, lo, xi);
                let (is, iw) = gauss_legendre(order, xi, hi);
                let below = |k: usize| ms.iter().zip(&mw).map(|(&m, &w)| w * pdf(k, m)).sum::<f64>();
                let above = |k: usize| is.iter().zip(&iw).map(|(&m, &w)| w * pdf(k, m)).sum::<f64>();
                let inner = above(a) * below(b) + above(b) * below(a);
                total += wi * pdf(i, xi) * inner;
            }
            total
        })
        .collect()
}

/// Jittered-grid estimate of the region integrals: the outer vote is
/// stratified into `strata` cells and the inner integrals come from the
/// closed-form CDFs.
fn region_jittered(f: &DensityVector, strata: u64, seed: u64) -> Vec<f64> {
    let (lo, hi) = f.densities[0].support_f64();
    let width = hi - lo;
    let moments = sample_moments(strata, seed, 3, 1, None, |r, idx, out| {
        let x = lo + width * (idx as f64 + r.random::<f64>()) / strata as f64;
        let cdf: Vec<f64> = f.densities.iter().map(|d| d.cdf(x)).collect();
        for i in 0..3 {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            let inner = (1.0 - cdf[a]) * cdf[b] + (1.0 - cdf[b]) * cdf[a];
            out[i] = width * f.densities[i].pdf(x) * inner;
        }
        0
    });
    moments.stratified_mean().0
}

/// Monte Carlo route for the region integrals. Returns values and standard
/// errors; the error comes from two independent half-size replicates, which
/// overstates the error of the full run.
pub fn median_region_mc(f: &DensityVector, samples: u64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let samples = samples.max(4);
    let mean = region_jittered(f, samples, seed);
    let a = region_jittered(f, samples / 2, seed.wrapping_add(1));
    let b = region_jittered(f, samples / 2, seed.wrapping_add(2));
    let se = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs() / std::f64::consts::SQRT_2)
        .collect();
    (mean, se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn example_densities_normalize() {
        let f = median_example_densities();
        for d in &f.densities {
            assert!((d.cdf(1.0) - 1.0).abs() < 1e-14);
            assert!(d.cdf(-1.0).abs() < 1e-14);
            let q = d.quantile(0.3);
            assert!((d.cdf(q) - 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_density() {
        let r = Density::new((ratio(0, 1), ratio(1, 1)), vec![(ratio(0, 1), ratio(1, 1), vec![ratio(2, 1)])]);
        assert!(r.is_err());
        let r = Density::new(
            (ratio(0, 1), ratio(1, 1)),
            vec![(ratio(0, 1), ratio(1, 1), vec![ratio(3, 1), ratio(-4, 1)])],
        );
        assert!(r.is_err());
    }

    #[test]
    fn region_routes_agree() {
        let f = median_example_densities();
        let exact = median_region_exact(&f).unwrap();
        assert_eq!(exact.iter().cloned().sum::<BigRational>(), BigRational::one());
        let quad = median_region_quadrature(&f, 12);
        for (e, q) in exact.iter().zip(&quad) {
            assert!((to_f64(e) - q).abs() < 1e-12);
        }
        assert!(exact.iter().all(|v| v.is_positive()));
    }
}
