//! Integration engine: exact monomial box integrals, tensor Gauss-Legendre
//! quadrature and seeded Monte Carlo.

pub mod gauss;
pub mod rng;
pub mod sobol;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

pub const MAX_QUADRATURE_DIM: usize = 6;
pub const DEFAULT_ORDER: usize = 16;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Quadrature,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericsSpec {
    pub mode: Mode,
    pub quadrature_order: usize,
    pub mc_samples: u64,
    pub seed: u64,
    pub target_abs_err: Option<f64>,
    /// Worker threads for sampling; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for NumericsSpec {
    fn default() -> Self {
        NumericsSpec {
            mode: Mode::Exact,
            quadrature_order: DEFAULT_ORDER,
            mc_samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            target_abs_err: None,
            workers: None,
        }
    }
}

impl NumericsSpec {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn quadrature(order: usize) -> Self {
        NumericsSpec {
            mode: Mode::Quadrature,
            quadrature_order: order,
            ..Self::default()
        }
    }

    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        NumericsSpec {
            mode: Mode::MonteCarlo,
            mc_samples: samples,
            seed,
            ..Self::default()
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    pub abs_err: f64,
    /// Quadrature order or number of samples.
    pub samples_or_order: u64,
    pub seed: Option<u64>,
}

/// `coef · Π 1/(e_i + 1)`, the integral of a monomial over the unit cube.
pub fn monomial_box_integral(coef: &BigRational, exponents: &[u32]) -> BigRational {
    let den: BigInt = exponents.iter().map(|&e| BigInt::from(e + 1)).product();
    coef / BigRational::from_integer(den)
}

/// Integral of `f` over `[0,1]^dim`.
pub fn integrate(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    dim: usize,
    spec: &NumericsSpec,
) -> Result<IntegralEstimate> {
    match spec.mode {
        Mode::Exact => Err(Error::Mode(
            "exact integration needs a closed-form integrand".into(),
        )),
        Mode::Quadrature => {
            if dim > MAX_QUADRATURE_DIM {
                return Err(Error::capacity(
                    format!("quadrature in dimension {dim}"),
                    MAX_QUADRATURE_DIM,
                ));
            }
            let order = spec.quadrature_order.max(1);
            let value = rng::with_workers(spec.workers, || gauss::tensor_unit_cube(order, dim, f));
            let coarse = rng::with_workers(spec.workers, || {
                gauss::tensor_unit_cube(order.div_ceil(2), dim, f)
            });
            Ok(IntegralEstimate {
                value,
                abs_err: (value - coarse).abs(),
                samples_or_order: order as u64,
                seed: None,
            })
        }
        Mode::MonteCarlo => {
            if spec.mc_samples < 2 {
                return Err(Error::input("Monte Carlo needs at least two samples"));
            }
            use rand::Rng;
            let moments = rng::sample_moments(
                spec.mc_samples,
                spec.seed,
                1,
                1,
                spec.workers,
                |r, _, out| {
                    let x: Vec<f64> = (0..dim).map(|_| r.random::<f64>()).collect();
                    out[0] = f(&x);
                    0
                },
            );
            let (mean, se) = moments.stratified_mean();
            Ok(IntegralEstimate {
                value: mean[0],
                abs_err: 3.0 * se[0],
                samples_or_order: spec.mc_samples,
                seed: Some(spec.seed),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn monomial_integrals() {
        assert_eq!(monomial_box_integral(&ratio(1, 1), &[0, 2, 3]), ratio(1, 12));
        assert_eq!(monomial_box_integral(&ratio(1, 1), &[]), ratio(1, 1));
        assert_eq!(monomial_box_integral(&ratio(1, 1), &[1, 2]), ratio(1, 6));
    }

    #[test]
    fn constant_integrand_in_both_modes() {
        let one = |_: &[f64]| 1.0;
        let q = integrate(&one, 3, &NumericsSpec::quadrature(4)).unwrap();
        assert!((q.value - 1.0).abs() < 1e-14);
        let m = integrate(&one, 3, &NumericsSpec::monte_carlo(1000, 3)).unwrap();
        assert_eq!(m.value, 1.0);
        assert!(integrate(&one, 7, &NumericsSpec::quadrature(2)).is_err());
        assert!(integrate(&one, 2, &NumericsSpec::exact()).is_err());
    }
}
