//! Per-voter index values together with how they were obtained.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::to_f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Quadrature,
    MonteCarlo,
    LinearProgram,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
            Method::LinearProgram => "linear_program",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerProfile {
    pub values: Vec<f64>,
    /// Present whenever the values are known exactly.
    pub exact: Option<Vec<BigRational>>,
    pub method: Method,
    pub seed: Option<u64>,
    /// Largest per-voter error bar (3 standard errors for Monte Carlo).
    pub error_bound: Option<f64>,
    pub std_errors: Option<Vec<f64>>,
}

impl PowerProfile {
    pub fn from_exact(values: Vec<BigRational>) -> Self {
        PowerProfile {
            values: values.iter().map(to_f64).collect(),
            exact: Some(values),
            method: Method::Exact,
            seed: None,
            error_bound: None,
            std_errors: None,
        }
    }

    pub fn from_estimates(values: Vec<f64>, method: Method, error_bound: f64) -> Self {
        PowerProfile {
            values,
            exact: None,
            method,
            seed: None,
            error_bound: Some(error_bound),
            std_errors: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn exact_sum(&self) -> Option<BigRational> {
        self.exact.as_ref().map(|v| v.iter().cloned().sum())
    }

    /// Divides every component by the component sum.
    pub fn normalize(&self) -> Result<PowerProfile> {
        let mut out = self.clone();
        if let Some(exact) = &self.exact {
            let total: BigRational = exact.iter().cloned().sum();
            if total.is_zero() {
                return Err(Error::domain("cannot normalize an all-zero profile"));
            }
            let scaled: Vec<BigRational> = exact.iter().map(|v| v / &total).collect();
            out.values = scaled.iter().map(to_f64).collect();
            out.exact = Some(scaled);
            return Ok(out);
        }
        let total = self.sum();
        if total == 0.0 || !total.is_finite() {
            return Err(Error::domain("cannot normalize an all-zero profile"));
        }
        out.values = self.values.iter().map(|v| v / total).collect();
        out.error_bound = self.error_bound.map(|e| e / total.abs());
        out.std_errors = self
            .std_errors
            .as_ref()
            .map(|s| s.iter().map(|e| e / total.abs()).collect());
        Ok(out)
    }

    /// Componentwise check against exact targets.
    pub fn equals_exact(&self, target: &[BigRational]) -> bool {
        match &self.exact {
            Some(v) => v.as_slice() == target,
            None => false,
        }
    }

    pub fn max_abs_diff(&self, target: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(target)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn l1_distance(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
