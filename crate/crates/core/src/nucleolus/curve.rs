use rand::Rng;
use serde::Serialize;

use super::excess::excess;
use crate::continuous::ContinuousGame;
use crate::error::{Error, Result};
use crate::numerics::rng::sample_moments;
use crate::numerics::NumericsSpec;

/// Estimated volumes `E(c) = vol{x : g(x) − w·x ≥ c}` on a descending grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExcessCurve {
    pub grid: Vec<f64>,
    pub volumes: Vec<f64>,
    pub stderr: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    ALess,
    BLess,
    Indistinguishable,
}

impl Comparison {
    pub fn as_str(self) -> &'static str {
        match self {
            Comparison::ALess => "a_less",
            Comparison::BLess => "b_less",
            Comparison::Indistinguishable => "indistinguishable",
        }
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::input("excess grid is empty"));
    }
    if grid.windows(2).any(|p| p[1] >= p[0]) {
        return Err(Error::input("excess grid must be strictly descending"));
    }
    if grid.iter().any(|c| !(-1.0..=1.0).contains(c)) {
        return Err(Error::input("excess grid values must lie in [-1, 1]"));
    }
    Ok(())
}

/// Index of the first grid value `≤ e`, or `grid.len()` if none.
pub(crate) fn level(grid: &[f64], e: f64) -> usize {
    grid.partition_point(|&c| c > e)
}

/// Monte Carlo estimate of the excess function on `grid`.
pub fn excess_curve(
    game: &ContinuousGame,
    w: &[f64],
    grid: &[f64],
    spec: &NumericsSpec,
) -> Result<ExcessCurve> {
    check_grid(grid)?;
    if w.len() != game.n() {
        return Err(Error::input("weight vector length differs from the voter count"));
    }
    if spec.mc_samples < 2 {
        return Err(Error::input("Monte Carlo needs at least two samples"));
    }
    let n = game.n();
    let k = grid.len();
    let moments = sample_moments(spec.mc_samples, spec.seed, k, 1, spec.workers, |r, _, out| {
        let x: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
        let first = level(grid, excess(game, &x, w));
        out[first..].iter_mut().for_each(|v| *v = 1.0);
        0
    });
    let (volumes, stderr) = moments.stratified_mean();
    Ok(ExcessCurve {
        grid: grid.to_vec(),
        volumes,
        stderr,
    })
}

/// Trapezoid weight of each grid point within the suffix `[grid[k], grid[0]]`.
pub(crate) fn trapezoid_weights(grid: &[f64], k: usize) -> Vec<f64> {
    let mut wts = vec![0.0; k + 1];
    for j in 0..k {
        let h = grid[j] - grid[j + 1];
        wts[j] += h / 2.0;
        wts[j + 1] += h / 2.0;
    }
    wts
}

/// Decides a curve comparison from pointwise differences `a − b` and suffix
/// integral differences, each with a standard error, scanning suffixes from
/// the top of the grid.
pub(crate) fn decide(d: &[f64], d_se: &[f64], integral: &[f64], integral_se: &[f64]) -> Comparison {
    let mut a_above = false;
    let mut b_above = false;
    for k in 0..d.len() {
        if d[k] > 3.0 * d_se[k] {
            a_above = true;
        }
        if d[k] < -3.0 * d_se[k] {
            b_above = true;
        }
        if a_above && b_above {
            return Comparison::Indistinguishable;
        }
        if k == 0 {
            continue;
        }
        if integral[k] < -3.0 * integral_se[k] && !a_above {
            return Comparison::ALess;
        }
        if integral[k] > 3.0 * integral_se[k] && !b_above {
            return Comparison::BLess;
        }
    }
    Comparison::Indistinguishable
}

/// Orders two independently estimated curves. The integral error uses the
/// sum of per-point errors, which bounds it whatever the correlation along
/// the grid.
pub fn compare_curves(a: &ExcessCurve, b: &ExcessCurve) -> Result<Comparison> {
    if a.grid != b.grid {
        return Err(Error::input("curves are on different grids"));
    }
    let k = a.grid.len();
    let d: Vec<f64> = (0..k).map(|j| a.volumes[j] - b.volumes[j]).collect();
    let se: Vec<f64> = (0..k).map(|j| a.stderr[j].hypot(b.stderr[j])).collect();
    let mut integral = vec![0.0; k];
    let mut integral_se = vec![0.0; k];
    for s in 1..k {
        let wts = trapezoid_weights(&a.grid, s);
        integral[s] = wts.iter().zip(&d).map(|(w, v)| w * v).sum();
        integral_se[s] = wts.iter().zip(&se).map(|(w, v)| w * v).sum();
    }
    Ok(decide(&d, &se, &integral, &integral_se))
}
