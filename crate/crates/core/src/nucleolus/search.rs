use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::curve::{decide, level, trapezoid_weights, Comparison, ExcessCurve};
use super::excess::{max_excess, separable_parts};
use crate::continuous::ContinuousGame;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::numerics::rng::{block_rng, with_workers, BLOCK_SIZE};
use crate::numerics::sobol::Sobol;
use crate::numerics::NumericsSpec;

pub const MAX_SEARCH_VOTERS: usize = 6;
const GRID_POINTS: usize = 64;
const MAX_ROUNDS: usize = 12;
const MIN_CELL: f64 = 1e-5;
const RESTARTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    MaxExcessUnique,
    CurveRefined,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::MaxExcessUnique => "max_excess_unique",
            Phase::CurveRefined => "curve_refined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Round {
    /// Cell in the coordinates `w_1..w_{n-1}`.
    pub cell: Vec<(f64, f64)>,
    pub candidates: usize,
    pub survivors: usize,
    pub champion: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NucleolusResult {
    pub w_star: Vec<f64>,
    pub max_excess: f64,
    pub phase: Phase,
    pub box_bounds: Vec<(f64, f64)>,
    /// Max excess values came from local search.
    pub heuristic: bool,
    pub samples_per_curve: u64,
    pub seed: u64,
    pub rounds: Vec<Round>,
    /// Excess curve of the surviving lattice point nearest `w_star` in the last round.
    pub curve: Option<ExcessCurve>,
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Full weight vector from the first `n − 1` coordinates.
fn complete(v: &[f64]) -> Vec<f64> {
    let mut w = v.to_vec();
    w.push(1.0 - v.iter().sum::<f64>());
    w
}

/// Minimizes the corner lower bound of the max excess by linear programming.
/// Returns the minimizer and the bound.
fn corner_lp(game: &ContinuousGame) -> Option<(Vec<f64>, f64)> {
    let n = game.n();
    // Variables: w_1..w_n, t+, t-. Maximize −t.
    let mut obj = vec![0.0; n + 2];
    obj[n] = -1.0;
    obj[n + 1] = 1.0;
    let mut lp = LinearProgram::new(obj);
    for (coeffs, rhs) in corner_rows(game) {
        let mut row = coeffs;
        row.extend([-1.0, 1.0]);
        lp.add_row(row, Relation::Le, rhs);
    }
    let mut sum = vec![1.0; n];
    sum.extend([0.0, 0.0]);
    lp.add_row(sum, Relation::Eq, 1.0);
    let sol = lp.solve().ok()?;
    Some((sol.x[..n].to_vec(), sol.x[n] - sol.x[n + 1]))
}

/// `−w(S) ≤ −g(1_S)` rows (before adding the bound variable), one per corner.
fn corner_rows(game: &ContinuousGame) -> Vec<(Vec<f64>, f64)> {
    let n = game.n();
    (0u32..1 << n)
        .map(|mask| {
            let x: Vec<f64> = (0..n).map(|k| f64::from(mask >> k & 1)).collect();
            let coeffs = x.iter().map(|v| -v).collect();
            (coeffs, -game.value(&x))
        })
        .collect()
}

/// Range of each weight over the optimal face of the corner LP.
fn face_ranges(game: &ContinuousGame, bound: f64) -> Option<Vec<(f64, f64)>> {
    let n = game.n();
    let rows = corner_rows(game);
    let mut ranges = Vec::with_capacity(n);
    for i in 0..n {
        let mut ends = [0.0; 2];
        for (s, sign) in [1.0, -1.0].into_iter().enumerate() {
            let mut obj = vec![0.0; n];
            obj[i] = sign;
            let mut lp = LinearProgram::new(obj);
            for (coeffs, rhs) in &rows {
                lp.add_row(coeffs.clone(), Relation::Le, rhs + bound + 1e-12);
            }
            lp.add_row(vec![1.0; n], Relation::Eq, 1.0);
            ends[s] = sign * lp.solve().ok()?.objective;
        }
        ranges.push((ends[1], ends[0]));
    }
    Some(ranges)
}

fn nelder_mead(f: &impl Fn(&[f64]) -> f64, start: Vec<f64>, scale: f64) -> (Vec<f64>, f64) {
    let d = start.len();
    let mut pts: Vec<Vec<f64>> = vec![start.clone()];
    for k in 0..d {
        let mut p = start.clone();
        p[k] += scale;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    for _ in 0..500 {
        let mut idx: Vec<usize> = (0..=d).collect();
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = idx.iter().map(|&i| pts[i].clone()).collect();
        vals = idx.iter().map(|&i| vals[i]).collect();
        let size = pts
            .iter()
            .skip(1)
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if size < 1e-9 || vals[d] - vals[0] < 1e-13 && size < 1e-6 {
            break;
        }
        let centroid: Vec<f64> = (0..d)
            .map(|k| pts[..d].iter().map(|p| p[k]).sum::<f64>() / d as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[d])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let r = along(1.0);
        let fr = f(&r);
        if fr < vals[0] {
            let e = along(2.0);
            let fe = f(&e);
            if fe < fr {
                pts[d] = e;
                vals[d] = fe;
            } else {
                pts[d] = r;
                vals[d] = fr;
            }
        } else if fr < vals[d - 1] {
            pts[d] = r;
            vals[d] = fr;
        } else {
            let c = if fr < vals[d] { along(0.5) } else { along(-0.5) };
            let fc = f(&c);
            if fc < vals[d].min(fr) {
                pts[d] = c;
                vals[d] = fc;
            } else {
                for k in 1..=d {
                    pts[k] = pts[k].iter().zip(&pts[0]).map(|(a, b)| b + 0.5 * (a - b)).collect();
                    vals[k] = f(&pts[k]);
                }
            }
        }
    }
    let best = (0..=d).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    (pts[best].clone(), vals[best])
}

/// Nelder-Mead restarts on the max excess over the simplex. Returns the
/// projected optima with their values.
fn phase_one_restarts(game: &ContinuousGame) -> Vec<(Vec<f64>, f64)> {
    let n = game.n();
    let f = |v: &[f64]| max_excess(game, &project_simplex(&complete(v))).value;
    let mut sobol = Sobol::new((n - 1).min(crate::numerics::sobol::MAX_DIM));
    sobol.next_point();
    let starts: Vec<Vec<f64>> = (0..RESTARTS)
        .map(|_| {
            let mut u = sobol.next_point();
            u.resize(n - 1, 0.5);
            // Stick-breaking maps the cube uniformly onto the simplex.
            let mut left = 1.0;
            u.iter()
                .enumerate()
                .map(|(k, &uk)| {
                    let v = left * (1.0 - uk.powf(1.0 / (n - 1 - k) as f64));
                    left -= v;
                    v
                })
                .collect::<Vec<f64>>()
        })
        .collect();
    starts
        .into_par_iter()
        .map(|s| {
            let (v, val) = nelder_mead(&f, s, 0.1);
            let w = project_simplex(&complete(&v));
            (w, val)
        })
        .collect()
}

/// Searches for the continuous nucleolus. Phase one minimizes the max excess,
/// certifying uniqueness through the corner bound when possible; otherwise a
/// tournament on excess curves near the top shrinks a cell of candidates.
pub fn nucleolus_search(game: &ContinuousGame, spec: &NumericsSpec) -> Result<NucleolusResult> {
    let n = game.n();
    if n > MAX_SEARCH_VOTERS {
        return Err(Error::capacity(
            format!("nucleolus search with {n} voters"),
            MAX_SEARCH_VOTERS,
        ));
    }
    if spec.mc_samples < 2 {
        return Err(Error::input("the curve tournament needs at least two samples"));
    }
    let base = NucleolusResult {
        w_star: vec![1.0],
        max_excess: 0.0,
        phase: Phase::MaxExcessUnique,
        box_bounds: vec![(1.0, 1.0)],
        heuristic: false,
        samples_per_curve: spec.mc_samples,
        seed: spec.seed,
        rounds: Vec::new(),
        curve: None,
    };
    if n == 1 {
        return Ok(NucleolusResult {
            max_excess: max_excess(game, &[1.0]).value,
            ..base
        });
    }
    with_workers(spec.workers, || {
        if separable_parts(game).is_some() {
            if let Some(result) = certified(game, &base) {
                return Ok(result);
            }
        }
        let restarts = phase_one_restarts(game);
        let best = restarts.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        let near: Vec<&Vec<f64>> = restarts
            .iter()
            .filter(|r| r.1 <= best + 1e-9)
            .map(|r| &r.0)
            .collect();
        let cell: Vec<(f64, f64)> = (0..n - 1)
            .map(|k| {
                let lo = near.iter().map(|w| w[k]).fold(f64::INFINITY, f64::min);
                let hi = near.iter().map(|w| w[k]).fold(f64::NEG_INFINITY, f64::max);
                ((lo - 0.05).max(0.0), (hi + 0.05).min(1.0))
            })
            .collect();
        Ok(tournament(game, spec, cell, base.clone()))
    })
}

fn certified(game: &ContinuousGame, base: &NucleolusResult) -> Option<NucleolusResult> {
    let (w, bound) = corner_lp(game)?;
    let w = project_simplex(&w);
    let me = max_excess(game, &w);
    if me.value > bound + 1e-9 {
        return None;
    }
    let ranges = face_ranges(game, bound)?;
    if ranges.iter().any(|(lo, hi)| hi - lo > 1e-7) {
        return None;
    }
    Some(NucleolusResult {
        w_star: w,
        max_excess: me.value,
        phase: Phase::MaxExcessUnique,
        box_bounds: ranges,
        heuristic: me.heuristic,
        ..base.clone()
    })
}

fn lattice_size(dim: usize) -> usize {
    match dim {
        1 => 9,
        2 => 5,
        _ => 3,
    }
}

fn lattice(cell: &[(f64, f64)]) -> Vec<Vec<f64>> {
    let m = lattice_size(cell.len());
    let axes: Vec<Vec<f64>> = cell
        .iter()
        .map(|&(lo, hi)| {
            if hi - lo <= 0.0 {
                vec![lo]
            } else {
                (0..m).map(|k| lo + (hi - lo) * k as f64 / (m - 1) as f64).collect()
            }
        })
        .collect();
    let mut out = vec![Vec::new()];
    for axis in &axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().sum::<f64>() <= 1.0 + 1e-12);
    out
}

/// Jittered stratified points: one uniform point in each of `m^n` cells.
fn jittered_points(game: &ContinuousGame, budget: u64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let n = game.n();
    let mut m = (budget as f64).powf(1.0 / n as f64).round() as u64;
    while m > 1 && m.pow(n as u32) > budget {
        m -= 1;
    }
    while (m + 1).pow(n as u32) <= budget {
        m += 1;
    }
    let total = m.pow(n as u32).max(1);
    let blocks = total.div_ceil(BLOCK_SIZE);
    let parts: Vec<(Vec<f64>, Vec<f64>)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let end = ((b + 1) * BLOCK_SIZE).min(total);
            let mut xs = Vec::with_capacity(((end - b * BLOCK_SIZE) as usize) * n);
            let mut gs = Vec::with_capacity((end - b * BLOCK_SIZE) as usize);
            let mut x = vec![0.0; n];
            for idx in b * BLOCK_SIZE..end {
                let mut rest = idx;
                for v in x.iter_mut() {
                    let cell = rest % m;
                    rest /= m;
                    *v = (cell as f64 + rng.random::<f64>()) / m as f64;
                }
                gs.push(game.value(&x));
                xs.extend_from_slice(&x);
            }
            (xs, gs)
        })
        .collect();
    let mut xs = Vec::with_capacity(total as usize * n);
    let mut gs = Vec::with_capacity(total as usize);
    for (a, b) in parts {
        xs.extend(a);
        gs.extend(b);
    }
    (xs, gs)
}

/// Share of the excess distribution kept below the top for the tournament.
pub const WINDOW_MASS: f64 = 0.005;

/// Descending grid from `top` down to `top − depth`, geometrically clustered
/// toward the top.
fn top_grid(top: f64, depth: f64) -> Vec<f64> {
    let top = top.clamp(-1.0, 1.0);
    let depth = depth.clamp(1e-9, top + 1.0);
    let shallow = depth * 1e-3;
    let ratio = (depth / shallow).powf(1.0 / (GRID_POINTS - 2) as f64);
    let mut grid = vec![top];
    let mut h = shallow;
    for _ in 1..GRID_POINTS {
        grid.push((top - h).max(-1.0));
        h *= ratio;
    }
    grid.dedup();
    grid
}

/// Depth below `top` that holds the top `WINDOW_MASS` of the sampled excesses.
fn window_depth(top: f64, excesses: &mut [f64]) -> f64 {
    let k = ((excesses.len() as f64) * WINDOW_MASS).ceil() as usize;
    let k = k.clamp(1, excesses.len());
    let (_, kth, _) = excesses.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
    let depth = top - *kth;
    if depth > 0.0 {
        depth
    } else {
        1e-3
    }
}

/// Paired comparison of two candidates evaluated on the same points.
struct Pairing<'a> {
    grid: &'a [f64],
    /// `phi[k][p]`: suffix-`k` trapezoid integral of a sample whose first
    /// level is `p`.
    phi: Vec<Vec<f64>>,
}

impl<'a> Pairing<'a> {
    fn new(grid: &'a [f64]) -> Pairing<'a> {
        let k = grid.len();
        let phi = (0..k)
            .map(|s| {
                let wts = trapezoid_weights(grid, s);
                (0..=k)
                    .map(|p| wts.iter().enumerate().filter(|&(j, _)| j >= p).map(|(_, w)| w).sum())
                    .collect()
            })
            .collect();
        Pairing { grid, phi }
    }

    fn compare(&self, a: &[u8], b: &[u8]) -> Comparison {
        let k = self.grid.len();
        let width = k + 1;
        let mut counts = vec![0u64; width * width];
        for (&p, &q) in a.iter().zip(b) {
            counts[p as usize * width + q as usize] += 1;
        }
        let total = a.len() as f64;
        let cells: Vec<(usize, usize, f64)> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i / width, i % width, c as f64))
            .collect();
        let stats = |f: &dyn Fn(usize) -> f64| {
            let (mut m1, mut m2) = (0.0, 0.0);
            for &(p, q, c) in &cells {
                let v = f(p) - f(q);
                m1 += c * v;
                m2 += c * v * v;
            }
            let mean = m1 / total;
            let var = ((m2 / total - mean * mean) * total / (total - 1.0)).max(0.0);
            (mean, (var / total).sqrt())
        };
        let mut d = vec![0.0; k];
        let mut d_se = vec![0.0; k];
        let mut integral = vec![0.0; k];
        let mut integral_se = vec![0.0; k];
        for j in 0..k {
            let (m, s) = stats(&|p| f64::from(u8::from(j >= p)));
            d[j] = m;
            d_se[j] = s;
            let (m, s) = stats(&|p| self.phi[j][p]);
            integral[j] = m;
            integral_se[j] = s;
        }
        decide(&d, &d_se, &integral, &integral_se)
    }

    fn curve(&self, levels: &[u8]) -> ExcessCurve {
        let k = self.grid.len();
        let mut hist = vec![0u64; k + 1];
        for &p in levels {
            hist[p as usize] += 1;
        }
        let total = levels.len() as f64;
        let mut cum = 0u64;
        let mut volumes = Vec::with_capacity(k);
        let mut stderr = Vec::with_capacity(k);
        for h in hist.iter().take(k) {
            cum += h;
            let p = cum as f64 / total;
            volumes.push(p);
            stderr.push((p * (1.0 - p) / (total - 1.0).max(1.0)).sqrt());
        }
        ExcessCurve {
            grid: self.grid.to_vec(),
            volumes,
            stderr,
        }
    }
}

fn tournament(
    game: &ContinuousGame,
    spec: &NumericsSpec,
    mut cell: Vec<(f64, f64)>,
    base: NucleolusResult,
) -> NucleolusResult {
    let n = game.n();
    let mut rounds = Vec::new();
    let mut heuristic = false;
    let mut champion_w = project_simplex(&complete(&cell.iter().map(|c| 0.5 * (c.0 + c.1)).collect::<Vec<_>>()));
    let mut champion_curve = None;
    let mut champion_max = max_excess(game, &champion_w).value;
    for round in 0..MAX_ROUNDS {
        let width = cell.iter().map(|c| c.1 - c.0).fold(0.0, f64::max);
        if width < MIN_CELL {
            break;
        }
        let candidates = lattice(&cell);
        if candidates.is_empty() {
            break;
        }
        let weights: Vec<Vec<f64>> = candidates.iter().map(|v| project_simplex(&complete(v))).collect();
        let maxima: Vec<_> = weights.iter().map(|w| max_excess(game, w)).collect();
        heuristic |= maxima.iter().any(|m| m.heuristic);
        let top = maxima.iter().map(|m| m.value).fold(f64::NEG_INFINITY, f64::max);
        let (xs, gs) = jittered_points(game, spec.mc_samples, spec.seed.wrapping_add(round as u64));
        let excesses = |w: &[f64]| -> Vec<f64> {
            gs.iter()
                .zip(xs.chunks_exact(n))
                .map(|(g, x)| g - w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
                .collect()
        };
        let center = project_simplex(&complete(&cell.iter().map(|c| 0.5 * (c.0 + c.1)).collect::<Vec<_>>()));
        let grid = top_grid(top, window_depth(top, &mut excesses(&center)));
        let levels: Vec<Vec<u8>> = weights
            .par_iter()
            .map(|w| excesses(w).into_iter().map(|e| level(&grid, e) as u8).collect())
            .collect();
        let pairing = Pairing::new(&grid);
        let m = candidates.len();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
        let verdicts: Vec<Comparison> = pairs
            .par_iter()
            .map(|&(a, b)| pairing.compare(&levels[a], &levels[b]))
            .collect();
        let mut dominated = vec![false; m];
        for (&(a, b), v) in pairs.iter().zip(&verdicts) {
            match v {
                Comparison::ALess => dominated[b] = true,
                Comparison::BLess => dominated[a] = true,
                Comparison::Indistinguishable => {}
            }
        }
        if dominated.iter().all(|&d| d) {
            dominated.iter_mut().for_each(|d| *d = false);
        }
        let survivors: Vec<&Vec<f64>> = candidates
            .iter()
            .zip(&dominated)
            .filter(|(_, d)| !**d)
            .map(|(c, _)| c)
            .collect();
        let hull: Vec<(f64, f64)> = (0..cell.len())
            .map(|k| {
                let lo = survivors.iter().map(|v| v[k]).fold(f64::INFINITY, f64::min);
                let hi = survivors.iter().map(|v| v[k]).fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            })
            .collect();
        champion_w = project_simplex(&complete(&hull.iter().map(|h| 0.5 * (h.0 + h.1)).collect::<Vec<_>>()));
        champion_max = max_excess(game, &champion_w).value;
        let nearest = (0..m)
            .filter(|&c| !dominated[c])
            .min_by(|&a, &b| {
                let da: f64 = weights[a].iter().zip(&champion_w).map(|(x, y)| (x - y).abs()).sum();
                let db: f64 = weights[b].iter().zip(&champion_w).map(|(x, y)| (x - y).abs()).sum();
                da.total_cmp(&db)
            })
            .unwrap_or(0);
        champion_curve = Some(pairing.curve(&levels[nearest]));
        rounds.push(Round {
            cell: cell.clone(),
            candidates: m,
            survivors: survivors.len(),
            champion: champion_w.clone(),
        });
        let per_axis = lattice_size(cell.len());
        let next: Vec<(f64, f64)> = cell
            .iter()
            .zip(&hull)
            .map(|(&(lo, hi), &(s_lo, s_hi))| {
                let step = (hi - lo) / (per_axis - 1) as f64;
                ((s_lo - step).max(lo), (s_hi + step).min(hi))
            })
            .collect();
        let shrunk = next
            .iter()
            .zip(&cell)
            .any(|(a, b)| a.1 - a.0 < (b.1 - b.0) * (1.0 - 1e-9));
        cell = next;
        if !shrunk {
            break;
        }
    }
    let mut box_bounds = cell.clone();
    let lo_sum: f64 = cell.iter().map(|c| c.0).sum();
    let hi_sum: f64 = cell.iter().map(|c| c.1).sum();
    box_bounds.push(((1.0 - hi_sum).max(0.0), (1.0 - lo_sum).min(1.0)));
    NucleolusResult {
        w_star: champion_w,
        max_excess: champion_max,
        phase: Phase::CurveRefined,
        box_bounds,
        heuristic,
        rounds,
        curve: champion_curve,
        ..base
    }
}
