use serde::Serialize;

use crate::continuous::{Body, ContinuousGame};
use crate::numerics::sobol::Sobol;

/// `g(x) − w·x`.
pub fn excess(game: &ContinuousGame, x: &[f64], w: &[f64]) -> f64 {
    game.value(x) - w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxExcess {
    pub value: f64,
    pub argmax: Vec<f64>,
    /// Set when the value comes from local search rather than enumeration.
    pub heuristic: bool,
}

/// Per-voter polynomial `p_i` with `g(x) = Σ p_i(x_i)`, as `(coef, exponent)`
/// pairs, when the game separates that way.
pub fn separable_parts(game: &ContinuousGame) -> Option<Vec<Vec<(f64, u32)>>> {
    let terms = match game.body() {
        Body::MonomialSum(_) | Body::LinearWeighted(_) => game.as_polynomial()?,
        _ => return None,
    };
    let mut parts = vec![Vec::new(); game.n()];
    for t in &terms {
        let support: Vec<usize> = (0..game.n()).filter(|&i| t.exponents[i] > 0).collect();
        match support.as_slice() {
            [i] => parts[*i].push((crate::rational::to_f64(&t.coef), t.exponents[*i])),
            [] => {}
            _ => return None,
        }
    }
    Some(parts)
}

fn poly(p: &[(f64, u32)], t: f64) -> f64 {
    p.iter().map(|&(c, e)| c * t.powi(e as i32)).sum()
}

fn poly_slope(p: &[(f64, u32)], t: f64) -> f64 {
    p.iter()
        .filter(|&&(_, e)| e > 0)
        .map(|&(c, e)| c * e as f64 * t.powi(e as i32 - 1))
        .sum()
}

/// Candidates for one coordinate: 0, 1 and the interior roots of
/// `p'(t) = w`, found by sign changes on a grid and bisection.
pub fn coordinate_candidates(p: &[(f64, u32)], w: f64) -> Vec<f64> {
    let mut out = vec![0.0, 1.0];
    let d = |t: f64| poly_slope(p, t) - w;
    const STEPS: usize = 1024;
    let mut prev = d(0.0);
    for k in 1..=STEPS {
        let t = k as f64 / STEPS as f64;
        let cur = d(t);
        if cur == 0.0 {
            out.push(t);
        } else if prev * cur < 0.0 {
            let (mut a, mut b) = ((k - 1) as f64 / STEPS as f64, t);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if d(a) * d(m) <= 0.0 {
                    b = m;
                } else {
                    a = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        prev = cur;
    }
    out
}

/// Maximum of `g(x) − w·x` over the cube. Separable polynomial games are
/// solved by candidate enumeration per coordinate; anything else falls back
/// to multistart compass search and is flagged heuristic.
pub fn max_excess(game: &ContinuousGame, w: &[f64]) -> MaxExcess {
    if let Some(parts) = separable_parts(game) {
        let mut argmax = Vec::with_capacity(game.n());
        for (p, &wi) in parts.iter().zip(w) {
            let best = coordinate_candidates(p, wi)
                .into_iter()
                .map(|t| (poly(p, t) - wi * t, t))
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .expect("0 and 1 are always candidates");
            argmax.push(best.1);
        }
        let value = excess(game, &argmax, w);
        return MaxExcess {
            value,
            argmax,
            heuristic: false,
        };
    }
    multistart(game, w)
}

const STARTS: usize = 64;

fn multistart(game: &ContinuousGame, w: &[f64]) -> MaxExcess {
    let n = game.n();
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(STARTS);
    if n <= 5 {
        for mask in 0u32..1 << n {
            starts.push((0..n).map(|k| f64::from(mask >> k & 1)).collect());
        }
    }
    let mut sobol = Sobol::new(n.min(crate::numerics::sobol::MAX_DIM));
    sobol.next_point();
    while starts.len() < STARTS {
        let mut p = sobol.next_point();
        p.resize(n, 0.5);
        starts.push(p);
    }
    let f = |x: &[f64]| excess(game, x, w);
    let mut best = MaxExcess {
        value: f64::NEG_INFINITY,
        argmax: vec![0.0; n],
        heuristic: true,
    };
    for s in starts {
        let (x, v) = compass(&f, s);
        if v > best.value {
            best.value = v;
            best.argmax = x;
        }
    }
    best
}

/// Box-constrained compass search maximizing `f`.
fn compass(f: &impl Fn(&[f64]) -> f64, mut x: Vec<f64>) -> (Vec<f64>, f64) {
    let mut fx = f(&x);
    let mut step = 0.25;
    while step > 1e-10 {
        let mut improved = false;
        for k in 0..x.len() {
            for dir in [1.0, -1.0] {
                let old = x[k];
                x[k] = (old + dir * step).clamp(0.0, 1.0);
                let v = f(&x);
                if v > fx {
                    fx = v;
                    improved = true;
                } else {
                    x[k] = old;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

/// Largest excess over the binary corners: a lower bound for the maximum.
pub fn corner_bound(game: &ContinuousGame, w: &[f64]) -> f64 {
    let n = game.n();
    (0u32..1 << n)
        .map(|mask| {
            let x: Vec<f64> = (0..n).map(|k| f64::from(mask >> k & 1)).collect();
            excess(game, &x, w)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
