//! Gauss-Legendre rules and their tensor products.

use std::f64::consts::PI;

/// Nodes and weights of the `order`-point rule on `[a, b]`.
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(order > 0, "quadrature order must be positive");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = order.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess, then Newton on P_order.
        let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    (
        nodes.iter().map(|x| mid + half * x).collect(),
        weights.iter().map(|w| w * half).collect(),
    )
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor-product rule over `[0,1]^dim`.
pub fn tensor_unit_cube(order: usize, dim: usize, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> f64 {
    use rayon::prelude::*;
    let (nodes, weights) = gauss_legendre(order, 0.0, 1.0);
    if dim == 0 {
        return f(&[]);
    }
    // Parallel over the first axis; the inner sum runs in a fixed order.
    let partial: Vec<f64> = (0..order)
        .into_par_iter()
        .map(|i0| {
            let mut x = vec![0.0; dim];
            x[0] = nodes[i0];
            let mut idx = vec![0usize; dim];
            let mut total = 0.0;
            loop {
                let mut w = weights[i0];
                for d in 1..dim {
                    x[d] = nodes[idx[d]];
                    w *= weights[idx[d]];
                }
                total += w * f(&x);
                let mut d = 1;
                while d < dim {
                    idx[d] += 1;
                    if idx[d] < order {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                }
                if d == dim {
                    break;
                }
            }
            total
        })
        .collect();
    partial.iter().sum()
}
