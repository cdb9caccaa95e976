use super::properties::require_simple;
use super::BinaryGame;
use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::profile::{Method, PowerProfile};
use crate::rational::round_vector;

pub const MAX_NUCLEOLUS_VOTERS: usize = 12;
const DUAL_TIGHT: f64 = 1e-7;

/// Nucleolus over imputations, by the usual sequence of linear programs: minimize
/// the largest excess among free coalitions, fix those with a positive dual, and
/// drop free coalitions whose excess the fixed ones already determine.
pub fn nucleolus_binary(game: &BinaryGame) -> Result<PowerProfile> {
    let n = game.n();
    if n > MAX_NUCLEOLUS_VOTERS {
        return Err(Error::capacity(
            format!("binary nucleolus on {n} voters"),
            MAX_NUCLEOLUS_VOTERS,
        ));
    }
    require_simple(game)?;
    let full = game.full();
    let mut free: Vec<Coalition> = (1..full.0).map(Coalition).collect();
    let mut fixed: Vec<(Coalition, f64)> = Vec::new();
    let mut span = Span::new();
    span.insert(&indicator(full, n));
    let mut x = vec![1.0 / n as f64; n];

    while span.rank() < n && !free.is_empty() {
        let stage = solve_stage(game, &free, &fixed)?;
        x = stage.x;
        for (k, &s) in free.iter().enumerate() {
            if stage.y[k] > DUAL_TIGHT {
                fixed.push((s, stage.t));
                span.insert(&indicator(s, n));
            }
        }
        free.retain(|&s| !span.contains(&indicator(s, n)));
    }

    let mut profile = PowerProfile::from_estimates(x.clone(), Method::LinearProgram, 1e-9);
    if let Some(exact) = round_vector(&x, 10_000, 1e-8) {
        profile.exact = Some(exact);
    }
    Ok(profile)
}

struct Stage {
    x: Vec<f64>,
    t: f64,
    /// Multipliers of the free coalitions' excess constraints.
    y: Vec<f64>,
}

/// Solves the dual of `min t s.t. x(S) + t ≥ g(S) (free), x(S) = g(S) − t_S (fixed),
/// x(N) = 1, x ≥ 0`, which has only `n + 1` rows. Primal `x` and `t` come back as
/// the row multipliers.
fn solve_stage(game: &BinaryGame, free: &[Coalition], fixed: &[(Coalition, f64)]) -> Result<Stage> {
    let n = game.n();
    let value = |s: Coalition| if game.wins(s) { 1.0 } else { 0.0 };
    // Columns: y_S for free S, u_S⁺ and u_S⁻ for fixed S, z⁺, z⁻.
    let mut objective: Vec<f64> = free.iter().map(|&s| value(s)).collect();
    for &(s, t) in fixed {
        let c = value(s) - t;
        objective.push(c);
        objective.push(-c);
    }
    objective.push(1.0);
    objective.push(-1.0);
    let ncols = objective.len();
    let mut lp = LinearProgram::new(objective);
    for i in 0..n {
        let mut row = vec![0.0; ncols];
        for (k, &s) in free.iter().enumerate() {
            if s.contains(i) {
                row[k] = 1.0;
            }
        }
        for (k, &(s, _)) in fixed.iter().enumerate() {
            if s.contains(i) {
                row[free.len() + 2 * k] = 1.0;
                row[free.len() + 2 * k + 1] = -1.0;
            }
        }
        row[ncols - 2] = 1.0;
        row[ncols - 1] = -1.0;
        lp.add_row(row, Relation::Le, 0.0);
    }
    let mut norm = vec![0.0; ncols];
    norm[..free.len()].iter_mut().for_each(|v| *v = 1.0);
    lp.add_row(norm, Relation::Eq, 1.0);
    let sol = lp
        .solve()
        .map_err(|e| Error::domain(format!("nucleolus linear program failed: {e:?}")))?;
    Ok(Stage {
        x: sol.duals[..n].to_vec(),
        t: sol.duals[n],
        y: sol.x[..free.len()].to_vec(),
    })
}

fn indicator(s: Coalition, n: usize) -> Vec<f64> {
    (0..n).map(|i| if s.contains(i) { 1.0 } else { 0.0 }).collect()
}

/// Row-echelon basis of a growing set of vectors.
struct Span {
    rows: Vec<(usize, Vec<f64>)>,
}

impl Span {
    fn new() -> Self {
        Span { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[f64]) -> Vec<f64> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let f = v[*p];
            if f != 0.0 {
                v.iter_mut().zip(row).for_each(|(a, b)| *a -= f * b);
            }
        }
        v
    }

    fn contains(&self, v: &[f64]) -> bool {
        self.reduce(v).iter().all(|a| a.abs() < 1e-9)
    }

    fn insert(&mut self, v: &[f64]) {
        let r = self.reduce(v);
        if let Some(p) = (0..r.len()).max_by(|&a, &b| r[a].abs().total_cmp(&r[b].abs())) {
            if r[p].abs() >= 1e-9 {
                let scale = r[p];
                let row: Vec<f64> = r.iter().map(|a| a / scale).collect();
                for (_, other) in &mut self.rows {
                    let f = other[p];
                    if f != 0.0 {
                        other.iter_mut().zip(&row).for_each(|(a, b)| *a -= f * b);
                    }
                }
                self.rows.push((p, row));
            }
        }
    }
}

/// Excesses `g(S) − x(S)` over all proper nonempty coalitions, largest first.
pub fn sorted_excesses(game: &BinaryGame, x: &[f64]) -> Vec<f64> {
    let full = game.full();
    let mut e: Vec<f64> = (1..full.0)
        .map(Coalition)
        .map(|s| {
            let g = if game.wins(s) { 1.0 } else { 0.0 };
            g - s.members().map(|i| x[i]).sum::<f64>()
        })
        .collect();
    e.sort_by(|a, b| b.total_cmp(a));
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn worked_examples() {
        let g = BinaryGame::weighted_int(3, &[2, 1, 1, 1]).unwrap();
        let p = nucleolus_binary(&g).unwrap();
        let expected = [0.4, 0.2, 0.2, 0.2];
        assert!(p.max_abs_diff(&expected) < 1e-9, "{:?}", p.values);
        assert_eq!(
            p.exact.unwrap(),
            vec![ratio(2, 5), ratio(1, 5), ratio(1, 5), ratio(1, 5)]
        );

        let maj = BinaryGame::weighted_int(2, &[1, 1, 1]).unwrap();
        let p = nucleolus_binary(&maj).unwrap();
        assert!(p.max_abs_diff(&[1.0 / 3.0; 3]) < 1e-9);

        let null = BinaryGame::weighted_int(2, &[1, 1, 0]).unwrap();
        let p = nucleolus_binary(&null).unwrap();
        assert!(p.max_abs_diff(&[0.5, 0.5, 0.0]) < 1e-9, "{:?}", p.values);
    }

    #[test]
    fn capacity_cap() {
        let g = BinaryGame::weighted_int(7, &[1; 13]).unwrap();
        assert!(matches!(nucleolus_binary(&g), Err(Error::Capacity { .. })));
    }
}
