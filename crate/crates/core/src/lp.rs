//! Dense two-phase simplex with Bland's rule. Small problems only: the
//! nucleolus programs solved here have at most a few dozen rows.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `maximize c·x` subject to the rows and `x ≥ 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Relation, f64)>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per row: `≥ 0` for `≤` rows, `≤ 0` for `≥` rows, free for equalities.
    pub duals: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpError {
    Infeasible,
    Unbounded,
}

const EPS: f64 = 1e-10;
const MAX_PIVOTS: usize = 200_000;

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        LinearProgram {
            objective,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    m: usize,
    nvars: usize,
    ncols: usize,
    /// Row-major, `ncols + 1` entries per row; the last is the right-hand side.
    t: Vec<f64>,
    basis: Vec<usize>,
    /// Column holding the initial identity for each row.
    unit_col: Vec<usize>,
    sign: Vec<f64>,
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let m = lp.rows.len();
        let nvars = lp.objective.len();
        let mut sign = vec![1.0; m];
        let mut rels = Vec::with_capacity(m);
        for (r, (_, rel, rhs)) in lp.rows.iter().enumerate() {
            let mut rel = *rel;
            if *rhs < 0.0 {
                sign[r] = -1.0;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rels.push(rel);
        }
        let n_slack = rels.iter().filter(|r| **r != Relation::Eq).count();
        let n_art = rels.iter().filter(|r| **r != Relation::Le).count();
        let first_artificial = nvars + n_slack;
        let ncols = first_artificial + n_art;
        let width = ncols + 1;
        let mut t = vec![0.0; m * width];
        let mut unit_col = vec![0; m];
        let (mut slack, mut art) = (nvars, first_artificial);
        for (r, (coeffs, _, rhs)) in lp.rows.iter().enumerate() {
            let row = &mut t[r * width..(r + 1) * width];
            for (j, a) in coeffs.iter().enumerate() {
                row[j] = sign[r] * a;
            }
            row[ncols] = sign[r] * rhs;
            match rels[r] {
                Relation::Le => {
                    row[slack] = 1.0;
                    unit_col[r] = slack;
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    unit_col[r] = art;
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = 1.0;
                    unit_col[r] = art;
                    art += 1;
                }
            }
        }
        Tableau {
            m,
            nvars,
            ncols,
            t,
            basis: unit_col.clone(),
            unit_col,
            sign,
            first_artificial,
        }
    }

    fn width(&self) -> usize {
        self.ncols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width() + c]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width();
        let p = self.at(pr, pc);
        for v in &mut self.t[pr * w..(pr + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.t[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.m {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc);
            if f.abs() < 1e-300 {
                continue;
            }
            let row = &mut self.t[r * w..(r + 1) * w];
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            row[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// `c_B B⁻¹ A_j − c_j` for every column.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = cost.iter().map(|c| -c).collect();
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for (j, rj) in r.iter_mut().enumerate() {
                    *rj += cb * self.at(i, j);
                }
            }
        }
        r
    }

    /// Optimizes `cost` over columns `< allowed`; Bland's rule throughout.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<(), LpError> {
        for _ in 0..MAX_PIVOTS {
            let reduced = self.reduced_costs(cost);
            let Some(entering) = (0..allowed).find(|&j| reduced[j] < -EPS) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, entering);
                if a > EPS {
                    let ratio = self.at(r, self.ncols) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-12
                                || (ratio <= lratio + 1e-12 && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((pr, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            self.pivot(pr, entering);
        }
        Err(LpError::Unbounded)
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpSolution, LpError> {
        if self.first_artificial < self.ncols {
            let mut cost = vec![0.0; self.ncols];
            for c in &mut cost[self.first_artificial..] {
                *c = -1.0;
            }
            self.optimize(&cost, self.ncols)?;
            let infeasibility: f64 = (0..self.m)
                .filter(|&r| self.basis[r] >= self.first_artificial)
                .map(|r| self.at(r, self.ncols))
                .sum();
            if infeasibility > 1e-8 {
                return Err(LpError::Infeasible);
            }
            // Drive zero-level artificials out of the basis where possible.
            for r in 0..self.m {
                if self.basis[r] >= self.first_artificial {
                    if let Some(c) =
                        (0..self.first_artificial).find(|&c| self.at(r, c).abs() > 1e-9)
                    {
                        self.pivot(r, c);
                    }
                }
            }
        }
        let mut cost = vec![0.0; self.ncols];
        cost[..self.nvars].copy_from_slice(&lp.objective);
        self.optimize(&cost, self.first_artificial)?;

        let mut x = vec![0.0; self.nvars];
        for r in 0..self.m {
            if self.basis[r] < self.nvars {
                x[self.basis[r]] = self.at(r, self.ncols);
            }
        }
        let reduced = self.reduced_costs(&cost);
        let duals = (0..self.m)
            .map(|r| self.sign[r] * (reduced[self.unit_col[r]] + cost[self.unit_col[r]]))
            .collect();
        let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution {
            x,
            objective,
            duals,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), value 36.
        let mut lp = LinearProgram::new(vec![3.0, 5.0]);
        lp.add_row(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.add_row(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.add_row(vec![3.0, 2.0], Relation::Le, 18.0);
        let s = lp.solve().unwrap();
        assert!((s.objective - 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
        // Shadow prices of the same problem.
        assert!(s.duals[0].abs() < 1e-9);
        assert!((s.duals[1] - 1.5).abs() < 1e-9);
        assert!((s.duals[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + 2y  s.t. x + y = 3, x ≥ 1, y ≥ 0.5 → (2.5, 0.5), value 3.5.
        let mut lp = LinearProgram::new(vec![-1.0, -2.0]);
        lp.add_row(vec![1.0, 1.0], Relation::Eq, 3.0);
        lp.add_row(vec![1.0, 0.0], Relation::Ge, 1.0);
        lp.add_row(vec![0.0, 1.0], Relation::Ge, 0.5);
        let s = lp.solve().unwrap();
        assert!((s.objective + 3.5).abs() < 1e-9);
        assert!((s.x[0] - 2.5).abs() < 1e-9);
        // Dual feasibility: A^T y ≥ c (as a max problem) with equality on basics.
        assert!((s.duals[0] + 1.0).abs() < 1e-9);
        assert!(s.duals[1].abs() < 1e-9);
        assert!((s.duals[2] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.add_row(vec![1.0], Relation::Le, 1.0);
        lp.add_row(vec![1.0], Relation::Ge, 2.0);
        assert_eq!(lp.solve().unwrap_err(), LpError::Infeasible);
        let mut lp = LinearProgram::new(vec![1.0, 0.0]);
        lp.add_row(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve().unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        // max -x s.t. -x ≤ -2 → x = 2.
        let mut lp = LinearProgram::new(vec![-1.0]);
        lp.add_row(vec![-1.0], Relation::Le, -2.0);
        let s = lp.solve().unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-9);
        assert!((s.duals[0] - 1.0).abs() < 1e-9);
    }
}
