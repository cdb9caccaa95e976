use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::binary::BinaryGame;
use crate::coalition::{Coalition, MAX_VOTERS};
use crate::error::{Error, Result};
use crate::rational::{lcm_of_denominators, to_f64};

/// One term `coef · Π x_i^{e_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: BigRational,
    pub exponents: Vec<u32>,
}

impl Term {
    pub fn new(coef: BigRational, exponents: Vec<u32>) -> Term {
        Term { coef, exponents }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut v = to_f64(&self.coef);
        for (xi, &e) in x.iter().zip(&self.exponents) {
            if e > 0 {
                v *= xi.powi(e as i32);
            }
        }
        v
    }
}

/// Nonnegative weights normalized to sum one, kept exactly and as floats.
#[derive(Clone, Debug, PartialEq)]
pub struct Weights {
    pub exact: Vec<BigRational>,
    pub float: Vec<f64>,
}

impl Weights {
    /// Normalizes `raw`; rejects negative entries and an all-zero vector.
    pub fn new(raw: Vec<BigRational>) -> Result<Weights> {
        if raw.iter().any(|w| w.is_negative()) {
            return Err(Error::input("weights must be nonnegative"));
        }
        let total: BigRational = raw.iter().cloned().sum();
        if total.is_zero() {
            return Err(Error::input("weights must not all be zero"));
        }
        let exact: Vec<BigRational> = raw.iter().map(|w| w / &total).collect();
        let float = exact.iter().map(to_f64).collect();
        Ok(Weights { exact, float })
    }

    pub fn from_f64(raw: &[f64]) -> Result<Weights> {
        if raw.iter().any(|w| !w.is_finite()) {
            return Err(Error::input("weights must be finite"));
        }
        Weights::new(raw.iter().map(|&w| crate::rational::from_f64(w)).collect())
    }

    pub fn len(&self) -> usize {
        self.float.len()
    }

    pub fn is_empty(&self) -> bool {
        self.float.is_empty()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.float.iter().zip(x).map(|(w, v)| w * v).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuotaFunction {
    /// Nondecreasing polyline through `(0,0)` and `(1,1)`.
    PiecewiseLinear(Vec<(f64, f64)>),
    /// `Σ c_k y^{e_k}` with nonnegative coefficients summing to one.
    Polynomial(Vec<(BigRational, u32)>),
}

impl QuotaFunction {
    pub fn piecewise_linear(points: Vec<(f64, f64)>) -> Result<QuotaFunction> {
        if points.len() < 2 {
            return Err(Error::input("a quota polyline needs at least two breakpoints"));
        }
        let first = points[0];
        let last = points[points.len() - 1];
        if first != (0.0, 0.0) || last != (1.0, 1.0) {
            return Err(Error::input("quota polyline must run from (0,0) to (1,1)"));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 < w[0].1 {
                return Err(Error::input(
                    "quota breakpoints must have increasing y and nondecreasing q",
                ));
            }
        }
        if points.iter().any(|p| !(0.0..=1.0).contains(&p.1)) {
            return Err(Error::input("quota values must lie in [0,1]"));
        }
        Ok(QuotaFunction::PiecewiseLinear(points))
    }

    pub fn polynomial(terms: Vec<(BigRational, u32)>) -> Result<QuotaFunction> {
        if terms.iter().any(|(c, _)| c.is_negative()) {
            return Err(Error::input("quota polynomial needs nonnegative coefficients"));
        }
        if terms.iter().any(|(c, e)| *e == 0 && !c.is_zero()) {
            return Err(Error::input("quota polynomial must vanish at 0"));
        }
        let total: BigRational = terms.iter().map(|(c, _)| c.clone()).sum();
        if !total.is_one() {
            return Err(Error::input("quota polynomial must equal 1 at 1"));
        }
        Ok(QuotaFunction::Polynomial(terms))
    }

    pub fn eval(&self, y: f64) -> f64 {
        let y = y.clamp(0.0, 1.0);
        match self {
            QuotaFunction::PiecewiseLinear(pts) => {
                let k = pts.partition_point(|p| p.0 <= y).clamp(1, pts.len() - 1);
                let (a, b) = (pts[k - 1], pts[k]);
                a.1 + (b.1 - a.1) * (y - a.0) / (b.0 - a.0)
            }
            QuotaFunction::Polynomial(terms) => terms
                .iter()
                .map(|(c, e)| to_f64(c) * y.powi(*e as i32))
                .sum(),
        }
    }
}

/// One threshold game: wins (value 1) when `w·x ≥ quota`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdRep {
    pub quota: BigRational,
    pub weights: Weights,
}

impl ThresholdRep {
    pub fn new(quota: BigRational, weights: Weights) -> Result<ThresholdRep> {
        if !quota.is_positive() || quota > BigRational::one() {
            return Err(Error::input("threshold quota must lie in (0,1]"));
        }
        Ok(ThresholdRep { quota, weights })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        // Guard against rounding right at the boundary: compare against the
        // float quota with a relative slack of a few ulps.
        let q = to_f64(&self.quota);
        if self.weights.dot(x) >= q * (1.0 - 4.0 * f64::EPSILON) {
            1.0
        } else {
            0.0
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    MonomialSum(Vec<Term>),
    LinearWeighted(Weights),
    Threshold(ThresholdRep),
    QuotaWeighted { weights: Weights, quota: QuotaFunction },
    /// Raw nonnegative weights, scaled to integers for exact cumulative sums.
    WeightedMedian { weights: Vec<BigRational>, scaled: Vec<u128> },
    Median,
    Meet(Vec<ContinuousGame>),
    Join(Vec<ContinuousGame>),
    ThresholdIntersection(Vec<ThresholdRep>),
    /// Threshold-type embedding of a binary game: a vote counts as "yes" from 1/2 up.
    Embedding(BinaryGame),
}

/// A monotone map `[0,1]^n → [0,1]` with `g(0) = 0` and `g(1) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousGame {
    n: usize,
    body: Body,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::input("a game needs at least one voter"));
    }
    if n > MAX_VOTERS {
        return Err(Error::capacity(format!("{n} voters"), MAX_VOTERS));
    }
    Ok(())
}

fn check_len(n: usize, len: usize, what: &str) -> Result<()> {
    if len != n {
        return Err(Error::input(format!("{what} has length {len}, expected {n}")));
    }
    Ok(())
}

impl ContinuousGame {
    pub fn monomial_sum(n: usize, terms: Vec<Term>) -> Result<ContinuousGame> {
        check_n(n)?;
        if terms.is_empty() {
            return Err(Error::input("monomial sum needs at least one term"));
        }
        for t in &terms {
            check_len(n, t.exponents.len(), "exponent vector")?;
            if t.coef.is_negative() {
                return Err(Error::input("monomial coefficients must be nonnegative"));
            }
            if t.exponents.iter().all(|&e| e == 0) && !t.coef.is_zero() {
                return Err(Error::input("a constant term breaks g(0) = 0"));
            }
        }
        let total: BigRational = terms.iter().map(|t| t.coef.clone()).sum();
        if !total.is_one() {
            return Err(Error::input(format!(
                "monomial coefficients sum to {total}, expected 1"
            )));
        }
        Ok(ContinuousGame {
            n,
            body: Body::MonomialSum(terms),
        })
    }

    /// Convenience: integer-coefficient monomials divided by a common denominator.
    pub fn monomials(den: i64, terms: &[(i64, &[u32])]) -> Result<ContinuousGame> {
        let n = terms.first().map_or(0, |t| t.1.len());
        ContinuousGame::monomial_sum(
            n,
            terms
                .iter()
                .map(|(c, e)| {
                    Term::new(
                        BigRational::new(BigInt::from(*c), BigInt::from(den)),
                        e.to_vec(),
                    )
                })
                .collect(),
        )
    }

    pub fn linear_weighted(weights: Weights) -> Result<ContinuousGame> {
        check_n(weights.len())?;
        Ok(ContinuousGame {
            n: weights.len(),
            body: Body::LinearWeighted(weights),
        })
    }

    pub fn threshold(rep: ThresholdRep) -> Result<ContinuousGame> {
        check_n(rep.weights.len())?;
        Ok(ContinuousGame {
            n: rep.weights.len(),
            body: Body::Threshold(rep),
        })
    }

    pub fn quota_weighted(weights: Weights, quota: QuotaFunction) -> Result<ContinuousGame> {
        check_n(weights.len())?;
        Ok(ContinuousGame {
            n: weights.len(),
            body: Body::QuotaWeighted { weights, quota },
        })
    }

    pub fn weighted_median(weights: Vec<BigRational>) -> Result<ContinuousGame> {
        check_n(weights.len())?;
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::input("median weights must be nonnegative"));
        }
        if weights.iter().all(|w| w.is_zero()) {
            return Err(Error::input("median weights need a positive sum"));
        }
        let scale = lcm_of_denominators(&weights);
        let scaled = weights
            .iter()
            .map(|w| {
                (w * BigRational::from_integer(scale.clone()))
                    .to_integer()
                    .to_u128()
                    .ok_or_else(|| Error::input("median weights too large"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ContinuousGame {
            n: weights.len(),
            body: Body::WeightedMedian { weights, scaled },
        })
    }

    pub fn weighted_median_int(weights: &[i64]) -> Result<ContinuousGame> {
        ContinuousGame::weighted_median(
            weights
                .iter()
                .map(|&w| BigRational::from_integer(BigInt::from(w)))
                .collect(),
        )
    }

    pub fn median(n: usize) -> Result<ContinuousGame> {
        check_n(n)?;
        Ok(ContinuousGame {
            n,
            body: Body::Median,
        })
    }

    pub fn meet(parts: Vec<ContinuousGame>) -> Result<ContinuousGame> {
        let n = common_n(&parts)?;
        Ok(ContinuousGame {
            n,
            body: Body::Meet(parts),
        })
    }

    pub fn join(parts: Vec<ContinuousGame>) -> Result<ContinuousGame> {
        let n = common_n(&parts)?;
        Ok(ContinuousGame {
            n,
            body: Body::Join(parts),
        })
    }

    pub fn threshold_intersection(parts: Vec<ThresholdRep>) -> Result<ContinuousGame> {
        let first = parts
            .first()
            .ok_or_else(|| Error::input("intersection needs at least one threshold game"))?;
        let n = first.weights.len();
        check_n(n)?;
        if parts.iter().any(|p| p.weights.len() != n) {
            return Err(Error::input("threshold games differ in voter count"));
        }
        Ok(ContinuousGame {
            n,
            body: Body::ThresholdIntersection(parts),
        })
    }

    pub fn embedding(game: BinaryGame) -> Result<ContinuousGame> {
        Ok(ContinuousGame {
            n: game.n(),
            body: Body::Embedding(game),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn family(&self) -> &'static str {
        match &self.body {
            Body::MonomialSum(_) => "monomial_sum",
            Body::LinearWeighted(_) => "linear_weighted",
            Body::Threshold(_) => "threshold",
            Body::QuotaWeighted { .. } => "quota_weighted",
            Body::WeightedMedian { .. } => "weighted_median",
            Body::Median => "median",
            Body::Meet(_) => "meet",
            Body::Join(_) => "join",
            Body::ThresholdIntersection(_) => "threshold_intersection",
            Body::Embedding(_) => "embedding",
        }
    }

    /// Value at `x`, checking shape and range.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_len(self.n, x.len(), "vote vector")?;
        if let Some(bad) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::input(format!("vote {bad} outside [0,1]")));
        }
        Ok(self.value(x))
    }

    /// Unchecked evaluation.
    pub fn value(&self, x: &[f64]) -> f64 {
        match &self.body {
            Body::MonomialSum(terms) => terms.iter().map(|t| t.eval(x)).sum::<f64>().min(1.0),
            Body::LinearWeighted(w) => w.dot(x).clamp(0.0, 1.0),
            Body::Threshold(rep) => rep.eval(x),
            Body::QuotaWeighted { weights, quota } => quota.eval(weights.dot(x)),
            Body::WeightedMedian { scaled, .. } => weighted_median(x, scaled),
            Body::Median => weighted_median(x, &vec![1; x.len()]),
            Body::Meet(parts) => parts.iter().map(|g| g.value(x)).fold(1.0, f64::min),
            Body::Join(parts) => parts.iter().map(|g| g.value(x)).fold(0.0, f64::max),
            Body::ThresholdIntersection(parts) => {
                parts.iter().map(|p| p.eval(x)).fold(1.0, f64::min)
            }
            Body::Embedding(g) => {
                let yes = x
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v >= 0.5)
                    .fold(Coalition::EMPTY, |s, (i, _)| s.with(i));
                if g.wins(yes) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Monomial terms of the game when it is a polynomial with exact coefficients.
    pub fn as_polynomial(&self) -> Option<Vec<Term>> {
        match &self.body {
            Body::MonomialSum(terms) => Some(terms.clone()),
            Body::LinearWeighted(w) => Some(
                w.exact
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| {
                        let mut e = vec![0; self.n];
                        e[i] = 1;
                        Term::new(c.clone(), e)
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// True when the game only takes the values 0 and 1.
    pub fn is_piecewise_constant(&self) -> bool {
        match &self.body {
            Body::Threshold(_) | Body::ThresholdIntersection(_) | Body::Embedding(_) => true,
            Body::Meet(p) | Body::Join(p) => p.iter().all(|g| g.is_piecewise_constant()),
            _ => false,
        }
    }

    /// True when any part is discontinuous, which rules out quadrature.
    pub fn has_jumps(&self) -> bool {
        match &self.body {
            Body::Threshold(_) | Body::ThresholdIntersection(_) | Body::Embedding(_) => true,
            Body::Meet(p) | Body::Join(p) => p.iter().any(|g| g.has_jumps()),
            _ => false,
        }
    }
}

fn common_n(parts: &[ContinuousGame]) -> Result<usize> {
    let first = parts
        .first()
        .ok_or_else(|| Error::input("meet/join needs at least one game"))?;
    if parts.iter().any(|g| g.n != first.n) {
        return Err(Error::input("meet/join of games with different voter counts"));
    }
    Ok(first.n)
}

/// Weighted median with the two-index midpoint rule on ties.
fn weighted_median(x: &[f64], weights: &[u128]) -> f64 {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let total: u128 = weights.iter().sum();
    // Compare 2·partial ≥ total to stay in integers.
    let mut cum = 0u128;
    let mut lo = n - 1;
    for (k, &i) in order.iter().enumerate() {
        cum += weights[i];
        if 2 * cum >= total {
            lo = k;
            break;
        }
    }
    let mut suffix = 0u128;
    let mut hi = 0;
    for k in (0..n).rev() {
        suffix += weights[order[k]];
        if 2 * suffix >= total {
            hi = k;
            break;
        }
    }
    if lo == hi {
        x[order[lo]]
    } else {
        0.5 * (x[order[lo]] + x[order[hi]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    pub(crate) fn ghat() -> ContinuousGame {
        ContinuousGame::monomials(6, &[(1, &[2, 0, 0]), (2, &[0, 2, 0]), (3, &[0, 0, 2])]).unwrap()
    }

    #[test]
    fn boundary_values() {
        let g = ghat();
        assert_eq!(g.eval(&[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(g.eval(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!(g.eval(&[1.5, 0.0, 0.0]).is_err());
        assert!(g.eval(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn medians() {
        let m = ContinuousGame::median(3).unwrap();
        assert_eq!(m.value(&[0.2, 0.7, 0.4]), 0.4);
        let m = ContinuousGame::median(4).unwrap();
        assert!((m.value(&[0.2, 0.7, 0.4, 0.1]) - 0.3).abs() < 1e-15);
        let wm = ContinuousGame::weighted_median_int(&[2, 1, 1, 1]).unwrap();
        assert_eq!(wm.value(&[0.9, 0.1, 0.5, 0.3]), 0.5);
    }

    #[test]
    fn rejects_invalid_families() {
        assert!(ContinuousGame::monomials(2, &[(1, &[1, 0])]).is_err());
        assert!(ContinuousGame::monomials(1, &[(1, &[0, 0])]).is_err());
        assert!(QuotaFunction::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.6), (1.0, 0.5)]).is_err());
        assert!(QuotaFunction::polynomial(vec![(ratio(1, 2), 1)]).is_err());
        let w = Weights::from_f64(&[0.5, 0.5]).unwrap();
        assert!(ThresholdRep::new(ratio(3, 2), w).is_err());
        assert!(Weights::from_f64(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn quota_functions() {
        let q = QuotaFunction::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.2), (1.0, 1.0)]).unwrap();
        assert!((q.eval(0.25) - 0.1).abs() < 1e-15);
        assert!((q.eval(0.75) - 0.6).abs() < 1e-15);
        assert_eq!(q.eval(1.0), 1.0);
        let p = QuotaFunction::polynomial(vec![(ratio(1, 2), 1), (ratio(1, 2), 2)]).unwrap();
        assert!((p.eval(0.5) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn embedding_thresholds_at_half() {
        let b = BinaryGame::weighted_int(2, &[1, 1, 1]).unwrap();
        let g = ContinuousGame::embedding(b).unwrap();
        assert_eq!(g.value(&[0.5, 0.5, 0.0]), 1.0);
        assert_eq!(g.value(&[0.49, 0.9, 0.0]), 0.0);
    }
}
