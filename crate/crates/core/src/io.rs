//! Game and density description files (JSON).

use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::binary::{BinaryGame, WeightedRep};
use crate::coalition::Coalition;
use crate::continuous::{
    ContinuousGame, Density, DensityVector, QuotaFunction, Term, ThresholdRep, Weights,
};
use crate::error::Result;
use crate::jk::JkGame;
use crate::rational::{parse_rational, to_f64};

/// A rational written as `"p/q"`, a decimal string, or a JSON number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Num {
    pub fn rational(&self) -> Result<BigRational> {
        match self {
            Num::Int(v) => Ok(BigRational::from_integer((*v).into())),
            Num::Float(v) => parse_rational(&v.to_string()),
            Num::Text(s) => parse_rational(s),
        }
    }

    pub fn float(&self) -> Result<f64> {
        Ok(to_f64(&self.rational()?))
    }
}

fn rationals(values: &[Num]) -> Result<Vec<BigRational>> {
    values.iter().map(Num::rational).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BinarySpec {
    Weighted {
        quota: Num,
        weights: Vec<Num>,
    },
    Table {
        n: usize,
        /// Winning coalitions as 1-based voter lists.
        winning: Vec<Vec<usize>>,
    },
    Meet {
        parts: Vec<BinarySpec>,
    },
    Join {
        parts: Vec<BinarySpec>,
    },
}

impl BinarySpec {
    pub fn build(&self) -> Result<BinaryGame> {
        match self {
            BinarySpec::Weighted { quota, weights } => {
                BinaryGame::weighted(WeightedRep::new(quota.rational()?, rationals(weights)?)?)
            }
            BinarySpec::Table { n, winning } => {
                let coalitions = winning
                    .iter()
                    .map(|s| Coalition::from_voters(*n, s))
                    .collect::<Result<Vec<_>>>()?;
                BinaryGame::from_winning(*n, &coalitions)
            }
            BinarySpec::Meet { parts } => BinaryGame::meet(build_all(parts)?),
            BinarySpec::Join { parts } => BinaryGame::join(build_all(parts)?),
        }
    }
}

fn build_all(parts: &[BinarySpec]) -> Result<Vec<BinaryGame>> {
    parts.iter().map(BinarySpec::build).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JkEntry {
    pub profile: Vec<u8>,
    pub output: u8,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum JkRule {
    Table { entries: Vec<JkEntry> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JkSpec {
    pub n: usize,
    pub j: u8,
    pub k: u8,
    pub rule: JkRule,
}

impl JkSpec {
    pub fn build(&self) -> Result<JkGame> {
        let JkRule::Table { entries } = &self.rule;
        let entries: Vec<(Vec<u8>, u8)> =
            entries.iter().map(|e| (e.profile.clone(), e.output)).collect();
        JkGame::from_entries(self.n, self.j, self.k, &entries)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coef: Num,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSpec {
    pub coef: Num,
    pub exponent: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum QuotaSpec {
    /// `[[y, q(y)], …]` from `(0,0)` to `(1,1)`.
    Breakpoints(Vec<(Num, Num)>),
    Monomials(Vec<PowerSpec>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSpec {
    pub quota: Num,
    pub weights: Vec<Num>,
}

impl ThresholdSpec {
    fn build(&self) -> Result<ThresholdRep> {
        ThresholdRep::new(self.quota.rational()?, Weights::new(rationals(&self.weights)?)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ContinuousSpec {
    MonomialSum {
        terms: Vec<TermSpec>,
    },
    LinearWeighted {
        weights: Vec<Num>,
    },
    Threshold {
        quota: Num,
        weights: Vec<Num>,
    },
    QuotaWeighted {
        weights: Vec<Num>,
        quota_fn: QuotaSpec,
    },
    WeightedMedian {
        weights: Vec<Num>,
    },
    Median {
        n: usize,
    },
    Meet {
        parts: Vec<ContinuousSpec>,
    },
    Join {
        parts: Vec<ContinuousSpec>,
    },
    ThresholdIntersection {
        parts: Vec<ThresholdSpec>,
    },
    /// Threshold-type embedding of a binary game.
    Embedding {
        game: BinarySpec,
    },
}

impl ContinuousSpec {
    pub fn build(&self) -> Result<ContinuousGame> {
        match self {
            ContinuousSpec::MonomialSum { terms } => {
                let n = terms.first().map_or(0, |t| t.exponents.len());
                let terms = terms
                    .iter()
                    .map(|t| Ok(Term::new(t.coef.rational()?, t.exponents.clone())))
                    .collect::<Result<Vec<_>>>()?;
                ContinuousGame::monomial_sum(n, terms)
            }
            ContinuousSpec::LinearWeighted { weights } => {
                ContinuousGame::linear_weighted(Weights::new(rationals(weights)?)?)
            }
            ContinuousSpec::Threshold { quota, weights } => ContinuousGame::threshold(
                ThresholdSpec {
                    quota: quota.clone(),
                    weights: weights.clone(),
                }
                .build()?,
            ),
            ContinuousSpec::QuotaWeighted { weights, quota_fn } => {
                let quota = match quota_fn {
                    QuotaSpec::Breakpoints(points) => QuotaFunction::piecewise_linear(
                        points
                            .iter()
                            .map(|(y, q)| Ok((y.float()?, q.float()?)))
                            .collect::<Result<Vec<_>>>()?,
                    )?,
                    QuotaSpec::Monomials(terms) => QuotaFunction::polynomial(
                        terms
                            .iter()
                            .map(|t| Ok((t.coef.rational()?, t.exponent)))
                            .collect::<Result<Vec<_>>>()?,
                    )?,
                };
                ContinuousGame::quota_weighted(Weights::new(rationals(weights)?)?, quota)
            }
            ContinuousSpec::WeightedMedian { weights } => {
                ContinuousGame::weighted_median(rationals(weights)?)
            }
            ContinuousSpec::Median { n } => ContinuousGame::median(*n),
            ContinuousSpec::Meet { parts } => ContinuousGame::meet(
                parts.iter().map(|p| p.build()).collect::<Result<Vec<_>>>()?,
            ),
            ContinuousSpec::Join { parts } => ContinuousGame::join(
                parts.iter().map(|p| p.build()).collect::<Result<Vec<_>>>()?,
            ),
            ContinuousSpec::ThresholdIntersection { parts } => ContinuousGame::threshold_intersection(
                parts.iter().map(|p| p.build()).collect::<Result<Vec<_>>>()?,
            ),
            ContinuousSpec::Embedding { game } => ContinuousGame::embedding(game.build()?),
        }
    }
}

/// Top-level game file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GameFile {
    Binary(BinarySpec),
    Jk(JkSpec),
    Continuous(ContinuousSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Game {
    Binary(BinaryGame),
    Jk(JkGame),
    Continuous(ContinuousGame),
}

impl Game {
    pub fn class(&self) -> &'static str {
        match self {
            Game::Binary(_) => "binary",
            Game::Jk(_) => "jk",
            Game::Continuous(_) => "continuous",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Game::Binary(g) => g.n(),
            Game::Jk(g) => g.n(),
            Game::Continuous(g) => g.n(),
        }
    }
}

impl GameFile {
    pub fn build(&self) -> Result<Game> {
        Ok(match self {
            GameFile::Binary(s) => Game::Binary(s.build()?),
            GameFile::Jk(s) => Game::Jk(s.build()?),
            GameFile::Continuous(s) => Game::Continuous(s.build()?),
        })
    }
}

pub fn parse_game(text: &str) -> Result<Game> {
    let file: GameFile = serde_json::from_str(text)?;
    file.build()
}

pub fn load_game(path: &Path) -> Result<Game> {
    parse_game(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub interval: (Num, Num),
    /// Ascending powers.
    pub coeffs: Vec<Num>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    pub support: (Num, Num),
    pub pieces: Vec<PieceSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub density: Vec<DensitySpec>,
}

impl DensityFile {
    pub fn build(&self) -> Result<DensityVector> {
        let densities = self
            .density
            .iter()
            .map(|d| {
                let pieces = d
                    .pieces
                    .iter()
                    .map(|p| {
                        Ok((
                            p.interval.0.rational()?,
                            p.interval.1.rational()?,
                            rationals(&p.coeffs)?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Density::new((d.support.0.rational()?, d.support.1.rational()?), pieces)
            })
            .collect::<Result<Vec<_>>>()?;
        DensityVector::new(densities)
    }
}

pub fn parse_density(text: &str) -> Result<DensityVector> {
    let file: DensityFile = serde_json::from_str(text)?;
    file.build()
}

pub fn load_density(path: &Path) -> Result<DensityVector> {
    parse_density(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn parses_each_class() {
        let g = parse_game(r#"{"class":"binary","kind":"weighted","quota":"3","weights":["2","1","1","1"]}"#).unwrap();
        assert_eq!(g.n(), 4);
        let g = parse_game(r#"{"class":"binary","kind":"table","n":3,"winning":[[1,2],[1,3],[2,3],[1,2,3]]}"#).unwrap();
        assert_eq!(g.class(), "binary");
        let g = parse_game(
            r#"{"class":"continuous","kind":"monomial_sum","terms":[{"coef":"1/6","exponents":[2,0,0]},{"coef":"2/6","exponents":[0,2,0]},{"coef":"3/6","exponents":[0,0,2]}]}"#,
        )
        .unwrap();
        assert_eq!(g.n(), 3);
        let g = parse_game(
            r#"{"class":"continuous","kind":"quota_weighted","weights":[1,1],"quota_fn":{"breakpoints":[[0,0],["1/2","1/4"],[1,1]]}}"#,
        )
        .unwrap();
        assert_eq!(g.class(), "continuous");
    }

    #[test]
    fn reports_positions_and_semantics() {
        let err = parse_game("{\n  \"class\": \"binary\",\n  \"kind\": \"weighted\",\n  \"quota\": \n}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err:?}");
        let err = parse_game(r#"{"class":"binary","kind":"weighted","quota":"0","weights":[1]}"#).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        let err = parse_density(r#"{"density":[{"support":[0,1],"pieces":[{"interval":[0,1],"coeffs":["2"]}]}]}"#).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }
}
