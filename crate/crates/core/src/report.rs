//! Report structures and their text, JSON and CSV renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nucleolus::{ExcessCurve, NucleolusResult};
use crate::profile::PowerProfile;
use crate::rational::format_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub grid: Vec<f64>,
    pub volumes: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl From<&ExcessCurve> for CurveReport {
    fn from(c: &ExcessCurve) -> Self {
        CurveReport {
            grid: c.grid.clone(),
            volumes: c.volumes.clone(),
            stderr: c.stderr.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NucleolusReport {
    pub phase: String,
    pub max_excess: f64,
    pub box_bounds: Vec<(f64, f64)>,
    pub heuristic: bool,
    pub samples_per_curve: u64,
    pub rounds: usize,
    pub curve: Option<CurveReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub game: String,
    pub class: String,
    pub n: usize,
    pub index: String,
    pub method: String,
    pub values: Vec<f64>,
    /// Exact values as `"p/q"` strings.
    pub exact: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub error_bound: Option<f64>,
    pub std_errors: Option<Vec<f64>>,
    pub nucleolus: Option<NucleolusReport>,
}

impl IndexReport {
    pub fn from_profile(game: &str, class: &str, index: &str, p: &PowerProfile) -> IndexReport {
        IndexReport {
            game: game.to_string(),
            class: class.to_string(),
            n: p.len(),
            index: index.to_string(),
            method: p.method.as_str().to_string(),
            values: p.values.clone(),
            exact: p
                .exact
                .as_ref()
                .map(|v| v.iter().map(format_rational).collect()),
            seed: p.seed,
            error_bound: p.error_bound,
            std_errors: p.std_errors.clone(),
            nucleolus: None,
        }
    }

    pub fn from_nucleolus(game: &str, r: &NucleolusResult) -> IndexReport {
        IndexReport {
            game: game.to_string(),
            class: "continuous".into(),
            n: r.w_star.len(),
            index: "nucleolus".into(),
            method: "monte_carlo".into(),
            values: r.w_star.clone(),
            exact: None,
            seed: Some(r.seed),
            error_bound: None,
            std_errors: None,
            nucleolus: Some(NucleolusReport {
                phase: r.phase.as_str().into(),
                max_excess: r.max_excess,
                box_bounds: r.box_bounds.clone(),
                heuristic: r.heuristic,
                samples_per_curve: r.samples_per_curve,
                rounds: r.rounds.len(),
                curve: r.curve.as_ref().map(CurveReport::from),
            }),
        }
    }

    /// The profile as a tuple: exact fractions when known, else decimals.
    pub fn tuple(&self) -> String {
        let cells: Vec<String> = match &self.exact {
            Some(e) => e.clone(),
            None => self.values.iter().map(|v| format!("{v:.6}")).collect(),
        };
        format!("({})", cells.join(", "))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Text => self.text(),
            Format::Csv => self.csv(),
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.tuple());
        let _ = write!(s, "game {} ({}, {} voters), index {}, method {}", self.game, self.class, self.n, self.index, self.method);
        if let Some(seed) = self.seed {
            let _ = write!(s, ", seed {seed}");
        }
        s.push('\n');
        if let Some(b) = self.error_bound {
            let _ = writeln!(s, "error bound {b:.3e}");
        }
        if let Some(nuc) = &self.nucleolus {
            let _ = writeln!(s, "phase {}, max excess {:.3e}", nuc.phase, nuc.max_excess);
            let bounds: Vec<String> = nuc
                .box_bounds
                .iter()
                .map(|(lo, hi)| format!("[{lo:.6}, {hi:.6}]"))
                .collect();
            let _ = writeln!(s, "box {}", bounds.join(" x "));
            if nuc.heuristic {
                s.push_str("max excess from local search (heuristic)\n");
            }
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::new();
        if let Some(curve) = self.nucleolus.as_ref().and_then(|n| n.curve.as_ref()) {
            s.push_str("c,volume,stderr\n");
            for k in 0..curve.grid.len() {
                let _ = writeln!(s, "{},{},{}", curve.grid[k], curve.volumes[k], curve.stderr[k]);
            }
            return s;
        }
        s.push_str("voter,value,exact,std_error\n");
        for (i, v) in self.values.iter().enumerate() {
            let exact = self.exact.as_ref().map_or("", |e| e[i].as_str());
            let se = self
                .std_errors
                .as_ref()
                .map_or(String::new(), |e| e[i].to_string());
            let _ = writeln!(s, "{},{v},{exact},{se}", i + 1);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub property: String,
    /// "yes", "no" or "no counterexample".
    pub verdict: String,
    pub basis: String,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub game: String,
    pub class: String,
    pub n: usize,
    pub rows: Vec<CheckRow>,
    /// 1-based.
    pub null_voters: Vec<usize>,
}

impl CheckReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut s = String::from("property,verdict,basis,witness\n");
                for r in &self.rows {
                    let _ = writeln!(s, "{},{},{},\"{}\"", r.property, r.verdict, r.basis, r.witness.clone().unwrap_or_default());
                }
                s
            }
            Format::Text => {
                let mut s = format!("game {} ({}, {} voters)\n", self.game, self.class, self.n);
                for r in &self.rows {
                    let _ = write!(s, "{:<14} {:<18} {}", r.property, r.verdict, r.basis);
                    if let Some(w) = &r.witness {
                        let _ = write!(s, "  witness {w}");
                    }
                    s.push('\n');
                }
                let nulls: Vec<String> = self.null_voters.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(s, "{:<14} {{{}}}", "null voters", nulls.join(","));
                s
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A documented disagreement with a stated value; does not affect the exit code.
    Conflict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub group: String,
    pub expected: String,
    pub computed: String,
    pub tolerance: String,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub outcomes: Vec<FixtureOutcome>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut s = String::from("name,group,status,expected,computed,tolerance\n");
                for o in &self.outcomes {
                    let _ = writeln!(
                        s,
                        "{},{},{:?},\"{}\",\"{}\",{}",
                        o.name, o.group, o.status, o.expected, o.computed, o.tolerance
                    );
                }
                s
            }
            Format::Text => {
                let mut s = String::new();
                for o in &self.outcomes {
                    let tag = match o.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Conflict => "CONFLICT",
                    };
                    let _ = writeln!(
                        s,
                        "[{tag}] {}: expected {} | computed {} | tol {}",
                        o.name, o.expected, o.computed, o.tolerance
                    );
                }
                let pass = self.outcomes.iter().filter(|o| o.status == Status::Pass).count();
                let fail = self.outcomes.iter().filter(|o| o.status == Status::Fail).count();
                let conflict = self.outcomes.len() - pass - fail;
                let _ = writeln!(s, "{pass} passed, {fail} failed, {conflict} conflicts (seed {})", self.seed);
                s
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Parses a JSON report back, for round-trip checks.
pub fn parse_report<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(Error::from)
}
