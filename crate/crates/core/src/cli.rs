//! Command-line front end. The `powidx` binary is a thin wrapper around [`run`].

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::binary::{bzi_binary, is_complete, null_voters, nucleolus_binary, properties, ssi_binary};
use crate::continuous::{
    bzi_continuous, bzi_density, ssi_continuous, ssi_density, structural_checks, Body, Check,
    ContinuousGame, DensityVector, Verdict,
};
use crate::error::{Error, Result};
use crate::io::{load_density, load_game, Game};
use crate::jk::{bzi_jk, is_jk_simple, ssi_jk, ssi_jk_sampled, swings, JkGame};
use crate::nucleolus::nucleolus_search;
use crate::numerics::{Mode, NumericsSpec, DEFAULT_ORDER, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::profile::PowerProfile;
use crate::report::{CheckReport, CheckRow, Format, IndexReport};
use crate::reproduce::run_suite;

#[derive(Parser, Debug)]
#[command(name = "powidx", version, about = "Power indices for binary, (j,k) and continuous simple games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a power index (or the nucleolus) for a game file or a directory of them.
    Index(IndexArgs),
    /// Report proper, strong, constant-sum, complete and null voters.
    Check(CheckArgs),
    /// Recompute every worked example with a stated value.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IndexKind {
    Ssi,
    Bzi,
    #[value(name = "bzi_normalized", alias = "bzi-normalized")]
    BziNormalized,
    Nucleolus,
}

impl IndexKind {
    fn as_str(self) -> &'static str {
        match self {
            IndexKind::Ssi => "ssi",
            IndexKind::Bzi => "bzi",
            IndexKind::BziNormalized => "bzi_normalized",
            IndexKind::Nucleolus => "nucleolus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Quadrature,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputArg {
    Text,
    Json,
    Csv,
}

impl From<OutputArg> for Format {
    fn from(o: OutputArg) -> Format {
        match o {
            OutputArg::Text => Format::Text,
            OutputArg::Json => Format::Json,
            OutputArg::Csv => Format::Csv,
        }
    }
}

#[derive(Args, Debug)]
pub struct IndexArgs {
    /// Game file, or a directory whose *.json files are processed in name order.
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long, value_enum, default_value = "ssi")]
    pub index: IndexKind,
    /// Defaults to exact where a closed form exists, Monte Carlo otherwise.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Gauss-Legendre points per axis.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Voter densities (continuous games only).
    #[arg(long)]
    pub density: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub output: OutputArg,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// Random points used to look for counterexamples in continuous games.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub output: OutputArg,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Group (binary, jk, continuous, median, density, nucleolus) or name fragment.
    #[arg(long)]
    pub only: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub output: OutputArg,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{text}");
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        2
                    } else {
                        0
                    }
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let result = match cli.command {
        Command::Index(a) => cmd_index(&a),
        Command::Check(a) => cmd_check(&a),
        Command::Reproduce(a) => cmd_reproduce(&a),
    };
    match result {
        Ok((text, code)) => {
            let _ = write!(out, "{text}");
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn game_files(path: &Path) -> Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::input(format!("no .json game files in {}", path.display())));
    }
    Ok(files)
}

fn game_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn join_reports(texts: Vec<String>, format: Format, batch: bool) -> String {
    if !batch {
        return texts.concat();
    }
    match format {
        // A batch of JSON reports is emitted as one array.
        Format::Json => format!("[\n{}]\n", texts.iter().map(|t| t.trim_end()).collect::<Vec<_>>().join(",\n") + "\n"),
        _ => texts.join("\n"),
    }
}

pub fn cmd_index(a: &IndexArgs) -> Result<(String, i32)> {
    let files = game_files(&a.game)?;
    let density = a.density.as_deref().map(load_density).transpose()?;
    let format: Format = a.output.into();
    let mut texts = Vec::new();
    for path in &files {
        let game = load_game(path)?;
        let report = index_report(&game_name(path), &game, a, density.as_ref())?;
        texts.push(report.render(format));
    }
    Ok((join_reports(texts, format, files.len() > 1), 0))
}

fn spec_for(a: &IndexArgs, mode: Mode) -> NumericsSpec {
    NumericsSpec {
        mode,
        quadrature_order: a.order,
        mc_samples: a.samples,
        seed: a.seed,
        target_abs_err: None,
        workers: a.workers,
    }
}

fn mode_of(m: MethodArg) -> Mode {
    match m {
        MethodArg::Exact => Mode::Exact,
        MethodArg::Quadrature => Mode::Quadrature,
        MethodArg::Mc => Mode::MonteCarlo,
    }
}

fn has_closed_form(g: &ContinuousGame) -> bool {
    g.as_polynomial().is_some() || matches!(g.body(), Body::Embedding(_))
}

pub fn index_report(
    name: &str,
    game: &Game,
    a: &IndexArgs,
    density: Option<&DensityVector>,
) -> Result<IndexReport> {
    if density.is_some() && !matches!(game, Game::Continuous(_)) {
        return Err(Error::input("--density applies to continuous games only"));
    }
    let index = a.index;
    let profile = match game {
        Game::Binary(g) => {
            if a.method.is_some_and(|m| m != MethodArg::Exact) {
                return Err(Error::Mode("binary games are evaluated exactly".into()));
            }
            match index {
                IndexKind::Ssi => ssi_binary(g),
                IndexKind::Bzi => bzi_binary(g),
                IndexKind::BziNormalized => bzi_binary(g).normalize()?,
                IndexKind::Nucleolus => nucleolus_binary(g)?,
            }
        }
        Game::Jk(g) => jk_profile(g, index, a)?,
        Game::Continuous(g) => {
            let mode = match a.method {
                Some(m) => mode_of(m),
                None if density.is_none() && has_closed_form(g) => Mode::Exact,
                None => Mode::MonteCarlo,
            };
            let spec = spec_for(a, mode);
            if index == IndexKind::Nucleolus {
                if density.is_some() {
                    return Err(Error::Mode("the nucleolus search assumes uniform votes".into()));
                }
                if mode != Mode::MonteCarlo {
                    return Err(Error::Mode("the nucleolus search compares Monte Carlo excess curves; use --method mc".into()));
                }
                let r = nucleolus_search(g, &spec)?;
                return Ok(IndexReport::from_nucleolus(name, &r));
            }
            continuous_profile(g, index, &spec, density)?
        }
    };
    Ok(IndexReport::from_profile(name, game.class(), index.as_str(), &profile))
}

fn jk_profile(g: &JkGame, index: IndexKind, a: &IndexArgs) -> Result<PowerProfile> {
    let method = a.method.unwrap_or(MethodArg::Exact);
    match (index, method) {
        (IndexKind::Nucleolus, _) => Err(Error::Mode("no nucleolus is defined for (j,k) games".into())),
        (IndexKind::Ssi, MethodArg::Exact) => ssi_jk(g),
        (IndexKind::Ssi, MethodArg::Mc) => ssi_jk_sampled(g, a.samples, a.seed),
        (IndexKind::Bzi, MethodArg::Exact) => bzi_jk(g),
        (IndexKind::BziNormalized, MethodArg::Exact) => bzi_jk(g)?.normalize(),
        _ => Err(Error::Mode(format!(
            "{} for (j,k) games supports {}",
            index.as_str(),
            if index == IndexKind::Ssi { "exact or mc" } else { "exact only" }
        ))),
    }
}

fn continuous_profile(
    g: &ContinuousGame,
    index: IndexKind,
    spec: &NumericsSpec,
    density: Option<&DensityVector>,
) -> Result<PowerProfile> {
    let bzi = || match density {
        Some(f) => bzi_density(g, f, spec),
        None => bzi_continuous(g, spec),
    };
    match index {
        IndexKind::Ssi => match density {
            Some(f) => ssi_density(g, f, spec),
            None => ssi_continuous(g, spec),
        },
        IndexKind::Bzi => bzi(),
        IndexKind::BziNormalized => bzi()?.normalize(),
        IndexKind::Nucleolus => unreachable!("handled by the caller"),
    }
}

pub fn cmd_check(a: &CheckArgs) -> Result<(String, i32)> {
    let game = load_game(&a.game)?;
    let report = check_report(&game_name(&a.game), &game, a)?;
    Ok((report.render(a.output.into()), 0))
}

fn row(property: &str, holds: bool, basis: &str, witness: Option<String>) -> CheckRow {
    CheckRow {
        property: property.into(),
        verdict: if holds { "yes" } else { "no" }.into(),
        basis: basis.into(),
        witness,
    }
}

fn continuous_row(property: &str, c: &Check) -> CheckRow {
    let basis = match c.basis {
        crate::continuous::Basis::Analytic => "analytic",
        crate::continuous::Basis::Sampled => "sampled",
    };
    match &c.verdict {
        Verdict::Holds => row(property, true, basis, None),
        Verdict::NoCounterexample => CheckRow {
            property: property.into(),
            verdict: "no counterexample".into(),
            basis: basis.into(),
            witness: None,
        },
        Verdict::Fails { witness, detail } => {
            let points: Vec<String> = witness
                .iter()
                .map(|x| {
                    let cells: Vec<String> = x.iter().map(|v| format!("{v:.4}")).collect();
                    format!("({})", cells.join(", "))
                })
                .collect();
            row(property, false, basis, Some(format!("{} {}", points.join(" "), detail)))
        }
    }
}

pub fn check_report(name: &str, game: &Game, a: &CheckArgs) -> Result<CheckReport> {
    let n = game.n();
    let (rows, nulls) = match game {
        Game::Binary(g) => {
            let p = properties(g)?;
            let proper_w = p
                .proper_witness
                .map(|s| format!("{s} and {} both win", s.complement(n)));
            let strong_w = p
                .strong_witness
                .map(|s| format!("{s} and {} both lose", s.complement(n)));
            let cs_w = proper_w.clone().or(strong_w.clone());
            let rows = vec![
                row("proper", p.proper, "exhaustive", proper_w),
                row("strong", p.strong, "exhaustive", strong_w),
                row("constant-sum", p.constant_sum, "exhaustive", cs_w),
                row("complete", is_complete(g)?, "exhaustive", None),
            ];
            (rows, null_voters(g)?)
        }
        Game::Jk(g) => {
            let simple = is_jk_simple(g);
            let nulls = (0..n)
                .map(|i| swings(g, i).map(|s| (i, s)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|&(_, s)| s == 0)
                .map(|(i, _)| i)
                .collect();
            (vec![row("(j,k) simple", simple, "exhaustive", None)], nulls)
        }
        Game::Continuous(g) => {
            let r = structural_checks(g, &NumericsSpec::monte_carlo(a.samples, a.seed))?;
            let rows = vec![
                continuous_row("proper", &r.proper),
                continuous_row("strong", &r.strong),
                continuous_row("constant-sum", &r.constant_sum),
                continuous_row("complete", &r.complete),
            ];
            (rows, r.null_voters)
        }
    };
    Ok(CheckReport {
        game: name.to_string(),
        class: game.class().to_string(),
        n,
        rows,
        null_voters: nulls.iter().map(|v| v + 1).collect(),
    })
}

pub fn cmd_reproduce(a: &ReproduceArgs) -> Result<(String, i32)> {
    let report = run_suite(a.only.as_deref(), a.seed)?;
    let code = if report.all_pass() { 0 } else { 1 };
    Ok((report.render(a.output.into()), code))
}
