//! Structural checks on continuous games: proper, strong, constant-sum,
//! completeness, null voters, and recovering weights from evaluations.

use powidx::continuous::{structural_checks, uniqueness_probe, ContinuousGame, ThresholdRep, Verdict, Weights};
use powidx::numerics::NumericsSpec;
use powidx::rational::ratio;

fn show(name: &str, v: &Verdict) {
    match v {
        Verdict::Holds => println!("  {name:<13}yes"),
        Verdict::NoCounterexample => println!("  {name:<13}no counterexample"),
        Verdict::Fails { detail, .. } => println!("  {name:<13}no ({detail})"),
    }
}

fn main() -> powidx::Result<()> {
    let weights = Weights::new(vec![ratio(1, 1), ratio(2, 1), ratio(3, 1)])?;
    let games = [
        ("threshold q=3/5", ContinuousGame::threshold(ThresholdRep::new(ratio(3, 5), weights.clone())?)?),
        ("linear", ContinuousGame::linear_weighted(weights)?),
        ("x1 x2^2 (x3 unused)", ContinuousGame::monomials(1, &[(1, &[1, 2, 0])])?),
    ];
    let spec = NumericsSpec::monte_carlo(50_000, 5);
    for (name, g) in &games {
        println!("{name}");
        let r = structural_checks(g, &spec)?;
        show("proper", &r.proper.verdict);
        show("strong", &r.strong.verdict);
        show("constant-sum", &r.constant_sum.verdict);
        show("complete", &r.complete.verdict);
        println!("  null voters  {:?}", r.null_voters.iter().map(|i| i + 1).collect::<Vec<_>>());
        match uniqueness_probe(g) {
            Ok(p) => println!("  probe        {:?} deviation {:.1e}", p.recovered, p.max_deviation),
            Err(e) => println!("  probe        {e}"),
        }
    }
    Ok(())
}
