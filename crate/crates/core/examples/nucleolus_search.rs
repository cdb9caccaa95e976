//! Nucleolus of continuous games: maximum excess, excess curves, and the
//! grid search that narrows down the weight vector.

use powidx::continuous::ContinuousGame;
use powidx::nucleolus::{compare_curves, excess_curve, max_excess, nucleolus_search};
use powidx::numerics::NumericsSpec;

fn main() -> powidx::Result<()> {
    let g = ContinuousGame::monomials(6, &[(1, &[2, 0, 0]), (2, &[0, 2, 0]), (3, &[0, 0, 2])])?;
    let w = [1.0 / 6.0, 2.0 / 6.0, 0.5];
    let m = max_excess(&g, &w);
    println!("max excess at (1,2,3)/6: {} at {:?}", m.value, m.argmax);
    println!("max excess at (1/3,1/3,1/3): {}", max_excess(&g, &[1.0 / 3.0; 3]).value);

    // Curves break ties when the max excess does not.
    let grid: Vec<f64> = (0..20).map(|k| -0.01 * k as f64).collect();
    let spec = NumericsSpec::monte_carlo(200_000, 11);
    let a = excess_curve(&g, &w, &grid, &spec)?;
    let b = excess_curve(&g, &[0.2, 0.3, 0.5], &grid, &spec)?;
    println!("curve comparison: {}", compare_curves(&a, &b)?.as_str());

    let r = nucleolus_search(&g, &NumericsSpec::monte_carlo(100_000, 11))?;
    println!("g^: w* {:?} phase {}", r.w_star, r.phase.as_str());

    let h = ContinuousGame::monomials(1, &[(1, &[1, 2])])?;
    let r = nucleolus_search(&h, &NumericsSpec::monte_carlo(1_000_000, 11))?;
    println!("x1 x2^2: w* {:?} phase {} box {:?}", r.w_star, r.phase.as_str(), r.box_bounds);
    for (k, round) in r.rounds.iter().enumerate() {
        println!("  round {k}: {} candidates, {} survive", round.candidates, round.survivors);
    }
    Ok(())
}
