//! Continuous games on [0,1]^n: exact, quadrature and Monte Carlo routes to
//! the Shapley-Shubik and Banzhaf indices.

use powidx::continuous::{bzi_continuous, ssi_continuous, ssi_queue_terms, ContinuousGame};
use powidx::numerics::NumericsSpec;
use powidx::rational::format_rational;

fn main() -> powidx::Result<()> {
    // (x1^2 + 2 x2^2 + 3 x3^2) / 6
    let g = ContinuousGame::monomials(6, &[(1, &[2, 0, 0]), (2, &[0, 2, 0]), (3, &[0, 0, 2])])?;
    // x1 x2^2 x3^3
    let h = ContinuousGame::monomials(1, &[(1, &[1, 2, 3])])?;

    for (name, game) in [("g^", &g), ("g~", &h)] {
        let exact = ssi_continuous(game, &NumericsSpec::exact())?;
        let quad = ssi_continuous(game, &NumericsSpec::quadrature(12))?;
        let mc = ssi_continuous(game, &NumericsSpec::monte_carlo(200_000, 1))?;
        let parts: Vec<String> = exact.exact.as_ref().unwrap().iter().map(format_rational).collect();
        println!("{name} ssi exact      ({})", parts.join(", "));
        println!("{name} ssi quadrature {:?}", quad.values);
        println!("{name} ssi mc         {:?} +- {:?}", mc.values, mc.error_bound.unwrap());
        let bzi = bzi_continuous(game, &NumericsSpec::exact())?;
        let parts: Vec<String> = bzi.exact.as_ref().unwrap().iter().map(format_rational).collect();
        println!("{name} bzi exact      ({})", parts.join(", "));
    }

    println!("per-queue terms of g~:");
    for t in ssi_queue_terms(&h, &NumericsSpec::exact())? {
        let q: Vec<usize> = t.queue.iter().map(|v| v + 1).collect();
        let parts: Vec<String> = t.exact.unwrap().iter().map(format_rational).collect();
        println!("  {q:?}: ({})", parts.join(", "));
    }
    Ok(())
}
