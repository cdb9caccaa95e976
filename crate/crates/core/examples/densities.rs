//! Indices under non-uniform voter densities, and the three region integrals
//! of the median example evaluated three ways.

use powidx::continuous::{
    bzi_density, median_example_densities, median_region_exact, median_region_mc,
    median_region_quadrature, ssi_density, ContinuousGame,
};
use powidx::io::parse_density;
use powidx::numerics::NumericsSpec;
use powidx::rational::format_rational;

fn main() -> powidx::Result<()> {
    let f = median_example_densities();
    let exact = median_region_exact(&f)?;
    let parts: Vec<String> = exact.iter().map(format_rational).collect();
    println!("region integrals exact      ({})", parts.join(", "));
    println!("region integrals quadrature {:?}", median_region_quadrature(&f, 24));
    println!("region integrals mc         {:?}", median_region_mc(&f, 1_000_000, 3).0);

    let median = ContinuousGame::median(3)?;
    let spec = NumericsSpec::monte_carlo(400_000, 3);
    println!("ssi under f {:?}", ssi_density(&median, &f, &spec)?.values);
    println!("bzi under f {:?}", bzi_density(&median, &f, &spec)?.values);

    // Densities can also come from JSON.
    let text = r#"{"density": [
        {"support": ["0", "1"], "pieces": [{"interval": ["0", "1"], "coeffs": ["0", "2"]}]},
        {"support": ["0", "1"], "pieces": [{"interval": ["0", "1"], "coeffs": ["2", "-2"]}]},
        {"support": ["0", "1"], "pieces": [{"interval": ["0", "1"], "coeffs": ["1"]}]}
    ]}"#;
    match parse_density(text) {
        Ok(g) => println!("ssi under a file density {:?}", ssi_density(&median, &g, &spec)?.values),
        Err(e) => println!("density file rejected: {e}"),
    }
    Ok(())
}
