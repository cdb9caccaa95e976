//! Runs the built-in fixture suite, optionally filtered by group or name.
//!
//! `cargo run --release --example reproduce -- jk`

use powidx::report::Format;
use powidx::reproduce::run_suite;

fn main() -> powidx::Result<()> {
    let only = std::env::args().nth(1);
    let report = run_suite(only.as_deref(), 20_240_601)?;
    print!("{}", report.render(Format::Text));
    Ok(())
}
