//! Weighted median games: the output is the weighted median of the inputs.
//! Their Shapley-Shubik index equals that of the binary game with the same
//! weights and quota at half the total weight.

use powidx::binary::{ssi_binary, BinaryGame};
use powidx::continuous::{median_ssi_shortcut, ssi_continuous, ssi_queue_mc, ContinuousGame};
use powidx::numerics::NumericsSpec;
use powidx::rational::{format_rational, ratio};

fn main() -> powidx::Result<()> {
    let weights = [5, 3, 2, 1];
    let g = ContinuousGame::weighted_median_int(&weights)?;
    println!("median of (0.9, 0.1, 0.4, 0.7) with weights {weights:?}: {}", g.value(&[0.9, 0.1, 0.4, 0.7]));

    let shortcut = median_ssi_shortcut(&weights.map(|w| ratio(w, 1)))?;
    let parts: Vec<String> = shortcut.exact.as_ref().unwrap().iter().map(format_rational).collect();
    println!("shortcut      ({})", parts.join(", "));
    println!("binary [6; 5,3,2,1] {:?}", ssi_binary(&BinaryGame::weighted_int(6, &weights)?).values);

    let mc = ssi_continuous(&g, &NumericsSpec::monte_carlo(1_000_000, 7))?;
    println!("monte carlo   {:?}", mc.values);
    println!("std errors    {:?}", mc.std_errors.unwrap());

    // One queue on its own sample budget.
    let (vals, se) = ssi_queue_mc(&g, &[1, 0, 2, 3], 200_000, 7, None)?;
    println!("queue (2,1,3,4): {vals:?} +- {se:?}");
    Ok(())
}
