//! Shapley-Shubik and Banzhaf indices of weighted binary games, plus the
//! structural properties that come with the quota.
//!
//! Run with `cargo run --example binary_indices`.

use powidx::binary::{bzi_binary, null_voters, properties, quota_interval, ssi_binary, swing_counts, BinaryGame, WeightedRep};
use powidx::rational::format_rational;

fn show(label: &str, v: &[num_rational::BigRational]) {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    println!("{label:<22}({})", parts.join(", "));
}

fn main() -> powidx::Result<()> {
    for (quota, weights) in [(3, vec![2, 1, 1, 1]), (2, vec![1, 1, 1]), (2, vec![1, 1, 0]), (4, vec![3, 2, 1, 1, 1])] {
        let rep = WeightedRep::from_integers(quota, &weights)?;
        let game = BinaryGame::weighted(rep.clone())?;
        println!("[{quota}; {weights:?}]");

        let ssi = ssi_binary(&game);
        let bzi = bzi_binary(&game);
        show("  shapley-shubik", ssi.exact.as_ref().unwrap());
        show("  banzhaf", bzi.exact.as_ref().unwrap());
        show("  banzhaf normalized", bzi.normalize()?.exact.as_ref().unwrap());

        // swings by coalition size, voter 1
        println!("  swings of voter 1     {:?}", swing_counts(&game)[0]);

        let (lo, hi) = quota_interval(&rep)?;
        let p = properties(&game)?;
        println!(
            "  quota interval        ({}, {}]  proper {} strong {} constant-sum {}",
            format_rational(&lo),
            format_rational(&hi),
            p.proper,
            p.strong,
            p.constant_sum
        );
        let nulls: Vec<usize> = null_voters(&game)?.iter().map(|i| i + 1).collect();
        if !nulls.is_empty() {
            println!("  null voters           {nulls:?}");
        }
        println!();
    }
    Ok(())
}
