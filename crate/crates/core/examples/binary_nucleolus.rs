//! Nucleolus of binary games via a sequence of linear programs.

use powidx::binary::{nucleolus_binary, sorted_excesses, BinaryGame};

fn main() -> powidx::Result<()> {
    let game = BinaryGame::weighted_int(3, &[2, 1, 1, 1])?;
    let nuc = nucleolus_binary(&game)?;
    println!("nucleolus of [3; 2,1,1,1]: {:?}", nuc.values);

    // The nucleolus minimizes the sorted excess vector lexicographically, so
    // any other imputation looks worse somewhere at the top.
    let other = [0.25, 0.25, 0.25, 0.25];
    let a = sorted_excesses(&game, &nuc.values);
    let b = sorted_excesses(&game, &other);
    println!("largest excesses at the nucleolus: {:?}", &a[..4]);
    println!("largest excesses at equal split:   {:?}", &b[..4]);

    let apex = BinaryGame::weighted_int(4, &[3, 1, 1, 1])?;
    println!("nucleolus of [4; 3,1,1,1]: {:?}", nucleolus_binary(&apex)?.values);
    Ok(())
}
