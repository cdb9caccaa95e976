//! (j,k) simple games: several approval levels in, several output levels out.

use powidx::binary::BinaryGame;
use powidx::jk::{bzi_jk, embed_binary, pivot, pivot_counts, ssi_jk, swings, three_level_example};
use powidx::profile::l1_distance;
use powidx::rational::format_rational;

fn fmt(v: &[num_rational::BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn main() -> powidx::Result<()> {
    // Three levels in, two out: output 1 iff voter 1 is at level 1 and
    // voters 2 and 3 are not both at level 3.
    let g = three_level_example();

    // Queue 2,1,3 (zero-based below) and profile ({1},{2},{3}).
    let who = pivot(&g, &[1, 0, 2], &[1, 2, 3], 1)?;
    println!("pivot for queue (2,1,3), profile (1,2,3): voter {}", who + 1);

    for (queue, counts) in pivot_counts(&g)? {
        let q: Vec<usize> = queue.iter().map(|v| v + 1).collect();
        println!("  queue {q:?} -> {counts:?}");
    }

    let ssi = ssi_jk(&g)?.exact.unwrap();
    let bzi = bzi_jk(&g)?;
    let eta: Vec<u64> = (0..3).map(|i| swings(&g, i)).collect::<Result<_, _>>()?;
    let norm = bzi.normalize()?.exact.unwrap();
    println!("ssi {}", fmt(&ssi));
    println!("eta {eta:?}, bzi {}, normalized {}", fmt(bzi.exact.as_ref().unwrap()), fmt(&norm));
    println!("l1 distance ssi vs normalized bzi: {}", format_rational(&l1_distance(&ssi, &norm)));

    // Binary games sit inside as (2,2) games.
    let b = BinaryGame::weighted_int(3, &[2, 1, 1, 1])?;
    println!("[3; 2,1,1,1] as a (2,2) game: ssi {}", fmt(&ssi_jk(&embed_binary(&b)?)?.exact.unwrap()));
    Ok(())
}
