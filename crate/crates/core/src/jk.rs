//! (j,k) simple games: `j` ordered input levels per voter, `k` output levels.
//! Level 1 is the highest approval on both sides.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;

use crate::binary::BinaryGame;
use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::numerics::rng::block_rng;
use crate::profile::{Method, PowerProfile};

pub const MAX_PROFILES: usize = 1 << 24;
pub const MAX_PIVOT_WORK: u128 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JkGame {
    n: usize,
    j: u8,
    k: u8,
    /// Output level per profile, indexed by [`JkGame::index`].
    table: Vec<u8>,
}

impl JkGame {
    /// Tabulates `rule` over all `j^n` profiles.
    pub fn from_fn(n: usize, j: u8, k: u8, rule: impl Fn(&[u8]) -> u8) -> Result<JkGame> {
        check_shape(n, j, k)?;
        let size = (j as usize).pow(n as u32);
        let mut table = Vec::with_capacity(size);
        let mut profile = vec![1u8; n];
        for _ in 0..size {
            let out = rule(&profile);
            if out == 0 || out > k {
                return Err(Error::input(format!(
                    "output {out} outside 1..={k} for profile {profile:?}"
                )));
            }
            table.push(out);
            advance(&mut profile, j);
        }
        Ok(JkGame { n, j, k, table })
    }

    /// Builds a game from `(profile, output)` pairs covering every profile once.
    pub fn from_entries(n: usize, j: u8, k: u8, entries: &[(Vec<u8>, u8)]) -> Result<JkGame> {
        check_shape(n, j, k)?;
        let size = (j as usize).pow(n as u32);
        let mut table = vec![0u8; size];
        for (profile, out) in entries {
            check_profile(profile, n, j)?;
            if *out == 0 || *out > k {
                return Err(Error::input(format!("output {out} outside 1..={k}")));
            }
            let idx = index_of(profile, j);
            if table[idx] != 0 {
                return Err(Error::input(format!("profile {profile:?} listed twice")));
            }
            table[idx] = *out;
        }
        if let Some(missing) = table.iter().position(|&v| v == 0) {
            return Err(Error::input(format!(
                "profile {:?} missing from the table",
                profile_of(missing, n, j)
            )));
        }
        Ok(JkGame { n, j, k, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> u8 {
        self.j
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn num_profiles(&self) -> usize {
        self.table.len()
    }

    pub fn eval(&self, profile: &[u8]) -> Result<u8> {
        check_profile(profile, self.n, self.j)?;
        Ok(self.table[index_of(profile, self.j)])
    }

    fn at(&self, idx: usize) -> u8 {
        self.table[idx]
    }

    /// All `(profile, output)` pairs in table order.
    pub fn entries(&self) -> Vec<(Vec<u8>, u8)> {
        (0..self.table.len())
            .map(|idx| (profile_of(idx, self.n, self.j), self.table[idx]))
            .collect()
    }

    fn stride(&self, voter: usize) -> usize {
        (self.j as usize).pow(voter as u32)
    }
}

fn check_shape(n: usize, j: u8, k: u8) -> Result<()> {
    if n == 0 {
        return Err(Error::input("a game needs at least one voter"));
    }
    if j < 2 || k < 2 {
        return Err(Error::input("need at least two input and two output levels"));
    }
    let size = (j as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > MAX_PROFILES as u128 {
        return Err(Error::capacity(
            format!("{j}^{n} input profiles"),
            MAX_PROFILES,
        ));
    }
    Ok(())
}

fn check_profile(profile: &[u8], n: usize, j: u8) -> Result<()> {
    if profile.len() != n {
        return Err(Error::input(format!(
            "profile has {} entries, expected {n}",
            profile.len()
        )));
    }
    if let Some(&bad) = profile.iter().find(|&&l| l == 0 || l > j) {
        return Err(Error::input(format!("level {bad} outside 1..={j}")));
    }
    Ok(())
}

/// Mixed-radix index with voter 1 as the least significant digit.
fn index_of(profile: &[u8], j: u8) -> usize {
    profile
        .iter()
        .rev()
        .fold(0usize, |acc, &l| acc * j as usize + (l - 1) as usize)
}

fn profile_of(mut idx: usize, n: usize, j: u8) -> Vec<u8> {
    let mut p = Vec::with_capacity(n);
    for _ in 0..n {
        p.push((idx % j as usize) as u8 + 1);
        idx /= j as usize;
    }
    p
}

fn advance(profile: &mut [u8], j: u8) {
    for l in profile.iter_mut() {
        if *l < j {
            *l += 1;
            return;
        }
        *l = 1;
    }
}

/// `s ⊆_j t`: every voter approves at least as highly in `t` as in `s`.
pub fn leq_j(s: &[u8], t: &[u8]) -> Result<bool> {
    if s.len() != t.len() {
        return Err(Error::input("profiles of different length"));
    }
    Ok(s.iter().zip(t).all(|(a, b)| b <= a))
}

/// Boundary axioms plus monotonicity over covering pairs (one voter, one level).
pub fn is_jk_simple(game: &JkGame) -> bool {
    let top = vec![1u8; game.n];
    let bottom = vec![game.j; game.n];
    if game.table[index_of(&top, game.j)] != 1 || game.table[index_of(&bottom, game.j)] != game.k {
        return false;
    }
    (0..game.table.len()).all(|idx| {
        let p = profile_of(idx, game.n, game.j);
        (0..game.n).all(|i| p[i] == 1 || game.at(idx - game.stride(i)) <= game.at(idx))
    })
}

fn require_jk_simple(game: &JkGame) -> Result<()> {
    if is_jk_simple(game) {
        Ok(())
    } else {
        Err(Error::domain("not a (j,k) simple game"))
    }
}

/// Zero-based queue validation.
fn check_queue(queue: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if queue.len() != n {
        return Err(Error::input("queue length differs from the voter count"));
    }
    for &v in queue {
        if v >= n || seen[v] {
            return Err(Error::input(format!("queue {queue:?} is not a permutation")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// After each voter in the queue reveals their level, the best and worst
/// reachable outputs (all later voters at level 1, resp. level j).
fn resolution_path(game: &JkGame, queue: &[usize], profile_idx: usize) -> Vec<(u8, u8)> {
    let j = game.j as usize;
    let top_digits: usize = 0;
    let mut best_idx = top_digits;
    let mut worst_idx: usize = (0..game.n).map(|i| (j - 1) * game.stride(i)).sum();
    let mut path = Vec::with_capacity(game.n);
    for &v in queue {
        let digit = (profile_idx / game.stride(v)) % j;
        best_idx += digit * game.stride(v);
        worst_idx -= (j - 1 - digit) * game.stride(v);
        path.push((game.at(best_idx), game.at(worst_idx)));
    }
    path
}

fn pivot_position(path: &[(u8, u8)], h: u8) -> usize {
    path.iter()
        .position(|&(best, worst)| worst <= h || best > h)
        .expect("the last reveal fixes the output")
}

/// The voter (zero-based) whose reveal first settles whether the output is at
/// level `h` or better, or at level `h + 1` or worse.
pub fn pivot(game: &JkGame, queue: &[usize], profile: &[u8], h: u8) -> Result<usize> {
    check_queue(queue, game.n)?;
    check_profile(profile, game.n, game.j)?;
    if h == 0 || h >= game.k {
        return Err(Error::input(format!("level {h} outside 1..={}", game.k - 1)));
    }
    require_jk_simple(game)?;
    let path = resolution_path(game, queue, index_of(profile, game.j));
    Ok(queue[pivot_position(&path, h)])
}

/// All queues of `0..n` in lexicographic order.
pub fn queues(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // Next lexicographic permutation.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let jdx = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, jdx);
        current[i + 1..].reverse();
    }
}

fn pivot_work(game: &JkGame) -> u128 {
    let n_fact: u128 = (1..=game.n as u128).product();
    n_fact * game.table.len() as u128 * (game.k as u128 - 1)
}

/// Pivot counts per queue, summed over all profiles and output boundaries.
pub fn pivot_counts(game: &JkGame) -> Result<Vec<(Vec<usize>, Vec<u64>)>> {
    require_jk_simple(game)?;
    if pivot_work(game) > MAX_PIVOT_WORK {
        return Err(Error::capacity(
            "n!·j^n·(k−1) pivot evaluations",
            MAX_PIVOT_WORK,
        ));
    }
    Ok(queues(game.n)
        .into_par_iter()
        .map(|q| {
            let mut counts = vec![0u64; game.n];
            for idx in 0..game.table.len() {
                let path = resolution_path(game, &q, idx);
                for h in 1..game.k {
                    counts[q[pivot_position(&path, h)]] += 1;
                }
            }
            (q, counts)
        })
        .collect())
}

/// Shapley-Shubik index by exhaustive pivot counting.
pub fn ssi_jk(game: &JkGame) -> Result<PowerProfile> {
    let per_queue = pivot_counts(game)?;
    let mut totals = vec![0u64; game.n];
    for (_, c) in &per_queue {
        totals.iter_mut().zip(c).for_each(|(t, v)| *t += v);
    }
    let n_fact: u64 = (1..=game.n as u64).product();
    let den = BigInt::from(n_fact) * BigInt::from(game.table.len());
    Ok(PowerProfile::from_exact(
        totals
            .into_iter()
            .map(|c| BigRational::new(BigInt::from(c), den.clone()))
            .collect(),
    ))
}

/// Sampled Shapley-Shubik index for games above the exhaustive cap: uniform
/// (queue, profile) pairs drawn from seeded per-block streams.
pub fn ssi_jk_sampled(game: &JkGame, samples: u64, seed: u64) -> Result<PowerProfile> {
    require_jk_simple(game)?;
    if samples == 0 {
        return Err(Error::input("need at least one sample"));
    }
    const BLOCK: u64 = 1 << 14;
    let n = game.n;
    let blocks = samples.div_ceil(BLOCK);
    let partial: Vec<(Vec<f64>, Vec<f64>)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let mut sum = vec![0.0; n];
            let mut sq = vec![0.0; n];
            let mut q: Vec<usize> = (0..n).collect();
            let mut hits = vec![0.0; n];
            for _ in b * BLOCK..((b + 1) * BLOCK).min(samples) {
                for i in (1..n).rev() {
                    q.swap(i, rng.random_range(0..=i));
                }
                let idx = rng.random_range(0..game.table.len());
                let path = resolution_path(game, &q, idx);
                hits.iter_mut().for_each(|h| *h = 0.0);
                for h in 1..game.k {
                    hits[q[pivot_position(&path, h)]] += 1.0;
                }
                for i in 0..n {
                    sum[i] += hits[i];
                    sq[i] += hits[i] * hits[i];
                }
            }
            (sum, sq)
        })
        .collect();
    let mut sum = vec![0.0; n];
    let mut sq = vec![0.0; n];
    for (s, q) in &partial {
        for i in 0..n {
            sum[i] += s[i];
            sq[i] += q[i];
        }
    }
    let m = samples as f64;
    let values: Vec<f64> = sum.iter().map(|s| s / m).collect();
    let std_errors: Vec<f64> = (0..n)
        .map(|i| {
            let var = (sq[i] / m - values[i] * values[i]).max(0.0) * m / (m - 1.0).max(1.0);
            (var / m).sqrt()
        })
        .collect();
    let bound = std_errors.iter().fold(0.0f64, |a, &b| a.max(3.0 * b));
    let mut p = PowerProfile::from_estimates(values, Method::MonteCarlo, bound);
    p.seed = Some(seed);
    p.std_errors = Some(std_errors);
    Ok(p)
}

/// Swing total of voter `i`: over all one-step down-shifts of `i`'s level,
/// the sum of output drops `m − l`.
pub fn swings(game: &JkGame, i: usize) -> Result<u64> {
    if i >= game.n {
        return Err(Error::input("voter index out of range"));
    }
    require_jk_simple(game)?;
    let stride = game.stride(i);
    Ok((0..game.table.len())
        .filter(|idx| (idx / stride) % game.j as usize + 1 < game.j as usize)
        .map(|idx| {
            let (l, m) = (game.at(idx), game.at(idx + stride));
            m.saturating_sub(l) as u64
        })
        .sum())
}

/// Absolute Banzhaf index `η_i / (j^(n−1)(k−1))`.
pub fn bzi_jk(game: &JkGame) -> Result<PowerProfile> {
    let den = BigInt::from(game.table.len() / game.j as usize) * BigInt::from(game.k - 1);
    let values = (0..game.n)
        .map(|i| Ok(BigRational::new(BigInt::from(swings(game, i)?), den.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerProfile::from_exact(values))
}

/// `Σ (g(i at level j) − g(i at level 1))` over the other voters' profiles.
pub fn telescoping_swings(game: &JkGame, i: usize) -> u64 {
    let stride = game.stride(i);
    let span = (game.j as usize - 1) * stride;
    (0..game.table.len())
        .filter(|idx| (idx / stride) % game.j as usize == 0)
        .map(|idx| (game.at(idx + span) - game.at(idx)) as u64)
        .sum()
}

/// The (2,2) game with level 1 meaning "yes" and output 1 meaning "win".
pub fn embed_binary(game: &BinaryGame) -> Result<JkGame> {
    JkGame::from_fn(game.n(), 2, 2, |p| {
        let yes = p
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == 1)
            .fold(Coalition::EMPTY, |s, (i, _)| s.with(i));
        if game.wins(yes) {
            1
        } else {
            2
        }
    })
}

/// The three-voter, three-level, two-output example: output 1 exactly when
/// voter 1 is at level 1 and voters 2 and 3 are not both at level 3.
pub fn three_level_example() -> JkGame {
    JkGame::from_fn(3, 3, 2, |p| {
        if p[0] == 1 && !(p[1] == 3 && p[2] == 3) {
            1
        } else {
            2
        }
    })
    .expect("valid example")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn leq_examples() {
        assert!(leq_j(&[2, 3], &[2, 3]).unwrap());
        assert!(leq_j(&[2, 3], &[1, 3]).unwrap());
        assert!(!leq_j(&[1, 3], &[2, 3]).unwrap());
        assert!(leq_j(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn example_is_simple_and_violations_are_caught() {
        let g = three_level_example();
        assert!(is_jk_simple(&g));
        let mut entries = g.entries();
        // Break one covering pair: raise approval, lower the output.
        let pos = entries.iter().position(|(p, _)| p == &vec![1, 1, 2]).unwrap();
        entries[pos].1 = 2;
        let broken = JkGame::from_entries(3, 3, 2, &entries).unwrap();
        assert!(!is_jk_simple(&broken));
    }

    #[test]
    fn example_counts_and_indices() {
        let g = three_level_example();
        let counts = pivot_counts(&g).unwrap();
        let expect = |q: [usize; 3]| {
            let zero: Vec<usize> = q.iter().map(|v| v - 1).collect();
            counts.iter().find(|(qq, _)| *qq == zero).unwrap().1.clone()
        };
        assert_eq!(expect([1, 2, 3]), vec![18, 6, 3]);
        assert_eq!(expect([2, 1, 3]), vec![24, 0, 3]);
        assert_eq!(expect([3, 2, 1]), vec![24, 3, 0]);
        assert_eq!(
            ssi_jk(&g).unwrap().exact.unwrap(),
            vec![ratio(22, 27), ratio(5, 54), ratio(5, 54)]
        );
        assert_eq!((0..3).map(|i| swings(&g, i).unwrap()).collect::<Vec<_>>(), vec![8, 1, 1]);
        let bzi = bzi_jk(&g).unwrap();
        assert_eq!(bzi.exact.clone().unwrap(), vec![ratio(8, 9), ratio(1, 9), ratio(1, 9)]);
        assert_eq!(
            bzi.normalize().unwrap().exact.unwrap(),
            vec![ratio(4, 5), ratio(1, 10), ratio(1, 10)]
        );
    }

    #[test]
    fn embedding_matches_binary() {
        let b = BinaryGame::weighted_int(3, &[2, 1, 1, 1]).unwrap();
        let g = embed_binary(&b).unwrap();
        assert_eq!(
            ssi_jk(&g).unwrap().exact.unwrap(),
            vec![ratio(1, 2), ratio(1, 6), ratio(1, 6), ratio(1, 6)]
        );
        let dictator = BinaryGame::weighted_int(1, &[1, 0, 0]).unwrap();
        let d = embed_binary(&dictator).unwrap();
        for q in queues(3) {
            for idx in 0..d.num_profiles() {
                let p = profile_of(idx, 3, 2);
                assert_eq!(pivot(&d, &q, &p, 1).unwrap(), 0);
            }
        }
    }

    #[test]
    fn queue_enumeration() {
        let q = queues(3);
        assert_eq!(q.len(), 6);
        assert_eq!(q[0], vec![0, 1, 2]);
        assert_eq!(q[5], vec![2, 1, 0]);
    }

    #[test]
    fn table_validation() {
        let g = three_level_example();
        let mut entries = g.entries();
        entries.pop();
        assert!(JkGame::from_entries(3, 3, 2, &entries).is_err());
        let mut dup = g.entries();
        dup.push(dup[0].clone());
        assert!(JkGame::from_entries(3, 3, 2, &dup).is_err());
    }
}
