//! Sobol points in up to eight dimensions (Joe-Kuo direction numbers).

const BITS: usize = 32;

/// `(degree s, coefficient a, initial m)` for dimensions 2..=8.
const PRIMITIVES: [(usize, u32, &[u32]); 7] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
];

pub const MAX_DIM: usize = PRIMITIVES.len() + 1;

pub struct Sobol {
    dim: usize,
    directions: Vec<[u32; BITS]>,
    state: Vec<u32>,
    index: u32,
}

impl Sobol {
    pub fn new(dim: usize) -> Sobol {
        assert!((1..=MAX_DIM).contains(&dim), "Sobol dimension {dim} unsupported");
        let mut directions = Vec::with_capacity(dim);
        let mut first = [0u32; BITS];
        for (k, v) in first.iter_mut().enumerate() {
            *v = 1 << (BITS - 1 - k);
        }
        directions.push(first);
        for &(s, a, m) in PRIMITIVES.iter().take(dim - 1) {
            let mut v = [0u32; BITS];
            for k in 0..BITS {
                if k < s {
                    v[k] = m[k] << (BITS - 1 - k);
                } else {
                    let mut x = v[k - s] ^ (v[k - s] >> s);
                    for t in 1..s {
                        if (a >> (s - 1 - t)) & 1 == 1 {
                            x ^= v[k - t];
                        }
                    }
                    v[k] = x;
                }
            }
            directions.push(v);
        }
        Sobol {
            dim,
            directions,
            state: vec![0; dim],
            index: 0,
        }
    }

    /// Next point; the first point returned is the origin.
    pub fn next_point(&mut self) -> Vec<f64> {
        let out = self
            .state
            .iter()
            .map(|&s| s as f64 / (1u64 << BITS) as f64)
            .collect();
        let c = self.index.trailing_ones() as usize;
        for d in 0..self.dim {
            self.state[d] ^= self.directions[d][c.min(BITS - 1)];
        }
        self.index += 1;
        out
    }
}
