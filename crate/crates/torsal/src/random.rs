//! Seeded random small arrangements for property suites.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::Q;
use crate::toric::{Hypertorus, ToricArrangement};

/// Offsets drawn by [`random_arrangement`].
pub const OFFSETS: [(i64, i64); 3] = [(0, 1), (1, 2), (1, 3)];

/// An essential arrangement with `dim ≤ 2`, at most `max_hypertori`
/// hypertori, character entries in `-2..=2` and offsets from [`OFFSETS`].
pub fn random_arrangement(rng: &mut impl Rng, max_hypertori: usize) -> ToricArrangement {
    loop {
        let dim = rng.gen_range(1..=2);
        let n = rng.gen_range(dim..=max_hypertori.max(dim));
        let mut hs = Vec::with_capacity(n);
        for i in 0..n {
            let chi: Vec<i64> = loop {
                let c: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
                if c.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1 {
                    break c;
                }
            };
            let (num, den) = OFFSETS[rng.gen_range(0..OFFSETS.len())];
            hs.push(Hypertorus {
                name: format!("H{i}"),
                chi: chi.into_iter().map(BigInt::from).collect(),
                offset: Q::new(num.into(), den.into()),
            });
        }
        if let Ok(arr) = ToricArrangement::new(dim, hs, None) {
            return arr;
        }
    }
}

/// `count` arrangements from one seed.
pub fn corpus(seed: u64, count: usize, max_hypertori: usize) -> Vec<ToricArrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_arrangement(&mut rng, max_hypertori)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_small() {
        let a = corpus(7, 12, 4);
        assert_eq!(a, corpus(7, 12, 4));
        assert!(a.iter().all(|x| x.dim <= 2 && x.len() <= 4 && x.len() >= x.dim));
        assert_ne!(a, corpus(8, 12, 4));
    }
}
