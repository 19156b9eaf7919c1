//! Shared inputs for the benchmarks.

use prdesc_core::gen::{random_any, GenOptions};
use prdesc_core::{parse, Term};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `n` reproducible random terms without recursion.
pub fn rec_free_terms(n: usize, depth: usize, seed: u64) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = GenOptions {
        max_depth: depth,
        allow_rec: false,
        ..GenOptions::default()
    };
    (0..n).map(|_| random_any(&mut rng, &opts)).collect()
}

/// Addition by recursion on the second argument.
pub fn addition() -> Term {
    parse("(rec (pi 1 1) (comp s (pi 2 2)))").expect("valid term")
}

/// Multiplication by repeated addition.
pub fn multiplication() -> Term {
    parse("(rec (comp z (pi 1 1)) (rec (pi 1 1) (comp s (pi 2 2))))").expect("valid term")
}

#[cfg(test)]
mod tests {
    use super::*;
    use prdesc_core::{eval, Budget, Tuple};

    #[test]
    fn fixtures_compute_what_they_say() {
        let b = Budget::default();
        for x in 0..6u64 {
            for y in 0..6u64 {
                let xy = Tuple::from_u64s(&[x, y]);
                assert_eq!(eval(&addition(), &xy, b).unwrap(), Tuple::from_u64s(&[x + y]));
                assert_eq!(eval(&multiplication(), &xy, b).unwrap(), Tuple::from_u64s(&[x * y]));
            }
        }
        assert_eq!(rec_free_terms(5, 3, 1), rec_free_terms(5, 3, 1));
    }
}
