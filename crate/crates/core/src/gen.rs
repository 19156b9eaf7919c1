//! Random well-typed terms for fuzzing and rule-instance generation.

use rand::Rng;

use crate::term::{mk_multi_proj, Arity, ProjSpec, Term};

#[derive(Debug, Clone, Copy)]
pub struct GenOptions {
    pub max_depth: usize,
    /// Widest intermediate object introduced by a composition.
    pub max_width: usize,
    pub allow_rec: bool,
    /// Probability of stopping early at a leaf.
    pub leaf_bias: f64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_depth: 4,
            max_width: 2,
            allow_rec: true,
            leaf_bias: 0.3,
        }
    }
}

/// A random term of exactly the requested arity.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, arity: Arity, opts: &GenOptions) -> Term {
    assert!(arity.dom >= 1 && arity.cod >= 1);
    go(rng, arity.dom, arity.cod, opts.max_depth, opts)
}

/// A random term with dom and cod drawn from `1..=opts.max_width`.
pub fn random_any<R: Rng + ?Sized>(rng: &mut R, opts: &GenOptions) -> Term {
    let dom = rng.gen_range(1..=opts.max_width);
    let cod = rng.gen_range(1..=opts.max_width);
    random_term(rng, Arity::new(dom, cod), opts)
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, dom: usize, cod: usize) -> Term {
    if cod == 1 {
        let extra = if dom == 1 { 2 } else { 0 };
        let k = rng.gen_range(0..dom + extra);
        return match k {
            k if k < dom => Term::proj(dom, k + 1).expect("in range"),
            k if k == dom => Term::zero(),
            _ => Term::succ(),
        };
    }
    let xs = (0..cod).map(|_| rng.gen_range(1..=dom)).collect();
    mk_multi_proj(&ProjSpec { n: dom, xs }).expect("in range")
}

fn go<R: Rng + ?Sized>(rng: &mut R, dom: usize, cod: usize, depth: usize, opts: &GenOptions) -> Term {
    if depth == 0 || rng.gen_bool(opts.leaf_bias) {
        return leaf(rng, dom, cod);
    }
    let mut choices = vec![0u8];
    if cod >= 2 {
        choices.extend([1, 1]);
    }
    if opts.allow_rec && dom >= 2 {
        choices.push(2);
    }
    match choices[rng.gen_range(0..choices.len())] {
        0 => {
            let mid = rng.gen_range(1..=opts.max_width.max(1));
            let g = go(rng, mid, cod, depth - 1, opts);
            let f = go(rng, dom, mid, depth - 1, opts);
            Term::comp(g, f).expect("widths agree")
        }
        1 => {
            let left = rng.gen_range(1..cod);
            let f = go(rng, dom, left, depth - 1, opts);
            let g = go(rng, dom, cod - left, depth - 1, opts);
            Term::pair(f, g).expect("domains agree")
        }
        _ => {
            let a = dom - 1;
            let f = go(rng, a, cod, depth - 1, opts);
            let g = go(rng, a + cod, cod, depth - 1, opts);
            Term::rec(f, g).expect("recursion widths agree")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_terms_have_requested_arity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let opts = GenOptions::default();
        for dom in 1..=3 {
            for cod in 1..=3 {
                for _ in 0..50 {
                    let t = random_term(&mut rng, Arity::new(dom, cod), &opts);
                    assert_eq!(t.arity(), Arity::new(dom, cod));
                    assert!(t.depth() <= opts.max_depth + 3);
                }
            }
        }
    }
}
