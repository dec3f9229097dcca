//! Seeded random trees and polynomials for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffalg::{DMono, DPoly, DVar, Flavor};
use crate::rat::Rat;
use crate::symbol::{Op, Var};
use crate::treealg::RTree;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly labelled tree with exactly `nodes` vertices and a random shape.
pub fn random_tree(rng: &mut SampleRng, vars: &[Var], ops: &[Op], nodes: usize) -> RTree {
    assert!(nodes >= 1, "a tree has at least one vertex");
    let root = *vars.choose(rng).expect("nonempty variables");
    if nodes == 1 {
        return RTree::Leaf(root);
    }
    // Split the remaining vertices into a random composition.
    let mut left = nodes - 1;
    let mut children = Vec::new();
    while left > 0 {
        let size = rng.gen_range(1..=left);
        left -= size;
        let w = *ops.choose(rng).expect("nonempty operations");
        children.push((random_tree(rng, vars, ops, size), w));
    }
    RTree::Node { children, root }
}

fn random_coeff(rng: &mut SampleRng) -> Rat {
    let num = loop {
        let n = rng.gen_range(-5i64..=5);
        if n != 0 {
            break n;
        }
    };
    Rat::new(num, rng.gen_range(1..=3))
}

/// A polynomial with up to `max_terms` terms, each a product of at most
/// `max_degree` differential variables whose words have length at most `max_order`.
pub fn random_poly(
    rng: &mut SampleRng,
    flavor: Flavor,
    vars: &[Var],
    ops: &[Op],
    max_degree: usize,
    max_order: usize,
    max_terms: usize,
) -> DPoly {
    let mut p = DPoly::zero(flavor);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let factors: Vec<DVar> = (0..rng.gen_range(1..=max_degree))
            .map(|_| {
                let order = rng.gen_range(0..=max_order);
                let word = (0..order).map(|_| *ops.choose(rng).expect("nonempty operations")).collect();
                DVar::new(flavor, word, *vars.choose(rng).expect("nonempty variables"))
            })
            .collect();
        let c = random_coeff(rng);
        p = p.add_same(&DPoly::mono(flavor, DMono::new(flavor, factors), c));
    }
    p
}
