//! Typed decorated rooted trees, the grafting product and normalization
//! modulo the noncommuting multi-Novikov relations.

mod normalize;
mod tree;

pub use normalize::Normalizer;
pub use tree::{
    graft, relation_elements, rewrite_branch_swap, rewrite_segment_swap, RTree, TreePoly, Weight,
};

use crate::error::Result;

/// Normalizes onto the NMNE basis with a fresh memo table.
pub fn try_normalize(p: &TreePoly) -> Result<TreePoly> {
    Normalizer::new().try_normalize(p)
}

/// Like [`try_normalize`], panicking on an internal inconsistency.
pub fn normalize(p: &TreePoly) -> TreePoly {
    try_normalize(p).expect("normalizer reached an inconsistent state")
}
