use std::collections::{HashMap, HashSet};

use super::tree::{branch_swap_parts, rewrite_segment_swap, RTree, TreePoly};
use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Stage {
    Full,
    Top,
    Nest,
}

/// Rewriting normalizer onto the NMNE basis.
///
/// Results are memoized per tree, so one instance can be reused across many
/// inputs. The rewriting proceeds in three stages:
///
/// * `full` normalizes every child, expands multilinearly and hands each
///   resulting tree to `top`;
/// * `top` sorts the children by weakly decreasing degree with branch swaps,
///   then segment-swaps a non-nest so that its new first child is a smaller
///   tree that can be normalized on its own;
/// * `nest` makes the root ordered and then sorts the leaf sequence, taking
///   the rightmost inversion first.
///
/// Any tree that re-enters a stage while still being processed there is
/// reported as an internal error instead of looping.
#[derive(Default)]
pub struct Normalizer {
    memo: HashMap<(Stage, RTree), TreePoly>,
    active: HashSet<(Stage, RTree)>,
}

impl Normalizer {
    pub fn new() -> Normalizer {
        Normalizer::default()
    }

    pub fn try_normalize(&mut self, p: &TreePoly) -> Result<TreePoly> {
        let mut out = TreePoly::zero();
        for (t, c) in p.terms() {
            let n = self.full(t)?;
            out.add_scaled(&n, c);
        }
        Ok(out)
    }

    pub fn normalize_tree(&mut self, t: &RTree) -> Result<TreePoly> {
        self.full(t)
    }

    fn memoized(
        &mut self,
        stage: Stage,
        u: &RTree,
        f: impl FnOnce(&mut Self) -> Result<TreePoly>,
    ) -> Result<TreePoly> {
        let key = (stage, u.clone());
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        if !self.active.insert(key.clone()) {
            return Err(Error::Internal(format!("rewrite cycle in {stage:?} stage at {u:?}")));
        }
        let r = f(self);
        self.active.remove(&key);
        let r = r?;
        self.memo.insert(key, r.clone());
        Ok(r)
    }

    fn full(&mut self, u: &RTree) -> Result<TreePoly> {
        if u.is_leaf() {
            return Ok(TreePoly::from_tree(u.clone()));
        }
        self.memoized(Stage::Full, u, |s| {
            // Multilinear expansion over the normalized children.
            let mut combos: Vec<(Vec<(RTree, crate::symbol::Op)>, Rat)> =
                vec![(Vec::new(), Rat::one())];
            for (c, w) in u.children() {
                let nc = s.full(c)?;
                let mut next = Vec::with_capacity(combos.len() * nc.len());
                for (prefix, pc) in &combos {
                    for (t, tc) in nc.terms() {
                        let mut p = prefix.clone();
                        p.push((t.clone(), *w));
                        next.push((p, pc * tc));
                    }
                }
                combos = next;
            }
            let mut out = TreePoly::zero();
            for (children, c) in combos {
                let t = RTree::node(children, u.root());
                let r = s.top(&t)?;
                out.add_scaled(&r, &c);
            }
            Ok(out)
        })
    }

    /// Expects every child to be an NMNE already.
    fn top(&mut self, u: &RTree) -> Result<TreePoly> {
        self.memoized(Stage::Top, u, |s| {
            let degs: Vec<usize> = u.children().iter().map(|(c, _)| c.degree()).collect();
            if let Some(i) = degs.windows(2).position(|p| p[0] < p[1]) {
                let (a, b, transposed) = branch_swap_parts(u, i)?;
                let mut out = s.full(&a)?;
                out.add_scaled(&s.full(&b)?, &-Rat::one());
                out.add_scaled(&s.top(&transposed)?, &Rat::one());
                Ok(out)
            } else if !u.is_nest() {
                s.swap_and_renest(u)
            } else {
                s.nest(u)
            }
        })
    }

    /// Segment swap, normalize the new first child, and continue each
    /// resulting tree as a nest.
    fn swap_and_renest(&mut self, u: &RTree) -> Result<TreePoly> {
        let swapped = rewrite_segment_swap(u)?;
        let ch = swapped.children();
        let (inner, t1) = &ch[0];
        let mut out = TreePoly::zero();
        for (v, c) in self.full(inner)?.terms() {
            let mut children = Vec::with_capacity(ch.len());
            children.push((v.clone(), *t1));
            children.extend_from_slice(&ch[1..]);
            let r = self.nest(&RTree::node(children, swapped.root()))?;
            out.add_scaled(&r, c);
        }
        Ok(out)
    }

    /// Expects a nest whose first child is an NMNE.
    fn nest(&mut self, u: &RTree) -> Result<TreePoly> {
        if u.is_leaf() {
            return Ok(TreePoly::from_tree(u.clone()));
        }
        self.memoized(Stage::Nest, u, |s| {
            if !u.is_ordered_at_root() {
                return s.swap_and_renest(u);
            }
            let seq = u.leafseq()?;
            let Some(j) = seq.windows(2).rposition(|p| p[0] > p[1]) else {
                return Ok(TreePoly::from_tree(u.clone()));
            };
            let n = u.children().len();
            let y1 = &u.children()[0].0;
            if j + 2 < n || y1.is_leaf() {
                // Both offending leaves hang off the root.
                let i = n - 2 - j;
                let (a, b, transposed) = branch_swap_parts(u, i)?;
                let mut out = TreePoly::zero();
                for (t, c) in [(a, Rat::one()), (b, -Rat::one()), (transposed, Rat::one())] {
                    let r = if t.is_nest() { s.nest(&t)? } else { s.full(&t)? };
                    out.add_scaled(&r, &c);
                }
                Ok(out)
            } else {
                s.cross(u)
            }
        })
    }

    /// Exchanges the last child of `y1` with `y2` through the sequence:
    /// move it to the front of `y1`, segment swap, branch swap, segment swap
    /// back, then move the leaf back to the end. Every branch swap contributes
    /// correction terms, normalized separately.
    fn cross(&mut self, u: &RTree) -> Result<TreePoly> {
        let m = u.children()[0].0.children().len();
        let mut corrections = TreePoly::zero();
        let mut cur = u.clone();
        for i in (0..m - 1).rev() {
            cur = swap_in_first_child(&cur, i, &mut corrections)?;
        }
        cur = rewrite_segment_swap(&cur)?;
        cur = swap_in_first_child(&cur, 0, &mut corrections)?;
        cur = rewrite_segment_swap(&cur)?;
        for i in 0..m - 1 {
            cur = swap_in_first_child(&cur, i, &mut corrections)?;
        }
        let mut out = self.full(&cur)?;
        for (t, c) in corrections.terms() {
            out.add_scaled(&self.full(t)?, c);
        }
        Ok(out)
    }
}

/// Branch swap at position `i` inside the first child of `u`. Returns the
/// transposed tree and adds the corrections (in context) to `acc`.
fn swap_in_first_child(u: &RTree, i: usize, acc: &mut TreePoly) -> Result<RTree> {
    let ch = u.children();
    let (y1, w1) = &ch[0];
    let (a, b, transposed) = branch_swap_parts(y1, i)?;
    let in_context = |t: RTree| {
        let mut c = Vec::with_capacity(ch.len());
        c.push((t, *w1));
        c.extend_from_slice(&ch[1..]);
        RTree::node(c, u.root())
    };
    acc.add_term(in_context(a), Rat::one());
    acc.add_term(in_context(b), -Rat::one());
    Ok(in_context(transposed))
}
