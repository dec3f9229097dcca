use std::collections::btree_map::{self, BTreeMap};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::symbol::{Op, Var};

/// A typed decorated rooted tree. Every vertex carries a variable and every
/// edge an operation; children are ordered.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum RTree {
    Leaf(Var),
    Node { children: Vec<(RTree, Op)>, root: Var },
}

/// `(degree, outer length n, n + m)`, compared lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Weight {
    pub degree: usize,
    pub length: usize,
    pub nm: usize,
}

impl RTree {
    pub fn leaf(x: Var) -> RTree {
        RTree::Leaf(x)
    }

    /// Builds `r(children; root)`; an empty child list gives a leaf.
    pub fn node(children: Vec<(RTree, Op)>, root: Var) -> RTree {
        if children.is_empty() {
            RTree::Leaf(root)
        } else {
            RTree::Node { children, root }
        }
    }

    pub fn root(&self) -> Var {
        match self {
            RTree::Leaf(x) => *x,
            RTree::Node { root, .. } => *root,
        }
    }

    pub fn children(&self) -> &[(RTree, Op)] {
        match self {
            RTree::Leaf(_) => &[],
            RTree::Node { children, .. } => children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, RTree::Leaf(_))
    }

    pub fn as_leaf(&self) -> Option<Var> {
        match self {
            RTree::Leaf(x) => Some(*x),
            RTree::Node { .. } => None,
        }
    }

    /// The edge labels at the root, left to right.
    pub fn word(&self) -> Vec<Op> {
        self.children().iter().map(|(_, w)| *w).collect()
    }

    /// Number of vertices.
    pub fn degree(&self) -> usize {
        1 + self.children().iter().map(|(c, _)| c.degree()).sum::<usize>()
    }

    pub fn edges(&self) -> usize {
        self.degree() - 1
    }

    pub fn weight(&self) -> Weight {
        let n = self.children().len();
        let m = self.children().first().map_or(0, |(y1, _)| y1.children().len());
        Weight { degree: self.degree(), length: n, nm: n + m }
    }

    /// All vertex labels, in pre-order.
    pub fn var_labels(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.walk(&mut |t| out.push(t.root()), &mut |_| {});
        out
    }

    /// All edge labels, in pre-order.
    pub fn op_labels(&self) -> Vec<Op> {
        let mut out = Vec::new();
        self.walk(&mut |_| {}, &mut |w| out.push(w));
        out
    }

    fn walk(&self, on_vertex: &mut impl FnMut(&RTree), on_edge: &mut impl FnMut(Op)) {
        on_vertex(self);
        for (c, w) in self.children() {
            on_edge(*w);
            c.walk(on_vertex, on_edge);
        }
    }

    /// The multisets of vertex and edge labels, each sorted.
    pub fn label_class(&self) -> (Vec<Var>, Vec<Op>) {
        let mut v = self.var_labels();
        let mut o = self.op_labels();
        v.sort_unstable();
        o.sort_unstable();
        (v, o)
    }

    /// `u` becomes the new leftmost child of this tree's root, on an edge labelled `w`.
    pub fn grafted_onto(u: RTree, w: Op, v: &RTree) -> RTree {
        let mut children = Vec::with_capacity(v.children().len() + 1);
        children.push((u, w));
        children.extend_from_slice(v.children());
        RTree::Node { children, root: v.root() }
    }

    pub fn is_nest(&self) -> bool {
        match self.children().split_first() {
            None => true,
            Some(((y1, _), rest)) => rest.iter().all(|(c, _)| c.is_leaf()) && y1.is_nest(),
        }
    }

    /// The ordering conditions at the root only (children are not inspected).
    pub fn is_ordered_at_root(&self) -> bool {
        let ch = self.children();
        let Some((y1, _)) = ch.first() else { return true };
        let (m, n) = (y1.children().len(), ch.len());
        if m == 0 || m > n {
            return true;
        }
        if m < n {
            return false;
        }
        if y1.root() != self.root() {
            return y1.root() > self.root();
        }
        y1.word() >= self.word()
    }

    /// A nest whose root and, recursively, whose first child are ordered.
    pub fn is_ordered_nest(&self) -> bool {
        self.is_nest() && self.spine().all(RTree::is_ordered_at_root)
    }

    /// The chain `u, y1, y1's first child, ...` down to a leaf.
    pub fn spine(&self) -> impl Iterator<Item = &RTree> {
        std::iter::successors(Some(self), |t| t.children().first().map(|(c, _)| c))
    }

    /// Leaves of a nest read right to left: the leaf children of each spine
    /// vertex from the right, then the bottom of the spine.
    pub fn leafseq(&self) -> Result<Vec<Var>> {
        if !self.is_nest() {
            return Err(Error::NotNest);
        }
        let mut out = Vec::new();
        for t in self.spine() {
            match t.children().split_first() {
                None => out.push(t.root()),
                Some((_, rest)) => {
                    out.extend(rest.iter().rev().map(|(c, _)| c.root()));
                }
            }
        }
        Ok(out)
    }

    pub fn is_nmne(&self) -> bool {
        self.is_ordered_nest()
            && self.leafseq().is_ok_and(|s| s.windows(2).all(|p| p[0] <= p[1]))
    }
}

/// A finite rational combination of trees.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TreePoly {
    terms: BTreeMap<RTree, Rat>,
}

impl TreePoly {
    pub fn zero() -> TreePoly {
        TreePoly::default()
    }

    pub fn from_tree(t: RTree) -> TreePoly {
        TreePoly::term(t, Rat::one())
    }

    pub fn term(t: RTree, c: Rat) -> TreePoly {
        let mut p = TreePoly::zero();
        p.add_term(t, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RTree, &Rat)> {
        self.terms.iter()
    }

    pub fn trees(&self) -> impl Iterator<Item = &RTree> {
        self.terms.keys()
    }

    pub fn coeff(&self, t: &RTree) -> Rat {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, t: RTree, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TreePoly, c: &Rat) {
        for (t, v) in &other.terms {
            self.add_term(t.clone(), v * c);
        }
    }

    pub fn add(&self, other: &TreePoly) -> TreePoly {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::one());
        out
    }

    pub fn sub(&self, other: &TreePoly) -> TreePoly {
        let mut out = self.clone();
        out.add_scaled(other, &-Rat::one());
        out
    }

    pub fn scale(&self, c: &Rat) -> TreePoly {
        let mut out = TreePoly::zero();
        out.add_scaled(self, c);
        out
    }

    /// Applies `f` to every tree and collects the results linearly.
    pub fn map_linear(&self, mut f: impl FnMut(&RTree) -> TreePoly) -> TreePoly {
        let mut out = TreePoly::zero();
        for (t, c) in &self.terms {
            out.add_scaled(&f(t), c);
        }
        out
    }
}

impl From<RTree> for TreePoly {
    fn from(t: RTree) -> TreePoly {
        TreePoly::from_tree(t)
    }
}

impl FromIterator<(RTree, Rat)> for TreePoly {
    fn from_iter<I: IntoIterator<Item = (RTree, Rat)>>(iter: I) -> TreePoly {
        let mut p = TreePoly::zero();
        for (t, c) in iter {
            p.add_term(t, c);
        }
        p
    }
}

/// The grafting product, extended bilinearly.
pub fn graft(u: &TreePoly, w: Op, v: &TreePoly) -> TreePoly {
    let mut out = TreePoly::zero();
    for (a, ca) in u.terms() {
        for (b, cb) in v.terms() {
            out.add_term(RTree::grafted_onto(a.clone(), w, b), ca * cb);
        }
    }
    out
}

/// The two defining relations of the ideal, instantiated at `(x, y, z; w, t)`:
///
/// * `(x.w y).t z - x.w (y.t z) - (y.w x).t z + y.w (x.t z)`
/// * `(x.w y).t z - (x.t z).w y`
///
/// where `u.w v` is grafting.
pub fn relation_elements(x: &RTree, y: &RTree, z: &RTree, w: Op, t: Op) -> (TreePoly, TreePoly) {
    let g = |a: &RTree, l: Op, b: &RTree| RTree::grafted_onto(a.clone(), l, b);
    let one = Rat::one;
    let rel1: TreePoly = [
        (g(&g(x, w, y), t, z), one()),
        (g(x, w, &g(y, t, z)), -one()),
        (g(&g(y, w, x), t, z), -one()),
        (g(y, w, &g(x, t, z)), one()),
    ]
    .into_iter()
    .collect();
    let rel2: TreePoly =
        [(g(&g(x, w, y), t, z), one()), (g(&g(x, t, z), w, y), -one())].into_iter().collect();
    (rel1, rel2)
}

/// Exchanges the children at 0-based positions `i` and `i + 1`.
///
/// Returns the three-term combination congruent to `u`:
/// `r(.., y_i.w_i y_{i+1}, w_{i+1}, ..) - r(.., y_{i+1}.w_i y_i, w_{i+1}, ..) + r(.., y_{i+1}, w_i, y_i, w_{i+1}, ..)`.
/// Edge labels keep their positions.
pub fn rewrite_branch_swap(u: &RTree, i: usize) -> Result<TreePoly> {
    let (corr_a, corr_b, transposed) = branch_swap_parts(u, i)?;
    let mut p = TreePoly::zero();
    p.add_term(corr_a, Rat::one());
    p.add_term(corr_b, -Rat::one());
    p.add_term(transposed, Rat::one());
    Ok(p)
}

/// The two correction trees and the transposed tree of a branch swap.
pub(crate) fn branch_swap_parts(u: &RTree, i: usize) -> Result<(RTree, RTree, RTree)> {
    let ch = u.children();
    if i + 1 >= ch.len() {
        return Err(Error::IndexOutOfRange { index: i, len: ch.len() });
    }
    let (yi, wi) = &ch[i];
    let (yj, wj) = &ch[i + 1];
    let splice = |mid: Vec<(RTree, Op)>| {
        let mut c = Vec::with_capacity(ch.len());
        c.extend_from_slice(&ch[..i]);
        c.extend(mid);
        c.extend_from_slice(&ch[i + 2..]);
        RTree::Node { children: c, root: u.root() }
    };
    let a = splice(vec![(RTree::grafted_onto(yi.clone(), *wi, yj), *wj)]);
    let b = splice(vec![(RTree::grafted_onto(yj.clone(), *wi, yi), *wj)]);
    let t = splice(vec![(yj.clone(), *wi), (yi.clone(), *wj)]);
    Ok((a, b, t))
}

/// `r(r(x1,t1,..,xm,tm;z'),w1,y2,..,yn,wn;z) -> r(r(x1,w1,y2,..,yn,wn;z),t1,x2,..,xm,tm;z')`.
pub fn rewrite_segment_swap(u: &RTree) -> Result<RTree> {
    let ch = u.children();
    let Some(((y1, w1), rest)) = ch.split_first() else {
        return Err(Error::LeafFirstChild);
    };
    let Some(((x1, t1), xs)) = y1.children().split_first() else {
        return Err(Error::LeafFirstChild);
    };
    let mut inner = Vec::with_capacity(ch.len());
    inner.push((x1.clone(), *w1));
    inner.extend_from_slice(rest);
    let mut outer = Vec::with_capacity(y1.children().len());
    outer.push((RTree::Node { children: inner, root: u.root() }, *t1));
    outer.extend_from_slice(xs);
    Ok(RTree::Node { children: outer, root: y1.root() })
}
