//! Graded enumeration of both bases and a brute-force quotient dimension.

use std::collections::BTreeMap;

use crate::diffalg::{DMono, DVar, Flavor};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::rat::Rat;
use crate::symbol::{Op, Var};
use crate::treealg::{relation_elements, RTree, TreePoly};

pub use crate::linalg::rank;

/// Default bound on the number of trees the quotient oracle will handle.
pub const DEFAULT_TREE_CAP: usize = 200_000;

/// Sorted vertex labels and sorted edge labels of a tree or monomial.
pub type LabelClass = (Vec<Var>, Vec<Op>);

fn counts<T: Ord + Copy>(items: &[T]) -> BTreeMap<T, usize> {
    let mut m = BTreeMap::new();
    for &x in items {
        *m.entry(x).or_insert(0) += 1;
    }
    m
}

fn take<T: Ord>(m: &mut BTreeMap<T, usize>, x: &T) {
    *m.get_mut(x).expect("available label") -= 1;
}

fn give<T: Ord + Copy>(m: &mut BTreeMap<T, usize>, x: T) {
    *m.entry(x).or_insert(0) += 1;
}

fn available<T: Ord + Copy>(m: &BTreeMap<T, usize>) -> Vec<T> {
    m.iter().filter(|(_, &c)| c > 0).map(|(&x, _)| x).collect()
}

/// All multisets of size `k` drawn from `items`, each as a sorted vector.
pub fn multisets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Copy>(items: &[T], start: usize, k: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, i, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Every label class of grade `k`: `k + 1` vertex labels and `k` edge labels.
pub fn label_classes(vars: &[Var], ops: &[Op], k: usize) -> Vec<LabelClass> {
    let mut vs = vars.to_vec();
    let mut os = ops.to_vec();
    vs.sort_unstable();
    os.sort_unstable();
    let op_sets = multisets(&os, k);
    multisets(&vs, k + 1)
        .into_iter()
        .flat_map(|v| op_sets.iter().map(move |o| (v.clone(), o.clone())))
        .collect()
}

/// All words of length `n` using the edge labels still available.
fn words(ops: &mut BTreeMap<Op, usize>, n: usize, cur: &mut Vec<Op>, out: &mut Vec<Vec<Op>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for o in available(ops) {
        take(ops, &o);
        cur.push(o);
        words(ops, n, cur, out);
        cur.pop();
        give(ops, o);
    }
}

/// One spine vertex of an NMNE: its child count, root label and edge word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Block {
    len: usize,
    root: Var,
    word: Vec<Op>,
}

/// All NMNE trees with exactly the given vertex and edge label multisets.
///
/// An NMNE is a spine of vertices whose extra children are leaves. Reading
/// the spine from the outermost vertex inwards, the keys (child count, root,
/// edge word) weakly increase, and the leaf labels are forced: sorted
/// ascending they fill the spine from the outside, right to left, ending with
/// the bottom of the spine. So it suffices to enumerate weakly increasing
/// block sequences.
pub fn enum_nmne_class(vertex_labels: &[Var], edge_labels: &[Op]) -> Vec<RTree> {
    fn go(
        vars: &mut BTreeMap<Var, usize>,
        ops: &mut BTreeMap<Op, usize>,
        ops_left: usize,
        blocks: &mut Vec<Block>,
        out: &mut Vec<RTree>,
    ) {
        if ops_left == 0 {
            let mut leaves: Vec<Var> = Vec::new();
            for (&v, &c) in vars.iter() {
                leaves.extend(std::iter::repeat_n(v, c));
            }
            out.push(build_nest(blocks, &leaves));
            return;
        }
        let lower = blocks.last().cloned();
        for len in 1..=ops_left {
            if lower.as_ref().is_some_and(|b| b.len > len) {
                continue;
            }
            for root in available(vars) {
                let mut ws = Vec::new();
                words(ops, len, &mut Vec::new(), &mut ws);
                for word in ws {
                    let b = Block { len, root, word };
                    if lower.as_ref().is_some_and(|l| *l > b) {
                        continue;
                    }
                    take(vars, &root);
                    for o in &b.word {
                        take(ops, o);
                    }
                    blocks.push(b);
                    go(vars, ops, ops_left - len, blocks, out);
                    let b = blocks.pop().expect("pushed above");
                    for o in &b.word {
                        give(ops, *o);
                    }
                    give(vars, root);
                }
            }
        }
    }
    if vertex_labels.len() != edge_labels.len() + 1 {
        return Vec::new();
    }
    let mut vars = counts(vertex_labels);
    let mut ops = counts(edge_labels);
    let mut out = Vec::new();
    go(&mut vars, &mut ops, edge_labels.len(), &mut Vec::new(), &mut out);
    out
}

/// Blocks are listed from the outermost spine vertex inwards; `leaves` is sorted.
fn build_nest(blocks: &[Block], leaves: &[Var]) -> RTree {
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut off = 0;
    for b in blocks {
        offsets.push(off);
        off += b.len - 1;
    }
    let mut t = RTree::Leaf(*leaves.last().expect("a nest has a bottom leaf"));
    for (b, off) in blocks.iter().zip(offsets).rev() {
        let mut children = Vec::with_capacity(b.len);
        children.push((t, b.word[0]));
        for p in 1..b.len {
            // Child p (0-based) takes the (len - 1 - p)-th leaf of this block.
            children.push((RTree::Leaf(leaves[off + b.len - 1 - p]), b.word[p]));
        }
        t = RTree::Node { children, root: b.root };
    }
    t
}

/// All NMNE trees with `k` edges over the given labels.
pub fn enum_nmne(vars: &[Var], ops: &[Op], k: usize) -> Vec<RTree> {
    label_classes(vars, ops, k)
        .into_iter()
        .flat_map(|(v, o)| enum_nmne_class(&v, &o))
        .collect()
}

/// All populated monomials with `k` derivation occurrences, in canonical order.
pub fn enum_populated(vars: &[Var], ops: &[Op], k: usize) -> Vec<DMono> {
    let fl = Flavor::NCMDCA;
    let mut vs = vars.to_vec();
    vs.sort_unstable();
    let mut derived: Vec<DVar> = Vec::new();
    for len in 1..=k {
        for w in all_words(ops, len) {
            for &x in &vs {
                derived.push(DVar { word: w.clone(), var: x });
            }
        }
    }
    derived.sort();

    // Weakly increasing sequences of derived variables with total order k.
    fn go(derived: &[DVar], start: usize, left: usize, cur: &mut Vec<DVar>, out: &mut Vec<Vec<DVar>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..derived.len() {
            if derived[i].order() <= left {
                cur.push(derived[i].clone());
                go(derived, i, left - derived[i].order(), cur, out);
                cur.pop();
            }
        }
    }
    let mut parts = Vec::new();
    go(&derived, 0, k, &mut Vec::new(), &mut parts);

    let mut out = Vec::new();
    for part in parts {
        let plain_count = k + 1 - part.len();
        for plain in multisets(&vs, plain_count) {
            let mut f: Vec<DVar> = plain.into_iter().map(DVar::plain).collect();
            f.extend(part.iter().cloned());
            out.push(DMono::new(fl, f));
        }
    }
    out.sort();
    out
}

fn all_words(ops: &[Op], len: usize) -> Vec<Vec<Op>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                ops.iter().map(move |&o| {
                    let mut w = w.clone();
                    w.push(o);
                    w
                })
            })
            .collect();
    }
    out
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All planar trees with `k` edges over the given labels, or an error once
/// more than `cap` trees would be produced at any intermediate size.
pub fn all_trees(vars: &[Var], ops: &[Op], k: usize, cap: usize) -> Result<Vec<RTree>> {
    let mut by_edges: Vec<Vec<RTree>> = vec![vars.iter().map(|&x| RTree::Leaf(x)).collect()];
    for e in 1..=k {
        let mut level = Vec::new();
        for comp in compositions(e) {
            // Each child of size s contributes s - 1 edges plus its own edge.
            let mut partial: Vec<Vec<(RTree, Op)>> = vec![Vec::new()];
            for &s in &comp {
                let mut next = Vec::new();
                for p in &partial {
                    for c in &by_edges[s - 1] {
                        for &o in ops {
                            let mut q = p.clone();
                            q.push((c.clone(), o));
                            next.push(q);
                        }
                    }
                }
                if next.len() * vars.len() > cap {
                    return Err(Error::ResourceCap { count: next.len() * vars.len(), cap });
                }
                partial = next;
            }
            for children in partial {
                for &z in vars {
                    level.push(RTree::Node { children: children.clone(), root: z });
                }
            }
            if level.len() > cap {
                return Err(Error::ResourceCap { count: level.len(), cap });
            }
        }
        by_edges.push(level);
    }
    Ok(by_edges.swap_remove(k))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GradeDims {
    pub grade: usize,
    pub nmne: usize,
    pub populated: usize,
}

pub fn graded_dims(vars: &[Var], ops: &[Op], max_grade: usize) -> Vec<GradeDims> {
    (0..=max_grade)
        .map(|k| GradeDims {
            grade: k,
            nmne: enum_nmne(vars, ops, k).len(),
            populated: enum_populated(vars, ops, k).len(),
        })
        .collect()
}

/// `#trees_k - rank(J_k)`, where `J_k` is the degree-`k` part of the two-sided
/// ideal generated by the two relations.
///
/// `J` is built degree by degree. Its part with `e` edges is spanned by the
/// relation instances whose three arguments have `e - 2` edges in total,
/// together with `graft(b, w, t)` and `graft(t, w, b)` for `b` in a basis of
/// a lower part and `t` any tree making up the difference.
pub fn quotient_dim_bruteforce(vars: &[Var], ops: &[Op], k: usize, cap: usize) -> Result<usize> {
    let trees: Vec<Vec<RTree>> =
        (0..=k).map(|e| all_trees(vars, ops, e, cap)).collect::<Result<_>>()?;
    let mut basis: Vec<Vec<TreePoly>> = Vec::with_capacity(k + 1);
    for e in 0..=k {
        let mut ech: Echelon<RTree> = Echelon::new();
        let mut kept = Vec::new();
        let mut push = |p: TreePoly, ech: &mut Echelon<RTree>| {
            let entries: Vec<(RTree, Rat)> =
                p.terms().map(|(t, c)| (t.clone(), c.clone())).collect();
            if ech.insert(entries) {
                kept.push(p);
            }
        };
        if e >= 2 {
            for ex in 0..=e - 2 {
                for ey in 0..=e - 2 - ex {
                    let ez = e - 2 - ex - ey;
                    for x in &trees[ex] {
                        for y in &trees[ey] {
                            for z in &trees[ez] {
                                for &w in ops {
                                    for &t in ops {
                                        let (r1, r2) = relation_elements(x, y, z, w, t);
                                        push(r1, &mut ech);
                                        push(r2, &mut ech);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for lower in 2..e {
            let other = e - lower - 1;
            for b in &basis[lower] {
                for t in &trees[other] {
                    let tp = TreePoly::from_tree(t.clone());
                    for &w in ops {
                        push(crate::treealg::graft(b, w, &tp), &mut ech);
                        push(crate::treealg::graft(&tp, w, b), &mut ech);
                    }
                }
            }
        }
        basis.push(kept);
    }
    Ok(trees[k].len() - basis[k].len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(nv: u32, no: u32) -> (Vec<Var>, Vec<Op>) {
        ((0..nv).map(Var).collect(), (0..no).map(Op).collect())
    }

    #[test]
    fn small_populated_lists() {
        let (v, o) = labels(1, 1);
        assert_eq!(enum_populated(&v, &o, 0).len(), 1);
        assert_eq!(enum_populated(&v, &o, 1).len(), 1);
        let two = enum_populated(&v, &o, 2);
        assert_eq!(two.len(), 2);
        assert!(two.iter().all(DMono::is_populated));
    }

    #[test]
    fn small_nmne_lists() {
        let (v, o) = labels(1, 1);
        assert_eq!(enum_nmne(&v, &o, 0), vec![RTree::Leaf(Var(0))]);
        let one = enum_nmne(&v, &o, 1);
        assert_eq!(one.len(), 1);
        let two = enum_nmne(&v, &o, 2);
        assert_eq!(two.len(), 2);
        let (v3, o1) = labels(3, 1);
        assert_eq!(enum_nmne(&v3, &o1, 0).len(), 3);
    }

    #[test]
    fn constructive_matches_predicate_filter() {
        for (nv, no) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)] {
            let (v, o) = labels(nv, no);
            for k in 0..=4 {
                if nv == 3 && k == 4 {
                    continue;
                }
                let mut filtered: Vec<RTree> = all_trees(&v, &o, k, DEFAULT_TREE_CAP)
                    .unwrap()
                    .into_iter()
                    .filter(RTree::is_nmne)
                    .collect();
                let mut built = enum_nmne(&v, &o, k);
                filtered.sort();
                built.sort();
                assert_eq!(built, filtered, "({nv},{no}) k={k}");
            }
        }
    }

    #[test]
    fn dims_table() {
        let (v, o) = labels(1, 1);
        let d: Vec<(usize, usize)> = graded_dims(&v, &o, 2).iter().map(|g| (g.nmne, g.populated)).collect();
        assert_eq!(d, [(1, 1), (1, 1), (2, 2)]);
        let (v, o) = labels(1, 2);
        let g = graded_dims(&v, &o, 1);
        assert_eq!((g[1].nmne, g[1].populated), (2, 2));
    }

    #[test]
    fn tree_counts() {
        let (v, o) = labels(1, 1);
        let counts: Vec<usize> = (0..5).map(|k| all_trees(&v, &o, k, 1000).unwrap().len()).collect();
        // Planar rooted trees counted by edges: Catalan numbers.
        assert_eq!(counts, [1, 1, 2, 5, 14]);
        assert!(matches!(all_trees(&v, &o, 6, 10), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn quotient_small() {
        let (v, o) = labels(1, 1);
        let q: Vec<usize> =
            (0..3).map(|k| quotient_dim_bruteforce(&v, &o, k, DEFAULT_TREE_CAP).unwrap()).collect();
        assert_eq!(q, [1, 1, 2]);
    }
}
