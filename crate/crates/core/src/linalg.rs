//! Exact linear algebra on sparse vectors indexed by ordered keys.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::diffalg::{DMono, DPoly};
use crate::rat::Rat;
use crate::treealg::{RTree, TreePoly};

/// Anything that can be read as a sparse rational vector.
pub trait SparseVector {
    type Key: Ord + Clone;
    fn entries(&self) -> Vec<(Self::Key, Rat)>;
}

impl SparseVector for DPoly {
    type Key = DMono;
    fn entries(&self) -> Vec<(DMono, Rat)> {
        self.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
    }
}

impl SparseVector for TreePoly {
    type Key = RTree;
    fn entries(&self) -> Vec<(RTree, Rat)> {
        self.terms().map(|(t, c)| (t.clone(), c.clone())).collect()
    }
}

impl<K: Ord + Clone> SparseVector for BTreeMap<K, Rat> {
    type Key = K;
    fn entries(&self) -> Vec<(K, Rat)> {
        self.iter().map(|(k, c)| (k.clone(), c.clone())).collect()
    }
}

type IntRow<K> = BTreeMap<K, BigInt>;

/// Incremental row echelon form over the integers.
///
/// Rows are scaled to integers on entry and kept primitive (content 1), so
/// no fractions appear during elimination.
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, IntRow<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a vector; returns true when it was independent of those before.
    pub fn insert(&mut self, entries: impl IntoIterator<Item = (K, Rat)>) -> bool {
        let mut v = to_integer_row(entries);
        loop {
            let Some((lead, b)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
                return false;
            };
            let Some(row) = self.rows.get(&lead) else {
                make_primitive(&mut v);
                self.rows.insert(lead, v);
                return true;
            };
            let a = &row[&lead];
            let g = a.gcd(&b);
            let (fa, fb) = (a / &g, &b / &g);
            let mut next = IntRow::new();
            for (k, c) in &v {
                next.insert(k.clone(), c * &fa);
            }
            for (k, c) in row {
                let e = next.entry(k.clone()).or_insert_with(BigInt::zero);
                *e -= c * &fb;
            }
            next.retain(|_, c| !c.is_zero());
            make_primitive(&mut next);
            v = next;
        }
    }
}

fn to_integer_row<K: Ord>(entries: impl IntoIterator<Item = (K, Rat)>) -> IntRow<K> {
    let mut acc: BTreeMap<K, Rat> = BTreeMap::new();
    for (k, c) in entries {
        let e = acc.entry(k).or_default();
        *e += &c;
    }
    acc.retain(|_, c| !c.is_zero());
    let lcm = acc.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    acc.into_iter().map(|(k, c)| (k, c.numer() * (&lcm / c.denom()))).collect()
}

fn make_primitive<K>(v: &mut IntRow<K>) {
    let g = v.values().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g > BigInt::one() {
        for c in v.values_mut() {
            *c = &*c / &g;
        }
    }
    if v.values().next().is_some_and(|c| c.is_negative()) {
        for c in v.values_mut() {
            *c = -&*c;
        }
    }
}

/// Exact rank of a family of vectors.
pub fn rank<V: SparseVector>(vectors: &[V]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v.entries());
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(u32, i64)]) -> BTreeMap<u32, Rat> {
        entries.iter().map(|&(k, c)| (k, Rat::int(c))).collect()
    }

    #[test]
    fn rank_basics() {
        assert_eq!(rank::<BTreeMap<u32, Rat>>(&[]), 0);
        let a = v(&[(0, 1), (1, 2)]);
        let b = v(&[(1, 3), (2, 1)]);
        assert_eq!(rank(&[a.clone(), b.clone()]), 2);
        assert_eq!(rank(&[a.clone(), b.clone(), a.clone()]), 2);
        let mut c = a.clone();
        for (k, x) in &b {
            *c.entry(*k).or_default() += x;
        }
        assert_eq!(rank(&[a, b, c]), 2);
        assert_eq!(rank(&[v(&[])]), 0);
    }

    #[test]
    fn rank_with_fractions() {
        let a: BTreeMap<u32, Rat> = [(0, Rat::new(1, 2)), (1, Rat::new(1, 3))].into_iter().collect();
        let b: BTreeMap<u32, Rat> = [(0, Rat::int(3)), (1, Rat::int(2))].into_iter().collect();
        assert_eq!(rank(&[a, b]), 1);
    }
}
