use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::Flavor;
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::symbol::{Op, Var};

/// A derivation word. Under commuting derivations it is kept sorted.
pub type DWord = Vec<Op>;

/// A differential variable `D[w](x)`; `word` lists the outermost operation first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DVar {
    pub word: DWord,
    pub var: Var,
}

impl DVar {
    pub fn plain(var: Var) -> DVar {
        DVar { word: Vec::new(), var }
    }

    /// Builds a variable, sorting the word when derivations commute.
    pub fn new(flavor: Flavor, mut word: DWord, var: Var) -> DVar {
        if flavor.derivs_commute() {
            word.sort_unstable();
        }
        DVar { word, var }
    }

    pub fn order(&self) -> usize {
        self.word.len()
    }

    pub fn is_plain(&self) -> bool {
        self.word.is_empty()
    }
}

// Word length first, then variable, then the word itself.
impl Ord for DVar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then(self.var.cmp(&other.var))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for DVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A product of differential variables. The empty product is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct DMono(pub Vec<DVar>);

impl DMono {
    pub fn one() -> DMono {
        DMono(Vec::new())
    }

    pub fn new(flavor: Flavor, factors: Vec<DVar>) -> DMono {
        let mut m = DMono(
            factors
                .into_iter()
                .map(|f| DVar::new(flavor, f.word, f.var))
                .collect(),
        );
        m.canonicalize(flavor);
        m
    }

    fn canonicalize(&mut self, flavor: Flavor) {
        if flavor.mult_commutes() {
            self.0.sort();
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[DVar] {
        &self.0
    }

    pub fn mul(&self, other: &DMono, flavor: Flavor) -> DMono {
        let mut f = Vec::with_capacity(self.0.len() + other.0.len());
        f.extend_from_slice(&self.0);
        f.extend_from_slice(&other.0);
        let mut m = DMono(f);
        m.canonicalize(flavor);
        m
    }

    /// Total number of operation occurrences.
    pub fn op_count(&self) -> usize {
        self.0.iter().map(DVar::order).sum()
    }

    /// Derivation count minus factor count.
    pub fn pdefect(&self) -> Result<i64> {
        if self.0.is_empty() {
            return Err(Error::EmptyMonomial);
        }
        Ok(self.op_count() as i64 - self.0.len() as i64)
    }

    pub fn is_populated(&self) -> bool {
        matches!(self.pdefect(), Ok(-1))
    }
}

/// A flavor-tagged sparse polynomial with exact coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DPoly {
    flavor: Flavor,
    terms: BTreeMap<DMono, Rat>,
}

impl DPoly {
    pub fn zero(flavor: Flavor) -> DPoly {
        DPoly { flavor, terms: BTreeMap::new() }
    }

    pub fn one(flavor: Flavor) -> DPoly {
        DPoly::mono(flavor, DMono::one(), Rat::one())
    }

    pub fn var(flavor: Flavor, x: Var) -> DPoly {
        DPoly::mono(flavor, DMono(vec![DVar::plain(x)]), Rat::one())
    }

    pub fn dvar(flavor: Flavor, word: DWord, x: Var) -> DPoly {
        DPoly::mono(flavor, DMono(vec![DVar::new(flavor, word, x)]), Rat::one())
    }

    /// A single term; the monomial is re-canonicalized for `flavor`.
    pub fn mono(flavor: Flavor, m: DMono, c: Rat) -> DPoly {
        let mut p = DPoly::zero(flavor);
        p.add_term(DMono::new(flavor, m.0), c);
        p
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
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

    pub fn terms(&self) -> impl Iterator<Item = (&DMono, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &DMono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Adds `c * m`; `m` must already be canonical for this flavor.
    pub(crate) fn add_term(&mut self, m: DMono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &DPoly) -> Result<()> {
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch(self.flavor.to_string(), other.flavor.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &DPoly) -> Result<DPoly> {
        self.check(other)?;
        Ok(self.add_same(other))
    }

    pub fn sub(&self, other: &DPoly) -> Result<DPoly> {
        self.check(other)?;
        Ok(self.add_scaled(other, &-Rat::one()))
    }

    pub fn mul(&self, other: &DPoly) -> Result<DPoly> {
        self.check(other)?;
        Ok(self.mul_same(other))
    }

    pub(crate) fn add_same(&self, other: &DPoly) -> DPoly {
        self.add_scaled(other, &Rat::one())
    }

    pub(crate) fn add_scaled(&self, other: &DPoly, c: &Rat) -> DPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, c);
        out
    }

    pub(crate) fn add_assign_scaled(&mut self, other: &DPoly, c: &Rat) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rat) -> DPoly {
        let mut out = DPoly::zero(self.flavor);
        if !c.is_zero() {
            for (m, v) in &self.terms {
                out.terms.insert(m.clone(), v * c);
            }
        }
        out
    }

    pub fn neg(&self) -> DPoly {
        self.scale(&-Rat::one())
    }

    pub(crate) fn mul_same(&self, other: &DPoly) -> DPoly {
        let mut out = DPoly::zero(self.flavor);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2, self.flavor), c1 * c2);
            }
        }
        out
    }

    /// Applies the derivation labelled `w` (Leibniz rule, linear extension).
    pub fn derive(&self, w: Op) -> DPoly {
        let fl = self.flavor;
        let mut out = DPoly::zero(fl);
        for (m, c) in &self.terms {
            for i in 0..m.0.len() {
                let mut f = m.0.clone();
                f[i].word.insert(0, w);
                if fl.derivs_commute() {
                    f[i].word.sort_unstable();
                }
                let mut nm = DMono(f);
                nm.canonicalize(fl);
                out.add_term(nm, c.clone());
            }
        }
        out
    }

    /// Applies a derivation word, innermost (last) operation first.
    pub fn derive_word(&self, word: &[Op]) -> DPoly {
        word.iter().rev().fold(self.clone(), |p, &w| p.derive(w))
    }
}
