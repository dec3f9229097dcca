//! Free multi-differential algebras in four flavors.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::identities::{residuals, IdentitySystem, Products};
use crate::rat::Rat;
use crate::symbol::{Op, Var};

mod poly;

pub use poly::{DMono, DPoly, DVar, DWord};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Mult {
    Commutative,
    Noncommutative,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Derivs {
    Commuting,
    Noncommuting,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Flavor {
    pub mult: Mult,
    pub derivs: Derivs,
}

impl Flavor {
    pub const CMDCA: Flavor = Flavor { mult: Mult::Commutative, derivs: Derivs::Commuting };
    pub const NCMDCA: Flavor = Flavor { mult: Mult::Commutative, derivs: Derivs::Noncommuting };
    pub const CMDNCA: Flavor = Flavor { mult: Mult::Noncommutative, derivs: Derivs::Commuting };
    pub const NCMDNCA: Flavor =
        Flavor { mult: Mult::Noncommutative, derivs: Derivs::Noncommuting };

    pub const ALL: [Flavor; 4] = [Flavor::CMDCA, Flavor::NCMDCA, Flavor::CMDNCA, Flavor::NCMDNCA];

    pub fn mult_commutes(self) -> bool {
        self.mult == Mult::Commutative
    }

    pub fn derivs_commute(self) -> bool {
        self.derivs == Derivs::Commuting
    }

    /// The identity system satisfied by the products this flavor induces.
    pub fn identity_system(self) -> IdentitySystem {
        match (self.mult, self.derivs) {
            (Mult::Commutative, Derivs::Commuting) => IdentitySystem::Nv,
            (Mult::Commutative, Derivs::Noncommuting) => IdentitySystem::Ncmn,
            (Mult::Noncommutative, Derivs::Commuting) => IdentitySystem::Mnca,
            (Mult::Noncommutative, Derivs::Noncommuting) => IdentitySystem::Ncncna,
        }
    }

    /// Two-letter code: multiplication then derivations, `c` or `n` each.
    pub fn code(self) -> &'static str {
        match (self.mult, self.derivs) {
            (Mult::Commutative, Derivs::Commuting) => "cc",
            (Mult::Commutative, Derivs::Noncommuting) => "cn",
            (Mult::Noncommutative, Derivs::Commuting) => "nc",
            (Mult::Noncommutative, Derivs::Noncommuting) => "nn",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match (self.mult, self.derivs) {
            (Mult::Commutative, Derivs::Commuting) => "CMDCA",
            (Mult::Commutative, Derivs::Noncommuting) => "NCMDCA",
            (Mult::Noncommutative, Derivs::Commuting) => "CMDNCA",
            (Mult::Noncommutative, Derivs::Noncommuting) => "NCMDNCA",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Flavor, String> {
        Flavor::ALL
            .into_iter()
            .find(|f| f.code() == s || f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown flavor `{s}` (expected cc, cn, nc or nn)"))
    }
}

pub fn poly_mul(p: &DPoly, q: &DPoly) -> Result<DPoly> {
    p.mul(q)
}

pub fn derive(p: &DPoly, w: Op) -> DPoly {
    p.derive(w)
}

/// `x |>_w y = x * D_w(y)`
pub fn tri_right(p: &DPoly, w: Op, q: &DPoly) -> Result<DPoly> {
    p.mul(&q.derive(w))
}

/// `x <|_w y = D_w(x) * y`
pub fn tri_left(p: &DPoly, w: Op, q: &DPoly) -> Result<DPoly> {
    p.derive(w).mul(q)
}

pub fn pdefect(m: &DMono) -> Result<i64> {
    m.pdefect()
}

pub fn is_populated(m: &DMono) -> bool {
    m.is_populated()
}

/// Extends a variable assignment to the unique differential algebra
/// homomorphism that relabels derivations through `dmap`.
pub fn apply_hom(
    p: &DPoly,
    f: &HashMap<Var, DPoly>,
    dmap: impl Fn(Op) -> Op,
) -> Result<DPoly> {
    let target = f.values().next().map(DPoly::flavor).unwrap_or(p.flavor());
    if let Some(bad) = f.values().find(|q| q.flavor() != target) {
        return Err(Error::FlavorMismatch(target.to_string(), bad.flavor().to_string()));
    }
    let mut image_cache: HashMap<&DVar, DPoly> = HashMap::new();
    let mut out = DPoly::zero(target);
    for (m, c) in p.terms() {
        let mut prod = DPoly::one(target);
        for dv in m.factors() {
            if !image_cache.contains_key(dv) {
                let base = f.get(&dv.var).ok_or(Error::MissingAssignment(dv.var.0))?;
                let word: Vec<Op> = dv.word.iter().map(|&o| dmap(o)).collect();
                image_cache.insert(dv, base.derive_word(&word));
            }
            prod = prod.mul_same(&image_cache[dv]);
        }
        out.add_assign_scaled(&prod, c);
    }
    Ok(out)
}

/// The products induced on a differential polynomial algebra.
#[derive(Clone, Copy, Debug)]
pub struct InducedProducts;

impl Products for InducedProducts {
    type Elem = DPoly;
    type Label = Op;

    fn right(&self, x: &DPoly, w: Op, y: &DPoly) -> DPoly {
        x.mul_same(&y.derive(w))
    }

    fn left(&self, x: &DPoly, w: Op, y: &DPoly) -> DPoly {
        x.derive(w).mul_same(y)
    }

    fn add(&self, a: &DPoly, b: &DPoly) -> DPoly {
        a.add_same(b)
    }

    fn sub(&self, a: &DPoly, b: &DPoly) -> DPoly {
        a.add_scaled(b, &-Rat::one())
    }
}

/// Residuals of the identity system matching `fl`, evaluated with the
/// induced products at `(x, y, z)` and labels `(w, t)`.
pub fn check_identity_suite(
    fl: Flavor,
    x: &DPoly,
    y: &DPoly,
    z: &DPoly,
    w: Op,
    t: Op,
) -> Result<Vec<DPoly>> {
    for p in [x, y, z] {
        if p.flavor() != fl {
            return Err(Error::FlavorMismatch(fl.to_string(), p.flavor().to_string()));
        }
    }
    Ok(residuals(&InducedProducts, fl.identity_system(), x, y, z, w, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Var = Var(0);
    const B: Var = Var(1);
    const C: Var = Var(2);
    const W: Op = Op(0);
    const T: Op = Op(1);

    fn v(fl: Flavor, x: Var) -> DPoly {
        DPoly::var(fl, x)
    }

    fn dv(fl: Flavor, word: &[Op], x: Var) -> DPoly {
        DPoly::dvar(fl, word.to_vec(), x)
    }

    fn mul(p: &DPoly, q: &DPoly) -> DPoly {
        p.mul(q).unwrap()
    }

    #[test]
    fn multiplication_commutativity_by_flavor() {
        let fl = Flavor::CMDCA;
        assert_eq!(mul(&v(fl, A), &v(fl, B)), mul(&v(fl, B), &v(fl, A)));
        let fl = Flavor::CMDNCA;
        assert_ne!(mul(&v(fl, A), &v(fl, B)), mul(&v(fl, B), &v(fl, A)));
    }

    #[test]
    fn difference_of_squares() {
        let fl = Flavor::CMDCA;
        let s = v(fl, A).add(&v(fl, B)).unwrap();
        let d = v(fl, A).sub(&v(fl, B)).unwrap();
        let expected = mul(&v(fl, A), &v(fl, A)).sub(&mul(&v(fl, B), &v(fl, B))).unwrap();
        assert_eq!(mul(&s, &d), expected);
    }

    #[test]
    fn flavor_mismatch_rejected() {
        let e = v(Flavor::CMDCA, A).mul(&v(Flavor::NCMDCA, A)).unwrap_err();
        assert!(matches!(e, Error::FlavorMismatch(..)));
    }

    #[test]
    fn derive_on_generators() {
        let fl = Flavor::NCMDCA;
        let ab = mul(&v(fl, A), &v(fl, B));
        let expected = mul(&dv(fl, &[W], A), &v(fl, B)).add(&mul(&v(fl, A), &dv(fl, &[W], B))).unwrap();
        assert_eq!(derive(&ab, W), expected);
        assert_eq!(derive(&dv(fl, &[T], A), W), dv(fl, &[W, T], A));
        assert_ne!(dv(fl, &[W, T], A), dv(fl, &[T, W], A));
    }

    #[test]
    fn derivations_commute_only_when_declared() {
        for fl in Flavor::ALL {
            let ab = mul(&v(fl, A), &v(fl, B));
            let wt = derive(&derive(&ab, W), T);
            let tw = derive(&derive(&ab, T), W);
            assert_eq!(wt == tw, fl.derivs_commute(), "{fl}");
        }
    }

    #[test]
    fn induced_products_on_generators() {
        let fl = Flavor::NCMDCA;
        assert_eq!(tri_right(&v(fl, A), W, &v(fl, B)).unwrap(), mul(&v(fl, A), &dv(fl, &[W], B)));
        let inner = tri_right(&v(fl, B), T, &v(fl, C)).unwrap();
        let lhs = tri_right(&v(fl, A), W, &inner).unwrap();
        let e1 = mul(&mul(&v(fl, A), &dv(fl, &[W], B)), &dv(fl, &[T], C));
        let e2 = mul(&mul(&v(fl, A), &v(fl, B)), &dv(fl, &[W, T], C));
        assert_eq!(lhs, e1.add(&e2).unwrap());
        assert_eq!(tri_right(&DPoly::one(fl), W, &v(fl, B)).unwrap(), dv(fl, &[W], B));

        assert_eq!(tri_left(&v(fl, A), W, &v(fl, B)).unwrap(), mul(&dv(fl, &[W], A), &v(fl, B)));
        let ab = mul(&v(fl, A), &v(fl, B));
        let left = tri_left(&ab, W, &v(fl, C)).unwrap();
        let expected = mul(&mul(&dv(fl, &[W], A), &v(fl, B)), &v(fl, C))
            .add(&mul(&mul(&v(fl, A), &dv(fl, &[W], B)), &v(fl, C)))
            .unwrap();
        assert_eq!(left, expected);
        assert_eq!(tri_left(&v(fl, A), W, &v(fl, B)).unwrap(), tri_right(&v(fl, B), W, &v(fl, A)).unwrap());
    }

    #[test]
    fn defect_and_population() {
        let m = |fl, f: Vec<DVar>| DMono::new(fl, f);
        let fl = Flavor::NCMDCA;
        let plain = DVar::plain;
        assert_eq!(m(fl, vec![plain(A)]).pdefect().unwrap(), -1);
        let adb = m(fl, vec![plain(A), DVar::new(fl, vec![W], B)]);
        assert_eq!(adb.pdefect().unwrap(), -1);
        assert_eq!(m(fl, vec![DVar::new(fl, vec![W, T], A)]).pdefect().unwrap(), 1);
        assert!(m(fl, vec![plain(A), plain(A), DVar::new(fl, vec![W, T], A)]).is_populated());
        assert!(!m(fl, vec![DVar::new(fl, vec![W], A)]).is_populated());
        assert!(DMono::one().pdefect().is_err());
        assert!(!DMono::one().is_populated());
    }

    #[test]
    fn homomorphisms() {
        let fl = Flavor::NCMDCA;
        let p = mul(&v(fl, A), &dv(fl, &[W], A));
        let id: HashMap<Var, DPoly> = [A, B].iter().map(|&x| (x, v(fl, x))).collect();
        assert_eq!(apply_hom(&p, &id, |o| o).unwrap(), p);
        let relabel: HashMap<Var, DPoly> = [(A, v(fl, B))].into_iter().collect();
        assert_eq!(apply_hom(&p, &relabel, |o| o).unwrap(), mul(&v(fl, B), &dv(fl, &[W], B)));
        let square: HashMap<Var, DPoly> = [(A, mul(&v(fl, A), &v(fl, A)))].into_iter().collect();
        let image = apply_hom(&dv(fl, &[W], A), &square, |o| o).unwrap();
        assert_eq!(image, mul(&dv(fl, &[W], A), &v(fl, A)).scale(&Rat::int(2)));
        assert!(matches!(
            apply_hom(&v(fl, C), &square, |o| o),
            Err(Error::MissingAssignment(2))
        ));
    }

    #[test]
    fn identity_suite_on_generators() {
        for fl in Flavor::ALL {
            let r = check_identity_suite(fl, &v(fl, A), &v(fl, B), &v(fl, C), W, T).unwrap();
            assert_eq!(r.len(), fl.identity_system().names().len());
            assert!(r.iter().all(DPoly::is_zero), "{fl}");
            let z = DPoly::zero(fl);
            let r = check_identity_suite(fl, &z, &z, &z, W, T).unwrap();
            assert!(r.iter().all(DPoly::is_zero));
        }
    }

    #[test]
    fn wrong_system_fails() {
        // The commuting-derivation identity nv2 must fail once derivations stop commuting.
        let fl = Flavor::NCMDCA;
        let r = residuals(&InducedProducts, IdentitySystem::Nv, &v(fl, A), &v(fl, B), &v(fl, C), W, T);
        assert!(r[0].is_zero());
        assert!(!r[1].is_zero());
    }
}
