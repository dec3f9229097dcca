//! The identity systems of the multi-Novikov variants.
//!
//! Each system is a list of named residuals `lhs - rhs` built from two
//! families of products `x |>_w y` and `x <|_w y`. The residuals are
//! evaluated over any [`Products`] implementation, so the same code checks
//! differential polynomials and finite-dimensional algebras.

use std::fmt;

/// The operations an identity residual needs.
pub trait Products {
    type Elem: Clone;
    type Label: Copy;

    /// `x |>_w y`
    fn right(&self, x: &Self::Elem, w: Self::Label, y: &Self::Elem) -> Self::Elem;
    /// `x <|_w y`
    fn left(&self, x: &Self::Elem, w: Self::Label, y: &Self::Elem) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IdentitySystem {
    /// Commuting multi-Novikov: three identities, right products only.
    Nv,
    /// Noncommuting multi-Novikov: two identities, right products only.
    Ncmn,
    /// Six identities mixing both products.
    Mnca,
    /// Two identities mixing both products.
    Ncncna,
}

impl IdentitySystem {
    pub fn names(self) -> &'static [&'static str] {
        match self {
            IdentitySystem::Nv => &["nv1", "nv2", "nv3"],
            IdentitySystem::Ncmn => &["ncmn1", "ncmn2"],
            IdentitySystem::Mnca => &["mnca1", "mnca2", "mnca3", "mnca4", "mnca5", "mnca6"],
            IdentitySystem::Ncncna => &["ncncna1", "ncncna2"],
        }
    }
}

impl fmt::Display for IdentitySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentitySystem::Nv => "nv",
            IdentitySystem::Ncmn => "ncmn",
            IdentitySystem::Mnca => "mnca",
            IdentitySystem::Ncncna => "ncncna",
        })
    }
}

/// Residuals of `sys` at `(x, y, z)` with labels `(w, t)`, in the order of
/// [`IdentitySystem::names`].
pub fn residuals<P: Products>(
    p: &P,
    sys: IdentitySystem,
    x: &P::Elem,
    y: &P::Elem,
    z: &P::Elem,
    w: P::Label,
    t: P::Label,
) -> Vec<P::Elem> {
    let r = |a: &P::Elem, l: P::Label, b: &P::Elem| p.right(a, l, b);
    let l = |a: &P::Elem, lab: P::Label, b: &P::Elem| p.left(a, lab, b);
    let s = |a: &P::Elem, b: &P::Elem| p.sub(a, b);

    // (x |>w y) |>t z - x |>w (y |>t z) = (y |>w x) |>t z - y |>w (x |>t z)
    let nv1 = || {
        let lhs = s(&r(&r(x, w, y), t, z), &r(x, w, &r(y, t, z)));
        let rhs = s(&r(&r(y, w, x), t, z), &r(y, w, &r(x, t, z)));
        s(&lhs, &rhs)
    };
    // (x |>w y) |>t z - x |>w (y |>t z) = (x |>t y) |>w z - x |>t (y |>w z)
    let nv2 = || {
        let lhs = s(&r(&r(x, w, y), t, z), &r(x, w, &r(y, t, z)));
        let rhs = s(&r(&r(x, t, y), w, z), &r(x, t, &r(y, w, z)));
        s(&lhs, &rhs)
    };
    // (x |>w y) |>t z = (x |>t z) |>w y
    let nv3 = || s(&r(&r(x, w, y), t, z), &r(&r(x, t, z), w, y));
    // (x <|w y) |>t z = x <|w (y |>t z)
    let mnca1 = || s(&r(&l(x, w, y), t, z), &l(x, w, &r(y, t, z)));
    // (x |>w y) |>t z - x <|t (y <|w z) = x |>t (y <|w z) - (x |>w y) <|t z
    let mnca2 = || {
        let lhs = s(&r(&r(x, w, y), t, z), &l(x, t, &l(y, w, z)));
        let rhs = s(&r(x, t, &l(y, w, z)), &l(&r(x, w, y), t, z));
        s(&lhs, &rhs)
    };
    // x |>w (y |>t z) - x |>t (y |>w z) = x |>t (y <|w z) - x |>w (y <|t z)
    let mnca3 = || {
        let lhs = s(&r(x, w, &r(y, t, z)), &r(x, t, &r(y, w, z)));
        let rhs = s(&r(x, t, &l(y, w, z)), &r(x, w, &l(y, t, z)));
        s(&lhs, &rhs)
    };
    // (x |>t y) |>w z - x <|t (y <|w z) = x |>w (y <|t z) - (x |>w y) <|t z
    let mnca4 = || {
        let lhs = s(&r(&r(x, t, y), w, z), &l(x, t, &l(y, w, z)));
        let rhs = s(&r(x, w, &l(y, t, z)), &l(&r(x, w, y), t, z));
        s(&lhs, &rhs)
    };
    // (x <|w y) <|t z - (x <|t y) <|w z = (x |>t y) <|w z - (x |>w y) <|t z
    let mnca5 = || {
        let lhs = s(&l(&l(x, w, y), t, z), &l(&l(x, t, y), w, z));
        let rhs = s(&l(&r(x, t, y), w, z), &l(&r(x, w, y), t, z));
        s(&lhs, &rhs)
    };
    // x <|w (y <|t z) - x <|t (y <|w z) = (x |>t y) <|w z - (x |>w y) <|t z
    let mnca6 = || {
        let lhs = s(&l(x, w, &l(y, t, z)), &l(x, t, &l(y, w, z)));
        let rhs = s(&l(&r(x, t, y), w, z), &l(&r(x, w, y), t, z));
        s(&lhs, &rhs)
    };

    match sys {
        IdentitySystem::Nv => vec![nv1(), nv2(), nv3()],
        IdentitySystem::Ncmn => vec![nv1(), nv3()],
        IdentitySystem::Mnca => vec![mnca1(), mnca2(), mnca3(), mnca4(), mnca5(), mnca6()],
        IdentitySystem::Ncncna => vec![mnca1(), mnca2()],
    }
}
