//! Maps between trees and differential polynomials.
//!
//! Everything here lives in the commutative algebra with noncommuting
//! derivations ([`PCD`]).

use std::collections::HashMap;

use crate::diffalg::{DMono, DPoly, DVar, Flavor};
use crate::enumeration::{enum_nmne_class, LabelClass};
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::symbol::{Op, Var};
use crate::treealg::{graft, RTree, TreePoly};

pub const PCD: Flavor = Flavor::NCMDCA;

/// `x -> x`, `r(y1,w1,rest;z) -> eval(y1) * D_w1(eval(r(rest;z)))`.
pub fn eval_tree(u: &RTree) -> DPoly {
    match u.children().split_first() {
        None => DPoly::var(PCD, u.root()),
        Some(((y1, w1), rest)) => {
            let tail = RTree::node(rest.to_vec(), u.root());
            eval_tree(y1).mul_same(&eval_tree(&tail).derive(*w1))
        }
    }
}

pub fn eval_in_pcd(p: &TreePoly) -> DPoly {
    let mut out = DPoly::zero(PCD);
    for (t, c) in p.terms() {
        out.add_assign_scaled(&eval_tree(t), c);
    }
    out
}

/// The evaluation restricted to nests.
pub fn g_map(u: &RTree) -> Result<DPoly> {
    if !u.is_nest() {
        return Err(Error::NotNest);
    }
    Ok(eval_tree(u))
}

/// `phi(z) = z`, `phi(r(y1,w1,..,yn,wn;z)) = phi(y1) * y2 ... yn * D[w1..wn](z)`.
pub fn phi(u: &RTree) -> Result<DMono> {
    if !u.is_nmne() {
        return Err(Error::NotNmne);
    }
    let mut factors = Vec::new();
    for t in u.spine() {
        let ch = t.children();
        if ch.is_empty() {
            factors.push(DVar::plain(t.root()));
        } else {
            factors.extend(ch[1..].iter().map(|(c, _)| DVar::plain(c.root())));
            factors.push(DVar { word: t.word(), var: t.root() });
        }
    }
    Ok(DMono::new(PCD, factors))
}

/// One derived factor together with the plain variables grouped with it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PcdBlock {
    pub plain: Vec<Var>,
    pub word: Vec<Op>,
    pub var: Var,
}

/// `x0 * (plain_1 * D[word_1](var_1)) * ... * (plain_s * D[word_s](var_s))`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalForm {
    pub x0: Var,
    pub blocks: Vec<PcdBlock>,
}

impl CanonicalForm {
    pub fn to_mono(&self) -> DMono {
        let mut f = vec![DVar::plain(self.x0)];
        for b in &self.blocks {
            f.extend(b.plain.iter().map(|&x| DVar::plain(x)));
            f.push(DVar { word: b.word.clone(), var: b.var });
        }
        DMono::new(PCD, f)
    }
}

/// Plain variables weakly decreasing; blocks by decreasing length, then
/// head variable, then word (lexicographic), all descending. The first
/// plain variable is `x0` and each block of length `n` takes the next
/// `n - 1` plain variables.
pub fn canonical_pcd_form(m: &DMono) -> Result<CanonicalForm> {
    let d = m.pdefect()?;
    if d != -1 {
        return Err(Error::NotPopulated(d));
    }
    let mut plain: Vec<Var> = m.factors().iter().filter(|f| f.is_plain()).map(|f| f.var).collect();
    plain.sort_unstable_by(|a, b| b.cmp(a));
    let mut derived: Vec<&DVar> = m.factors().iter().filter(|f| !f.is_plain()).collect();
    derived.sort_by(|a, b| {
        b.word.len().cmp(&a.word.len()).then(b.var.cmp(&a.var)).then_with(|| b.word.cmp(&a.word))
    });
    let mut rest = plain.into_iter();
    let x0 = rest.next().ok_or_else(|| Error::Internal("populated monomial without plain variable".into()))?;
    let blocks = derived
        .into_iter()
        .map(|dv| PcdBlock {
            plain: rest.by_ref().take(dv.word.len() - 1).collect(),
            word: dv.word.clone(),
            var: dv.var,
        })
        .collect();
    Ok(CanonicalForm { x0, blocks })
}

/// Inverse of [`phi`]: each block becomes one spine vertex, the first block innermost.
pub fn psi(m: &DMono) -> Result<RTree> {
    let cf = canonical_pcd_form(m)?;
    let mut t = RTree::Leaf(cf.x0);
    for b in cf.blocks {
        let mut children = Vec::with_capacity(b.word.len());
        children.push((t, b.word[0]));
        children.extend(b.plain.iter().zip(&b.word[1..]).map(|(&x, &w)| (RTree::Leaf(x), w)));
        t = RTree::Node { children, root: b.var };
    }
    Ok(t)
}

/// A tree polynomial whose evaluation is `m`.
///
/// Take a derived factor `D[w1..wd](x)` of highest order. For `d = 1`,
/// `m = u * D[w](x)` is the evaluation of `graft(G(u), w, x)`. For larger `d`,
/// pick plain factors `p1..p(d-1)`, write `m = u * p1..p(d-1) * D[w1..wd](x)` and
/// use
///
/// ```text
/// m = eval(graft(u, w1, P * D[w2..wd](x))) - sum_j eval(graft(u * P/pj * D[w2..wd](x), w1, pj))
/// ```
///
/// Every recursive call has fewer derivation occurrences.
pub fn generate_from_x(m: &DMono) -> Result<TreePoly> {
    let d = m.pdefect()?;
    if d != -1 {
        return Err(Error::NotPopulated(d));
    }
    Ok(generate(m))
}

fn generate(m: &DMono) -> TreePoly {
    let f = m.factors();
    let Some(top) = f.iter().max().filter(|v| !v.is_plain()) else {
        return TreePoly::from_tree(RTree::Leaf(f[0].var));
    };
    let top_at = f.iter().position(|v| v == top).expect("max is present");
    let mut others: Vec<DVar> = f.to_vec();
    others.remove(top_at);
    let x = RTree::Leaf(top.var);
    let w1 = top.word[0];
    let d = top.word.len();
    if d == 1 {
        let u = DMono::new(PCD, others);
        return graft(&generate(&u), w1, &TreePoly::from_tree(x));
    }
    let picks: Vec<usize> =
        others.iter().enumerate().filter(|(_, v)| v.is_plain()).map(|(i, _)| i).take(d - 1).collect();
    let p: Vec<DVar> = picks.iter().map(|&i| others[i].clone()).collect();
    let u: Vec<DVar> =
        others.iter().enumerate().filter(|(i, _)| !picks.contains(i)).map(|(_, v)| v.clone()).collect();
    let tail = DVar { word: top.word[1..].to_vec(), var: top.var };

    let mut v = p.clone();
    v.push(tail.clone());
    let mut out = graft(&generate(&DMono::new(PCD, u.clone())), w1, &generate(&DMono::new(PCD, v)));
    for j in 0..p.len() {
        let mut rest = u.clone();
        rest.extend(p.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, v)| v.clone()));
        rest.push(tail.clone());
        let left = generate(&DMono::new(PCD, rest));
        let term = graft(&left, w1, &TreePoly::from_tree(RTree::Leaf(p[j].var)));
        out.add_scaled(&term, &-Rat::one());
    }
    out
}

fn mono_class(m: &DMono) -> LabelClass {
    let mut vars: Vec<Var> = m.factors().iter().map(|f| f.var).collect();
    let mut ops: Vec<Op> = m.factors().iter().flat_map(|f| f.word.iter().copied()).collect();
    vars.sort_unstable();
    ops.sort_unstable();
    (vars, ops)
}

/// Sorted derivation orders of the factors, largest first.
fn order_partition(m: &DMono) -> Vec<usize> {
    let mut v: Vec<usize> = m.factors().iter().map(DVar::order).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Normal form computed by evaluating and solving against the images of the
/// NMNE basis of each label class.
///
/// The system is solved by elimination with pivots chosen in decreasing
/// order of the derivation-order partition. In `g(u)` the word of each spine
/// vertex is spread only over that vertex's own leaves and root, so every
/// term other than `phi(u)` refines some block of `phi(u)`'s partition and is
/// strictly smaller. The pivot for a monomial `m` is therefore the basis tree
/// with `phi(u) = m`, looked up in the enumerated class. Class tables and
/// images are cached.
#[derive(Default)]
pub struct SemanticNormalizer {
    classes: HashMap<LabelClass, HashMap<DMono, RTree>>,
    images: HashMap<RTree, DPoly>,
}

impl SemanticNormalizer {
    pub fn new() -> SemanticNormalizer {
        SemanticNormalizer::default()
    }

    pub fn normalize(&mut self, p: &TreePoly) -> Result<TreePoly> {
        let mut residual = eval_in_pcd(p);
        let mut out = TreePoly::zero();
        while let Some(m) = residual
            .terms()
            .map(|(m, _)| m)
            .max_by(|a, b| order_partition(a).cmp(&order_partition(b)).then_with(|| a.cmp(b)))
            .cloned()
        {
            let table = self.classes.entry(mono_class(&m)).or_insert_with_key(|(v, o)| {
                enum_nmne_class(v, o)
                    .into_iter()
                    .map(|u| (phi(&u).expect("enumerated trees are NMNE"), u))
                    .collect()
            });
            let u = table
                .get(&m)
                .ok_or_else(|| Error::Internal("monomial outside the span of its class".into()))?
                .clone();
            let image = self.images.entry(u.clone()).or_insert_with(|| eval_tree(&u));
            let pivot = image.coeff(&m);
            if pivot.is_zero() {
                return Err(Error::Internal("basis image misses its pivot monomial".into()));
            }
            let c = &residual.coeff(&m) / &pivot;
            residual.add_assign_scaled(image, &-c.clone());
            if !residual.coeff(&m).is_zero() {
                return Err(Error::Internal("pivot elimination left a remainder".into()));
            }
            out.add_term(u, c);
        }
        Ok(out)
    }
}

pub fn normalize_semantic(p: &TreePoly) -> Result<TreePoly> {
    SemanticNormalizer::new().normalize(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{declare_symbols, SymbolTable};
    use crate::syntax::{format_mono, parse_mono, parse_poly, parse_tree, parse_treepoly};
    use crate::treealg::normalize;

    fn abc() -> SymbolTable {
        declare_symbols(&["a", "b", "c"], &["w", "t"]).unwrap()
    }

    fn pp(s: &str, tb: &SymbolTable) -> DPoly {
        parse_poly(s, tb, PCD).unwrap()
    }

    fn tree(s: &str, tb: &SymbolTable) -> RTree {
        parse_tree(s, tb).unwrap()
    }

    #[test]
    fn evaluation() {
        let tb = abc();
        assert_eq!(eval_tree(&tree("a", &tb)), pp("a", &tb));
        assert_eq!(eval_tree(&tree("r(a,w,b,t;c)", &tb)), pp("a*D[w](b)*D[t](c) + a*b*D[w,t](c)", &tb));
        assert_eq!(eval_tree(&tree("r(r(a,w;b),t;c)", &tb)), pp("a*D[w](b)*D[t](c)", &tb));
    }

    #[test]
    fn g_and_phi_differ() {
        let tb = abc();
        let u = tree("r(b,w,a,t;c)", &tb);
        assert_eq!(g_map(&u).unwrap(), pp("b*D[w](a)*D[t](c) + b*a*D[w,t](c)", &tb));
        assert_eq!(phi(&u).unwrap(), parse_mono("b*a*D[w,t](c)", &tb, PCD).unwrap());
        let v = tree("r(r(a,t;c),w;b)", &tb);
        assert_eq!(g_map(&v).unwrap(), pp("a*D[t](c)*D[w](b)", &tb));
        assert!(g_map(&tree("r(a,w,r(a,w;b),t;c)", &tb)).is_err());
        assert!(phi(&tree("r(a,w,b,t;c)", &tb)).is_err());
        assert_eq!(phi(&tree("c", &tb)).unwrap(), parse_mono("c", &tb, PCD).unwrap());
    }

    #[test]
    fn reference_phi_and_psi() {
        let tb = declare_symbols(&["a", "b", "c", "d"], &["al", "be", "ga"]).unwrap();
        let u = tree("r(r(r(d,be,d,al,c,ga,c,be;c),be,c,be,b,al;d),ga,a,be;a)", &tb);
        let m = phi(&u).unwrap();
        let expected = parse_mono(
            "d*d*c*c*c*b*a*D[be,al,ga,be](c)*D[be,be,al](d)*D[ga,be](a)",
            &tb,
            PCD,
        )
        .unwrap();
        assert_eq!(m, expected, "{}", format_mono(&m, &tb));
        assert_eq!(psi(&m).unwrap(), u);
    }

    #[test]
    fn psi_on_symbolic_example() {
        let tb = declare_symbols(&["x4", "x3", "x2", "x1"], &["w1", "w2", "w3"]).unwrap();
        let m = parse_mono("x1*x2*D[w1,w2](x3)*D[w3](x4)", &tb, PCD).unwrap();
        let cf = canonical_pcd_form(&m).unwrap();
        assert_eq!(cf.x0, tb.var("x1").unwrap());
        assert_eq!(cf.blocks.len(), 2);
        assert_eq!(psi(&m).unwrap(), tree("r(r(x1,w1,x2,w2;x3),w3;x4)", &tb));
    }

    #[test]
    fn canonical_form_ordering() {
        let tb = abc();
        let m = parse_mono("D[t](a)*b*b*D[w,w](c)", &tb, PCD).unwrap();
        let cf = canonical_pcd_form(&m).unwrap();
        let (a, b, c) = (Var(0), Var(1), Var(2));
        assert_eq!(cf.x0, b);
        assert_eq!(cf.blocks[0], PcdBlock { plain: vec![b], word: vec![Op(0), Op(0)], var: c });
        assert_eq!(cf.blocks[1], PcdBlock { plain: vec![], word: vec![Op(1)], var: a });
        assert_eq!(cf.to_mono(), m);
        assert_eq!(phi(&psi(&m).unwrap()).unwrap(), m);
        assert!(canonical_pcd_form(&parse_mono("D[w](a)", &tb, PCD).unwrap()).is_err());
        let single = canonical_pcd_form(&parse_mono("a", &tb, PCD).unwrap()).unwrap();
        assert!(single.blocks.is_empty());
    }

    #[test]
    fn generation() {
        let tb = abc();
        let m = parse_mono("a*D[w](b)", &tb, PCD).unwrap();
        assert_eq!(generate_from_x(&m).unwrap(), parse_treepoly("r(a,w;b)", &tb).unwrap());
        let a = parse_mono("a", &tb, PCD).unwrap();
        assert_eq!(generate_from_x(&a).unwrap(), parse_treepoly("a", &tb).unwrap());
        for s in ["a*a*D[w,t](a)", "a*b*c*D[t,w,t](a)", "a*D[w](c)*D[t](a)", "b*a*D[w,w](c)*D[t](b)", "a*b*D[w,t](b)*D[t](c)"] {
            let m = parse_mono(s, &tb, PCD).unwrap();
            let g = generate_from_x(&m).unwrap();
            assert_eq!(eval_in_pcd(&g), DPoly::mono(PCD, m, Rat::one()), "{s}");
        }
        assert!(generate_from_x(&parse_mono("D[w](a)", &tb, PCD).unwrap()).is_err());
    }

    #[test]
    fn semantic_normal_form() {
        let tb = abc();
        let p = parse_treepoly("r(a,w,b,t;c)", &tb).unwrap();
        assert_eq!(normalize_semantic(&p).unwrap(), normalize(&p));
        let a = parse_treepoly("a", &tb).unwrap();
        assert_eq!(normalize_semantic(&a).unwrap(), a);
        let rel = parse_treepoly("r(r(a,w;b),t;c) - r(r(a,t;c),w;b)", &tb).unwrap();
        assert!(normalize_semantic(&rel).unwrap().is_zero());
    }

    #[test]
    fn exhaustive_agreement_up_to_four_edges() {
        let tb = abc();
        let vars: Vec<Var> = tb.vars().take(2).collect();
        let ops: Vec<Op> = tb.ops().collect();
        let mut sem = SemanticNormalizer::new();
        let mut rw = crate::treealg::Normalizer::new();
        for k in 0..=4 {
            for u in crate::enumeration::all_trees(&vars, &ops, k, 100_000).unwrap() {
                let p = TreePoly::from_tree(u.clone());
                let n = rw.try_normalize(&p).unwrap();
                assert!(n.trees().all(RTree::is_nmne));
                assert_eq!(eval_in_pcd(&n), eval_tree(&u));
                assert_eq!(sem.normalize(&p).unwrap(), n);
            }
        }
    }
}
