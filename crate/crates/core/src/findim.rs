//! Finite-dimensional algebras given by structure constants.
//!
//! Basis indices are 0-based. A linear map is stored by columns:
//! `d(e_j) = sum_i m[i][j] e_i`.

use crate::error::{Error, Result};
use crate::identities::{residuals, IdentitySystem, Products};
use crate::rat::Rat;

/// `t[i][j][k]` is the coefficient of `e_k` in `e_i * e_j`.
pub type Tensor = Vec<Vec<Vec<Rat>>>;

pub fn zero_tensor(n: usize) -> Tensor {
    vec![vec![vec![Rat::zero(); n]; n]; n]
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinMap {
    m: Vec<Vec<Rat>>,
}

impl LinMap {
    pub fn zero(n: usize) -> LinMap {
        LinMap { m: vec![vec![Rat::zero(); n]; n] }
    }

    pub fn identity(n: usize) -> LinMap {
        let mut l = LinMap::zero(n);
        for i in 0..n {
            l.m[i][i] = Rat::one();
        }
        l
    }

    pub fn from_rows(m: Vec<Vec<Rat>>) -> Result<LinMap> {
        let n = m.len();
        if m.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("matrix is not square".into()));
        }
        Ok(LinMap { m })
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.m[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.m[i][j] = v;
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        (0..self.dim())
            .map(|i| {
                self.m[i].iter().zip(v).fold(Rat::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc + a * b
                    }
                })
            })
            .collect()
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &LinMap) -> LinMap {
        let n = self.dim();
        let cols: Vec<Vec<Rat>> = (0..n).map(|j| self.apply(&other.column(j))).collect();
        LinMap { m: (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect() }
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        self.m.iter().map(|r| r[j].clone()).collect()
    }

    pub fn sub(&self, other: &LinMap) -> LinMap {
        LinMap {
            m: self.m.iter().zip(&other.m).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> LinMap {
        LinMap { m: self.m.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() }
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        self.sub(&other.scale(&-Rat::one()))
    }

    pub fn commutator(&self, other: &LinMap) -> LinMap {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(Rat::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct FinDimAlgebra {
    pub dim: usize,
    pub mult: Tensor,
    pub bracket: Option<Tensor>,
    /// Named linear maps supplied with the algebra (not yet verified).
    pub maps: Vec<(String, LinMap)>,
}

pub fn basis(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

fn bilinear(t: &Tensor, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = t.len();
    let mut out = vec![Rat::zero(); n];
    for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, bj) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let f = ai * bj;
            for (k, c) in t[i][j].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                out[k] += &(&f * c);
            }
        }
    }
    out
}

fn vsub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vadd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

fn check_tensor(t: &Tensor, n: usize) -> Result<()> {
    if t.len() != n || t.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
        return Err(Error::Shape(format!("structure constants must be {n}x{n}x{n}")));
    }
    Ok(())
}

/// Outcome of a Poisson check whose preconditions hold.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoissonCheck {
    pub holds: bool,
    /// `(i, j, k)` with `[e_i, e_j e_k] != [e_i, e_j] e_k + e_j [e_i, e_k]`.
    pub witness: Option<(usize, usize, usize)>,
}

impl FinDimAlgebra {
    pub fn new(mult: Tensor, bracket: Option<Tensor>) -> Result<FinDimAlgebra> {
        let dim = mult.len();
        if dim == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        check_tensor(&mult, dim)?;
        if let Some(b) = &bracket {
            check_tensor(b, dim)?;
        }
        Ok(FinDimAlgebra { dim, mult, bracket, maps: Vec::new() })
    }

    pub fn mul(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        bilinear(&self.mult, a, b)
    }

    pub fn bracket(&self, a: &[Rat], b: &[Rat]) -> Result<Vec<Rat>> {
        self.bracket.as_ref().map(|t| bilinear(t, a, b)).ok_or(Error::NoBracket)
    }

    fn check_map(&self, d: &LinMap) -> Result<()> {
        if d.dim() != self.dim {
            return Err(Error::Shape(format!("map of size {} on an algebra of dimension {}", d.dim(), self.dim)));
        }
        Ok(())
    }

    /// First basis pair where the Leibniz rule fails, if any.
    pub fn derivation_witness(&self, d: &LinMap) -> Result<Option<(usize, usize)>> {
        self.check_map(d)?;
        let n = self.dim;
        let images: Vec<Vec<Rat>> = (0..n).map(|i| d.column(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let (ei, ej) = (basis(n, i), basis(n, j));
                let lhs = d.apply(&self.mul(&ei, &ej));
                let rhs = vadd(&self.mul(&images[i], &ej), &self.mul(&ei, &images[j]));
                if lhs != rhs {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_derivation(&self, d: &LinMap) -> Result<bool> {
        Ok(self.derivation_witness(d)?.is_none())
    }

    pub fn is_commutative(&self) -> Option<(usize, usize)> {
        let n = self.dim;
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| self.mult[i][j] != self.mult[j][i])
    }

    /// A basis triple with `(e_i e_j) e_k != e_i (e_j e_k)`, if any.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        let e = |i| basis(n, i);
        (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .find(|&(i, j, k)| {
                self.mul(&self.mul(&e(i), &e(j)), &e(k)) != self.mul(&e(i), &self.mul(&e(j), &e(k)))
            })
    }

    /// Matrix of `y -> [v, y]`.
    pub fn ad(&self, v: &[Rat]) -> Result<LinMap> {
        let n = self.dim;
        if v.len() != n {
            return Err(Error::Shape("vector length differs from dimension".into()));
        }
        let cols: Vec<Vec<Rat>> = (0..n).map(|j| self.bracket(v, &basis(n, j))).collect::<Result<_>>()?;
        Ok(LinMap { m: (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect() })
    }

    fn check_lie(&self) -> Result<()> {
        let n = self.dim;
        let b = self.bracket.as_ref().ok_or(Error::NoBracket)?;
        for i in 0..n {
            for j in 0..n {
                if b[i][j].iter().zip(&b[j][i]).any(|(x, y)| !(x + y).is_zero()) {
                    return Err(Error::NotAntisymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (ei, ej, ek) = (basis(n, i), basis(n, j), basis(n, k));
                    let t1 = self.bracket(&ei, &self.bracket(&ej, &ek)?)?;
                    let t2 = self.bracket(&ej, &self.bracket(&ek, &ei)?)?;
                    let t3 = self.bracket(&ek, &self.bracket(&ei, &ej)?)?;
                    if !is_zero_vec(&vadd(&vadd(&t1, &t2), &t3)) {
                        return Err(Error::JacobiFailure(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks `[x, yz] = [x, y] z + y [x, z]` on basis triples, after
    /// verifying that the product is commutative and the bracket is a Lie bracket.
    pub fn check_poisson(&self) -> Result<PoissonCheck> {
        if let Some((i, j)) = self.is_commutative() {
            return Err(Error::NotCommutative(i, j));
        }
        self.check_lie()?;
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (ei, ej, ek) = (basis(n, i), basis(n, j), basis(n, k));
                    let lhs = self.bracket(&ei, &self.mul(&ej, &ek))?;
                    let rhs = vadd(
                        &self.mul(&self.bracket(&ei, &ej)?, &ek),
                        &self.mul(&ej, &self.bracket(&ei, &ek)?),
                    );
                    if lhs != rhs {
                        return Ok(PoissonCheck { holds: false, witness: Some((i, j, k)) });
                    }
                }
            }
        }
        Ok(PoissonCheck { holds: true, witness: None })
    }

    /// Whether every `ad(e_i)` is a derivation of the product.
    pub fn all_ad_are_derivations(&self) -> Result<bool> {
        for i in 0..self.dim {
            if !self.is_derivation(&self.ad(&basis(self.dim, i))?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Structure constants of `x |> y = x d(y)` for a verified derivation `d`.
    pub fn induced_product_table(&self, d: &LinMap) -> Result<Tensor> {
        if let Some((i, j)) = self.derivation_witness(d)? {
            return Err(Error::NotDerivation(i, j));
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.mul(&basis(n, i), &d.column(j))).collect())
            .collect())
    }
}

pub fn commutes(d1: &LinMap, d2: &LinMap) -> Result<bool> {
    if d1.dim() != d2.dim() {
        return Err(Error::Shape("maps of different sizes".into()));
    }
    Ok(d1.commutator(d2).is_zero())
}

/// The products `x |>_w y = x d_w(y)` and `x <|_w y = d_w(x) y`, labelled by
/// an index into a list of derivations.
pub struct InducedOnAlgebra<'a> {
    pub algebra: &'a FinDimAlgebra,
    pub derivations: &'a [LinMap],
}

impl Products for InducedOnAlgebra<'_> {
    type Elem = Vec<Rat>;
    type Label = usize;

    fn right(&self, x: &Vec<Rat>, w: usize, y: &Vec<Rat>) -> Vec<Rat> {
        self.algebra.mul(x, &self.derivations[w].apply(y))
    }

    fn left(&self, x: &Vec<Rat>, w: usize, y: &Vec<Rat>) -> Vec<Rat> {
        self.algebra.mul(&self.derivations[w].apply(x), y)
    }

    fn add(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Vec<Rat> {
        vadd(a, b)
    }

    fn sub(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Vec<Rat> {
        vsub(a, b)
    }
}

/// A failing identity at a basis triple and a pair of derivation labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdentityFailure {
    pub identity: &'static str,
    pub basis: (usize, usize, usize),
    pub labels: (usize, usize),
}

/// Evaluates `sys` on every basis triple and every pair of derivations.
/// Each derivation is verified first.
pub fn identity_failures(
    algebra: &FinDimAlgebra,
    derivations: &[LinMap],
    sys: IdentitySystem,
) -> Result<Vec<IdentityFailure>> {
    for d in derivations {
        if let Some((i, j)) = algebra.derivation_witness(d)? {
            return Err(Error::NotDerivation(i, j));
        }
    }
    let p = InducedOnAlgebra { algebra, derivations };
    let n = algebra.dim;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y, z) = (basis(n, i), basis(n, j), basis(n, k));
                for w in 0..derivations.len() {
                    for t in 0..derivations.len() {
                        let r = residuals(&p, sys, &x, &y, &z, w, t);
                        for (name, v) in sys.names().iter().zip(r) {
                            if !is_zero_vec(&v) {
                                out.push(IdentityFailure { identity: name, basis: (i, j, k), labels: (w, t) });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Reads the plain-text tensor format:
///
/// ```text
/// dim 3
/// mult:
/// 0 1 1 1        # e_0 * e_1 = e_1
/// bracket:
/// 1 2 2 -1/2
/// derivation dx:
/// 0 1 1          # entry (row 0, column 1), so d(e_1) has 1 on e_0
/// ```
///
/// Only nonzero entries are listed; `#` starts a comment.
pub fn parse_algebra(text: &str) -> Result<FinDimAlgebra> {
    enum Section {
        None,
        Mult,
        Bracket,
        Map(usize),
    }
    let syntax = |line: usize, message: String| Error::Syntax { column: line, message };
    let mut dim: Option<usize> = None;
    let mut mult: Option<Tensor> = None;
    let mut bracket: Option<Tensor> = None;
    let mut maps: Vec<(String, LinMap)> = Vec::new();
    let mut section = Section::None;
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("dim") {
            let n: usize = rest.trim().parse().map_err(|_| syntax(ln, format!("line {ln}: bad dimension")))?;
            if n == 0 || dim.is_some() {
                return Err(syntax(ln, format!("line {ln}: dimension must be given once and be positive")));
            }
            dim = Some(n);
            continue;
        }
        let n = dim.ok_or_else(|| syntax(ln, format!("line {ln}: `dim n` must come first")))?;
        if let Some(head) = line.strip_suffix(':') {
            section = match head.trim() {
                "mult" => {
                    mult.get_or_insert_with(|| zero_tensor(n));
                    Section::Mult
                }
                "bracket" => {
                    bracket.get_or_insert_with(|| zero_tensor(n));
                    Section::Bracket
                }
                h => match h.strip_prefix("derivation") {
                    Some(name) if !name.trim().is_empty() => {
                        maps.push((name.trim().to_string(), LinMap::zero(n)));
                        Section::Map(maps.len() - 1)
                    }
                    _ => return Err(syntax(ln, format!("line {ln}: unknown section `{h}`"))),
                },
            };
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let index = |s: &str| -> Result<usize> {
            let i: usize = s.parse().map_err(|_| syntax(ln, format!("line {ln}: bad index `{s}`")))?;
            if i >= n {
                return Err(syntax(ln, format!("line {ln}: index {i} out of range")));
            }
            Ok(i)
        };
        let value = |s: &str| -> Result<Rat> {
            s.parse().map_err(|_| syntax(ln, format!("line {ln}: bad coefficient `{s}`")))
        };
        match &section {
            Section::None => return Err(syntax(ln, format!("line {ln}: entry outside a section"))),
            Section::Mult | Section::Bracket => {
                let [i, j, k, c] = fields[..] else {
                    return Err(syntax(ln, format!("line {ln}: expected `i j k p/q`")));
                };
                let t = if matches!(section, Section::Mult) { mult.as_mut() } else { bracket.as_mut() };
                t.expect("section initialised")[index(i)?][index(j)?][index(k)?] = value(c)?;
            }
            Section::Map(idx) => {
                let [i, j, c] = fields[..] else {
                    return Err(syntax(ln, format!("line {ln}: expected `i j p/q`")));
                };
                maps[*idx].1.set(index(i)?, index(j)?, value(c)?);
            }
        }
    }
    let n = dim.ok_or_else(|| syntax(1, "missing `dim n`".into()))?;
    let mut a = FinDimAlgebra::new(mult.unwrap_or_else(|| zero_tensor(n)), bracket)?;
    a.maps = maps;
    Ok(a)
}

/// Fixtures used by tests and the command line.
pub mod fixtures {
    use super::*;

    /// `k[x]/(x^n)` with basis `1, x, .., x^(n-1)`.
    pub fn truncated_polynomials(n: usize) -> FinDimAlgebra {
        let mut t = zero_tensor(n);
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    t[i][j][i + j] = Rat::one();
                }
            }
        }
        FinDimAlgebra::new(t, None).expect("well-shaped")
    }

    /// `f(x) d/dx` on `k[x]/(x^n)`, with `f` given by its coefficients.
    pub fn poly_vector_field(n: usize, f: &[Rat]) -> LinMap {
        let mut d = LinMap::zero(n);
        for j in 1..n {
            // d(x^j) = j x^(j-1) f(x)
            for (p, c) in f.iter().enumerate() {
                let deg = j - 1 + p;
                if deg < n && !c.is_zero() {
                    let v = d.entry(deg, j) + &(c * &Rat::int(j as i64));
                    d.set(deg, j, v);
                }
            }
        }
        d
    }

    /// The algebra of 2x2 matrices, basis `E11, E12, E21, E22`.
    pub fn matrices_2x2() -> FinDimAlgebra {
        let idx = |r: usize, c: usize| 2 * r + c;
        let mut t = zero_tensor(4);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    // E_ab E_bc = E_ac
                    t[idx(a, b)][idx(b, c)][idx(a, c)] = Rat::one();
                }
            }
        }
        FinDimAlgebra::new(t, None).expect("well-shaped")
    }

    /// `y -> x y - y x` on 2x2 matrices, `x` given row-major.
    pub fn matrix_ad(x: [[i64; 2]; 2]) -> LinMap {
        let a = matrices_2x2();
        let xv: Vec<Rat> = x.iter().flatten().map(|&c| Rat::int(c)).collect();
        let mut d = LinMap::zero(4);
        for j in 0..4 {
            let e = basis(4, j);
            let img = vsub(&a.mul(&xv, &e), &a.mul(&e, &xv));
            for (i, c) in img.into_iter().enumerate() {
                d.set(i, j, c);
            }
        }
        d
    }

    /// Two-dimensional Poisson algebra: zero product, bracket `[e0, e1] = e1`.
    pub fn poisson_2d() -> FinDimAlgebra {
        let mut b = zero_tensor(2);
        b[0][1][1] = Rat::one();
        b[1][0][1] = -Rat::one();
        FinDimAlgebra::new(zero_tensor(2), Some(b)).expect("well-shaped")
    }

    /// `k 1 + L` for the two-dimensional nonabelian Lie algebra `L` (`[a, b] = b`),
    /// with `L L = 0` and `1` a unit: basis `1, a, b`.
    pub fn poisson_unit_extension() -> FinDimAlgebra {
        let mut m = zero_tensor(3);
        for i in 0..3 {
            m[0][i][i] = Rat::one();
            m[i][0][i] = Rat::one();
        }
        let mut b = zero_tensor(3);
        b[1][2][2] = Rat::one();
        b[2][1][2] = -Rat::one();
        FinDimAlgebra::new(m, Some(b)).expect("well-shaped")
    }

    /// Any commutative algebra with the zero bracket.
    pub fn with_trivial_bracket(a: &FinDimAlgebra) -> FinDimAlgebra {
        FinDimAlgebra::new(a.mult.clone(), Some(zero_tensor(a.dim))).expect("well-shaped")
    }

    /// `k[x]/(x^3)` with the Lie bracket `[1, x] = x^2`: a Lie bracket that
    /// violates the Leibniz compatibility.
    pub fn perturbed_non_poisson() -> FinDimAlgebra {
        let mut a = truncated_polynomials(3);
        let mut b = zero_tensor(3);
        b[0][1][2] = Rat::one();
        b[1][0][2] = -Rat::one();
        a.bracket = Some(b);
        a
    }
}
