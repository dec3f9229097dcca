//! Interned variables and operations with declaration-order ranks.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A variable, identified by its rank in the declared order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub u32);

/// An operation (derivation label), identified by its rank.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Op(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Role {
    Var,
    Op,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Var => "variable",
            Role::Op => "operation",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Symbol {
    pub name: String,
    pub role: Role,
    pub rank: u32,
}

/// Immutable table of declared symbols.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    vars: Vec<String>,
    ops: Vec<String>,
    index: HashMap<String, Symbol>,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Builds a table whose ranks follow list position.
pub fn declare_symbols<S: AsRef<str>>(vars: &[S], ops: &[S]) -> Result<SymbolTable> {
    if vars.is_empty() {
        return Err(Error::EmptyDeclaration("variables"));
    }
    if ops.is_empty() {
        return Err(Error::EmptyDeclaration("operations"));
    }
    let mut index = HashMap::new();
    for (role, names) in [(Role::Var, vars), (Role::Op, ops)] {
        for (rank, name) in names.iter().enumerate() {
            let name = name.as_ref();
            if !is_identifier(name) {
                return Err(Error::InvalidIdentifier(name.to_string()));
            }
            // `D` and `r` would be read as constructors by the term grammar.
            if name == "D" || name == "r" {
                return Err(Error::InvalidIdentifier(name.to_string()));
            }
            if let Some(prev) = index.get(name) {
                let prev: &Symbol = prev;
                return Err(if prev.role == role {
                    Error::DuplicateSymbol(name.to_string())
                } else {
                    Error::SymbolInBothRoles(name.to_string())
                });
            }
            let sym = Symbol { name: name.to_string(), role, rank: rank as u32 };
            index.insert(name.to_string(), sym);
        }
    }
    Ok(SymbolTable {
        vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
        ops: ops.iter().map(|s| s.as_ref().to_string()).collect(),
        index,
    })
}

impl SymbolTable {
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.vars.len() as u32).map(Var)
    }

    pub fn ops(&self) -> impl Iterator<Item = Op> + '_ {
        (0..self.ops.len() as u32).map(Op)
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    pub fn lookup(&self, name: &str) -> Option<&Symbol> {
        self.index.get(name)
    }

    pub fn var(&self, name: &str) -> Result<Var> {
        match self.index.get(name) {
            Some(s) if s.role == Role::Var => Ok(Var(s.rank)),
            _ => Err(Error::UndeclaredSymbol { role: "variable", name: name.to_string() }),
        }
    }

    pub fn op(&self, name: &str) -> Result<Op> {
        match self.index.get(name) {
            Some(s) if s.role == Role::Op => Ok(Op(s.rank)),
            _ => Err(Error::UndeclaredSymbol { role: "operation", name: name.to_string() }),
        }
    }

    pub fn var_name(&self, v: Var) -> &str {
        &self.vars[v.0 as usize]
    }

    pub fn op_name(&self, o: Op) -> &str {
        &self.ops[o.0 as usize]
    }
}

/// Lexicographic comparison of operation words; a proper prefix is smaller.
pub fn lex_compare(u: &[Op], v: &[Op]) -> Ordering {
    u.cmp(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_declaration() {
        let t = declare_symbols(&["a"], &["w"]).unwrap();
        assert_eq!(t.lookup("a").unwrap().rank, 0);
        assert_eq!(t.lookup("w").unwrap().rank, 0);
        assert_eq!(t.lookup("w").unwrap().role, Role::Op);
    }

    #[test]
    fn declaration_order_is_rank_order() {
        let t = declare_symbols(&["a", "b", "c", "d"], &["al", "be", "ga"]).unwrap();
        let vs: Vec<Var> = ["a", "b", "c", "d"].iter().map(|n| t.var(n).unwrap()).collect();
        assert!(vs.windows(2).all(|w| w[0] < w[1]));
        assert!(t.op("al").unwrap() < t.op("be").unwrap());
        assert!(t.op("be").unwrap() < t.op("ga").unwrap());
        let t = declare_symbols(&["z", "a"], &["w"]).unwrap();
        assert!(t.var("z").unwrap() < t.var("a").unwrap());
    }

    #[test]
    fn declaration_errors() {
        assert_eq!(
            declare_symbols(&["a", "a"], &["w"]).unwrap_err(),
            Error::DuplicateSymbol("a".into())
        );
        assert_eq!(
            declare_symbols(&["a"], &["a"]).unwrap_err(),
            Error::SymbolInBothRoles("a".into())
        );
        assert!(matches!(
            declare_symbols::<&str>(&[], &["w"]).unwrap_err(),
            Error::EmptyDeclaration(_)
        ));
        assert!(matches!(
            declare_symbols(&["1a"], &["w"]).unwrap_err(),
            Error::InvalidIdentifier(_)
        ));
    }

    #[test]
    fn lex_order() {
        let (al, be, ga) = (Op(0), Op(1), Op(2));
        assert_eq!(lex_compare(&[al, be], &[al, be]), Ordering::Equal);
        assert_eq!(lex_compare(&[al, ga], &[be, al]), Ordering::Less);
        assert_eq!(lex_compare(&[al], &[al, be]), Ordering::Less);
    }

    #[test]
    fn lex_order_matches_sorted_enumeration() {
        // Words of length <= 2 over {0,1}, listed by hand in the expected order.
        let expected: Vec<Vec<Op>> = vec![
            vec![],
            vec![Op(0)],
            vec![Op(0), Op(0)],
            vec![Op(0), Op(1)],
            vec![Op(1)],
            vec![Op(1), Op(0)],
            vec![Op(1), Op(1)],
        ];
        let mut shuffled = expected.clone();
        shuffled.reverse();
        shuffled.sort_by(|a, b| lex_compare(a, b));
        assert_eq!(shuffled, expected);
        for a in &expected {
            for b in &expected {
                assert_eq!(lex_compare(a, b), lex_compare(b, a).reverse());
            }
        }
    }
}
