//! Text grammar for trees, differential monomials and polynomials.
//!
//! ```text
//! poly := term (("+"|"-") term)*     term := ["-"] [rat "*"] atom | ["-"] rat
//! rat  := int ["/" int]
//! tree := ident | "r(" (tree "," ident ",")* tree "," ident ";" ident ")"
//! mono := dvar ("*" dvar)*           dvar := ident | "D[" ident ("," ident)* "](" ident ")"
//! ```
//!
//! Error columns are 1-based character positions.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::diffalg::{DMono, DPoly, DVar, Flavor};
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::symbol::SymbolTable;
use crate::treealg::{RTree, TreePoly};

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    table: &'a SymbolTable,
}

impl<'a> Parser<'a> {
    fn new(text: &str, table: &'a SymbolTable) -> Parser<'a> {
        Parser { chars: text.chars().collect(), pos: 0, table }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn peek_raw(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected `{c}`, found `{found}`")),
                None => self.err(format!("expected `{c}`, found end of input")),
            }
        }
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected `{c}`")),
        }
    }

    fn ident(&mut self) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        if !self.peek_raw(0).is_some_and(|c| c.is_ascii_alphabetic()) {
            return match self.peek_raw(0) {
                Some(c) => self.err(format!("expected identifier, found `{c}`")),
                None => self.err("expected identifier, found end of input"),
            };
        }
        while self.peek_raw(0).is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Ok((self.chars[start..self.pos].iter().collect(), start))
    }

    fn resolve<T>(&self, start: usize, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::UndeclaredSymbol { role, name } => Error::Syntax {
                column: start + 1,
                message: format!("undeclared {role} `{name}`"),
            },
            other => other,
        })
    }

    fn var(&mut self) -> Result<crate::symbol::Var> {
        let (name, start) = self.ident()?;
        self.resolve(start, self.table.var(&name))
    }

    fn op(&mut self) -> Result<crate::symbol::Op> {
        let (name, start) = self.ident()?;
        self.resolve(start, self.table.op(&name))
    }

    fn at_keyword(&mut self, kw: char, open: char) -> bool {
        self.skip_ws();
        self.peek_raw(0) == Some(kw) && self.peek_raw(1) == Some(open)
    }

    fn tree(&mut self) -> Result<RTree> {
        if !self.at_keyword('r', '(') {
            return Ok(RTree::Leaf(self.var()?));
        }
        self.pos += 2;
        let mut children = Vec::new();
        loop {
            let child = self.tree()?;
            self.expect(',')?;
            let w = self.op()?;
            children.push((child, w));
            if self.eat(';') {
                break;
            }
            self.expect(',')?;
        }
        let root = self.var()?;
        self.expect(')')?;
        Ok(RTree::Node { children, root })
    }

    fn dvar(&mut self) -> Result<DVar> {
        if !self.at_keyword('D', '[') {
            return Ok(DVar::plain(self.var()?));
        }
        self.pos += 2;
        if self.peek() == Some(']') {
            return self.err("empty derivation word; write the bare variable");
        }
        let mut word = vec![self.op()?];
        while self.eat(',') {
            word.push(self.op()?);
        }
        self.expect(']')?;
        self.expect('(')?;
        let x = self.var()?;
        self.expect(')')?;
        Ok(DVar { word, var: x })
    }

    fn mono(&mut self, flavor: Flavor) -> Result<DMono> {
        let mut f = vec![self.dvar()?];
        while self.eat('*') {
            f.push(self.dvar()?);
        }
        Ok(DMono::new(flavor, f))
    }

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw(0).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse as an integer"))
    }

    /// Parses an optional coefficient. Returns it and whether an atom must follow.
    fn coefficient(&mut self) -> Result<(Rat, bool)> {
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Ok((Rat::one(), true));
        }
        let num = self.int()?;
        let den = if self.eat('/') {
            let at = self.pos;
            let d = self.int()?;
            if d == BigInt::from(0) {
                self.pos = at;
                self.skip_ws();
                return self.err("zero denominator");
            }
            d
        } else {
            BigInt::from(1)
        };
        let c = Rat::from_big(num, den);
        Ok((c, self.eat('*')))
    }

    /// Generic signed sum of `[rat *] atom` terms. `unit` supplies the atom
    /// for a bare coefficient, if the target admits one.
    fn sum<T>(
        &mut self,
        mut atom: impl FnMut(&mut Self) -> Result<T>,
        unit: Option<T>,
    ) -> Result<Vec<(T, Rat)>>
    where
        T: Clone,
    {
        let mut out = Vec::new();
        let mut sign = if self.eat('-') { -Rat::one() } else { Rat::one() };
        loop {
            let (c, need_atom) = self.coefficient()?;
            let a = if need_atom {
                atom(self)?
            } else {
                match &unit {
                    Some(u) => u.clone(),
                    None => return self.err("expected `*` after coefficient"),
                }
            };
            out.push((a, &sign * &c));
            sign = if self.eat('+') {
                Rat::one()
            } else if self.eat('-') {
                -Rat::one()
            } else {
                break;
            };
        }
        self.end()?;
        Ok(out)
    }
}

pub fn parse_tree(text: &str, table: &SymbolTable) -> Result<RTree> {
    let mut p = Parser::new(text, table);
    let t = p.tree()?;
    p.end()?;
    Ok(t)
}

pub fn parse_treepoly(text: &str, table: &SymbolTable) -> Result<TreePoly> {
    let mut p = Parser::new(text, table);
    let terms = p.sum(Parser::tree, None)?;
    Ok(terms.into_iter().collect())
}

pub fn parse_mono(text: &str, table: &SymbolTable, flavor: Flavor) -> Result<DMono> {
    let mut p = Parser::new(text, table);
    let m = p.mono(flavor)?;
    p.end()?;
    Ok(m)
}

pub fn parse_poly(text: &str, table: &SymbolTable, flavor: Flavor) -> Result<DPoly> {
    let mut p = Parser::new(text, table);
    let terms = p.sum(|p| p.mono(flavor), Some(DMono::one()))?;
    let mut out = DPoly::zero(flavor);
    for (m, c) in terms {
        out = out.add_same(&DPoly::mono(flavor, m, c));
    }
    Ok(out)
}

pub fn format_tree(t: &RTree, table: &SymbolTable) -> String {
    let mut s = String::new();
    write_tree(&mut s, t, table);
    s
}

fn write_tree(s: &mut String, t: &RTree, table: &SymbolTable) {
    match t {
        RTree::Leaf(x) => s.push_str(table.var_name(*x)),
        RTree::Node { children, root } => {
            s.push_str("r(");
            for (i, (c, w)) in children.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write_tree(s, c, table);
                s.push(',');
                s.push_str(table.op_name(*w));
            }
            s.push(';');
            s.push_str(table.var_name(*root));
            s.push(')');
        }
    }
}

pub fn format_dvar(d: &DVar, table: &SymbolTable) -> String {
    if d.word.is_empty() {
        return table.var_name(d.var).to_string();
    }
    let word: Vec<&str> = d.word.iter().map(|&o| table.op_name(o)).collect();
    format!("D[{}]({})", word.join(","), table.var_name(d.var))
}

pub fn format_mono(m: &DMono, table: &SymbolTable) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    m.factors().iter().map(|d| format_dvar(d, table)).collect::<Vec<_>>().join("*")
}

fn format_sum<'t, T: 't>(
    terms: impl Iterator<Item = (&'t T, &'t Rat)>,
    atom: impl Fn(&T) -> Option<String>,
) -> String {
    let mut s = String::new();
    for (i, (t, c)) in terms.enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        let c = c.abs();
        match atom(t) {
            None => write!(s, "{c}").unwrap(),
            Some(a) if c.is_one() => s.push_str(&a),
            Some(a) => write!(s, "{c}*{a}").unwrap(),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn format_poly(p: &DPoly, table: &SymbolTable) -> String {
    format_sum(p.terms(), |m: &DMono| (!m.is_one()).then(|| format_mono(m, table)))
}

pub fn format_treepoly(p: &TreePoly, table: &SymbolTable) -> String {
    format_sum(p.terms(), |t: &RTree| Some(format_tree(t, table)))
}
