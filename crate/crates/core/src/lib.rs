//! Symbolic computation with free multi-differential algebras and free
//! noncommuting multi-Novikov algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`rat`] and [`symbol`]: exact rationals and ordered symbol tables.
//! * [`diffalg`]: differential polynomials in the four flavors (commutative or
//!   noncommutative multiplication, commuting or noncommuting derivations),
//!   Leibniz derivations and the induced Novikov-type products.
//! * [`identities`]: the defining identity systems of the multi-Novikov variants,
//!   evaluated generically over anything that provides the products.
//! * [`treealg`]: typed decorated rooted trees, grafting, the nest / ordered nest /
//!   NMNE predicates and the rewriting normalizer modulo the Novikov ideal.
//! * [`maps`]: evaluation of trees as differential polynomials, the maps `g`,
//!   `phi`, `psi`, the generation procedure and the semantic normalizer.
//! * [`enumeration`]: graded enumeration of both bases and the brute-force
//!   quotient dimension.
//! * [`findim`]: finite-dimensional algebras given by structure constants.
//! * [`syntax`]: text grammar for trees, monomials and polynomials.

pub mod diffalg;
pub mod enumeration;
pub mod error;
pub mod findim;
pub mod identities;
pub mod linalg;
pub mod maps;
pub mod rat;
pub mod sample;
pub mod symbol;
pub mod syntax;
pub mod treealg;

pub use error::{Error, Result};
pub use rat::Rat;
pub use symbol::{Op, Role, Symbol, SymbolTable, Var};
