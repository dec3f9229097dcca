use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` declared both as a variable and as an operation")]
    SymbolInBothRoles(String),
    #[error("no {0} declared")]
    EmptyDeclaration(&'static str),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("undeclared {role} `{name}`")]
    UndeclaredSymbol { role: &'static str, name: String },
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("flavor mismatch: {0} vs {1}")]
    FlavorMismatch(String, String),
    #[error("operation requires a nonempty monomial")]
    EmptyMonomial,
    #[error("monomial is not populated (defect {0})")]
    NotPopulated(i64),
    #[error("tree is not a nest")]
    NotNest,
    #[error("tree is not a noncommuting multi-Novikov element")]
    NotNmne,
    #[error("no image assigned to variable of rank {0}")]
    MissingAssignment(u32),
    #[error("branch index {index} out of range for a node with {len} children")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("segment swap needs a node as first child")]
    LeafFirstChild,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("algebra has no bracket")]
    NoBracket,
    #[error("multiplication is not commutative at ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("bracket is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("bracket fails the Jacobi identity at ({0}, {1}, {2})")]
    JacobiFailure(usize, usize, usize),
    #[error("map is not a derivation: Leibniz rule fails at ({0}, {1})")]
    NotDerivation(usize, usize),
    #[error("resource cap exceeded: {count} trees (cap {cap})")]
    ResourceCap { count: usize, cap: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that point at a bug in this crate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
