//! The `.kq` assertion language.
//!
//! ```text
//! mode a boson; mode b boson;
//! exchange a b = -1;
//! q = -1;
//! let D = map "total-parity-on-b";
//! let bt = map(D, ann(b));
//! assert_zero comm(ann(a), bt);
//! ```

mod lexer;
mod parser;
mod render;

use kleinkit_core::{QMode, Statistics};
use num_rational::BigRational;

pub use lexer::{Keyword, Token};
pub use parser::{parse, parse_angle, ParseError};

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Non-negative rational literal.
    Num(BigRational),
    /// `(re,im)` literal.
    Complex(BigRational, BigRational),
    Q,
    Ann(String),
    Cre(String),
    Adj(Box<Expr>),
    Phase(Vec<(String, i64)>),
    Comm(Box<Expr>, Box<Expr>),
    AComm(Box<Expr>, Box<Expr>),
    QComm(Box<Expr>, Box<Expr>, Box<Expr>),
    Map(String, Box<Expr>),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// One dressed mode in an explicit map: `b: s*phase[a:1,b:1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MapEntry {
    pub mode: String,
    pub scale: Option<Expr>,
    pub phase: Vec<(String, i64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapDef {
    Catalog(String),
    Explicit(Vec<MapEntry>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expect {
    All(Expr),
    Pair(String, String, Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Numeric {
    Dim(usize),
    Theta(Vec<f64>),
    Tol(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    Mode(String, Statistics),
    Exchange(String, String, Expr),
    Q(QMode),
    Let(String, Expr),
    LetMap(String, MapDef),
    AssertZero(Expr),
    AssertEqual(Expr, Expr),
    AssertBracket { x: Expr, y: Expr, s: Expr, rhs: Expr },
    VerifyMap(String, Vec<Expect>),
    Numeric(Numeric),
}

impl StmtKind {
    pub fn is_assertion(&self) -> bool {
        matches!(
            self,
            StmtKind::AssertZero(_) | StmtKind::AssertEqual(..) | StmtKind::AssertBracket { .. } | StmtKind::VerifyMap(..)
        )
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            StmtKind::Mode(..) => "mode",
            StmtKind::Exchange(..) => "exchange",
            StmtKind::Q(_) => "q",
            StmtKind::Let(..) | StmtKind::LetMap(..) => "let",
            StmtKind::AssertZero(_) => "assert_zero",
            StmtKind::AssertEqual(..) => "assert_equal",
            StmtKind::AssertBracket { .. } => "assert_bracket",
            StmtKind::VerifyMap(..) => "verify_map",
            StmtKind::Numeric(_) => "numeric",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub pos: Pos,
    pub kind: StmtKind,
}

/// Positions are ignored: a rendered and re-parsed statement compares equal.
impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub statements: Vec<Stmt>,
}

impl Program {
    pub fn from_kinds(kinds: impl IntoIterator<Item = StmtKind>) -> Self {
        Program { statements: kinds.into_iter().map(|kind| Stmt { pos: Pos::default(), kind }).collect() }
    }
}
