use std::fmt::{self, Write};

use kleinkit_core::{QMode, Statistics};
use num_rational::BigRational;
use num_traits::One;

use super::{Expect, Expr, MapDef, Numeric, Program, StmtKind};

const ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        _ => ATOM,
    }
}

fn rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn phase_list(f: &mut impl Write, m: &[(String, i64)]) -> fmt::Result {
    f.write_str("phase[")?;
    for (k, (name, e)) in m.iter().enumerate() {
        if k > 0 {
            f.write_char(',')?;
        }
        write!(f, "{name}:{e}")?;
    }
    f.write_char(']')
}

fn expr(f: &mut impl Write, e: &Expr, min: u8) -> fmt::Result {
    let wrap = prec(e) < min;
    if wrap {
        f.write_char('(')?;
    }
    match e {
        Expr::Num(r) => f.write_str(&rational(r))?,
        Expr::Complex(re, im) => write!(f, "({},{})", rational(re), rational(im))?,
        Expr::Q => f.write_char('q')?,
        Expr::Ann(m) => write!(f, "ann({m})")?,
        Expr::Cre(m) => write!(f, "cre({m})")?,
        Expr::Adj(x) => {
            f.write_str("adj(")?;
            expr(f, x, 0)?;
            f.write_char(')')?;
        }
        Expr::Phase(m) => phase_list(f, m)?,
        Expr::Comm(x, y) | Expr::AComm(x, y) => {
            f.write_str(if matches!(e, Expr::Comm(..)) { "comm(" } else { "acomm(" })?;
            expr(f, x, 0)?;
            f.write_str(", ")?;
            expr(f, y, 0)?;
            f.write_char(')')?;
        }
        Expr::QComm(x, y, s) => {
            f.write_str("qcomm(")?;
            expr(f, x, 0)?;
            f.write_str(", ")?;
            expr(f, y, 0)?;
            f.write_str(", ")?;
            expr(f, s, 0)?;
            f.write_char(')')?;
        }
        Expr::Map(d, x) => {
            write!(f, "map({d}, ")?;
            expr(f, x, 0)?;
            f.write_char(')')?;
        }
        Expr::Var(v) => f.write_str(v)?,
        Expr::Neg(x) => {
            f.write_char('-')?;
            expr(f, x, 3)?;
        }
        Expr::Add(x, y) | Expr::Sub(x, y) => {
            expr(f, x, 1)?;
            f.write_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " })?;
            expr(f, y, 2)?;
        }
        Expr::Mul(x, y) => {
            expr(f, x, 2)?;
            f.write_char('*')?;
            expr(f, y, 3)?;
        }
        Expr::Pow(x, k) => {
            expr(f, x, ATOM)?;
            write!(f, "^{k}")?;
        }
    }
    if wrap {
        f.write_char(')')?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        expr(f, self, 0)
    }
}

fn angle(x: f64) -> String {
    format!("{x:?}")
}

impl fmt::Display for StmtKind {
    /// Panics on a `q` order the language cannot express (only 1, 2, 4).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Mode(name, s) => write!(
                f,
                "mode {name} {}",
                match s {
                    Statistics::Boson => "boson",
                    Statistics::Fermion => "fermion",
                }
            )?,
            StmtKind::Exchange(a, b, v) => write!(f, "exchange {a} {b} = {v}")?,
            StmtKind::Q(QMode::Formal) => f.write_str("q formal")?,
            StmtKind::Q(QMode::RootOfUnity(n)) => match n {
                1 => f.write_str("q = 1")?,
                2 => f.write_str("q = -1")?,
                4 => f.write_str("q = (0,1)")?,
                _ => panic!("q of order {n} has no source form"),
            },
            StmtKind::Let(name, e) => write!(f, "let {name} = {e}")?,
            StmtKind::LetMap(name, MapDef::Catalog(c)) => write!(f, "let {name} = map \"{c}\"")?,
            StmtKind::LetMap(name, MapDef::Explicit(entries)) => {
                write!(f, "let {name} = map {{")?;
                for (k, entry) in entries.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}: ", entry.mode)?;
                    if let Some(s) = &entry.scale {
                        // a leading `phase` would be read as the entry's phase list
                        let mut text = String::new();
                        expr(&mut text, s, 3)?;
                        if text.starts_with("phase") {
                            write!(f, "({text})*")?;
                        } else {
                            write!(f, "{text}*")?;
                        }
                    }
                    phase_list(f, &entry.phase)?;
                }
                f.write_char('}')?;
            }
            StmtKind::AssertZero(e) => write!(f, "assert_zero {e}")?,
            StmtKind::AssertEqual(x, y) => write!(f, "assert_equal {x}, {y}")?,
            StmtKind::AssertBracket { x, y, s, rhs } => write!(f, "assert_bracket {x}, {y}, {s} = {rhs}")?,
            StmtKind::VerifyMap(name, expect) => {
                write!(f, "verify_map {name}")?;
                for (k, e) in expect.iter().enumerate() {
                    f.write_str(if k == 0 { " expect " } else { ", " })?;
                    match e {
                        Expect::All(v) => write!(f, "all = {v}")?,
                        Expect::Pair(a, b, v) => write!(f, "{a} {b} = {v}")?,
                    }
                }
            }
            StmtKind::Numeric(Numeric::Dim(d)) => write!(f, "numeric dim {d}")?,
            StmtKind::Numeric(Numeric::Theta(v)) => {
                write!(f, "numeric theta {}", v.iter().map(|x| angle(*x)).collect::<Vec<_>>().join(", "))?
            }
            StmtKind::Numeric(Numeric::Tol(t)) => write!(f, "numeric tol {}", angle(*t))?,
        }
        f.write_char(';')
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}
