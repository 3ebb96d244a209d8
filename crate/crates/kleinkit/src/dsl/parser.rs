use std::collections::HashSet;
use std::fmt;

use kleinkit_core::{QMode, Statistics};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lexer::{tokenize, Keyword, Token};
use super::{Expect, Expr, MapDef, MapEntry, Numeric, Pos, Program, Stmt, StmtKind};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
    /// Sorted descriptions of tokens that would have been accepted.
    pub expected: Vec<String>,
}

impl ParseError {
    pub(super) fn lexical(pos: Pos, message: &str) -> Self {
        ParseError { pos, message: format!("lexical error: {message}"), expected: Vec::new() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.pos.line, self.pos.col, self.message)?;
        match self.expected.as_slice() {
            [] => Ok(()),
            [one] => write!(f, "; expected {one}"),
            many => write!(f, "; expected one of {}", many.join(", ")),
        }
    }
}

pub fn parse(src: &str) -> Result<Program, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, i: 0, expected: Vec::new() };
    let mut statements = Vec::new();
    let mut decls = Declarations::default();
    while !p.at(&Token::Eof, "statement") {
        let stmt = p.statement()?;
        decls.record(&stmt)?;
        statements.push(stmt);
    }
    Ok(Program { statements })
}

/// Parses a real angle such as `pi/3`, `2*pi/7` or `0.5`.
pub fn parse_angle(src: &str) -> Result<f64, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, i: 0, expected: Vec::new() };
    let v = p.angle()?;
    p.expect(&Token::Eof, "end of input")?;
    Ok(v)
}

#[derive(Default)]
struct Declarations {
    names: HashSet<String>,
    pairs: HashSet<(String, String)>,
    q: bool,
}

impl Declarations {
    fn record(&mut self, stmt: &Stmt) -> Result<(), ParseError> {
        let dup = |what: String| ParseError {
            pos: stmt.pos,
            message: format!("duplicate declaration of {what}"),
            expected: Vec::new(),
        };
        match &stmt.kind {
            StmtKind::Mode(name, _) | StmtKind::Let(name, _) | StmtKind::LetMap(name, _) => {
                if !self.names.insert(name.clone()) {
                    return Err(dup(format!("'{name}'")));
                }
            }
            StmtKind::Exchange(a, b, _) => {
                let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                if !self.pairs.insert(key) {
                    return Err(dup(format!("exchange {a} {b}")));
                }
            }
            StmtKind::Q(_) if self.q => return Err(dup("q".into())),
            StmtKind::Q(_) => self.q = true,
            _ => {}
        }
        Ok(())
    }
}

struct Parser {
    toks: Vec<(Token, Pos)>,
    i: usize,
    expected: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        self.expected.clear();
        t
    }

    fn at(&mut self, tok: &Token, desc: &str) -> bool {
        if self.peek() == tok {
            true
        } else {
            self.expected.push(desc.to_string());
            false
        }
    }

    fn eat(&mut self, tok: &Token, desc: &str) -> bool {
        let hit = self.at(tok, desc);
        if hit {
            self.advance();
        }
        hit
    }

    fn at_kw(&mut self, kw: Keyword) -> bool {
        self.at(&Token::Kw(kw), &format!("'{}'", kw.as_str()))
    }

    fn eat_kw(&mut self, kw: Keyword) -> bool {
        self.eat(&Token::Kw(kw), &format!("'{}'", kw.as_str()))
    }

    fn error(&mut self, message: impl Into<String>) -> ParseError {
        let mut expected = std::mem::take(&mut self.expected);
        expected.sort();
        expected.dedup();
        ParseError { pos: self.pos(), message: message.into(), expected }
    }

    fn unexpected(&mut self) -> ParseError {
        let found = self.peek().to_string();
        self.error(format!("syntax error: unexpected {found}"))
    }

    fn expect(&mut self, tok: &Token, desc: &str) -> Result<(), ParseError> {
        if self.eat(tok, desc) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expect_kw(&mut self, kw: Keyword) -> Result<(), ParseError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn close(&mut self, tok: &Token, desc: &str, open: Pos) -> Result<(), ParseError> {
        if self.eat(tok, desc) {
            return Ok(());
        }
        let found = self.peek().to_string();
        Err(self.error(format!(
            "syntax error: unexpected {found}; unclosed {} opened at {}:{}",
            match tok {
                Token::RParen => "parenthesis",
                Token::RBracket => "bracket",
                _ => "brace",
            },
            open.line,
            open.col
        )))
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        if let Token::Ident(s) = self.peek() {
            let s = s.clone();
            self.advance();
            Ok(s)
        } else {
            self.expected.push("identifier".into());
            Err(self.unexpected())
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        if let Token::Int(n) = self.peek() {
            let n = n.clone();
            self.advance();
            Ok(n)
        } else {
            self.expected.push("integer".into());
            Err(self.unexpected())
        }
    }

    fn small_int(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        let neg = self.eat(&Token::Minus, "'-'");
        let n = self.int()?;
        let n = if neg { -n } else { n };
        n.to_i64().ok_or(ParseError { pos, message: "integer out of range".into(), expected: Vec::new() })
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Token::Kw(Keyword::Mode) => {
                self.advance();
                let name = self.ident()?;
                let stats = if self.eat_kw(Keyword::Boson) {
                    Statistics::Boson
                } else if self.eat_kw(Keyword::Fermion) {
                    Statistics::Fermion
                } else {
                    return Err(self.unexpected());
                };
                StmtKind::Mode(name, stats)
            }
            Token::Kw(Keyword::Exchange) => {
                self.advance();
                let a = self.ident()?;
                let b = self.ident()?;
                self.expect(&Token::Eq, "'='")?;
                StmtKind::Exchange(a, b, self.expr()?)
            }
            Token::Kw(Keyword::Q) => {
                self.advance();
                if self.eat_kw(Keyword::Formal) {
                    StmtKind::Q(QMode::Formal)
                } else {
                    self.expect(&Token::Eq, "'='")?;
                    let vpos = self.pos();
                    StmtKind::Q(q_value(&self.expr()?).ok_or(ParseError {
                        pos: vpos,
                        message: "q must be 'formal', 1, -1 or (0,1)".into(),
                        expected: Vec::new(),
                    })?)
                }
            }
            Token::Kw(Keyword::Let) => {
                self.advance();
                let name = self.ident()?;
                self.expect(&Token::Eq, "'='")?;
                let is_def = self.peek() == &Token::Kw(Keyword::Map)
                    && matches!(self.toks[self.i + 1].0, Token::Str(_) | Token::LBrace);
                if is_def {
                    self.advance();
                    StmtKind::LetMap(name, self.map_def()?)
                } else {
                    StmtKind::Let(name, self.expr()?)
                }
            }
            Token::Kw(Keyword::AssertZero) => {
                self.advance();
                StmtKind::AssertZero(self.expr()?)
            }
            Token::Kw(Keyword::AssertEqual) => {
                self.advance();
                let x = self.expr()?;
                self.expect(&Token::Comma, "','")?;
                StmtKind::AssertEqual(x, self.expr()?)
            }
            Token::Kw(Keyword::AssertBracket) => {
                self.advance();
                let x = self.expr()?;
                self.expect(&Token::Comma, "','")?;
                let y = self.expr()?;
                self.expect(&Token::Comma, "','")?;
                let s = self.expr()?;
                self.expect(&Token::Eq, "'='")?;
                StmtKind::AssertBracket { x, y, s, rhs: self.expr()? }
            }
            Token::Kw(Keyword::VerifyMap) => {
                self.advance();
                let name = self.ident()?;
                let mut expect = Vec::new();
                if self.eat_kw(Keyword::Expect) {
                    loop {
                        if self.eat_kw(Keyword::All) {
                            self.expect(&Token::Eq, "'='")?;
                            expect.push(Expect::All(self.expr()?));
                        } else {
                            let a = self.ident()?;
                            let b = self.ident()?;
                            self.expect(&Token::Eq, "'='")?;
                            expect.push(Expect::Pair(a, b, self.expr()?));
                        }
                        if !self.eat(&Token::Comma, "','") {
                            break;
                        }
                    }
                }
                StmtKind::VerifyMap(name, expect)
            }
            Token::Kw(Keyword::Numeric) => {
                self.advance();
                StmtKind::Numeric(self.numeric()?)
            }
            _ => {
                for kw in [
                    Keyword::Mode,
                    Keyword::Exchange,
                    Keyword::Q,
                    Keyword::Let,
                    Keyword::AssertZero,
                    Keyword::AssertEqual,
                    Keyword::AssertBracket,
                    Keyword::VerifyMap,
                    Keyword::Numeric,
                ] {
                    self.at_kw(kw);
                }
                return Err(self.unexpected());
            }
        };
        self.expect(&Token::Semi, "';'")?;
        Ok(Stmt { pos, kind })
    }

    fn numeric(&mut self) -> Result<Numeric, ParseError> {
        if self.eat_kw(Keyword::Dim) {
            let pos = self.pos();
            let d = self.int()?;
            return d
                .to_usize()
                .filter(|d| *d >= 2)
                .map(Numeric::Dim)
                .ok_or(ParseError { pos, message: "dim must be an integer >= 2".into(), expected: Vec::new() });
        }
        if self.eat_kw(Keyword::Theta) {
            let mut v = vec![self.angle()?];
            while self.eat(&Token::Comma, "','") {
                v.push(self.angle()?);
            }
            return Ok(Numeric::Theta(v));
        }
        if self.eat_kw(Keyword::Tol) {
            let pos = self.pos();
            let t = self.angle()?;
            if t > 0.0 {
                return Ok(Numeric::Tol(t));
            }
            return Err(ParseError { pos, message: "tol must be positive".into(), expected: Vec::new() });
        }
        Err(self.unexpected())
    }

    fn map_def(&mut self) -> Result<MapDef, ParseError> {
        if let Token::Str(s) = self.peek() {
            let s = s.clone();
            self.advance();
            return Ok(MapDef::Catalog(s));
        }
        let open = self.pos();
        self.expect(&Token::LBrace, "'{'")?;
        let mut entries = Vec::new();
        if !self.at(&Token::RBrace, "'}'") {
            loop {
                let mode = self.ident()?;
                self.expect(&Token::Colon, "':'")?;
                let scale = if self.at_kw(Keyword::Phase) {
                    None
                } else {
                    let s = self.unary()?;
                    self.expect(&Token::Star, "'*'")?;
                    Some(s)
                };
                self.expect_kw(Keyword::Phase)?;
                entries.push(MapEntry { mode, scale, phase: self.phase_list()? });
                if !self.eat(&Token::Comma, "','") {
                    break;
                }
            }
        }
        self.close(&Token::RBrace, "'}'", open)?;
        Ok(MapDef::Explicit(entries))
    }

    fn phase_list(&mut self) -> Result<Vec<(String, i64)>, ParseError> {
        let open = self.pos();
        self.expect(&Token::LBracket, "'['")?;
        let mut out = Vec::new();
        if !self.at(&Token::RBracket, "']'") {
            loop {
                let m = self.ident()?;
                self.expect(&Token::Colon, "':'")?;
                out.push((m, self.small_int()?));
                if !self.eat(&Token::Comma, "','") {
                    break;
                }
            }
        }
        self.close(&Token::RBracket, "']'", open)?;
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Token::Plus, "'+'") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Token::Minus, "'-'") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::Star, "'*'") {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Token::Minus, "'-'") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(&Token::Caret, "'^'") {
            return Ok(Expr::Pow(Box::new(base), self.small_int()?));
        }
        Ok(base)
    }

    fn call_open(&mut self) -> Result<Pos, ParseError> {
        let open = self.pos();
        self.expect(&Token::LParen, "'('")?;
        Ok(open)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = self.peek().clone();
        let pos = self.pos();
        match tok {
            Token::Int(n) => {
                self.advance();
                if self.eat(&Token::Slash, "'/'") {
                    let d = self.int()?;
                    if d.is_zero() {
                        return Err(ParseError { pos, message: "zero denominator".into(), expected: Vec::new() });
                    }
                    return Ok(Expr::Num(BigRational::new(n, d)));
                }
                Ok(Expr::Num(BigRational::from_integer(n)))
            }
            Token::LParen => {
                self.advance();
                let first = self.expr()?;
                if self.eat(&Token::Comma, "','") {
                    let ipos = self.pos();
                    let second = self.expr()?;
                    self.close(&Token::RParen, "')'", pos)?;
                    let re = signed_rational(&first)
                        .ok_or(ParseError { pos, message: "complex literal needs rational parts".into(), expected: Vec::new() })?;
                    let im = signed_rational(&second).ok_or(ParseError {
                        pos: ipos,
                        message: "complex literal needs rational parts".into(),
                        expected: Vec::new(),
                    })?;
                    return Ok(Expr::Complex(re, im));
                }
                self.close(&Token::RParen, "')'", pos)?;
                Ok(first)
            }
            Token::Kw(Keyword::Q) => {
                self.advance();
                Ok(Expr::Q)
            }
            Token::Kw(kw @ (Keyword::Ann | Keyword::Cre)) => {
                self.advance();
                let open = self.call_open()?;
                let m = self.ident()?;
                self.close(&Token::RParen, "')'", open)?;
                Ok(if kw == Keyword::Ann { Expr::Ann(m) } else { Expr::Cre(m) })
            }
            Token::Kw(Keyword::Adj) => {
                self.advance();
                let open = self.call_open()?;
                let x = self.expr()?;
                self.close(&Token::RParen, "')'", open)?;
                Ok(Expr::Adj(Box::new(x)))
            }
            Token::Kw(Keyword::Phase) => {
                self.advance();
                Ok(Expr::Phase(self.phase_list()?))
            }
            Token::Kw(kw @ (Keyword::Comm | Keyword::AComm | Keyword::QComm)) => {
                self.advance();
                let open = self.call_open()?;
                let x = Box::new(self.expr()?);
                self.expect(&Token::Comma, "','")?;
                let y = Box::new(self.expr()?);
                let out = if kw == Keyword::QComm {
                    self.expect(&Token::Comma, "','")?;
                    Expr::QComm(x, y, Box::new(self.expr()?))
                } else if kw == Keyword::Comm {
                    Expr::Comm(x, y)
                } else {
                    Expr::AComm(x, y)
                };
                self.close(&Token::RParen, "')'", open)?;
                Ok(out)
            }
            Token::Kw(Keyword::Map) => {
                self.advance();
                let open = self.call_open()?;
                let d = self.ident()?;
                self.expect(&Token::Comma, "','")?;
                let x = self.expr()?;
                self.close(&Token::RParen, "')'", open)?;
                Ok(Expr::Map(d, Box::new(x)))
            }
            Token::Ident(name) => {
                self.advance();
                Ok(Expr::Var(name))
            }
            _ => {
                self.expected.extend(
                    ["integer", "identifier", "'('", "'q'", "'ann'", "'cre'", "'adj'", "'phase'", "'comm'", "'acomm'", "'qcomm'", "'map'"]
                        .map(String::from),
                );
                Err(self.unexpected())
            }
        }
    }

    fn angle(&mut self) -> Result<f64, ParseError> {
        let pos = self.pos();
        let mut v = self.angle_term()?;
        loop {
            if self.eat(&Token::Plus, "'+'") {
                v += self.angle_term()?;
            } else if self.eat(&Token::Minus, "'-'") {
                v -= self.angle_term()?;
            } else {
                break;
            }
        }
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ParseError { pos, message: "value is not finite".into(), expected: Vec::new() })
        }
    }

    fn angle_term(&mut self) -> Result<f64, ParseError> {
        let mut v = self.angle_factor()?;
        loop {
            if self.eat(&Token::Star, "'*'") {
                v *= self.angle_factor()?;
            } else if self.eat(&Token::Slash, "'/'") {
                v /= self.angle_factor()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn angle_factor(&mut self) -> Result<f64, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Token::Minus => {
                self.advance();
                Ok(-self.angle_factor()?)
            }
            Token::Int(n) => {
                self.advance();
                Ok(n.to_f64().unwrap_or(f64::INFINITY))
            }
            Token::Float(x) => {
                self.advance();
                Ok(x)
            }
            Token::Kw(Keyword::Pi) => {
                self.advance();
                Ok(std::f64::consts::PI)
            }
            Token::LParen => {
                self.advance();
                let v = self.angle()?;
                self.close(&Token::RParen, "')'", pos)?;
                Ok(v)
            }
            _ => {
                self.expected.extend(["number", "'pi'", "'('", "'-'"].map(String::from));
                Err(self.unexpected())
            }
        }
    }
}

fn signed_rational(e: &Expr) -> Option<BigRational> {
    match e {
        Expr::Num(r) => Some(r.clone()),
        Expr::Neg(x) => match x.as_ref() {
            Expr::Num(r) => Some(-r.clone()),
            _ => None,
        },
        _ => None,
    }
}

fn q_value(e: &Expr) -> Option<QMode> {
    if let Some(r) = signed_rational(e) {
        if r.is_one() {
            return Some(QMode::RootOfUnity(1));
        }
        if r.is_negative() && r.abs().is_one() {
            return Some(QMode::RootOfUnity(2));
        }
    }
    if let Expr::Complex(re, im) = e {
        if re.is_zero() && im.is_one() {
            return Some(QMode::RootOfUnity(4));
        }
    }
    None
}
