use core::fmt;

use num_bigint::BigInt;

use super::Pos;
use super::parser::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keyword {
    Mode,
    Boson,
    Fermion,
    Exchange,
    Q,
    Formal,
    Let,
    Ann,
    Cre,
    Adj,
    Phase,
    Comm,
    AComm,
    QComm,
    Map,
    AssertZero,
    AssertEqual,
    AssertBracket,
    VerifyMap,
    Expect,
    All,
    Numeric,
    Dim,
    Theta,
    Tol,
    Pi,
}

const KEYWORDS: &[(&str, Keyword)] = &[
    ("mode", Keyword::Mode),
    ("boson", Keyword::Boson),
    ("fermion", Keyword::Fermion),
    ("exchange", Keyword::Exchange),
    ("q", Keyword::Q),
    ("formal", Keyword::Formal),
    ("let", Keyword::Let),
    ("ann", Keyword::Ann),
    ("cre", Keyword::Cre),
    ("adj", Keyword::Adj),
    ("phase", Keyword::Phase),
    ("comm", Keyword::Comm),
    ("acomm", Keyword::AComm),
    ("qcomm", Keyword::QComm),
    ("map", Keyword::Map),
    ("assert_zero", Keyword::AssertZero),
    ("assert_equal", Keyword::AssertEqual),
    ("assert_bracket", Keyword::AssertBracket),
    ("verify_map", Keyword::VerifyMap),
    ("expect", Keyword::Expect),
    ("all", Keyword::All),
    ("numeric", Keyword::Numeric),
    ("dim", Keyword::Dim),
    ("theta", Keyword::Theta),
    ("tol", Keyword::Tol),
    ("pi", Keyword::Pi),
];

impl Keyword {
    pub fn lookup(s: &str) -> Option<Keyword> {
        KEYWORDS.iter().find(|(k, _)| *k == s).map(|(_, kw)| *kw)
    }

    pub fn as_str(self) -> &'static str {
        KEYWORDS.iter().find(|(_, kw)| *kw == self).map(|(k, _)| *k).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Token {
    Ident(String),
    Kw(Keyword),
    Int(BigInt),
    Float(f64),
    Str(String),
    Semi,
    Comma,
    Colon,
    Eq,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = |s: &str| write!(f, "'{s}'");
        match self {
            Token::Ident(s) => write!(f, "identifier '{s}'"),
            Token::Kw(k) => write!(f, "'{}'", k.as_str()),
            Token::Int(n) => write!(f, "integer {n}"),
            Token::Float(x) => write!(f, "number {x}"),
            Token::Str(s) => write!(f, "string \"{s}\""),
            Token::Semi => p(";"),
            Token::Comma => p(","),
            Token::Colon => p(":"),
            Token::Eq => p("="),
            Token::LParen => p("("),
            Token::RParen => p(")"),
            Token::LBracket => p("["),
            Token::RBracket => p("]"),
            Token::LBrace => p("{"),
            Token::RBrace => p("}"),
            Token::Plus => p("+"),
            Token::Minus => p("-"),
            Token::Star => p("*"),
            Token::Slash => p("/"),
            Token::Caret => p("^"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

pub fn tokenize(src: &str) -> Result<Vec<(Token, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let start = i;
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            Keyword::lookup(&word).map_or(Token::Ident(word), Token::Kw)
        } else if c.is_ascii_digit() {
            number(&chars, &mut i, pos)?
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(ParseError::lexical(pos, "unterminated string literal"));
            }
            i += 1;
            Token::Str(chars[start + 1..i - 1].iter().collect())
        } else {
            i += 1;
            match c {
                ';' => Token::Semi,
                ',' => Token::Comma,
                ':' => Token::Colon,
                '=' => Token::Eq,
                '(' => Token::LParen,
                ')' => Token::RParen,
                '[' => Token::LBracket,
                ']' => Token::RBracket,
                '{' => Token::LBrace,
                '}' => Token::RBrace,
                '+' => Token::Plus,
                '-' => Token::Minus,
                '*' => Token::Star,
                '/' => Token::Slash,
                '^' => Token::Caret,
                _ => return Err(ParseError::lexical(pos, &format!("unexpected character '{c}'"))),
            }
        };
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Token::Eof, Pos { line, col }));
    Ok(out)
}

fn number(chars: &[char], i: &mut usize, pos: Pos) -> Result<Token, ParseError> {
    let start = *i;
    let digits = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
    };
    digits(i);
    let mut float = false;
    if *i + 1 < chars.len() && chars[*i] == '.' && chars[*i + 1].is_ascii_digit() {
        float = true;
        *i += 1;
        digits(i);
    }
    if *i < chars.len() && (chars[*i] == 'e' || chars[*i] == 'E') {
        let mut j = *i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if j < chars.len() && chars[j].is_ascii_digit() {
            float = true;
            *i = j;
            digits(i);
        }
    }
    let text: String = chars[start..*i].iter().collect();
    if float {
        text.parse().map(Token::Float).map_err(|_| ParseError::lexical(pos, "malformed number"))
    } else {
        text.parse().map(Token::Int).map_err(|_| ParseError::lexical(pos, "malformed integer"))
    }
}
