//! Text syntax for polynomial maps.
//!
//! A map is two comma-separated polynomial expressions in `x` and `y`:
//!
//! ```text
//! y^2*(x*y + 1), x*(x*y^3 + 1)
//! ```
//!
//! Literals are exact decimals (`3`, `0.25`, `1e-3`); `^` takes a nonnegative
//! integer exponent and binds tighter than unary minus, which binds tighter than
//! `*` and `/`. Division is only by nonzero constants. Multiplication is never
//! implicit.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::poly::{BivariatePoly, PolynomialMap};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    NonRationalLiteral,
    UnknownVariable,
    /// Division by a non-constant or zero, or an unusable exponent.
    NotPolynomial,
}

impl ParseErrorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::NonRationalLiteral => "non_rational_literal",
            ParseErrorKind::UnknownVariable => "unknown_variable",
            ParseErrorKind::NotPolynomial => "not_polynomial",
        }
    }
}

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

const NON_RATIONAL: &[&str] = &["pi", "e", "inf", "infinity", "nan", "i", "sqrt", "tau"];

fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut k = 0;
    let err = |kind, pos: Pos, message: String| ParseError { kind, line: pos.line, column: pos.column, message };
    while k < chars.len() {
        let c = chars[k];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            k += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            column += 1;
            k += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            // Exponent part, only when followed by digits.
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    k = j;
                }
            }
            // A literal running straight into letters, e.g. "2x" or "1.5f".
            if k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                return Err(err(
                    ParseErrorKind::Syntax,
                    Pos { line, column: column + (k - start) },
                    "missing operator; multiplication must be written with '*'".into(),
                ));
            }
            let text: String = chars[start..k].iter().collect();
            let value = parse_decimal(&text)
                .ok_or_else(|| err(ParseErrorKind::Syntax, pos, format!("malformed number '{text}'")))?;
            out.push((Tok::Num(value), pos));
            column += k - start;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            let text: String = chars[start..k].iter().collect();
            column += k - start;
            out.push((Tok::Ident(text), pos));
            continue;
        }
        let kind = if c == '√' || c == 'π' { ParseErrorKind::NonRationalLiteral } else { ParseErrorKind::Syntax };
        return Err(err(kind, pos, format!("unexpected character '{c}'")));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

/// Exact value of a decimal literal such as `12`, `0.125` or `3.5e-2`.
fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i64>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let shift = exp - frac.len() as i64;
    if shift.unsigned_abs() > 10_000 {
        return None;
    }
    let p = num_traits::pow(BigInt::from(10), shift.unsigned_abs() as usize);
    Some(if shift >= 0 {
        BigRational::from_integer(n * p)
    } else {
        BigRational::new(n, p)
    })
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    k: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.k].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.k].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.k].clone();
        if self.k + 1 < self.toks.len() {
            self.k += 1;
        }
        t
    }

    fn error(&self, kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError { kind, line: pos.line, column: pos.column, message: message.into() }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let found = self.peek().describe();
        self.error(ParseErrorKind::Syntax, self.pos(), format!("expected {expected}, found {found}"))
    }

    fn expr(&mut self) -> Result<BivariatePoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BivariatePoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Tok::Slash => {
                    let (_, pos) = self.bump();
                    let d = self.unary()?;
                    if !d.is_constant() {
                        return Err(self.error(ParseErrorKind::NotPolynomial, pos, "division by a non-constant"));
                    }
                    let c = d.constant_term();
                    if c.is_zero() {
                        return Err(self.error(ParseErrorKind::NotPolynomial, pos, "division by zero"));
                    }
                    acc = acc * BivariatePoly::from_rational(c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<BivariatePoly, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BivariatePoly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, caret) = self.bump();
        let epos = self.pos();
        if matches!(self.peek(), Tok::Minus) {
            return Err(self.error(ParseErrorKind::NotPolynomial, epos, "negative exponent"));
        }
        let e = self.power()?;
        let value = if e.is_constant() { Some(e.constant_term()) } else { None };
        let n = match value {
            Some(v) if v.is_integer() && !v.is_negative() => v.to_integer().to_u32().filter(|&n| n <= MAX_EXPONENT),
            _ => {
                return Err(self.error(
                    ParseErrorKind::NotPolynomial,
                    epos,
                    "exponent must be a nonnegative integer constant",
                ))
            }
        };
        let Some(n) = n else {
            return Err(self.error(ParseErrorKind::NotPolynomial, caret, format!("exponent above {MAX_EXPONENT}")));
        };
        Ok(base.pow_q(n))
    }

    fn atom(&mut self) -> Result<BivariatePoly, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(BivariatePoly::from_rational(v))
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "x" => Ok(BivariatePoly::x()),
                    "y" => Ok(BivariatePoly::y()),
                    other if NON_RATIONAL.contains(&other.to_ascii_lowercase().as_str()) => Err(self.error(
                        ParseErrorKind::NonRationalLiteral,
                        pos,
                        format!("'{other}' is not a rational literal"),
                    )),
                    other => Err(self.error(
                        ParseErrorKind::UnknownVariable,
                        pos,
                        format!("unknown variable '{other}' (only x and y are allowed)"),
                    )),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, x, y or '('")),
        }
    }
}

/// Parses a single polynomial expression.
pub fn parse_polynomial(src: &str) -> Result<BivariatePoly, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, k: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

/// Parses `"f1, f2"` into a map.
pub fn parse_map(src: &str) -> Result<PolynomialMap, ParseError> {
    let mut p = Parser { toks: tokenize(src)?, k: 0 };
    let f1 = p.expr()?;
    if *p.peek() != Tok::Comma {
        return Err(p.unexpected("',' between the two components"));
    }
    p.bump();
    let f2 = p.expr()?;
    if *p.peek() != Tok::End {
        let msg = if *p.peek() == Tok::Comma { "end of input (a map has two components)" } else { "an operator or end of input" };
        return Err(p.unexpected(msg));
    }
    Ok(PolynomialMap::new(f1, f2))
}

/// Canonical text of a map, accepted back by [`parse_map`].
pub fn format_map(f: &PolynomialMap) -> String {
    format!("{}, {}", f.f1, f.f2)
}
