//! Operator-expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' int)? ('/' power)*
//! atom   := 'z' | 's' | 'i' | literal | '(' expr ')'
//! matrix := '[' row (',' row)* ']' ;  row := '[' expr (',' expr)* ']'
//! ```
//!
//! A literal is `a`, `a/b`, `a.b`, optionally followed by `i`, so `3/4i` is
//! `(3/4)·i`. Denominators must be polynomials in `z`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::hring::{h_normalize, HElement};
use crate::matsmith::HMatrix;
use crate::poly::PolyC;
use crate::scalar::GaussianRational as Q;

#[derive(Clone, Debug)]
pub enum Parsed {
    Element(HElement),
    Matrix(HMatrix),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Z,
    S,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, i));
            i += 1;
            continue;
        }
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            b'z' => {
                i += 1;
                if i < b.len() && b[i].is_ascii_digit() {
                    return Err(syntax(start, "variables z2, z3, … are only available to hefer"));
                }
                out.push((Tok::Z, start));
            }
            b's' => {
                out.push((Tok::S, i));
                i += 1;
            }
            b'i' => {
                out.push((Tok::Num(Q::i()), i));
                i += 1;
            }
            b'0'..=b'9' => {
                let (mut r, next) = number(b, i)?;
                i = next;
                // a/b is one literal when b follows immediately, except in exponents
                let after_caret = matches!(out.last(), Some((Tok::Caret, _)));
                if !after_caret && i + 1 < b.len() && b[i] == b'/' && b[i + 1].is_ascii_digit() {
                    let (d, next) = number(b, i + 1)?;
                    if d.is_zero() {
                        return Err(syntax(i + 1, "zero denominator in literal"));
                    }
                    r /= d;
                    i = next;
                }
                let mut q = Q::from_rational(r.clone());
                if i < b.len() && b[i] == b'i' {
                    q = Q::new(BigRational::zero(), r);
                    i += 1;
                }
                out.push((Tok::Num(q), start));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character '{ch}'")));
            }
        }
    }
    Ok(out)
}

fn number(b: &[u8], mut i: usize) -> Result<(BigRational, usize)> {
    let start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let int: BigInt = std::str::from_utf8(&b[start..i]).unwrap().parse().unwrap();
    let mut r = BigRational::from_integer(int);
    if i < b.len() && b[i] == b'.' {
        let fs = i + 1;
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == fs {
            return Err(syntax(fs, "expected digits after '.'"));
        }
        let frac: BigInt = std::str::from_utf8(&b[fs..i]).unwrap().parse().unwrap();
        let scale = num_traits::pow(BigInt::from(10), i - fs);
        r += BigRational::new(frac, scale);
    }
    Ok((r, i))
}

/// `num/den` before normalization.
#[derive(Clone, Debug)]
struct Val {
    num: ExpPoly,
    den: PolyC,
}

impl Val {
    fn poly(p: PolyC) -> Val {
        Val { num: ExpPoly::from_poly(p), den: PolyC::one() }
    }
    fn add(&self, o: &Val, sign: i64) -> Val {
        let b = if sign < 0 { -&o.num } else { o.num.clone() };
        Val { num: &self.num.mul_poly(&o.den) + &b.mul_poly(&self.den), den: &self.den * &o.den }
    }
    fn mul(&self, o: &Val) -> Val {
        Val { num: &self.num * &o.num, den: &self.den * &o.den }
    }
    /// Polynomial in `z` over a polynomial in `z`, if σ does not occur.
    fn as_poly_fraction(&self) -> Option<(PolyC, PolyC)> {
        self.num.as_poly().map(|p| (p, self.den.clone()))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.1).unwrap_or(self.end)
    }
    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Val> {
        let mut v = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                v = v.add(&self.term()?, 1);
            } else if self.eat(&Tok::Minus) {
                v = v.add(&self.term()?, -1);
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<Val> {
        let mut v = self.unary()?;
        while self.eat(&Tok::Star) {
            v = v.mul(&self.unary()?);
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<Val> {
        if self.eat(&Tok::Minus) {
            let v = self.unary()?;
            return Ok(Val { num: -&v.num, den: v.den });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val> {
        let mut v = self.atom()?;
        if self.eat(&Tok::Caret) {
            let p = self.pos();
            let neg = self.eat(&Tok::Minus);
            let e = match self.peek() {
                Some(Tok::Num(q)) if q.is_real() && q.re.is_integer() && !q.re.numer().sign().eq(&num_bigint::Sign::Minus) => {
                    let e: u32 = q.re.numer().try_into().map_err(|_| syntax(p, "exponent too large"))?;
                    self.at += 1;
                    e
                }
                _ => return Err(syntax(self.pos(), "expected an integer exponent")),
            };
            v = if neg { invert(&v, e, p)? } else { pow(&v, e) };
        }
        while self.eat(&Tok::Slash) {
            let p = self.pos();
            let d = self.power()?;
            let (dn, dd) = d
                .as_poly_fraction()
                .ok_or_else(|| Error::NonPolynomialDenominator(format!("denominator at {p} contains s")))?;
            if dn.is_zero() {
                return Err(Error::DivisionByZero);
            }
            v = Val { num: v.num.mul_poly(&dd), den: &v.den * &dn };
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<Val> {
        let p = self.pos();
        match self.peek().cloned() {
            Some(Tok::Z) => {
                self.at += 1;
                Ok(Val::poly(PolyC::z()))
            }
            Some(Tok::S) => {
                self.at += 1;
                Ok(Val { num: ExpPoly::sigma(), den: PolyC::one() })
            }
            Some(Tok::Num(q)) => {
                self.at += 1;
                Ok(Val::poly(PolyC::constant(q)))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let v = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(v)
            }
            Some(t) => Err(syntax(p, format!("unexpected {}", describe(&t)))),
            None => Err(syntax(p, "unexpected end of input")),
        }
    }

    fn matrix(&mut self) -> Result<Vec<Vec<(Val, usize)>>> {
        self.expect(&Tok::LBracket, "'['")?;
        let mut rows = Vec::new();
        loop {
            self.expect(&Tok::LBracket, "'[' opening a row")?;
            let mut row = Vec::new();
            loop {
                let p = self.pos();
                row.push((self.expr()?, p));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RBracket, "']' closing a row")?;
            rows.push(row);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RBracket, "']' closing the matrix")?;
        Ok(rows)
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Num(_) => "number",
        Tok::Z => "'z'",
        Tok::S => "'s'",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::LBracket => "'['",
        Tok::RBracket => "']'",
        Tok::Comma => "','",
    }
}

fn pow(v: &Val, e: u32) -> Val {
    Val { num: v.num.pow(e), den: v.den.pow(e) }
}

/// `v^{−e}` for a monomial `c·σ^k` or a polynomial in `z`.
fn invert(v: &Val, e: u32, pos: usize) -> Result<Val> {
    let terms: Vec<_> = v.num.terms().collect();
    if terms.len() == 1 && terms[0].1.is_constant() && v.den.is_constant() {
        let (k, c) = (terms[0].0, terms[0].1.coeff(0));
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = ExpPoly::monomial(PolyC::constant(&v.den.coeff(0) / &c), -k);
        return Ok(pow(&Val { num: inv, den: PolyC::one() }, e));
    }
    if let Some((p, d)) = v.as_poly_fraction() {
        return Ok(pow(&Val { num: ExpPoly::from_poly(d), den: p }, e));
    }
    Err(syntax(pos, "negative powers apply only to c*s^k or to polynomials in z"))
}

fn finish(v: Val) -> Result<HElement> {
    h_normalize(&v.num, &v.den)
}

/// Parses an element or, when the text starts with `[`, a matrix.
pub fn parse_operator(text: &str) -> Result<Parsed> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let out = if p.peek() == Some(&Tok::LBracket) {
        let rows = p.matrix()?;
        let width = rows[0].len();
        let mut hrows = Vec::new();
        for row in rows {
            if row.len() != width {
                return Err(syntax(row[0].1, format!("row has {} entries, expected {width}", row.len())));
            }
            hrows.push(row.into_iter().map(|(v, _)| finish(v)).collect::<Result<Vec<_>>>()?);
        }
        Parsed::Matrix(HMatrix::from_rows(hrows)?)
    } else {
        Parsed::Element(finish(p.expr()?)?)
    };
    if p.at != p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(out)
}

pub fn parse_element(text: &str) -> Result<HElement> {
    match parse_operator(text)? {
        Parsed::Element(h) => Ok(h),
        Parsed::Matrix(_) => Err(syntax(0, "expected an operator, found a matrix")),
    }
}

pub fn parse_matrix(text: &str) -> Result<HMatrix> {
    match parse_operator(text)? {
        Parsed::Matrix(m) => Ok(m),
        Parsed::Element(_) => Err(syntax(0, "expected a matrix such as [[s-1],[z]]")),
    }
}

/// A polynomial in `z` (no `s`, no denominator).
pub fn parse_poly(text: &str) -> Result<PolyC> {
    let h = parse_element(text)?;
    let (n, d) = h.fraction();
    match (n.as_poly(), d.is_one()) {
        (Some(p), true) => Ok(p),
        _ => Err(syntax(0, "expected a polynomial in z")),
    }
}

/// A Gaussian-rational literal such as `-1/2 + 3/4i`.
pub fn parse_scalar(text: &str) -> Result<Q> {
    let p = parse_poly(text)?;
    if p.deg() > 0 {
        return Err(syntax(0, "expected a constant"));
    }
    Ok(p.coeff(0))
}
