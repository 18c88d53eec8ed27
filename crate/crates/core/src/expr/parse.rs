//! Recursive-descent parser for scalar expressions and graded literals
//! (forms such as `x1*dx2^dx3`, vector fields such as `@x3 + @x4`).

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{Chart, Expr, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradedKind {
    Scalar,
    Form,
    Vector,
}

/// A parsed homogeneous graded literal: components keyed by strictly
/// increasing coordinate index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct Graded {
    pub kind: GradedKind,
    pub degree: usize,
    pub components: BTreeMap<Vec<usize>, Expr>,
}

impl Graded {
    fn scalar(e: Expr) -> Graded {
        let mut components = BTreeMap::new();
        if !e.is_zero() {
            components.insert(Vec::new(), e);
        }
        Graded {
            kind: GradedKind::Scalar,
            degree: 0,
            components,
        }
    }

    fn basis(kind: GradedKind, i: usize) -> Graded {
        Graded {
            kind,
            degree: 1,
            components: BTreeMap::from([(vec![i], Expr::one())]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn as_scalar(&self) -> Option<Expr> {
        (self.kind == GradedKind::Scalar)
            .then(|| self.components.get(&Vec::new()).cloned().unwrap_or_default())
    }

    fn map(&self, f: impl Fn(&Expr) -> Expr) -> Graded {
        let components = self
            .components
            .iter()
            .map(|(k, v)| (k.clone(), f(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Graded {
            kind: self.kind,
            degree: self.degree,
            components,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    At,
    Plus,
    Minus,
    Star,
    Slash,
    Pow,
    Wedge,
    LParen,
    RParen,
    End,
}

fn tokenize(src: &str, graded: bool) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src[start..i].parse().expect("digits")), start));
                continue;
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' if bytes.get(i + 1) == Some(&b'*') => {
                i += 1;
                Tok::Pow
            }
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'^' if graded => Tok::Wedge,
            b'@' if graded => Tok::At,
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    chart: &'a Chart,
    graded: bool,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

/// Sorts an index tuple, returning the permutation sign, or `None` when an
/// index repeats.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.at(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Graded> {
        let mut acc = self.term()?;
        loop {
            let pos = self.at();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = add(acc, rhs, pos)?;
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = add(acc, rhs.map(|e| -e), pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Graded> {
        let mut acc = self.factor()?;
        loop {
            let pos = self.at();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = mul(acc, rhs, pos)?;
                }
                Tok::Wedge => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = wedge(acc, rhs, pos)?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.factor()?;
                    let d = rhs
                        .as_scalar()
                        .ok_or_else(|| syntax(pos, "division by a non-scalar"))?;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    let inv = d.inv()?;
                    acc = acc.map(|e| e * &inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Graded> {
        let base = self.base()?;
        if *self.peek() != Tok::Pow {
            return Ok(base);
        }
        let pos = self.at();
        self.bump();
        let neg = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let npos = self.at();
        let Tok::Int(n) = self.bump() else {
            return Err(syntax(npos, "expected an integer exponent"));
        };
        let n: i32 = i32::try_from(&n).map_err(|_| syntax(npos, "exponent too large"))?;
        let n = if neg { -n } else { n };
        let b = base
            .as_scalar()
            .ok_or_else(|| syntax(pos, "power of a non-scalar"))?;
        if b.is_zero() && n < 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Graded::scalar(b.powi(n)?))
    }

    fn scalar_arg(&mut self, name: &str) -> Result<Expr> {
        self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
        let pos = self.at();
        let arg = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        arg.as_scalar()
            .ok_or_else(|| syntax(pos, format!("argument of `{name}` must be scalar")))
    }

    fn base(&mut self) -> Result<Graded> {
        let pos = self.at();
        match self.bump() {
            Tok::Int(n) => Ok(Graded::scalar(Expr::constant(Q::from_integer(n)))),
            Tok::Minus => Ok(self.base()?.map(|e| -e)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::At => {
                let ipos = self.at();
                let Tok::Ident(name) = self.bump() else {
                    return Err(syntax(ipos, "expected a coordinate after `@`"));
                };
                let i = self.chart.coord_index(&name)?;
                Ok(Graded::basis(GradedKind::Vector, i))
            }
            Tok::Ident(name) => {
                if name == "exp" {
                    let a = self.scalar_arg("exp")?;
                    return Ok(Graded::scalar(a.exp()));
                }
                if name == "ln" {
                    let a = self.scalar_arg("ln")?;
                    return Ok(Graded::scalar(a.ln()?));
                }
                if let Some(k) = self.chart.symbol_index(&name) {
                    return Ok(Graded::scalar(Expr::var(k)));
                }
                if self.graded {
                    if let Some(rest) = name.strip_prefix('d') {
                        if let Ok(i) = self.chart.coord_index(rest) {
                            return Ok(Graded::basis(GradedKind::Form, i));
                        }
                    }
                }
                Err(Error::UnknownCoordinate(name))
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            t => Err(syntax(pos, format!("unexpected token {t:?}"))),
        }
    }
}

fn add(a: Graded, b: Graded, pos: usize) -> Result<Graded> {
    if a.kind == GradedKind::Scalar && a.is_zero() {
        return Ok(b);
    }
    if b.kind == GradedKind::Scalar && b.is_zero() {
        return Ok(a);
    }
    if a.kind != b.kind || a.degree != b.degree {
        return Err(Error::Degree(format!(
            "cannot add terms of different type or degree (byte {pos})"
        )));
    }
    let mut out = a;
    for (k, v) in b.components {
        let s = match out.components.remove(&k) {
            Some(u) => u + v,
            None => v,
        };
        if !s.is_zero() {
            out.components.insert(k, s);
        }
    }
    Ok(out)
}

fn mul(a: Graded, b: Graded, pos: usize) -> Result<Graded> {
    if let Some(s) = a.as_scalar() {
        return Ok(b.map(|e| &s * e));
    }
    if let Some(s) = b.as_scalar() {
        return Ok(a.map(|e| e * &s));
    }
    Err(syntax(pos, "`*` needs a scalar factor; use `^` for the wedge product"))
}

fn wedge(a: Graded, b: Graded, pos: usize) -> Result<Graded> {
    if a.kind == GradedKind::Scalar || b.kind == GradedKind::Scalar {
        return mul(a, b, pos);
    }
    if a.kind != b.kind {
        return Err(syntax(pos, "cannot wedge a form with a vector"));
    }
    let mut components: BTreeMap<Vec<usize>, Expr> = BTreeMap::new();
    for (ka, va) in &a.components {
        for (kb, vb) in &b.components {
            let mut idx: Vec<usize> = ka.iter().chain(kb).copied().collect();
            let Some(sign) = sort_with_sign(&mut idx) else {
                continue;
            };
            let mut t = va * vb;
            if sign < 0 {
                t = -t;
            }
            let s = match components.remove(&idx) {
                Some(u) => u + t,
                None => t,
            };
            if !s.is_zero() {
                components.insert(idx, s);
            }
        }
    }
    Ok(Graded {
        kind: a.kind,
        degree: a.degree + b.degree,
        components,
    })
}

fn run(src: &str, chart: &Chart, graded: bool) -> Result<Graded> {
    let mut p = Parser {
        toks: tokenize(src, graded)?,
        pos: 0,
        chart,
        graded,
    };
    if *p.peek() == Tok::End {
        return Err(syntax(0, "empty expression"));
    }
    let g = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.at(), "unexpected trailing input"));
    }
    Ok(g)
}

/// Parses a scalar expression on `chart` into canonical form.
pub fn parse_scalar(src: &str, chart: &Chart) -> Result<Expr> {
    let g = run(src, chart, false)?;
    Ok(g.as_scalar().expect("scalar grammar yields scalars"))
}

/// Parses a homogeneous form or multivector literal. A purely scalar input
/// yields kind `Scalar` of degree 0.
pub fn parse_graded(src: &str, chart: &Chart) -> Result<Graded> {
    run(src, chart, true)
}
