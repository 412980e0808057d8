//! Text formats: Salamon notation for algebras, a small expression language
//! for real and complex forms, vectors, endomorphisms and metrics.
//!
//! Positions in parse errors are 1-based character columns.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::cealg::LieAlgebra;
use crate::error::{Error, Result};
use crate::exterior::{ComplexKForm, Endo, KForm, Metric, Vector};
use crate::linalg::Matrix;
use crate::scalar::{parse_rational, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Gen(String),
    Vec(usize),
    Num(Rational),
    I,
    Ident(String),
    Plus,
    Minus,
    Wedge,
    Star,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Gen(d) => format!("e{d}"),
        Tok::Vec(i) => format!("X{i}"),
        Tok::Num(q) => q.to_string(),
        Tok::I => "i".into(),
        Tok::Ident(s) => s.clone(),
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Wedge => "^".into(),
        Tok::Star => "*".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::LBracket => "[".into(),
        Tok::RBracket => "]".into(),
        Tok::Comma => ",".into(),
        Tok::Colon => ":".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>()
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '^' | '∧' => Some(Tok::Wedge),
            '*' => Some(Tok::Star),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, pos));
            i += 1;
        } else if c.is_ascii_digit() {
            let num = digits(&mut i);
            let mut den = String::from("1");
            if i < chars.len() && chars[i] == '/' {
                i += 1;
                den = digits(&mut i);
                if den.is_empty() {
                    return Err(Error::parse(i + 1, "expected denominator after '/'"));
                }
            }
            let q = parse_rational(&format!("{num}/{den}"))
                .filter(|_| !den.trim_start_matches('0').is_empty())
                .ok_or_else(|| Error::parse(pos, "zero denominator"))?;
            out.push((Tok::Num(q), pos));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphabetic() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let has_digits = i < chars.len() && chars[i].is_ascii_digit();
            match word.as_str() {
                "e" if has_digits => out.push((Tok::Gen(digits(&mut i)), pos)),
                "X" if has_digits => {
                    let d = digits(&mut i);
                    let idx = d
                        .parse()
                        .map_err(|_| Error::parse(pos, "index too large"))?;
                    out.push((Tok::Vec(idx), pos));
                }
                "i" => out.push((Tok::I, pos)),
                _ => out.push((Tok::Ident(word), pos)),
            }
        } else {
            return Err(Error::parse(pos, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

/// Syntax tree of a form expression.
#[derive(Clone, Debug, PartialEq)]
pub enum FormExpr {
    /// `e<digits>` with its column.
    Generator(String, usize),
    Number(Rational),
    ImaginaryUnit,
    Neg(Box<FormExpr>),
    Sum(Box<FormExpr>, Box<FormExpr>),
    Difference(Box<FormExpr>, Box<FormExpr>),
    Wedge(Box<FormExpr>, Box<FormExpr>),
    /// `a * b`; one side must have degree 0.
    Product(Box<FormExpr>, Box<FormExpr>, usize),
}

impl FormExpr {
    fn mentions_i(&self) -> bool {
        match self {
            FormExpr::ImaginaryUnit => true,
            FormExpr::Generator(..) | FormExpr::Number(_) => false,
            FormExpr::Neg(a) => a.mentions_i(),
            FormExpr::Sum(a, b)
            | FormExpr::Difference(a, b)
            | FormExpr::Wedge(a, b)
            | FormExpr::Product(a, b, _) => a.mentions_i() || b.mentions_i(),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            end: text.chars().count() + 1,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{}'", describe(t))))
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => Error::parse(
                self.pos(),
                format!("expected {wanted}, found '{}'", describe(t)),
            ),
            None => Error::parse(self.pos(), format!("expected {wanted}, found end of input")),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at < self.toks.len() {
            Err(self.unexpected("end of input"))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<FormExpr> {
        let mut lhs = if self.eat(&Tok::Minus) {
            FormExpr::Neg(Box::new(self.term()?))
        } else {
            self.eat(&Tok::Plus);
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                lhs = FormExpr::Sum(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = FormExpr::Difference(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<FormExpr> {
        let mut lhs = self.factor()?;
        loop {
            let pos = self.pos();
            if self.eat(&Tok::Wedge) {
                lhs = FormExpr::Wedge(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(&Tok::Star) {
                lhs = FormExpr::Product(Box::new(lhs), Box::new(self.factor()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<FormExpr> {
        if self.eat(&Tok::Minus) {
            return Ok(FormExpr::Neg(Box::new(self.factor()?)));
        }
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Gen(d)) => {
                self.at += 1;
                Ok(FormExpr::Generator(d, pos))
            }
            Some(Tok::Num(q)) => {
                self.at += 1;
                Ok(FormExpr::Number(q))
            }
            Some(Tok::I) => {
                self.at += 1;
                Ok(FormExpr::ImaginaryUnit)
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected("a generator, number, 'i' or '('")),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let neg = self.eat(&Tok::Minus);
        if !neg {
            self.eat(&Tok::Plus);
        }
        match self.bump() {
            Some(Tok::Num(q)) => Ok(if neg { -q } else { q }),
            _ => {
                self.at -= 1;
                Err(self.unexpected("a rational number"))
            }
        }
    }

    fn index(&mut self) -> Result<usize> {
        let pos = self.pos();
        let q = self.rational()?;
        if !q.is_integer() || Signed::is_negative(&q) {
            return Err(Error::parse(pos, "expected a positive integer index"));
        }
        q.to_integer()
            .try_into()
            .map_err(|_| Error::parse(pos, "index too large"))
    }

    /// `[a, b, …]`
    fn rational_list(&mut self) -> Result<Vec<Rational>> {
        self.expect(&Tok::LBracket)?;
        let mut v = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(v);
        }
        loop {
            v.push(self.rational()?);
            if self.eat(&Tok::RBracket) {
                return Ok(v);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    /// `[[…], […], …]`, row-major.
    fn matrix(&mut self) -> Result<Vec<Vec<Rational>>> {
        self.expect(&Tok::LBracket)?;
        let mut rows = Vec::new();
        loop {
            rows.push(self.rational_list()?);
            if self.eat(&Tok::RBracket) {
                return Ok(rows);
            }
            self.expect(&Tok::Comma)?;
        }
    }
}

/// Parse a form expression into its syntax tree.
pub fn parse_form_expr(text: &str) -> Result<FormExpr> {
    let mut p = Parser::new(text)?;
    if p.peek().is_none() {
        return Err(Error::parse(1, "empty expression"));
    }
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// A parsed form: real unless the expression mentions `i`.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedForm<T> {
    Real(KForm<T>),
    Complex(ComplexKForm<T>),
}

impl<T: Scalar> ParsedForm<T> {
    pub fn into_complex(self) -> ComplexKForm<T> {
        match self {
            ParsedForm::Real(f) => ComplexKForm::from_real(f),
            ParsedForm::Complex(c) => c,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            ParsedForm::Real(f) => f.degree(),
            ParsedForm::Complex(c) => c.degree(),
        }
    }
}

fn generator_indices(digits: &str, dim: usize, pos: usize) -> Result<Vec<usize>> {
    let idx: Vec<usize> = if dim <= 9 {
        digits.bytes().map(|b| (b - b'0') as usize).collect()
    } else {
        vec![digits
            .parse()
            .map_err(|_| Error::parse(pos, "index too large"))?]
    };
    for &i in &idx {
        if i == 0 || i > dim {
            return Err(Error::parse(
                pos,
                format!("generator index {i} out of range 1..={dim}"),
            ));
        }
    }
    Ok(idx)
}

fn elaborate<T: Scalar>(e: &FormExpr, dim: usize) -> Result<ComplexKForm<T>> {
    let real = |f: KForm<T>| ComplexKForm::from_real(f);
    Ok(match e {
        FormExpr::Generator(d, pos) => real(KForm::basis(dim, &generator_indices(d, dim, *pos)?)),
        FormExpr::Number(q) => real(KForm::constant(dim, T::from_rational(q))),
        FormExpr::ImaginaryUnit => {
            ComplexKForm::new(KForm::zero(dim, 0), KForm::constant(dim, T::one()))?
        }
        FormExpr::Neg(a) => {
            let a = elaborate::<T>(a, dim)?;
            ComplexKForm::new(-a.re, -a.im)?
        }
        FormExpr::Sum(a, b) | FormExpr::Difference(a, b) => {
            let a = elaborate::<T>(a, dim)?;
            let b = elaborate::<T>(b, dim)?;
            if a.degree() != b.degree() {
                return Err(Error::Degree(format!(
                    "cannot add forms of degree {} and {}",
                    a.degree(),
                    b.degree()
                )));
            }
            if matches!(e, FormExpr::Sum(..)) {
                a + b
            } else {
                a - b
            }
        }
        FormExpr::Wedge(a, b) => {
            let a = elaborate::<T>(a, dim)?;
            let b = elaborate::<T>(b, dim)?;
            if a.degree() + b.degree() > dim {
                return Err(Error::Degree(format!(
                    "wedge of degrees {} and {} exceeds dimension {dim}",
                    a.degree(),
                    b.degree()
                )));
            }
            a.wedge(&b)
        }
        FormExpr::Product(a, b, pos) => {
            let a = elaborate::<T>(a, dim)?;
            let b = elaborate::<T>(b, dim)?;
            if a.degree() != 0 && b.degree() != 0 {
                return Err(Error::parse(
                    *pos,
                    "'*' needs a scalar on one side; use '^' for wedge products",
                ));
            }
            a.wedge(&b)
        }
    })
}

/// Parse and elaborate a form in dimension `dim`.
///
/// ```
/// use nilgeo::algdsl::{parse_form, ParsedForm};
/// use nilgeo::Rational;
/// let f = parse_form::<Rational>("(e1+i*e2)^(e3+i*e4)", 5).unwrap();
/// assert!(matches!(f, ParsedForm::Complex(_)));
/// ```
pub fn parse_form<T: Scalar>(text: &str, dim: usize) -> Result<ParsedForm<T>> {
    let e = parse_form_expr(text)?;
    let c = elaborate::<T>(&e, dim)?;
    Ok(if e.mentions_i() {
        ParsedForm::Complex(c)
    } else {
        ParsedForm::Real(c.re)
    })
}

/// A real form; imaginary parts are an error.
pub fn parse_real_form<T: Scalar>(text: &str, dim: usize) -> Result<KForm<T>> {
    let c = parse_form::<T>(text, dim)?.into_complex();
    if !c.im.is_zero() {
        return Err(Error::Invalid(format!(
            "expected a real form, got '{text}'"
        )));
    }
    Ok(c.re)
}

pub fn parse_complex_form<T: Scalar>(text: &str, dim: usize) -> Result<ComplexKForm<T>> {
    Ok(parse_form::<T>(text, dim)?.into_complex())
}

/// `X1 + 1/2*X3` or a coordinate list `[1, 0, 1/2]`.
pub fn parse_vector<T: Scalar>(text: &str, dim: usize) -> Result<Vector<T>> {
    let mut p = Parser::new(text)?;
    if p.peek() == Some(&Tok::LBracket) {
        let pos = p.pos();
        let v = p.rational_list()?;
        p.finish()?;
        if v.len() != dim {
            return Err(Error::parse(
                pos,
                format!("expected {dim} coordinates, got {}", v.len()),
            ));
        }
        return Ok(Vector::new(v.iter().map(T::from_rational).collect()));
    }
    let mut coeffs = vec![Rational::zero(); dim];
    let mut first = true;
    loop {
        let sign = if p.eat(&Tok::Minus) {
            -Rational::one()
        } else if p.eat(&Tok::Plus) || first {
            Rational::one()
        } else if p.peek().is_none() {
            break;
        } else {
            return Err(p.unexpected("'+' or '-'"));
        };
        first = false;
        let mut c = sign;
        if let Some(Tok::Num(q)) = p.peek().cloned() {
            p.at += 1;
            c *= q;
            p.expect(&Tok::Star)?;
        }
        let pos = p.pos();
        match p.bump() {
            Some(Tok::Vec(i)) if (1..=dim).contains(&i) => {
                coeffs[i - 1] = coeffs[i - 1].clone() + c;
            }
            Some(Tok::Vec(i)) => {
                return Err(Error::parse(
                    pos,
                    format!("vector index {i} out of range 1..={dim}"),
                ))
            }
            _ => {
                p.at -= 1;
                return Err(p.unexpected("a basis vector X<k>"));
            }
        }
        if p.peek().is_none() {
            break;
        }
    }
    Ok(Vector::new(coeffs.iter().map(T::from_rational).collect()))
}

fn matrix_from_rows<T: Scalar>(rows: Vec<Vec<Rational>>, dim: usize) -> Result<Matrix<T>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Invalid(format!("expected a {dim}x{dim} matrix")));
    }
    Ok(Matrix::from_rows(
        rows.into_iter()
            .map(|r| r.iter().map(T::from_rational).collect())
            .collect(),
    ))
}

/// `pairs:(1,2),(3,4)` or a row-major matrix `[[…],…]` whose column `j` is
/// the image of `X_j`.
pub fn parse_endo<T: Scalar>(text: &str, dim: usize) -> Result<Endo<T>> {
    let mut p = Parser::new(text)?;
    match p.peek() {
        Some(Tok::Ident(w)) if w == "pairs" => {
            p.at += 1;
            p.expect(&Tok::Colon)?;
            let mut pairs = Vec::new();
            if p.peek().is_some() {
                loop {
                    p.expect(&Tok::LParen)?;
                    let a = p.index()?;
                    p.expect(&Tok::Comma)?;
                    let b = p.index()?;
                    p.expect(&Tok::RParen)?;
                    pairs.push((a, b));
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            p.finish()?;
            Endo::from_pairs(dim, &pairs)
        }
        Some(Tok::LBracket) => {
            let rows = p.matrix()?;
            p.finish()?;
            Endo::from_matrix(matrix_from_rows(rows, dim)?)
        }
        _ => Err(p.unexpected("'pairs:' or a matrix")),
    }
}

/// `diag(1,1,4)`, `identity` or a symmetric row-major matrix.
pub fn parse_metric<T: Scalar>(text: &str, dim: usize) -> Result<Metric<T>> {
    let mut p = Parser::new(text)?;
    match p.peek().cloned() {
        Some(Tok::Ident(w)) if w == "identity" => {
            p.at += 1;
            p.finish()?;
            Ok(Metric::identity(dim))
        }
        Some(Tok::Ident(w)) if w == "diag" => {
            p.at += 1;
            p.expect(&Tok::LParen)?;
            let mut v = vec![p.rational()?];
            while p.eat(&Tok::Comma) {
                v.push(p.rational()?);
            }
            p.expect(&Tok::RParen)?;
            p.finish()?;
            if v.len() != dim {
                return Err(Error::Invalid(format!("expected {dim} diagonal entries")));
            }
            Ok(Metric::diagonal(v.iter().map(T::from_rational).collect()))
        }
        Some(Tok::LBracket) => {
            let rows = p.matrix()?;
            p.finish()?;
            Metric::new(matrix_from_rows(rows, dim)?)
        }
        _ => Err(p.unexpected("'diag(...)', 'identity' or a matrix")),
    }
}

fn parse_compact_entry<T: Scalar>(chars: &[char], start: usize, dim: usize) -> Result<KForm<T>> {
    let mut f = KForm::zero(dim, 2);
    let mut i = 0;
    let at = |i: usize| start + i + 1;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i < chars.len() && chars[i] == '0' {
        let mut j = i + 1;
        skip_ws(&mut j);
        if j == chars.len() {
            return Ok(f);
        }
    }
    let mut first = true;
    loop {
        skip_ws(&mut i);
        if i == chars.len() {
            if first {
                return Err(Error::parse(at(i), "empty entry"));
            }
            return Ok(f);
        }
        let mut sign = Rational::one();
        match chars[i] {
            '+' | '-' => {
                if chars[i] == '-' {
                    sign = -sign;
                }
                i += 1;
                skip_ws(&mut i);
            }
            _ if !first => return Err(Error::parse(at(i), "expected '+' or '-'")),
            _ => {}
        }
        first = false;
        let tok_start = i;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
            i += 1;
        }
        let lit: String = chars[tok_start..i].iter().collect();
        if lit.is_empty() {
            return Err(Error::parse(at(i), "expected an index pair"));
        }
        skip_ws(&mut i);
        let (coef, pair_text, pair_pos) = if i < chars.len() && chars[i] == '*' {
            let coef = parse_rational(&lit)
                .ok_or_else(|| Error::parse(at(tok_start), format!("bad coefficient '{lit}'")))?;
            i += 1;
            skip_ws(&mut i);
            let ps = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            (coef, chars[ps..i].iter().collect::<String>(), ps)
        } else {
            (Rational::one(), lit, tok_start)
        };
        let b = pair_text.as_bytes();
        if b.len() != 2 || !b.iter().all(u8::is_ascii_digit) {
            return Err(Error::parse(
                at(pair_pos),
                format!("expected a two-digit index pair, found '{pair_text}'"),
            ));
        }
        let (p, q) = ((b[0] - b'0') as usize, (b[1] - b'0') as usize);
        if p >= q {
            return Err(Error::parse(
                at(pair_pos),
                format!("invalid pair '{pair_text}': indices must be strictly increasing"),
            ));
        }
        if p == 0 || q > dim {
            return Err(Error::parse(
                at(pair_pos),
                format!("pair '{pair_text}' out of range 1..={dim}"),
            ));
        }
        f = f + KForm::basis(dim, &[p, q]).scale(T::from_rational(&(sign * coef)));
    }
}

fn parse_compact<T: Scalar>(text: &str) -> Result<Vec<KForm<T>>> {
    let chars: Vec<char> = text.chars().collect();
    let open = chars
        .iter()
        .position(|c| !c.is_whitespace())
        .filter(|&i| chars[i] == '(')
        .ok_or_else(|| Error::parse(1, "algebra must start with '('"))?;
    let close = chars
        .iter()
        .rposition(|c| !c.is_whitespace())
        .filter(|&i| chars[i] == ')' && i > open)
        .ok_or_else(|| Error::parse(chars.len() + 1, "algebra must end with ')'"))?;
    let body = &chars[open + 1..close];
    let mut entries = Vec::new();
    let mut start = 0;
    for (k, c) in body.iter().enumerate() {
        if *c == ',' {
            entries.push((start, k));
            start = k + 1;
        } else if *c == '(' || *c == ')' {
            return Err(Error::parse(open + k + 2, format!("unexpected '{c}'")));
        }
    }
    entries.push((start, body.len()));
    let dim = entries.len();
    if dim > 9 {
        return Err(Error::parse(
            1,
            "compact notation supports dimension at most 9; use the JSON format",
        ));
    }
    entries
        .into_iter()
        .map(|(s, e)| parse_compact_entry::<T>(&body[s..e], open + 1 + s, dim))
        .collect()
}

fn json_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| Error::Invalid(format!("bad rational '{s}'")))
        }
        Value::Number(n) => n
            .as_i64()
            .map(|k| Rational::from_integer(k.into()))
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "coefficient {n} must be an integer or a \"p/q\" string"
                ))
            }),
        _ => Err(Error::Invalid(format!("bad coefficient {v}"))),
    }
}

fn json_index(v: &Value, dim: usize) -> Result<usize> {
    let i = v
        .as_u64()
        .ok_or_else(|| Error::Invalid(format!("bad index {v}")))? as usize;
    if i == 0 || i > dim {
        return Err(Error::IndexOutOfRange { index: i, dim });
    }
    Ok(i)
}

fn parse_json<T: Scalar>(text: &str) -> Result<Vec<KForm<T>>> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Invalid("missing integer field \"dim\"".into()))?
        as usize;
    if dim > crate::exterior::MAX_DIM {
        return Err(Error::Invalid(format!("dimension {dim} is too large")));
    }
    let mut d1: Vec<KForm<T>> = (0..dim).map(|_| KForm::zero(dim, 2.min(dim))).collect();
    let Some(d) = v.get("d") else {
        return Ok(d1);
    };
    let d = d
        .as_object()
        .ok_or_else(|| Error::Invalid("\"d\" must be an object".into()))?;
    for (key, terms) in d {
        let k: usize = key
            .parse()
            .map_err(|_| Error::Invalid(format!("bad generator key '{key}'")))?;
        if k == 0 || k > dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        let terms = terms
            .as_array()
            .ok_or_else(|| Error::Invalid(format!("d.{key} must be a list")))?;
        for t in terms {
            let t = t
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::Invalid(format!("term {t} must be [coef, i, j]")))?;
            let c = json_rational(&t[0])?;
            let (i, j) = (json_index(&t[1], dim)?, json_index(&t[2], dim)?);
            if i >= j {
                return Err(Error::Invalid(format!(
                    "invalid pair ({i},{j}): indices must be strictly increasing"
                )));
            }
            d1[k - 1] = d1[k - 1].clone() + KForm::basis(dim, &[i, j]).scale(T::from_rational(&c));
        }
    }
    Ok(d1)
}

/// Differentials of the generators, from compact or JSON notation, without
/// the Jacobi check.
pub fn parse_differentials<T: Scalar>(text: &str) -> Result<Vec<KForm<T>>> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_compact(text)
    }
}

/// Parse `(0,0,12)`-style notation (or the JSON format) and verify Jacobi.
pub fn parse_algebra<T: Scalar>(text: &str) -> Result<LieAlgebra<T>> {
    LieAlgebra::new(parse_differentials(text)?)
}

/// Like [`parse_algebra`], additionally requiring nilpotency.
pub fn parse_nilpotent_algebra<T: Scalar>(text: &str) -> Result<LieAlgebra<T>> {
    let alg = parse_algebra::<T>(text)?;
    if !alg.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    Ok(alg)
}

fn compact_entry<T: Scalar>(f: &KForm<T>) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (b, c) in f.terms() {
        let idx = b.indices();
        let label = format!("{}{}", idx[0], idx[1]);
        let neg = c.is_negative();
        let abs = if neg { -c.clone() } else { c.clone() };
        if neg {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if abs != T::one() {
            let _ = write!(s, "{abs}*");
        }
        s.push_str(&label);
    }
    s
}

/// Compact notation for dimension at most 9, JSON otherwise.
pub fn serialize_algebra<T: Scalar>(alg: &LieAlgebra<T>) -> String {
    if alg.dim() <= 9 {
        let parts: Vec<String> = alg
            .generator_differentials()
            .iter()
            .map(compact_entry)
            .collect();
        format!("({})", parts.join(","))
    } else {
        serialize_algebra_json(alg)
    }
}

pub fn serialize_algebra_json<T: Scalar>(alg: &LieAlgebra<T>) -> String {
    let mut d = BTreeMap::new();
    for (k, f) in alg.generator_differentials().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let terms: Vec<Value> = f
            .terms()
            .map(|(b, c)| {
                let idx = b.indices();
                serde_json::json!([c.to_string(), idx[0], idx[1]])
            })
            .collect();
        d.insert((k + 1).to_string(), Value::Array(terms));
    }
    let mut obj = serde_json::Map::new();
    obj.insert("dim".into(), Value::from(alg.dim()));
    obj.insert("d".into(), Value::Object(d.into_iter().collect()));
    Value::Object(obj).to_string()
}
