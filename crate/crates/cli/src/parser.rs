//! Line-oriented presentation files.
//!
//! Grammar (one statement per line, `#` starts a comment):
//!
//! ```text
//! generator <name> <degree>
//! d <name> = <polynomial>
//! dim <m>
//! cocycle <label> degree -<n>: <name> -> <polynomial>, ...
//! basis <name> <degree> [weight <w>]
//! unit <name>
//! window <lo> <hi>
//! product <a> <b> = <linear combination>
//! delta <a> = <linear combination>
//! ```
//!
//! Polynomials use `+ - * ^`, integer or rational coefficients `p/q`, and
//! `1` for the unit; `0` is the zero polynomial. Every referenced name must
//! be declared first, values must be homogeneous of the expected degree,
//! and generators of degree one are rejected. Parsing normalizes all values
//! to canonical form, so `parse(print(x)) == x`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::bigint::BigInt;
use num::{One, Zero};
use thiserror::Error;

use loopcalc::gca::{Algebra, Generator, Poly, Q};
use loopcalc::stringbv::{BvAlgebra, BvElement, BvVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

/// A cocycle stanza: a labelled degree `-n` assignment of generator values.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleStanza {
    pub label: String,
    pub n: usize,
    /// Values by generator index; zero values are omitted.
    pub values: BTreeMap<usize, Poly>,
}

/// A parsed presentation: the generator algebra, the differential values,
/// the optional formal dimension, cocycle stanzas, and an optional finite
/// BV presentation.
#[derive(Debug, Clone, PartialEq)]
pub struct PresentationFile {
    pub algebra: Algebra,
    /// Differential values by generator index; zero values are omitted.
    pub differentials: BTreeMap<usize, Poly>,
    pub dim: Option<usize>,
    pub cocycles: Vec<CocycleStanza>,
    pub bv: Option<BvAlgebra>,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(BigInt),
    Sym(char),
    Arrow,
}

#[derive(Debug)]
struct Tok {
    token: Token,
    col: usize,
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok {
                token: Token::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok {
                token: Token::Number(text.parse().expect("digits")),
                col,
            });
        } else if c == '-' && i + 1 < chars.len() && chars[i + 1] == '>' {
            out.push(Tok {
                token: Token::Arrow,
                col,
            });
            i += 2;
        } else if "+-*^=:,/".contains(c) {
            out.push(Tok {
                token: Token::Sym(c),
                col,
            });
            i += 1;
        } else {
            return Err(ParseError::new(
                line_no,
                col,
                format!("unexpected character `{}`", c),
            ));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|t| &t.token)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|t| t.col)
            .unwrap_or_else(|| self.toks.last().map(|t| t.col + 1).unwrap_or(1))
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos).map(|t| &t.token);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), message)
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token::Ident(_)) => match self.next() {
                Some(Token::Ident(s)) => Ok(s.clone()),
                _ => unreachable!(),
            },
            _ => Err(self.error("expected a name")),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token::Sym(s)) if *s == c => {
                self.next();
                Ok(())
            }
            _ => Err(self.error(format!("expected `{}`", c))),
        }
    }

    fn expect_number(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Token::Number(_)) => match self.next() {
                Some(Token::Number(n)) => Ok(n.clone()),
                _ => unreachable!(),
            },
            _ => Err(self.error("expected a number")),
        }
    }

    fn expect_signed(&mut self) -> Result<BigInt, ParseError> {
        let negative = matches!(self.peek(), Some(Token::Sym('-')));
        if negative {
            self.next();
        }
        let n = self.expect_number()?;
        Ok(if negative { -n } else { n })
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }
}

fn to_usize(n: &BigInt, cursor: &Cursor, what: &str) -> Result<usize, ParseError> {
    usize::try_from(n.clone()).map_err(|_| cursor.error(format!("{what} out of range")))
}

fn to_i64(n: &BigInt, cursor: &Cursor, what: &str) -> Result<i64, ParseError> {
    i64::try_from(n.clone()).map_err(|_| cursor.error(format!("{what} out of range")))
}

/// Parses one coefficient: `p` or `p/q`.
fn parse_coefficient(cursor: &mut Cursor) -> Result<Q, ParseError> {
    let numer = cursor.expect_number()?;
    if matches!(cursor.peek(), Some(Token::Sym('/'))) {
        cursor.next();
        let denom = cursor.expect_number()?;
        if denom.is_zero() {
            return Err(cursor.error("zero denominator"));
        }
        Ok(Q::new(numer, denom))
    } else {
        Ok(Q::from_integer(numer))
    }
}

/// Parses a polynomial over the generators of `alg`, multiplying factors in
/// written order so reordering signs are absorbed into the coefficients.
fn parse_poly(cursor: &mut Cursor, alg: &Algebra) -> Result<Poly, ParseError> {
    let mut out = Poly::zero();
    let mut first = true;
    loop {
        let mut sign = Q::one();
        match cursor.peek() {
            Some(Token::Sym('-')) => {
                cursor.next();
                sign = -sign;
            }
            Some(Token::Sym('+')) if !first => {
                cursor.next();
            }
            None if first => return Err(cursor.error("expected a polynomial")),
            None => break,
            _ if first => {}
            _ => return Err(cursor.error("expected `+` or `-`")),
        }
        let term = parse_term(cursor, alg)?;
        out = out.plus(&term.scaled(&sign));
        first = false;
        if cursor.at_end() || !matches!(cursor.peek(), Some(Token::Sym('+') | Token::Sym('-'))) {
            break;
        }
    }
    Ok(out)
}

fn parse_term(cursor: &mut Cursor, alg: &Algebra) -> Result<Poly, ParseError> {
    let mut acc = Poly::one(alg.len());
    let mut any = false;
    if matches!(cursor.peek(), Some(Token::Number(_))) {
        let c = parse_coefficient(cursor)?;
        acc = acc.scaled(&c);
        any = true;
        if matches!(cursor.peek(), Some(Token::Sym('*'))) {
            cursor.next();
        } else if !matches!(cursor.peek(), Some(Token::Ident(_))) {
            return Ok(acc);
        }
    }
    loop {
        let col = cursor.col();
        let name = match cursor.peek() {
            Some(Token::Ident(_)) => cursor.expect_ident()?,
            _ if any => return Err(cursor.error("expected a generator name")),
            _ => return Err(cursor.error("expected a coefficient or a generator name")),
        };
        let index = alg.index_of(&name).ok_or_else(|| {
            ParseError::new(cursor.line, col, format!("undeclared name `{}`", name))
        })?;
        let mut exp = 1u32;
        if matches!(cursor.peek(), Some(Token::Sym('^'))) {
            cursor.next();
            let n = cursor.expect_number()?;
            exp = u32::try_from(n).map_err(|_| cursor.error("exponent out of range"))?;
        }
        let gen = Poly::generator(alg.len(), index);
        for _ in 0..exp {
            acc = alg.mul(&acc, &gen);
        }
        any = true;
        if matches!(cursor.peek(), Some(Token::Sym('*'))) {
            cursor.next();
        } else {
            break;
        }
    }
    Ok(acc)
}

/// Parses a linear combination of declared basis names.
fn parse_lincombo(
    cursor: &mut Cursor,
    names: &BTreeMap<String, usize>,
) -> Result<BvVec, ParseError> {
    let mut out: BvVec = BTreeMap::new();
    let mut first = true;
    loop {
        let mut sign = Q::one();
        match cursor.peek() {
            Some(Token::Sym('-')) => {
                cursor.next();
                sign = -sign;
            }
            Some(Token::Sym('+')) if !first => {
                cursor.next();
            }
            None if first => return Err(cursor.error("expected a linear combination")),
            None => break,
            _ => {}
        }
        let mut coeff = sign;
        if matches!(cursor.peek(), Some(Token::Number(_))) {
            let c = parse_coefficient(cursor)?;
            coeff *= c;
            if matches!(cursor.peek(), Some(Token::Sym('*'))) {
                cursor.next();
            } else if cursor.at_end()
                || matches!(cursor.peek(), Some(Token::Sym('+') | Token::Sym('-')))
            {
                // A bare constant: only zero is meaningful here.
                if !coeff.is_zero() {
                    return Err(cursor.error("a constant term needs a basis name"));
                }
                first = false;
                if cursor.at_end() {
                    break;
                }
                continue;
            }
        }
        let col = cursor.col();
        let name = cursor.expect_ident()?;
        let index = *names.get(&name).ok_or_else(|| {
            ParseError::new(cursor.line, col, format!("undeclared name `{}`", name))
        })?;
        let sum = out.get(&index).cloned().unwrap_or_else(Q::zero) + coeff;
        if sum.is_zero() {
            out.remove(&index);
        } else {
            out.insert(index, sum);
        }
        first = false;
        if cursor.at_end() {
            break;
        }
        if !matches!(cursor.peek(), Some(Token::Sym('+') | Token::Sym('-'))) {
            return Err(cursor.error("expected `+` or `-`"));
        }
    }
    Ok(out)
}

#[derive(Debug, Default)]
struct BvDraft {
    basis: Vec<BvElement>,
    names: BTreeMap<String, usize>,
    lines: BTreeMap<usize, usize>,
    unit: Option<(String, usize)>,
    window: Option<(i64, i64)>,
    products: BTreeMap<(usize, usize), BvVec>,
    deltas: BTreeMap<usize, BvVec>,
}

/// Raw statements collected on the first pass.
#[derive(Debug)]
enum RawStatement {
    Generator {
        name: String,
        degree: usize,
    },
    Differential {
        name: String,
        rest: Vec<Tok>,
    },
    Dim(usize),
    Cocycle {
        label: String,
        n: usize,
        rest: Vec<Tok>,
    },
}

pub fn parse(text: &str) -> Result<PresentationFile, ParseError> {
    let mut raw: Vec<(usize, RawStatement)> = Vec::new();
    let mut bv = BvDraft::default();
    let mut bv_present = false;
    let mut bv_raw: Vec<(usize, Vec<Tok>)> = Vec::new();

    // First pass: split statements, collect generator declarations.
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = tokenize(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut cursor = Cursor {
            toks: &toks,
            pos: 0,
            line: line_no,
        };
        let head = cursor.expect_ident().map_err(|mut e| {
            e.message = "expected a statement keyword".into();
            e
        })?;
        match head.as_str() {
            "generator" => {
                let name = cursor.expect_ident()?;
                let at = cursor.col();
                let degree = to_usize(&cursor.expect_number()?, &cursor, "degree")?;
                cursor.expect_end()?;
                if degree == 0 {
                    return Err(ParseError::new(line_no, at, "generator degree must be positive"));
                }
                if degree == 1 {
                    return Err(ParseError::new(
                        line_no,
                        at,
                        format!("generator `{}` has degree 1; models must be simply connected", name),
                    ));
                }
                raw.push((line_no, RawStatement::Generator { name, degree }));
            }
            "d" => {
                let name = cursor.expect_ident()?;
                cursor.expect_sym('=')?;
                let rest: Vec<Tok> = toks[cursor.pos..]
                    .iter()
                    .map(|t| Tok {
                        token: t.token.clone(),
                        col: t.col,
                    })
                    .collect();
                if rest.is_empty() {
                    return Err(cursor.error("expected a polynomial"));
                }
                raw.push((line_no, RawStatement::Differential { name, rest }));
            }
            "dim" => {
                let m = to_usize(&cursor.expect_number()?, &cursor, "dimension")?;
                cursor.expect_end()?;
                raw.push((line_no, RawStatement::Dim(m)));
            }
            "cocycle" => {
                let label = cursor.expect_ident()?;
                let kw = cursor.expect_ident()?;
                if kw != "degree" {
                    return Err(cursor.error("expected `degree`"));
                }
                cursor.expect_sym('-')?;
                let n = to_usize(&cursor.expect_number()?, &cursor, "cocycle degree")?;
                if n == 0 {
                    return Err(cursor.error("cocycle degree must be negative"));
                }
                cursor.expect_sym(':')?;
                let rest: Vec<Tok> = toks[cursor.pos..]
                    .iter()
                    .map(|t| Tok {
                        token: t.token.clone(),
                        col: t.col,
                    })
                    .collect();
                raw.push((line_no, RawStatement::Cocycle { label, n, rest }));
            }
            "basis" | "unit" | "window" | "product" | "delta" => {
                bv_present = true;
                bv_raw.push((line_no, toks));
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    1,
                    format!("unknown statement `{}`", other),
                ));
            }
        }
    }

    // Build the algebra from the generator declarations.
    let mut gens = Vec::new();
    for (line_no, stmt) in &raw {
        if let RawStatement::Generator { name, degree } = stmt {
            if gens.iter().any(|g: &Generator| &g.name == name) {
                return Err(ParseError::new(
                    *line_no,
                    1,
                    format!("duplicate generator `{}`", name),
                ));
            }
            gens.push(Generator::base(name.clone(), *degree));
        }
    }
    let algebra = Algebra::new(gens)
        .map_err(|e| ParseError::new(1, 1, e.to_string()))?;

    // Second pass: differentials and cocycles against the full algebra.
    let mut differentials: BTreeMap<usize, Poly> = BTreeMap::new();
    let mut cocycles: Vec<CocycleStanza> = Vec::new();
    for (line_no, stmt) in &raw {
        match stmt {
            RawStatement::Differential { name, rest } => {
                let mut cursor = Cursor {
                    toks: rest,
                    pos: 0,
                    line: *line_no,
                };
                let index = algebra.index_of(name).ok_or_else(|| {
                    ParseError::new(*line_no, 1, format!("undeclared name `{}`", name))
                })?;
                let value = parse_poly(&mut cursor, &algebra)?;
                cursor.expect_end()?;
                let expected = algebra.generator(index).degree + 1;
                if !algebra.is_homogeneous(&value, expected) {
                    return Err(ParseError::new(
                        *line_no,
                        1,
                        format!(
                            "d {} must be homogeneous of degree {}",
                            name, expected
                        ),
                    ));
                }
                if differentials.contains_key(&index) {
                    return Err(ParseError::new(
                        *line_no,
                        1,
                        format!("duplicate differential for `{}`", name),
                    ));
                }
                if !value.is_zero() {
                    differentials.insert(index, value);
                }
            }
            RawStatement::Cocycle { label, n, rest } => {
                let mut cursor = Cursor {
                    toks: rest,
                    pos: 0,
                    line: *line_no,
                };
                let mut values: BTreeMap<usize, Poly> = BTreeMap::new();
                loop {
                    let col = cursor.col();
                    let name = cursor.expect_ident()?;
                    let index = algebra.index_of(&name).ok_or_else(|| {
                        ParseError::new(*line_no, col, format!("undeclared name `{}`", name))
                    })?;
                    match cursor.peek() {
                        Some(Token::Arrow) => {
                            cursor.next();
                        }
                        _ => return Err(cursor.error("expected `->`")),
                    }
                    let value = parse_poly(&mut cursor, &algebra)?;
                    let expected = algebra.generator(index).degree as i64 - *n as i64;
                    let ok = value.is_zero()
                        || (expected >= 0
                            && algebra.is_homogeneous(&value, expected as usize));
                    if !ok {
                        return Err(ParseError::new(
                            *line_no,
                            col,
                            format!(
                                "value of `{}` must be homogeneous of degree {}",
                                name, expected
                            ),
                        ));
                    }
                    if !value.is_zero() {
                        values.insert(index, value);
                    }
                    if cursor.at_end() {
                        break;
                    }
                    cursor.expect_sym(',')?;
                }
                if cocycles.iter().any(|c| &c.label == label) {
                    return Err(ParseError::new(
                        *line_no,
                        1,
                        format!("duplicate cocycle label `{}`", label),
                    ));
                }
                cocycles.push(CocycleStanza {
                    label: label.clone(),
                    n: *n,
                    values,
                });
            }
            _ => {}
        }
    }

    // Third pass: the BV stanzas.
    for (line_no, toks) in &bv_raw {
        let mut cursor = Cursor {
            toks,
            pos: 0,
            line: *line_no,
        };
        let head = cursor.expect_ident()?;
        match head.as_str() {
            "basis" => {
                let name = cursor.expect_ident()?;
                let degree = to_i64(&cursor.expect_signed()?, &cursor, "degree")?;
                let weight = if matches!(cursor.peek(), Some(Token::Ident(w)) if w == "weight") {
                    cursor.next();
                    Some(
                        u32::try_from(cursor.expect_number()?)
                            .map_err(|_| cursor.error("weight out of range"))?,
                    )
                } else {
                    None
                };
                cursor.expect_end()?;
                if bv.names.contains_key(&name) {
                    return Err(ParseError::new(
                        *line_no,
                        1,
                        format!("duplicate basis element `{}`", name),
                    ));
                }
                bv.names.insert(name.clone(), bv.basis.len());
                bv.lines.insert(bv.basis.len(), *line_no);
                bv.basis.push(BvElement {
                    name,
                    degree,
                    weight,
                });
            }
            "unit" => {
                let col = cursor.col();
                let name = cursor.expect_ident()?;
                cursor.expect_end()?;
                let index = *bv.names.get(&name).ok_or_else(|| {
                    ParseError::new(*line_no, col, format!("undeclared name `{}`", name))
                })?;
                bv.unit = Some((name, index));
            }
            "window" => {
                let lo = to_i64(&cursor.expect_signed()?, &cursor, "window bound")?;
                let hi = to_i64(&cursor.expect_signed()?, &cursor, "window bound")?;
                cursor.expect_end()?;
                bv.window = Some((lo, hi));
            }
            "product" => {
                let col = cursor.col();
                let a = cursor.expect_ident()?;
                let ai = *bv.names.get(&a).ok_or_else(|| {
                    ParseError::new(*line_no, col, format!("undeclared name `{}`", a))
                })?;
                let col = cursor.col();
                let b = cursor.expect_ident()?;
                let bi = *bv.names.get(&b).ok_or_else(|| {
                    ParseError::new(*line_no, col, format!("undeclared name `{}`", b))
                })?;
                cursor.expect_sym('=')?;
                let value = parse_lincombo(&mut cursor, &bv.names)?;
                let expected = bv.basis[ai].degree + bv.basis[bi].degree;
                if value.keys().any(|t| bv.basis[*t].degree != expected) {
                    return Err(ParseError::new(
                        *line_no,
                        1,
                        format!("product {} {} must land in degree {}", a, b, expected),
                    ));
                }
                bv.products.insert((ai, bi), value);
            }
            "delta" => {
                let col = cursor.col();
                let a = cursor.expect_ident()?;
                let ai = *bv.names.get(&a).ok_or_else(|| {
                    ParseError::new(*line_no, col, format!("undeclared name `{}`", a))
                })?;
                cursor.expect_sym('=')?;
                let value = parse_lincombo(&mut cursor, &bv.names)?;
                let expected = bv.basis[ai].degree + 1;
                if value.keys().any(|t| bv.basis[*t].degree != expected) {
                    return Err(ParseError::new(
                        *line_no,
                        1,
                        format!("delta {} must land in degree {}", a, expected),
                    ));
                }
                bv.deltas.insert(ai, value);
            }
            _ => unreachable!(),
        }
    }

    let bv_algebra = if bv_present {
        let (_, unit) = bv
            .unit
            .clone()
            .ok_or_else(|| ParseError::new(1, 1, "bv presentation without a `unit` line"))?;
        let window = bv.window.unwrap_or_else(|| {
            let lo = bv.basis.iter().map(|e| e.degree).min().unwrap_or(0);
            let hi = bv.basis.iter().map(|e| e.degree).max().unwrap_or(0);
            (lo, hi)
        });
        Some(
            BvAlgebra::new(
                "file".to_string(),
                bv.basis,
                unit,
                window,
                bv.products,
                bv.deltas,
            )
            .map_err(|e| ParseError::new(1, 1, e.to_string()))?,
        )
    } else {
        None
    };

    Ok(PresentationFile {
        algebra,
        differentials,
        dim: raw.iter().find_map(|(_, s)| match s {
            RawStatement::Dim(m) => Some(*m),
            _ => None,
        }),
        cocycles,
        bv: bv_algebra,
    })
}

/// Prints a presentation in canonical form. `parse(print(x)) == x`.
pub fn print(file: &PresentationFile) -> String {
    let mut out = String::new();
    for g in file.algebra.generators() {
        let _ = writeln!(out, "generator {} {}", g.name, g.degree);
    }
    for (index, value) in &file.differentials {
        let _ = writeln!(
            out,
            "d {} = {}",
            file.algebra.generator(*index).name,
            file.algebra.format_poly(value)
        );
    }
    if let Some(m) = file.dim {
        let _ = writeln!(out, "dim {}", m);
    }
    for c in &file.cocycles {
        let assignments: Vec<String> = c
            .values
            .iter()
            .map(|(index, value)| {
                format!(
                    "{} -> {}",
                    file.algebra.generator(*index).name,
                    file.algebra.format_poly(value)
                )
            })
            .collect();
        let _ = writeln!(
            out,
            "cocycle {} degree -{}: {}",
            c.label,
            c.n,
            assignments.join(", ")
        );
    }
    if let Some(bv) = &file.bv {
        let _ = writeln!(out);
        for e in &bv.elements {
            match e.weight {
                Some(w) => {
                    let _ = writeln!(out, "basis {} {} weight {}", e.name, e.degree, w);
                }
                None => {
                    let _ = writeln!(out, "basis {} {}", e.name, e.degree);
                }
            }
        }
        let _ = writeln!(out, "unit {}", bv.elements[bv.unit].name);
        let _ = writeln!(out, "window {} {}", bv.window.0, bv.window.1);
        for ((i, j), value) in bv.known_products() {
            let _ = writeln!(
                out,
                "product {} {} = {}",
                bv.elements[*i].name,
                bv.elements[*j].name,
                format_lincombo(bv, value)
            );
        }
        for (i, value) in bv.known_delta() {
            let _ = writeln!(
                out,
                "delta {} = {}",
                bv.elements[*i].name,
                format_lincombo(bv, value)
            );
        }
    }
    out
}

fn format_lincombo(bv: &BvAlgebra, value: &BvVec) -> String {
    if value.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (i, c)) in value.iter().enumerate() {
        let neg = c < &Q::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if abs.is_one() {
            out.push_str(&bv.elements[*i].name);
        } else {
            let _ = write!(out, "{}*{}", abs, bv.elements[*i].name);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use loopcalc::q_int;

    const S2: &str = "generator v 2\ngenerator w 3\nd w = v^2\ndim 2\n";

    #[test]
    fn parses_the_two_sphere() {
        let file = parse(S2).unwrap();
        assert_eq!(file.dim, Some(2));
        let w = file.algebra.index_of("w").unwrap();
        let value = &file.differentials[&w];
        assert_eq!(file.algebra.format_poly(value), "v^2");
        assert!(file.bv.is_none());
    }

    #[test]
    fn rejects_inhomogeneous_differential() {
        let err = parse("generator v 2\ngenerator w 3\nd w = v + 1\n").unwrap_err();
        assert!(err.message.contains("homogeneous"), "{}", err);
        assert_eq!(err.line, 3);
    }

    #[test]
    fn rejects_degree_one_generators() {
        let err = parse("generator v 1\n").unwrap_err();
        assert!(err.message.contains("simply connected"), "{}", err);
    }

    #[test]
    fn rejects_undeclared_names() {
        let err = parse("generator v 2\nd v = u^2\n").unwrap_err();
        assert!(err.message.contains("undeclared"), "{}", err);
        assert_eq!(err.line, 2);
    }

    #[test]
    fn reports_syntax_errors_with_position() {
        let err = parse("generator v 2\nd v = ^\n").unwrap_err();
        assert_eq!((err.line, err.col), (2, 7));
    }

    #[test]
    fn koszul_signs_absorb_into_coefficients() {
        // w * v_bar-like reordering: here two odd generators anticommute.
        let text = "generator a 3\ngenerator b 3\nd a = 0\n";
        let file = parse(text).unwrap();
        let _ = file;
        let toks = tokenize("b*a", 1).unwrap();
        let mut cursor = Cursor {
            toks: &toks,
            pos: 0,
            line: 1,
        };
        let alg = parse(text).unwrap().algebra;
        let poly = parse_poly(&mut cursor, &alg).unwrap();
        assert_eq!(alg.format_poly(&poly), "-a*b");
    }

    #[test]
    fn round_trip_of_a_model_with_cocycles() {
        let text = "generator v 2\ngenerator w 3\nd w = v^2\ndim 2\ncocycle thetaW degree -1: w -> v\n";
        let file = parse(text).unwrap();
        let reparsed = parse(&print(&file)).unwrap();
        assert_eq!(file, reparsed);
    }

    #[test]
    fn round_trip_of_a_bv_presentation() {
        let text = "\
basis a -2 weight 0
basis one 0 weight 0
basis v 2 weight 1
unit one
window -2 4
product one one = one
product a one = a
product one a = a
product a a = 0
product one v = v
product v one = v
product a v = 0
product v a = 0
delta a = 0
delta one = 0
delta v = 0
";
        let file = parse(text).unwrap();
        let bv = file.bv.as_ref().unwrap();
        assert_eq!(bv.elements.len(), 3);
        assert_eq!(bv.window, (-2, 4));
        let reparsed = parse(&print(&file)).unwrap();
        assert_eq!(file, reparsed);
    }

    #[test]
    fn bv_degree_mismatch_is_rejected() {
        let text = "basis one 0 weight 0\nbasis v 2 weight 1\nunit one\nproduct v v = v\n";
        let err = parse(text).unwrap_err();
        assert!(err.message.contains("degree 4"), "{}", err);
    }

    #[test]
    fn rational_coefficients_parse() {
        let file = parse("generator v 2\ngenerator w 3\nd w = 3/2 v^2\n").unwrap();
        let w = file.algebra.index_of("w").unwrap();
        let value = &file.differentials[&w];
        let (_, c) = value.terms().next().unwrap();
        assert_eq!(c, &(q_int(3) / q_int(2)));
    }
}
