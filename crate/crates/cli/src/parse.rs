//! The map expression language.
//!
//! ```text
//! map    := expr (',' expr)*
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exp)?
//! exp    := INT ('^' exp)?
//! atom   := NUMBER | IDENT | '(' expr ')'
//! NUMBER := INT ('/' INT)?
//! ```
//!
//! Over F_{p^k} with k > 1 the identifier `u` is the field generator.

use std::fmt;

use dynatomic::{Field, FieldElement, Model, Poly, PolyMap};
use rug::ops::Pow;
use rug::{Integer, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "{}:{}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn plain(message: impl Into<String>) -> ParseError {
    ParseError {
        line: 0,
        column: 0,
        message: message.into(),
    }
}

/// A parsed and validated map together with how it was written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpec {
    pub field: Field,
    pub vars: Vec<String>,
    pub model: Model,
    pub map: PolyMap,
}

impl MapSpec {
    /// Canonical text of the coordinates, parseable back with the same
    /// field, variables and model.
    pub fn print(&self) -> String {
        self.map
            .coords()
            .iter()
            .map(|c| c.display_with(&self.vars))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn parse_field(text: &str) -> Result<Field, ParseError> {
    let t = text.trim();
    if t == "Q" {
        return Ok(Field::Rational);
    }
    let body = t
        .strip_prefix('F')
        .ok_or_else(|| plain(format!("unknown field '{t}'; expected Q, F<p> or F<p>^<k>")))?;
    let (p, k) = match body.split_once('^') {
        Some((p, k)) => (p, k),
        None => (body, "1"),
    };
    let p: u64 = p
        .trim()
        .parse()
        .map_err(|_| plain(format!("bad characteristic in '{t}'")))?;
    let k: u32 = k
        .trim()
        .parse()
        .map_err(|_| plain(format!("bad extension degree in '{t}'")))?;
    Field::finite(p, k).map_err(|e| plain(e.to_string()))
}

pub fn default_vars(model: Model, coords: usize) -> Vec<String> {
    match model {
        Model::P1 => vec!["X".into(), "Y".into()],
        Model::Affine => Poly::default_names(coords),
    }
}

/// Parses `text` as the coordinates of a map over `field`. With `vars`
/// empty the names default to z; x, y; x, y, w; … (X, Y on ℙ¹).
pub fn parse_map(text: &str, field: &Field, vars: &[String], model: Model) -> Result<MapSpec, ParseError> {
    let exprs = Parser::new(text).map()?;
    let vars = if vars.is_empty() {
        default_vars(model, exprs.len())
    } else {
        vars.to_vec()
    };
    validate_vars(&vars, field)?;
    let expected = match model {
        Model::P1 => 2,
        Model::Affine => vars.len(),
    };
    if vars.len() != expected || exprs.len() != expected {
        return Err(plain(format!(
            "expected {expected} coordinate(s) in {} variable(s), got {} coordinate(s) in {} variable(s)",
            expected,
            exprs.len(),
            vars.len()
        )));
    }
    let ctx = Context { field, vars: &vars };
    let coords = exprs.iter().map(|e| ctx.eval(e)).collect::<Result<Vec<_>, _>>()?;
    let map = match model {
        Model::Affine => PolyMap::affine(coords),
        Model::P1 => {
            let mut it = coords.into_iter();
            PolyMap::projective(it.next().unwrap(), it.next().unwrap())
        }
    }
    .map_err(|e| plain(e.to_string()))?;
    Ok(MapSpec {
        field: field.clone(),
        vars,
        model,
        map,
    })
}

/// A constant expression (no variables) as a field element.
pub fn parse_element(text: &str, field: &Field) -> Result<FieldElement, ParseError> {
    let e = Parser::new(text).single()?;
    let ctx = Context { field, vars: &[] };
    let p = ctx.eval(&e)?;
    Ok(p.constant_term())
}

fn validate_vars(vars: &[String], field: &Field) -> Result<(), ParseError> {
    for (i, v) in vars.iter().enumerate() {
        let mut chars = v.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(plain(format!("'{v}' is not an identifier")));
        }
        if vars[..i].contains(v) {
            return Err(plain(format!("variable '{v}' listed twice")));
        }
        if v == "u" && field.generator().is_some() {
            return Err(plain("'u' names the field generator and cannot be a variable"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(Integer),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

#[derive(Clone, Debug)]
enum Expr {
    Num(Rational),
    Var(String, usize, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    lex_error: Option<ParseError>,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
            continue;
        }
        if "+-*^/(),".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: l0,
                column: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError {
            line: l0,
            column: c0,
            message: format!("unexpected character '{c}'"),
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

impl Parser {
    fn new(text: &str) -> Self {
        match tokenize(text) {
            Ok(tokens) => Parser {
                tokens,
                pos: 0,
                lex_error: None,
            },
            Err(e) => Parser {
                tokens: Vec::new(),
                pos: 0,
                lex_error: Some(e),
            },
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_at<T>(&self, t: &Token, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn map(mut self) -> Result<Vec<Expr>, ParseError> {
        if let Some(e) = self.lex_error.take() {
            return Err(e);
        }
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.finish()?;
        Ok(out)
    }

    fn single(mut self) -> Result<Expr, ParseError> {
        if let Some(e) = self.lex_error.take() {
            return Err(e);
        }
        let e = self.expr()?;
        self.finish()?;
        Ok(e)
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::End => Ok(()),
            _ => self.error_at(&t, format!("unexpected {}", describe(&t.tok))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let t = self.next();
        let Tok::Int(v) = &t.tok else {
            return self.error_at(&t, "exponent must be a nonnegative integer literal");
        };
        let mut e = v.clone();
        if self.eat('^') {
            let rhs = self.exponent()?;
            e = e.pow(rhs);
        }
        match e.to_u32() {
            Some(e) => Ok(e),
            None => self.error_at(&t, "exponent too large"),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => {
                if self.eat('/') {
                    let d = self.next();
                    let Tok::Int(den) = &d.tok else {
                        return self.error_at(&d, "expected a denominator after '/'");
                    };
                    if den.cmp0().is_eq() {
                        return self.error_at(&d, "zero denominator");
                    }
                    return Ok(Expr::Num(Rational::from((n.clone(), den.clone()))));
                }
                Ok(Expr::Num(Rational::from(n.clone())))
            }
            Tok::Ident(name) => Ok(Expr::Var(name.clone(), t.line, t.column)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    let t = self.peek().clone();
                    return self.error_at(&t, format!("expected ')', found {}", describe(&t.tok)));
                }
                Ok(e)
            }
            other => self.error_at(&t, format!("unexpected {}", describe(other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number {n}"),
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::End => "end of input".into(),
    }
}

struct Context<'a> {
    field: &'a Field,
    vars: &'a [String],
}

impl Context<'_> {
    fn eval(&self, e: &Expr) -> Result<Poly, ParseError> {
        let b = self.vars.len().max(1);
        let lift = |r: dynatomic::Result<Poly>| r.map_err(|e| plain(e.to_string()));
        Ok(match e {
            Expr::Num(r) => {
                let c = self.field.from_rational(r).map_err(|e| plain(e.to_string()))?;
                Poly::constant(self.field, b, c)
            }
            Expr::Var(name, line, column) => {
                if let Some(i) = self.vars.iter().position(|v| v == name) {
                    Poly::var(self.field, b, i)
                } else if let (Some(g), "u") = (self.field.generator(), name.as_str()) {
                    Poly::constant(self.field, b, g)
                } else {
                    return Err(ParseError {
                        line: *line,
                        column: *column,
                        message: format!("unknown identifier '{name}'"),
                    });
                }
            }
            Expr::Neg(a) => self.eval(a)?.neg(),
            Expr::Add(a, c) => lift(self.eval(a)?.add(&self.eval(c)?))?,
            Expr::Sub(a, c) => lift(self.eval(a)?.sub(&self.eval(c)?))?,
            Expr::Mul(a, c) => lift(self.eval(a)?.mul(&self.eval(c)?))?,
            Expr::Pow(a, k) => lift(self.eval(a)?.pow(*k))?,
        })
    }
}
