//! Expression grammar shared by fixtures, certificates and the CLI.
//!
//! ```text
//! sum     := product (("+" | "-") product)*
//! product := unary (("*" | "/") unary)*
//! unary   := "-" unary | wedge
//! wedge   := atom ("^" atom)*
//! atom    := integer | "i" | name | "conj" "(" sum ")" | "(" sum ")"
//! ```
//!
//! `^` is exponentiation when both sides are scalars and the right side is an
//! integer literal, and the wedge product otherwise. Division is allowed only
//! by expressions that reduce to nonzero constants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::form::{Form, Frame};

use super::scalar::{Scalar, Var};
use crate::error::{Error, Result};

/// Names visible to the parser.
#[derive(Clone, Debug, Default)]
pub struct Context {
    vars: BTreeMap<String, Var>,
    bindings: BTreeMap<String, Scalar>,
    frame: Option<Frame>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_frame(frame: Frame) -> Self {
        Context { frame: Some(frame), ..Self::default() }
    }

    pub fn declare(&mut self, v: Var) -> &mut Self {
        self.vars.insert(v.name().to_string(), v);
        self
    }

    pub fn declare_real(&mut self, name: &str) -> &mut Self {
        self.declare(Var::real(name))
    }

    pub fn declare_complex(&mut self, name: &str) -> &mut Self {
        self.declare(Var::complex(name))
    }

    /// Replaces `name` by `value` while parsing.
    pub fn bind(&mut self, name: &str, value: Scalar) -> &mut Self {
        self.bindings.insert(name.to_string(), value);
        self
    }

    /// Declares every variable occurring in `s`.
    pub fn declare_from(&mut self, s: &Scalar) -> &mut Self {
        for v in s.variables() {
            let v = if v.is_real() { v } else { Var::complex(v.name()) };
            self.declare(v);
        }
        self
    }

    pub fn frame(&self) -> Option<Frame> {
        self.frame
    }

    fn resolve(&self, name: &str) -> Result<Scalar> {
        if let Some(v) = self.bindings.get(name) {
            return Ok(v.clone());
        }
        match self.vars.get(name) {
            Some(v) => Ok(Scalar::var(v.clone())),
            None => Err(Error::UnknownName(name.to_string())),
        }
    }

    fn generator(&self, name: &str) -> Option<usize> {
        let frame = self.frame?;
        let (prefix_len, offset) = match frame {
            Frame::Complex(n) if name.starts_with("cphi") => (4, n),
            Frame::Complex(_) if name.starts_with("phi") => (3, 0),
            Frame::Real(_) if name.starts_with('e') => (1, 0),
            _ => return None,
        };
        let idx: usize = name[prefix_len..].parse().ok()?;
        let limit = match frame {
            Frame::Complex(n) => n,
            Frame::Real(m) => m,
        };
        if idx == 0 || idx > limit {
            return None;
        }
        Some(offset + idx - 1)
    }

    fn looks_like_generator(&self, name: &str) -> bool {
        let digits = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit());
        match self.frame {
            Some(Frame::Complex(_)) => {
                name.strip_prefix("cphi").map(digits).unwrap_or(false)
                    || name.strip_prefix("phi").map(digits).unwrap_or(false)
            }
            Some(Frame::Real(_)) => name.strip_prefix('e').map(digits).unwrap_or(false),
            None => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Int(s.parse().map_err(|_| Error::Parse(format!("bad integer {}", s)))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{}' in \"{}\"", c, text)));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: &'a Context,
    frame: Frame,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{}' at token {}", c, self.pos)))
        }
    }

    fn sum(&mut self) -> Result<Form> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Form> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = acc.wedge(&rhs);
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let d = as_scalar(&rhs).and_then(|s| s.as_constant());
                match d {
                    Some(c) if !c.is_zero() => acc = acc.scale_const(&c.inv().expect("nonzero")),
                    _ => return Err(Error::Parse("division by a non-constant or zero expression".into())),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Form> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.wedge()
    }

    fn wedge(&mut self) -> Result<Form> {
        let mut acc = self.atom()?;
        while self.eat('^') {
            let is_int = matches!(self.peek(), Some(Tok::Int(_)));
            if is_int && as_scalar(&acc).is_some() {
                let Some(Tok::Int(k)) = self.peek().cloned() else { unreachable!() };
                self.pos += 1;
                let k = k.to_u32().ok_or_else(|| Error::Parse("exponent too large".into()))?;
                let s = as_scalar(&acc).expect("checked");
                acc = Form::scalar(self.frame, s.pow(k));
            } else {
                let rhs = self.atom()?;
                acc = acc.wedge(&rhs);
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Form> {
        let tok = self.peek().cloned().ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(Form::scalar(self.frame, Scalar::rational(num_rational::BigRational::from_integer(n)))),
            Tok::Sym('(') => {
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Sym(c) => Err(Error::Parse(format!("unexpected '{}'", c))),
            Tok::Ident(name) => {
                if name == "i" {
                    return Ok(Form::scalar(self.frame, Scalar::i()));
                }
                if name == "conj" {
                    self.expect('(')?;
                    let inner = self.sum()?;
                    self.expect(')')?;
                    return Ok(inner.conjugate());
                }
                if let Some(g) = self.ctx.generator(&name) {
                    return Ok(Form::generator(self.frame, g));
                }
                if self.ctx.looks_like_generator(&name) {
                    return Err(Error::Parse(format!("generator index out of range: {}", name)));
                }
                Ok(Form::scalar(self.frame, self.ctx.resolve(&name)?))
            }
        }
    }
}

fn as_scalar(f: &Form) -> Option<Scalar> {
    if f.terms().all(|(m, _)| m == 0) {
        Some(f.coefficient(0))
    } else {
        None
    }
}

fn run(text: &str, ctx: &Context, frame: Frame) -> Result<Form> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, ctx, frame };
    let out = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in \"{}\"", text)));
    }
    Ok(out)
}

pub fn parse_scalar(text: &str, ctx: &Context) -> Result<Scalar> {
    let f = run(text, ctx, ctx.frame.unwrap_or(Frame::Real(0)))?;
    as_scalar(&f).ok_or_else(|| Error::Parse(format!("expected a scalar, got a form: {}", text)))
}

pub fn parse_form(text: &str, ctx: &Context) -> Result<Form> {
    let frame = ctx.frame.ok_or_else(|| Error::Parse("form parsing needs a frame".into()))?;
    run(text, ctx, frame)
}

/// Parses a scalar, declaring every unknown identifier as complex and any
/// identifier in `reals` as real.
pub fn parse_scalar_lenient(text: &str, reals: &[&str]) -> Result<Scalar> {
    let mut ctx = Context::new();
    for t in tokenize(text)? {
        if let Tok::Ident(name) = t {
            if name == "i" || name == "conj" {
                continue;
            }
            if reals.contains(&name.as_str()) {
                ctx.declare_real(&name);
            } else {
                ctx.declare_complex(&name);
            }
        }
    }
    parse_scalar(text, &ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gauss::GaussRat;

    fn ctx() -> Context {
        let mut c = Context::new();
        c.declare_real("r2").declare_complex("u").declare_complex("t");
        c
    }

    #[test]
    fn arithmetic_and_conj() {
        let s = parse_scalar("(1 + i)^2 - 2*i", &ctx()).unwrap();
        assert!(s.is_zero());
        let s = parse_scalar("u*conj(u) - conj(u)*u", &ctx()).unwrap();
        assert!(s.is_zero());
        let s = parse_scalar("3/4*r2", &ctx()).unwrap();
        assert_eq!(s, Scalar::real_var("r2").scale(&GaussRat::frac(3, 4)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_scalar("q + 1", &ctx()).is_err());
        assert!(parse_scalar("1/u", &ctx()).is_err());
        assert!(parse_scalar("1/0", &ctx()).is_err());
        assert!(parse_scalar("(1 + 2", &ctx()).is_err());
    }

    #[test]
    fn forms_with_wedges() {
        let mut c = ctx();
        c.frame = Some(Frame::Complex(3));
        let f = parse_form("phi1^cphi1 + phi2^cphi2", &c).unwrap();
        assert_eq!(f.num_terms(), 2);
        let g = parse_form("phi1^phi3 - t*phi3^cphi1", &c).unwrap();
        assert_eq!(g.coefficient((1 << 2) | (1 << 3)), -Scalar::complex_var("t"));
        assert!(parse_form("phi4", &c).is_err());
    }

    #[test]
    fn printer_round_trip() {
        let c = ctx();
        let s = parse_scalar("(1/2 - 3/4*i)*r2^2*conj(u) - i*t + 5", &c).unwrap();
        let back = parse_scalar(&s.to_string(), &c).unwrap();
        assert_eq!(back, s);
    }
}
