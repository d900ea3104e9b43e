use std::collections::BTreeMap;
use std::fmt;

use super::monomial::{Monomial, MAX_VARS};
use crate::error::{Error, ParseError, Result};
use crate::exactla::{Elem, FieldCtx};

pub const DEFAULT_VARS: [&str; MAX_VARS] = ["x", "y", "z"];

/// Sparse polynomial over a finite field. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ctx: FieldCtx,
    nvars: usize,
    terms: BTreeMap<Monomial, Elem>,
}

impl Poly {
    pub fn zero(ctx: &FieldCtx, nvars: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&nvars));
        Poly {
            ctx: ctx.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(ctx: &FieldCtx, nvars: usize, mono: Monomial, coeff: Elem) -> Self {
        let mut p = Self::zero(ctx, nvars);
        p.add_term(mono, coeff);
        p
    }

    pub fn var(ctx: &FieldCtx, nvars: usize, i: usize) -> Self {
        Self::term(ctx, nvars, Monomial::var(i), 1)
    }

    pub fn from_terms(
        ctx: &FieldCtx,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Elem)>,
    ) -> Self {
        let mut p = Self::zero(ctx, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elem)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(Monomial, Elem)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    pub fn add_term(&mut self, m: Monomial, c: Elem) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(m).or_insert(0);
        *slot = self.ctx.add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    /// Common degree of all terms, `None` for the zero polynomial or mixed
    /// degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, *c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, self.ctx.neg(*c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: Elem) -> Poly {
        Poly::from_terms(
            &self.ctx,
            self.nvars,
            self.terms.iter().map(|(m, c)| (*m, self.ctx.mul(*c, s))),
        )
    }

    pub fn mul_term(&self, mono: &Monomial, s: Elem) -> Poly {
        Poly::from_terms(
            &self.ctx,
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.mul(mono), self.ctx.mul(*c, s))),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.ctx, self.nvars.max(other.nvars));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), self.ctx.mul(*c1, *c2));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::term(&self.ctx, self.nvars, Monomial::ONE, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `f^q` for `q` a power of the characteristic, computed term by term:
    /// exponents scale by `q`, coefficients are raised to the `q`-th power.
    pub fn frobenius_power(&self, q: u64) -> Result<Poly> {
        let p = self.ctx.p() as u64;
        let mut r = q;
        while r > 1 && r.is_multiple_of(p) {
            r /= p;
        }
        if r != 1 || q == 0 {
            return Err(Error::InvalidPower { q, p });
        }
        let q32 = u32::try_from(q).map_err(|_| Error::InvalidPower { q, p })?;
        Ok(Poly::from_terms(
            &self.ctx,
            self.nvars,
            self.terms
                .iter()
                .map(|(m, c)| (m.scale_exponents(q32), self.ctx.pow(*c, q))),
        ))
    }

    /// Parses the `c*x^a*y^b*z^c` grammar: terms joined by `+`/`-`, a term
    /// is a `*`-separated product of integers and `var` / `var^exp`
    /// factors. Integers are reduced modulo `p`. Whitespace is ignored.
    pub fn parse(text: &str, vars: &[&str], ctx: &FieldCtx) -> Result<Poly, ParseError> {
        Parser::new(text, vars, ctx).parse()
    }

    /// Canonical text: descending graded-lex, coefficients in `0..p`,
    /// unit coefficients and unit exponents omitted, `0` for zero.
    pub fn to_text(&self, vars: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                out.push('+');
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || *m == Monomial::ONE {
                factors.push(c.to_string());
            }
            for (v, &e) in m.exps().iter().enumerate().take(self.nvars) {
                match e {
                    0 => {}
                    1 => factors.push(vars[v].to_string()),
                    _ => factors.push(format!("{}^{}", vars[v], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&DEFAULT_VARS[..self.nvars]))
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    vars: &'a [&'a str],
    ctx: &'a FieldCtx,
}

impl<'a> Parser<'a> {
    fn new(text: &str, vars: &'a [&'a str], ctx: &'a FieldCtx) -> Self {
        Parser {
            chars: text.chars().enumerate().map(|(i, c)| (i + 1, c)).collect(),
            pos: 0,
            vars,
            ctx,
        }
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.chars.last().map_or(1, |&(i, _)| i + 1))
    }

    fn raw(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn peek(&mut self) -> Option<char> {
        while self.raw().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
        self.raw()
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.column(), msg)
    }

    fn parse(mut self) -> Result<Poly, ParseError> {
        let nvars = self.vars.len();
        if !(1..=MAX_VARS).contains(&nvars) {
            return Err(ParseError::new(1, "between 1 and 3 variables required"));
        }
        let mut poly = Poly::zero(self.ctx, nvars);
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                Some(c) => return Err(self.err(format!("expected '+' or '-', found '{c}'"))),
                None => break,
            };
            first = false;
            let (mono, mut coeff) = self.term()?;
            if negative {
                coeff = self.ctx.neg(coeff);
            }
            poly.add_term(mono, coeff);
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(Monomial, Elem), ParseError> {
        let mut exps = [0u32; MAX_VARS];
        let mut coeff: Elem = 1;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let v = self.integer()?;
                    coeff = self.ctx.mul(coeff, (v % self.ctx.p() as u64) as Elem);
                }
                Some(c) if c.is_alphabetic() || c == '_' => {
                    let var = self.variable()?;
                    let e = if self.peek() == Some('^') {
                        self.pos += 1;
                        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                            return Err(self.err("expected exponent after '^'"));
                        }
                        let v = self.integer()?;
                        u32::try_from(v).map_err(|_| self.err("exponent too large"))?
                    } else {
                        1
                    };
                    exps[var] += e;
                }
                Some(c) => return Err(self.err(format!("expected a factor, found '{c}'"))),
                None => return Err(self.err("expected a factor, found end of input")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::new(&exps[..MAX_VARS]), coeff))
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(c) = self.raw().filter(char::is_ascii_digit) {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(c as u64 - '0' as u64))
                .ok_or_else(|| ParseError::new(self.chars[start].0, "integer too large"))?;
            self.pos += 1;
        }
        Ok(v)
    }

    fn variable(&mut self) -> Result<usize, ParseError> {
        let col = self.column();
        let mut name = String::new();
        while let Some(c) = self.raw().filter(|c| c.is_alphanumeric() || *c == '_') {
            name.push(c);
            self.pos += 1;
        }
        self.vars
            .iter()
            .position(|v| *v == name)
            .ok_or_else(|| ParseError::new(col, format!("unknown variable '{name}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn parse_and_print() {
        let ctx = f(7);
        let p = Poly::parse("x^3 + y^3 + z^3", &XYZ, &ctx).unwrap();
        assert_eq!(p.to_text(&XYZ), "x^3+y^3+z^3");
        let p = Poly::parse("x^2 - y^2 + 3*x*2*y - 9", &XYZ, &ctx).unwrap();
        assert_eq!(p.to_text(&XYZ), "x^2+6*x*y+6*y^2+5");
        let p = Poly::parse("x*y - y*x", &XYZ, &ctx).unwrap();
        assert_eq!(p.to_text(&XYZ), "0");
        assert_eq!(Poly::parse("-x", &XYZ, &ctx).unwrap().to_text(&XYZ), "6*x");
    }

    #[test]
    fn parse_errors_carry_columns() {
        let ctx = f(5);
        let e = Poly::parse("x + w", &XYZ, &ctx).unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = Poly::parse("x^", &XYZ, &ctx).unwrap_err();
        assert_eq!(e.column, 3);
        let e = Poly::parse("x y", &XYZ, &ctx).unwrap_err();
        assert_eq!(e.column, 3);
        assert!(Poly::parse("", &XYZ, &ctx).is_err());
        assert!(Poly::parse("x+", &XYZ, &ctx).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let ctx = f(2);
        let xy = Poly::parse("x+y", &XYZ[..2], &ctx).unwrap();
        assert_eq!(xy.frobenius_power(2).unwrap().to_text(&XYZ), "x^2+y^2");
        assert_eq!(xy.frobenius_power(1).unwrap(), xy);
        assert_eq!(xy.frobenius_power(2).unwrap(), xy.pow(2));
        assert!(matches!(
            xy.frobenius_power(6),
            Err(Error::InvalidPower { q: 6, p: 2 })
        ));
        let ctx5 = f(5);
        let two_x = Poly::parse("2*x", &XYZ, &ctx5).unwrap();
        assert_eq!(two_x.frobenius_power(5).unwrap().to_text(&XYZ), "2*x^5");
        assert_eq!(two_x.frobenius_power(25).unwrap(), two_x.pow(25));
    }

    #[test]
    fn homogeneity() {
        let ctx = f(3);
        assert_eq!(
            Poly::parse("x^2+y*z", &XYZ, &ctx).unwrap().homogeneous_degree(),
            Some(2)
        );
        assert_eq!(
            Poly::parse("x^2+y", &XYZ, &ctx).unwrap().homogeneous_degree(),
            None
        );
    }
}
