use std::collections::HashMap;

use super::monomial::{binomial, monomials_of_degree, Monomial};
use super::poly::Poly;
use crate::error::{Error, ParseError, Result};
use crate::exactla::FieldCtx;

/// A standard-graded two-dimensional ring: `K[x,y]`, or `K[x,y,z]/(F)` for
/// one homogeneous relation `F` normalized to leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    ctx: FieldCtx,
    vars: Vec<String>,
    relation: Option<Poly>,
}

impl RingPresentation {
    pub fn new(ctx: FieldCtx, vars: Vec<String>, relation: Option<Poly>) -> Result<Self> {
        match (vars.len(), &relation) {
            (2, None) | (3, Some(_)) => {}
            (2, Some(_)) => {
                return Err(Error::InvalidRing(
                    "a polynomial ring in two variables takes no relation".into(),
                ))
            }
            (3, None) => {
                return Err(Error::InvalidRing(
                    "three variables need a relation to give a two-dimensional ring".into(),
                ))
            }
            (n, _) => return Err(Error::InvalidRing(format!("{n} variables; need 2 or 3"))),
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            let ok = v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok || !seen.insert(v.as_str()) {
                return Err(Error::InvalidRing(format!("bad variable name '{v}'")));
            }
        }
        let relation = match relation {
            None => None,
            Some(f) => {
                if f.ctx() != &ctx {
                    return Err(Error::InvalidRing("relation over a different field".into()));
                }
                match f.homogeneous_degree() {
                    Some(d) if d >= 1 => {}
                    _ => {
                        return Err(Error::InvalidRing(
                            "relation must be homogeneous of degree >= 1".into(),
                        ))
                    }
                }
                let (_, lc) = f.leading_term().expect("nonzero");
                Some(f.scale(ctx.inv(lc)?))
            }
        };
        Ok(RingPresentation {
            ctx,
            vars,
            relation,
        })
    }

    /// `K[x,y]` over `ctx`.
    pub fn polynomial_ring(ctx: FieldCtx) -> Self {
        RingPresentation {
            ctx,
            vars: vec!["x".into(), "y".into()],
            relation: None,
        }
    }

    /// `K[x,y,z]/(F)` with `F` given in the polynomial grammar.
    pub fn hypersurface(ctx: FieldCtx, relation: &str) -> Result<Self> {
        let vars = vec!["x".to_string(), "y".into(), "z".into()];
        let f = Poly::parse(relation, &["x", "y", "z"], &ctx)?;
        Self::new(ctx, vars, Some(f))
    }

    /// Parses `p=<prime>;vars=x,y[,z];rel=<poly>[;ext=<k>]`. Keys may come
    /// in any order; `vars` defaults to `x,y` without a relation and
    /// `x,y,z` with one.
    pub fn parse_spec(text: &str) -> Result<Self> {
        let mut p: Option<u32> = None;
        let mut ext = 1u32;
        let mut vars: Option<Vec<String>> = None;
        let mut rel: Option<(usize, String)> = None;
        let mut col = 1usize;
        for part in text.split(';') {
            let trimmed = part.trim();
            if trimmed.is_empty() {
                col += part.len() + 1;
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(ParseError::new(col, format!("expected key=value, got '{trimmed}'")).into());
            };
            let value_col = col + part.find('=').unwrap() + 1;
            match key.trim() {
                "p" => {
                    p = Some(value.trim().parse().map_err(|_| {
                        ParseError::new(value_col, format!("bad prime '{}'", value.trim()))
                    })?)
                }
                "ext" => {
                    ext = value.trim().parse().map_err(|_| {
                        ParseError::new(value_col, format!("bad extension degree '{}'", value.trim()))
                    })?
                }
                "vars" => {
                    vars = Some(value.split(',').map(|v| v.trim().to_string()).collect())
                }
                "rel" => rel = Some((value_col, value.to_string())),
                other => {
                    return Err(ParseError::new(col, format!("unknown ring key '{other}'")).into())
                }
            }
            col += part.len() + 1;
        }
        let p = p.ok_or_else(|| ParseError::new(1, "ring spec needs p=<prime>"))?;
        if ext == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let ctx = FieldCtx::extension(p, ext)?;
        let vars = vars.unwrap_or_else(|| {
            let n = if rel.is_some() { 3 } else { 2 };
            ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
        });
        let relation = match rel {
            None => None,
            Some((value_col, text)) => {
                let names: Vec<&str> = vars.iter().map(String::as_str).collect();
                Some(Poly::parse(&text, &names, &ctx).map_err(|mut e| {
                    e.column += value_col - 1;
                    e
                })?)
            }
        };
        Self::new(ctx, vars, relation)
    }

    /// Canonical spec text; `parse_spec(to_spec())` reproduces the ring.
    pub fn to_spec(&self) -> String {
        let mut s = format!("p={}", self.ctx.p());
        if self.ctx.ext_degree() > 1 {
            s.push_str(&format!(";ext={}", self.ctx.ext_degree()));
        }
        s.push_str(&format!(";vars={}", self.vars.join(",")));
        if let Some(f) = &self.relation {
            s.push_str(&format!(";rel={}", f.to_text(&self.var_names())));
        }
        s
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn relation(&self) -> Option<&Poly> {
        self.relation.as_ref()
    }

    pub fn relation_degree(&self) -> u32 {
        self.relation
            .as_ref()
            .and_then(Poly::homogeneous_degree)
            .unwrap_or(0)
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.relation
            .as_ref()
            .and_then(|f| f.leading_term())
            .map(|(m, _)| m)
    }

    /// True when the relation's leading monomial is `x^δ`, so that the ring
    /// is free over `K[y,z]` on `1, x, ..., x^{δ-1}`.
    pub fn monic_in_first_variable(&self) -> bool {
        let d = self.relation_degree();
        self.leading_monomial() == Some(Monomial::new(&[d, 0, 0]))
    }

    pub fn parse_poly(&self, text: &str) -> Result<Poly, ParseError> {
        Poly::parse(text, &self.var_names(), &self.ctx)
    }

    pub fn poly_text(&self, f: &Poly) -> String {
        f.to_text(&self.var_names())
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        match self.leading_monomial() {
            Some(lm) => !lm.divides(m),
            None => true,
        }
    }

    /// Monomials of degree `m` not divisible by the leading monomial of the
    /// relation, in descending graded-lex order: a basis of `R_m`.
    pub fn standard_basis(&self, m: u32) -> Vec<Monomial> {
        if self.nvars() == 3 && self.monic_in_first_variable() {
            let delta = self.relation_degree();
            let mut out = Vec::with_capacity((delta * (m + 1)) as usize);
            for a in (0..delta.min(m + 1)).rev() {
                for b in (0..=m - a).rev() {
                    out.push(Monomial::new(&[a, b, m - a - b]));
                }
            }
            return out;
        }
        monomials_of_degree(self.nvars(), m)
            .into_iter()
            .filter(|mono| self.is_standard(mono))
            .collect()
    }

    /// `dim_K R_m`.
    pub fn hilbert_function(&self, m: u32) -> u64 {
        let m = m as u64;
        match self.nvars() {
            2 => m + 1,
            _ => {
                let d = self.relation_degree() as u64;
                let shifted = if m >= d { binomial(m - d + 2, 2) } else { 0 };
                binomial(m + 2, 2) - shifted
            }
        }
    }

    /// Reduces `f` modulo the relation until no term is divisible by its
    /// leading monomial. The identity when there is no relation.
    pub fn normal_form(&self, f: &Poly) -> Poly {
        let Some(rel) = &self.relation else {
            return f.clone();
        };
        let (lm, _) = rel.leading_term().expect("relation is nonzero");
        let tail: Vec<(Monomial, u32)> = rel.terms().skip(1).map(|(m, c)| (*m, *c)).collect();
        let ctx = &self.ctx;
        let mut work: std::collections::BTreeMap<Monomial, u32> =
            f.terms().map(|(m, c)| (*m, *c)).collect();
        let mut out = Poly::zero(ctx, f.nvars().max(self.nvars()));
        while let Some((m, c)) = work.pop_last() {
            if lm.divides(&m) {
                // m = lm * s;  c*m ≡ -c * s * tail
                let s = lm.quotient_of(&m);
                for (t, tc) in &tail {
                    let mono = t.mul(&s);
                    let v = ctx.neg(ctx.mul(c, *tc));
                    let slot = work.entry(mono).or_insert(0);
                    *slot = ctx.add(*slot, v);
                    if *slot == 0 {
                        work.remove(&mono);
                    }
                }
            } else {
                out.add_term(m, c);
            }
        }
        out
    }
}

/// Position of standard monomials of a fixed degree in
/// [`RingPresentation::standard_basis`] order.
pub(crate) enum DegreeIndex {
    /// `K[x,y]`: position of `x^a y^{m-a}` is `m - a`.
    Plane { m: u32 },
    /// Relation led by `x^δ`: standard monomials are `x^a y^b z^c`, `a < δ`.
    Box { m: u32, delta: u32, offsets: Vec<u32> },
    Map(HashMap<Monomial, u32>),
}

impl DegreeIndex {
    pub(crate) fn new(ring: &RingPresentation, m: u32) -> Self {
        if ring.nvars() == 2 {
            return DegreeIndex::Plane { m };
        }
        if ring.monic_in_first_variable() {
            let delta = ring.relation_degree();
            let mut offsets = Vec::with_capacity(delta as usize);
            let mut acc = 0u32;
            // a runs from high to low in the basis order
            for a in (0..delta.min(m + 1)).rev() {
                offsets.push(acc);
                acc += m - a + 1;
            }
            offsets.reverse();
            return DegreeIndex::Box { m, delta, offsets };
        }
        DegreeIndex::Map(
            ring.standard_basis(m)
                .into_iter()
                .enumerate()
                .map(|(i, mono)| (mono, i as u32))
                .collect(),
        )
    }

    /// Row of a degree-`m` monomial, `None` when it is not standard.
    #[inline]
    pub(crate) fn get(&self, mono: &Monomial) -> Option<u32> {
        match self {
            DegreeIndex::Plane { m } => Some(m - mono.exp(0)),
            DegreeIndex::Box { m, delta, offsets } => {
                let a = mono.exp(0);
                if a >= *delta {
                    return None;
                }
                // within a fixed a, b runs from m - a down to 0
                Some(offsets[a as usize] + (m - a - mono.exp(1)))
            }
            DegreeIndex::Map(map) => map.get(mono).copied(),
        }
    }
}
