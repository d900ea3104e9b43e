//! Graded colength of Frobenius bracket powers, `length(R/I^[q])`, by exact
//! linear algebra one degree at a time.
//!
//! The main path works in the normal-form basis of `R_m`; [`colength_naive`]
//! works in the ambient polynomial ring and never reduces anything, so the
//! two paths check each other.

mod cache;

use std::collections::HashMap;

use rayon::prelude::*;

pub use cache::{CacheKey, DegreeCache};

use crate::error::{Error, Result};
use crate::exactla::{Elem, FieldCtx, SparseColumns};
use crate::gradedring::{binomial, monomials_of_degree, DegreeIndex, Monomial, Poly, RingPresentation};

/// Homogeneous generators `f_1..f_n` of an ideal, with their degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpec {
    gens: Vec<Poly>,
    degrees: Vec<u32>,
}

impl IdealSpec {
    pub fn new(ring: &RingPresentation, gens: Vec<Poly>) -> Result<Self> {
        if gens.len() < 2 {
            return Err(Error::InvalidIdeal(
                "need at least two generators for an R_+-primary ideal".into(),
            ));
        }
        let mut degrees = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if g.ctx() != ring.ctx() || g.nvars() != ring.nvars() {
                return Err(Error::InvalidIdeal(format!(
                    "generator {} lives in a different ring",
                    i + 1
                )));
            }
            match g.homogeneous_degree() {
                Some(d) if d >= 1 => degrees.push(d),
                _ => {
                    return Err(Error::InvalidIdeal(format!(
                        "generator {} is not homogeneous of positive degree",
                        i + 1
                    )))
                }
            }
        }
        Ok(IdealSpec { gens, degrees })
    }

    /// Comma-separated generator list, e.g. `x^2,y^3`.
    pub fn parse(ring: &RingPresentation, text: &str) -> Result<Self> {
        let mut gens = Vec::new();
        let mut col = 1usize;
        for part in text.split(',') {
            let g = ring.parse_poly(part).map_err(|mut e| {
                e.column += col - 1;
                e
            })?;
            gens.push(g);
            col += part.chars().count() + 1;
        }
        Self::new(ring, gens)
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn to_text(&self, ring: &RingPresentation) -> String {
        self.gens
            .iter()
            .map(|g| ring.poly_text(g))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `dim_K (R/I^[q])_m` for `m = 0..=m_stop`; the last entry is the first
/// vanishing piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColengthResult {
    pub q: u64,
    pub per_degree: Vec<u64>,
    pub total: u64,
    pub m_stop: u32,
}

/// Degree past which a nonvanishing piece proves the ideal is not primary.
pub fn safety_bound(ring: &RingPresentation, ideal: &IdealSpec, q: u64) -> u64 {
    let sum: u64 = ideal.degrees.iter().map(|&d| d as u64).sum();
    q * sum + ring.relation_degree() as u64 + ring.nvars() as u64
}

fn check_power(ctx: &FieldCtx, q: u64) -> Result<()> {
    let p = ctx.p() as u64;
    let mut r = q;
    while r > 1 && r.is_multiple_of(p) {
        r /= p;
    }
    if q == 0 || r != 1 {
        return Err(Error::InvalidPower { q, p });
    }
    Ok(())
}

/// Per-degree evaluator for one `(ring, ideal, q)`: holds the normal forms
/// of `f_i^q` so that each degree only multiplies by basis monomials.
pub struct PieceComputer<'a> {
    ring: &'a RingPresentation,
    q: u64,
    shifts: Vec<u64>,
    powers: Vec<Vec<(Monomial, Elem)>>,
}

impl<'a> PieceComputer<'a> {
    pub fn new(ring: &'a RingPresentation, ideal: &IdealSpec, q: u64) -> Result<Self> {
        check_power(ring.ctx(), q)?;
        let mut powers = Vec::with_capacity(ideal.gens.len());
        for g in &ideal.gens {
            let nf = ring.normal_form(&g.frobenius_power(q)?);
            powers.push(nf.terms().map(|(m, c)| (*m, *c)).collect());
        }
        let shifts = ideal.degrees.iter().map(|&d| q * d as u64).collect();
        Ok(PieceComputer {
            ring,
            q,
            shifts,
            powers,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `dim R_m - rank[ NF(f_i^q * mu) : mu a basis monomial of R_{m - q d_i} ]`.
    pub fn dim(&self, m: u32) -> u64 {
        let hf = self.ring.hilbert_function(m);
        if self.shifts.iter().all(|&s| (m as u64) < s) {
            return hf;
        }
        let ctx = self.ring.ctx();
        let idx = DegreeIndex::new(self.ring, m);
        let mut memo: HashMap<Monomial, Vec<(u32, Elem)>> = HashMap::new();
        let mut cols = SparseColumns::new(hf as usize);
        let mut scratch: Vec<Elem> = vec![0; hf as usize];
        let mut touched: Vec<u32> = Vec::new();

        for (shift, power) in self.shifts.iter().zip(&self.powers) {
            if (m as u64) < *shift {
                continue;
            }
            for mu in self.ring.standard_basis(m - *shift as u32) {
                for (t, c) in power {
                    let s = mu.mul(t);
                    match idx.get(&s) {
                        Some(r) => accumulate(ctx, &mut scratch, &mut touched, r, *c),
                        None => {
                            let nf = memo
                                .entry(s)
                                .or_insert_with(|| reduce_monomial(self.ring, &idx, s));
                            for &(r, v) in nf.iter() {
                                accumulate(ctx, &mut scratch, &mut touched, r, ctx.mul(*c, v));
                            }
                        }
                    }
                }
                let col = touched
                    .drain(..)
                    .filter_map(|r| {
                        let v = std::mem::take(&mut scratch[r as usize]);
                        (v != 0).then_some((r, v))
                    })
                    .collect();
                cols.push(col);
            }
        }
        hf - cols.rank(ctx) as u64
    }
}

#[inline]
fn accumulate(ctx: &FieldCtx, scratch: &mut [Elem], touched: &mut Vec<u32>, r: u32, v: Elem) {
    let slot = &mut scratch[r as usize];
    if *slot == 0 {
        touched.push(r);
    }
    // duplicates in `touched` are harmless: the second drain reads a zero
    *slot = ctx.add(*slot, v);
}

fn reduce_monomial(ring: &RingPresentation, idx: &DegreeIndex, s: Monomial) -> Vec<(u32, Elem)> {
    let nf = ring.normal_form(&Poly::term(ring.ctx(), ring.nvars(), s, 1));
    nf.terms()
        .map(|(m, c)| (idx.get(m).expect("normal form is standard"), *c))
        .collect()
}

/// `dim_K (R/I^[q])_m`.
pub fn graded_piece_dim(
    ring: &RingPresentation,
    ideal: &IdealSpec,
    q: u64,
    m: u32,
) -> Result<u64> {
    Ok(PieceComputer::new(ring, ideal, q)?.dim(m))
}

/// `length(R/I^[q])`, summing graded pieces until the first one vanishes.
pub fn colength(ring: &RingPresentation, ideal: &IdealSpec, q: u64) -> Result<ColengthResult> {
    colength_with_cache(ring, ideal, q, None)
}

/// [`colength`] with per-degree results read from and written to `cache`.
pub fn colength_with_cache(
    ring: &RingPresentation,
    ideal: &IdealSpec,
    q: u64,
    cache: Option<&DegreeCache>,
) -> Result<ColengthResult> {
    let computer = PieceComputer::new(ring, ideal, q)?;
    let key = cache.map(|_| CacheKey::new(ring, ideal, q));
    let piece = |m: u32| -> Result<u64> {
        if let (Some(c), Some(k)) = (cache, &key) {
            if let Some(d) = c.get(k, m) {
                return Ok(d);
            }
            let d = computer.dim(m);
            c.put(k, m, d)?;
            return Ok(d);
        }
        Ok(computer.dim(m))
    };
    sweep(ring, ideal, q, piece)
}

/// Evaluates degrees in parallel batches and stops at the first vanishing
/// piece. Results are collected by degree index, so scheduling never
/// affects the answer.
fn sweep(
    ring: &RingPresentation,
    ideal: &IdealSpec,
    q: u64,
    piece: impl Fn(u32) -> Result<u64> + Sync,
) -> Result<ColengthResult> {
    let bound = safety_bound(ring, ideal, q);
    let batch = rayon::current_num_threads().max(1) as u32;
    let mut per_degree = Vec::new();
    let mut start = 0u32;
    // below q * min(d_i) nothing of I^[q] is present
    let first = ideal.degrees.iter().map(|&d| q * d as u64).min().unwrap_or(0);
    while (start as u64) < first && (start as u64) <= bound {
        per_degree.push(ring.hilbert_function(start));
        start += 1;
    }
    loop {
        if start as u64 > bound {
            return Err(Error::NotPrimary { bound });
        }
        let end = (start + batch).min(bound as u32 + 1);
        let dims: Vec<u64> = (start..end)
            .into_par_iter()
            .map(&piece)
            .collect::<Result<_>>()?;
        for d in dims {
            per_degree.push(d);
            if d == 0 {
                let total = per_degree.iter().sum();
                return Ok(ColengthResult {
                    q,
                    m_stop: per_degree.len() as u32 - 1,
                    per_degree,
                    total,
                });
            }
        }
        start = end;
    }
}

/// Per-degree table with columns `e,q,m,dim`, one block per result.
pub fn write_detail_csv<W: std::io::Write>(rows: &[(u32, &ColengthResult)], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["e", "q", "m", "dim"])
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    for (e, r) in rows {
        for (m, d) in r.per_degree.iter().enumerate() {
            out.write_record([e.to_string(), r.q.to_string(), m.to_string(), d.to_string()])
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Oracle: the same colength computed in the ambient polynomial ring `S`,
/// as `dim S_m - rank[ F * S_{m-δ} , f_i^q * S_{m - q d_i} ]`, with no
/// normal forms anywhere.
pub fn colength_naive(
    ring: &RingPresentation,
    ideal: &IdealSpec,
    q: u64,
) -> Result<ColengthResult> {
    check_power(ring.ctx(), q)?;
    let n = ring.nvars();
    let powers: Vec<Poly> = ideal
        .gens
        .iter()
        .map(|g| g.frobenius_power(q))
        .collect::<Result<_>>()?;
    let mut multipliers: Vec<(u32, &Poly)> = powers
        .iter()
        .zip(&ideal.degrees)
        .map(|(f, &d)| ((q * d as u64) as u32, f))
        .collect();
    if let Some(rel) = ring.relation() {
        multipliers.push((ring.relation_degree(), rel));
    }
    let ctx = ring.ctx().clone();
    let piece = |m: u32| -> Result<u64> {
        let rows: HashMap<Monomial, u32> = monomials_of_degree(n, m)
            .into_iter()
            .enumerate()
            .map(|(i, mono)| (mono, i as u32))
            .collect();
        let mut cols = SparseColumns::new(rows.len());
        for (shift, f) in &multipliers {
            if m < *shift {
                continue;
            }
            for mu in monomials_of_degree(n, m - shift) {
                let col = f.terms().map(|(t, c)| (rows[&mu.mul(t)], *c)).collect();
                cols.push(col);
            }
        }
        let ambient = binomial(m as u64 + n as u64 - 1, n as u64 - 1);
        Ok(ambient - cols.rank(&ctx) as u64)
    };
    sweep(ring, ideal, q, piece)
}
