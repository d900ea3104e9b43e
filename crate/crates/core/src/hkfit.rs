//! Sampling `φ(p^e)` and fitting `φ(q) = e_HK q² + γ(e)` exactly, with `γ`
//! eventually periodic in `e`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::colength::{colength_with_cache, DegreeCache, IdealSpec};
use crate::error::{Error, Result};
use crate::gradedring::RingPresentation;
use crate::rational::{fmt_rational, int, Rational};

pub const DEFAULT_TAU_MAX: u32 = 6;

/// Default number of Frobenius exponents to sample in characteristic `p`.
pub fn default_e_max(p: u32) -> u32 {
    match p {
        2 => 8,
        3 => 6,
        _ => 4,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HKSample {
    pub e: u32,
    pub q: u64,
    pub phi: u64,
}

/// `φ(p^e)` for `e = 1..=e_max`.
pub fn hk_samples(
    ring: &RingPresentation,
    ideal: &IdealSpec,
    e_max: u32,
    cache: Option<&DegreeCache>,
) -> Result<Vec<HKSample>> {
    if e_max < 1 {
        return Err(Error::InvalidInput("e_max must be at least 1".into()));
    }
    let p = ring.ctx().p() as u64;
    (1..=e_max)
        .map(|e| {
            let q = p.pow(e);
            let c = colength_with_cache(ring, ideal, q, cache)?;
            Ok(HKSample { e, q, phi: c.total })
        })
        .collect()
}

pub fn write_samples_csv<W: Write>(samples: &[HKSample], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for s in samples {
        out.serialize(s).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_samples_csv<R: Read>(r: R) -> Result<Vec<HKSample>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["e", "q", "phi"] {
        return Err(Error::InvalidInput(format!(
            "expected columns e,q,phi, found {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rdr.deserialize()
        .map(|row| row.map_err(csv_err))
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::InvalidInput(format!("samples csv line {line}: {e}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HKFit {
    pub e_hk: Rational,
    pub tau: u32,
    pub e0: u32,
    /// `γ(e0), ..., γ(e0 + tau - 1)`.
    pub gamma: Vec<Rational>,
    /// Pair equations `φ(p^(e+τ)) - φ(p^e) = e_HK (p^(2(e+τ)) - p^(2e))`
    /// that were checked and hold.
    pub verified_equations: usize,
}

impl HKFit {
    pub fn gamma_at(&self, e: u32) -> Option<&Rational> {
        (e >= self.e0).then(|| &self.gamma[((e - self.e0) % self.tau) as usize])
    }
}

/// One row of the diagnostic table: the slope a pair equation would force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairSlope {
    pub tau: u32,
    pub e: u32,
    #[serde(with = "crate::rational::serde_str")]
    pub alpha: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitFailure {
    pub tau_max: u32,
    pub samples: usize,
    pub residuals: Vec<PairSlope>,
}

impl fmt::Display for FitFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fit failure: no (tau, e0) with tau <= {} fits {} samples",
            self.tau_max, self.samples
        )?;
        if self.residuals.is_empty() {
            return write!(f, " (no pair equations available)");
        }
        writeln!(f, "; pair slopes:")?;
        writeln!(f, "tau,e,alpha")?;
        for (i, r) in self.residuals.iter().enumerate() {
            write!(f, "{},{},{}", r.tau, r.e, fmt_rational(&r.alpha))?;
            if i + 1 < self.residuals.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// JSON shape of a fit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitReport {
    #[serde(with = "crate::rational::serde_str")]
    pub e_hk: Rational,
    pub tau: u32,
    pub e0: u32,
    #[serde(with = "crate::rational::serde_vec")]
    pub gamma: Vec<Rational>,
    #[serde(with = "crate::rational::serde_opt")]
    pub beta_audit: Option<Rational>,
    pub verified_equations: usize,
}

impl FitReport {
    pub fn new(fit: &HKFit, beta_audit: Option<Rational>) -> Self {
        FitReport {
            e_hk: fit.e_hk.clone(),
            tau: fit.tau,
            e0: fit.e0,
            gamma: fit.gamma.clone(),
            beta_audit,
            verified_equations: fit.verified_equations,
        }
    }
}

/// Samples keyed by exponent, after checking they all come from one `p`.
fn index_samples(samples: &[HKSample]) -> Result<BTreeMap<u32, (BigInt, BigInt)>> {
    let mut by_e = BTreeMap::new();
    let mut base: Option<u64> = None;
    for s in samples {
        if s.e == 0 || s.q < 2 || s.phi == 0 {
            return Err(Error::InvalidInput(format!(
                "sample e={} q={} phi={} is out of range",
                s.e, s.q, s.phi
            )));
        }
        let p = integer_root(s.q, s.e).ok_or_else(|| {
            Error::InvalidInput(format!("q={} is not the {}-th power of a prime", s.q, s.e))
        })?;
        if *base.get_or_insert(p) != p {
            return Err(Error::InvalidInput(format!(
                "sample e={} has q={} which is not a power of {}",
                s.e,
                s.q,
                base.unwrap()
            )));
        }
        if by_e.insert(s.e, (BigInt::from(s.q), BigInt::from(s.phi))).is_some() {
            return Err(Error::InvalidInput(format!("duplicate sample for e={}", s.e)));
        }
    }
    Ok(by_e)
}

/// `p` with `p^e = q` and `p` prime, found through the least prime factor.
fn integer_root(q: u64, e: u32) -> Option<u64> {
    let p = (2..).take_while(|d| d * d <= q).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    (p.checked_pow(e) == Some(q)).then_some(p)
}

/// Searches `e0` ascending, then `τ = 1..=tau_max`, for the first candidate
/// where every pair equation `(e, e+τ)` with `e ≥ e0` forces the same slope.
///
/// At least two pair equations are demanded per candidate; one equation
/// always has a solution and would make any sample set "fit". Onset comes
/// first because a late onset leaves only two equations, and two equations
/// agree by accident often enough (periodic `γ` times `p²`) to shadow the
/// real period found from an earlier onset.
pub fn fit_quadratic_periodic(samples: &[HKSample], tau_max: u32) -> Result<HKFit> {
    if tau_max < 1 {
        return Err(Error::InvalidInput("tau_max must be at least 1".into()));
    }
    let by_e = index_samples(samples)?;
    let slopes: Vec<Vec<(u32, Rational)>> = (1..=tau_max)
        .map(|tau| {
            by_e.iter()
                .filter_map(|(&e, (q, phi))| {
                    let (q2, phi2) = by_e.get(&(e + tau))?;
                    let num = phi2 - phi;
                    let den = q2 * q2 - q * q;
                    Some((e, Rational::new(num, den)))
                })
                .collect()
        })
        .collect();
    for &e0 in by_e.keys() {
        for (tau, row) in (1..=tau_max).zip(&slopes) {
            let tail: Vec<&(u32, Rational)> = row.iter().filter(|(e, _)| *e >= e0).collect();
            if tail.len() < 2 {
                continue;
            }
            let alpha = &tail[0].1;
            if tail.iter().any(|(_, a)| a != alpha) {
                continue;
            }
            if let Some(gamma) = gamma_table(&by_e, alpha, tau, e0) {
                return Ok(HKFit {
                    e_hk: alpha.clone(),
                    tau,
                    e0,
                    gamma,
                    verified_equations: tail.len(),
                });
            }
        }
    }
    let residuals = (1..=tau_max)
        .zip(&slopes)
        .flat_map(|(tau, row)| {
            row.iter().map(move |(e, a)| PairSlope {
                tau,
                e: *e,
                alpha: a.clone(),
            })
        })
        .collect();
    Err(Error::FitFailure(Box::new(FitFailure {
        tau_max,
        samples: samples.len(),
        residuals,
    })))
}

/// Reads `γ` off the samples and checks it on every sample `e ≥ e0`.
fn gamma_table(
    by_e: &BTreeMap<u32, (BigInt, BigInt)>,
    alpha: &Rational,
    tau: u32,
    e0: u32,
) -> Option<Vec<Rational>> {
    let mut gamma: Vec<Option<Rational>> = vec![None; tau as usize];
    for (&e, (q, phi)) in by_e.range(e0..) {
        let g = int(phi.clone()) - alpha * int(q * q);
        let slot = &mut gamma[((e - e0) % tau) as usize];
        match slot {
            Some(prev) if *prev != g => return None,
            Some(_) => {}
            None => *slot = Some(g),
        }
    }
    gamma.into_iter().collect()
}

/// Fits `φ = α q² + β q + γ(e)` with the period and onset of `fit` and
/// returns `β`, solved from the first two pair equations at `e ≥ e0`.
pub fn linear_term_audit(samples: &[HKSample], fit: &HKFit) -> Result<Rational> {
    let by_e = index_samples(samples)?;
    let eqs: Vec<[BigInt; 3]> = by_e
        .range(fit.e0..)
        .filter_map(|(&e, (q, phi))| {
            let (q2, phi2) = by_e.get(&(e + fit.tau))?;
            Some([q2 * q2 - q * q, q2 - q, phi2 - phi])
        })
        .take(2)
        .collect();
    if eqs.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "linear audit needs two pair equations at e >= {} with period {}",
            fit.e0, fit.tau
        )));
    }
    let [a1, b1, c1] = &eqs[0];
    let [a2, b2, c2] = &eqs[1];
    let det = a1 * b2 - a2 * b1;
    if det.is_zero() {
        return Err(Error::InvalidInput("degenerate linear audit system".into()));
    }
    Ok(Rational::new(a1 * c2 - a2 * c1, det))
}

/// Smallest period `τ ≤ max_period`, then smallest onset, such that
/// `seq[i] == seq[i + τ]` for every `i ≥ onset` in range, with at least
/// `max(τ, 2)` such comparisons made.
pub fn eventual_period<T: PartialEq>(seq: &[T], max_period: usize) -> Option<(usize, usize)> {
    for tau in 1..=max_period {
        let need = tau.max(2);
        for onset in 0..seq.len() {
            let checks = seq.len().saturating_sub(onset + tau);
            if checks < need {
                break;
            }
            if (onset..onset + checks).all(|i| seq[i] == seq[i + tau]) {
                return Some((tau, onset));
            }
        }
    }
    None
}

/// Largest `|φ - e_HK q²|` over samples at or past the onset.
pub fn max_deviation(samples: &[HKSample], fit: &HKFit) -> Rational {
    samples
        .iter()
        .filter(|s| s.e >= fit.e0)
        .map(|s| {
            let q = BigInt::from(s.q);
            (int(s.phi) - &fit.e_hk * int(&q * &q)).abs()
        })
        .max()
        .unwrap_or_else(Rational::zero)
}
