use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::data::{to_i64, CurveData, HNData, HNQuotient};
use super::rounding::rounding_part;
use crate::error::{Error, Result};
use crate::rational::{ceil, fmt_rational, int, rat, Rational};

/// `μ_HK = Σ r_k μ̄_k²`.
pub fn hk_slope(hn: &HNData) -> Rational {
    hn.quotients()
        .iter()
        .fold(Rational::zero(), |acc, q| acc + int(q.rank) * &q.mubar * &q.mubar)
}

/// `h¹` of Frobenius pull-backs of HN quotients, twisted.
///
/// `k` indexes [`HNData::quotients`] from 0. Implementations must be safe
/// to query from several threads.
pub trait H1Oracle: Sync {
    fn h1(&self, k: usize, m: i64, q: u64) -> u64;
}

/// Answers 0 everywhere (vanishing ranges, or curves where `h¹` is known
/// to be zero on the correction window).
pub struct ZeroH1;

impl H1Oracle for ZeroH1 {
    fn h1(&self, _k: usize, _m: i64, _q: u64) -> u64 {
        0
    }
}

/// Fixed table of answers keyed by `(k, m, q)`; missing keys answer 0.
#[derive(Clone, Debug, Default)]
pub struct TableH1 {
    pub entries: HashMap<(usize, i64, u64), u64>,
}

impl H1Oracle for TableH1 {
    fn h1(&self, k: usize, m: i64, q: u64) -> u64 {
        self.entries.get(&(k, m, q)).copied().unwrap_or(0)
    }
}

impl<T: H1Oracle + ?Sized> H1Oracle for &T {
    fn h1(&self, k: usize, m: i64, q: u64) -> u64 {
        (**self).h1(k, m, q)
    }
}

/// Closed form of `Σ_{m=⌈qσ⌉}^{⌈qρ⌉-1} h⁰(S^q(m))` for a sheaf of degree
/// `deg` and rank `rk`, given the `h¹` total over the same window.
pub fn rr_window_sum(
    deg: &Rational,
    rk: u64,
    curve: &CurveData,
    sigma: &Rational,
    rho: &Rational,
    q: u64,
    h1_total: u64,
) -> Result<Rational> {
    let qb = BigInt::from(q);
    let lo = ceil(&(int(qb.clone()) * sigma));
    let hi = ceil(&(int(qb.clone()) * rho));
    if lo >= hi {
        if h1_total != 0 {
            return Err(Error::InvalidRange(
                "empty window cannot carry a nonzero h1 total".into(),
            ));
        }
        return Ok(Rational::zero());
    }
    let qr = int(qb.clone());
    let pi = rounding_part(&qb, rho);
    let delta = rounding_part(&qb, sigma);
    let rk_q = int(rk);
    let dy = curve.deg_y_q();
    let one_g = int(1 - curve.g as i64);
    let half = rat(1, 2);

    let quadratic = &qr
        * &qr
        * ((rho - sigma) * deg + (rho * rho - sigma * sigma) * &rk_q * &dy * &half);
    let linear = &qr * (rho - sigma) * &rk_q * (&one_g - &dy * &half);
    let linear_periodic =
        &qr * ((&pi - &delta) * deg + (&pi * rho - &delta * sigma) * &rk_q * &dy);
    let constant = &rk_q
        * ((&pi * (&pi - int(1)) - &delta * (&delta - int(1))) * &dy * &half
            + (&pi - &delta) * &one_g);
    Ok(quadratic + linear + linear_periodic + constant + int(h1_total))
}

/// Closed part plus the `h¹` corrections and the list of `(k, m)` queries
/// made to the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionFormula {
    pub total: Rational,
    pub queries: Vec<(usize, i64)>,
}

/// `ρ` must clear every correction window: `ρ ≥ ν_t + (deg ω + 2 degY)/degY`.
pub fn rho_lower_bound(hn: &HNData, curve: &CurveData) -> Rational {
    let nu_t = hn.nus(curve).pop().expect("nonempty HN data");
    nu_t + Rational::new(
        BigInt::from(curve.deg_omega() + 2 * curve.deg_y as i64),
        BigInt::from(curve.deg_y),
    )
}

/// `Σ_{m=⌈qσ⌉}^{⌈qρ⌉-1} h⁰(S^q(m))` through the strong HN filtration.
pub fn section_formula(
    hn: &HNData,
    curve: &CurveData,
    sigma: &Rational,
    rho: &Rational,
    q: u64,
    oracle: &dyn H1Oracle,
) -> Result<SectionFormula> {
    if q == 0 {
        return Err(Error::InvalidRange("q must be positive".into()));
    }
    let nus = hn.nus(curve);
    if sigma > &nus[0] {
        return Err(Error::InvalidRange(format!(
            "sigma = {} exceeds nu_1 = {}",
            fmt_rational(sigma),
            fmt_rational(&nus[0])
        )));
    }
    let bound = rho_lower_bound(hn, curve);
    if rho < &bound {
        return Err(Error::InvalidRange(format!(
            "rho = {} is below nu_t + (degOmega + 2 degY)/degY = {}",
            fmt_rational(rho),
            fmt_rational(&bound)
        )));
    }
    let qb = BigInt::from(q);
    let qr = int(qb.clone());
    let deg = hn.degree();
    let rk = int(hn.rank());
    let dy = curve.deg_y_q();
    let one_g = int(1 - curve.g as i64);
    let half = rat(1, 2);
    let pi = rounding_part(&qb, rho);

    let quadratic = &qr * &qr / (int(2) * &dy)
        * (hk_slope(hn) + int(2) * rho * &deg * &dy + rho * rho * &rk * &dy * &dy);
    let linear = &qr * (rho * &rk + &deg / &dy) * (&one_g - &dy * &half);
    let linear_periodic = &qr * &pi * (&deg + rho * &rk * &dy);
    let mut constant = &rk * &pi * ((&pi - int(1)) * &dy * &half + &one_g);

    let reach = ceil(&Rational::new(
        BigInt::from(curve.deg_omega()),
        BigInt::from(curve.deg_y),
    ));
    let reach = to_i64(&reach, "correction window")?;
    let mut h1 = 0u64;
    let mut queries = Vec::new();
    for (k, (HNQuotient { rank, .. }, nu)) in hn.quotients().iter().zip(&nus).enumerate() {
        let pi_k = rounding_part(&qb, nu);
        constant -= int(*rank) * &pi_k * ((&pi_k - int(1)) * &dy * &half + &one_g);
        let start = to_i64(&ceil(&(&qr * nu)), "twist")?;
        for m in start..=start + reach {
            queries.push((k, m));
            h1 += oracle.h1(k, m, q);
        }
    }
    Ok(SectionFormula {
        total: quadratic + linear + linear_periodic + constant + int(h1),
        queries,
    })
}

/// Coefficient of `q²` in the alternating section sum of `0 → S → T → Q → 0`.
pub fn exact_sequence_coefficient(
    hn_s: &HNData,
    hn_t: &HNData,
    hn_q: &HNData,
    curve: &CurveData,
) -> Result<Rational> {
    if hn_t.rank() != hn_s.rank() + hn_q.rank() {
        return Err(Error::InconsistentSequence(format!(
            "rank {} != {} + {}",
            hn_t.rank(),
            hn_s.rank(),
            hn_q.rank()
        )));
    }
    if hn_t.degree() != hn_s.degree() + hn_q.degree() {
        return Err(Error::InconsistentSequence(format!(
            "degree {} != {} + {}",
            fmt_rational(&hn_t.degree()),
            fmt_rational(&hn_s.degree()),
            fmt_rational(&hn_q.degree())
        )));
    }
    Ok((hk_slope(hn_s) - hk_slope(hn_t) + hk_slope(hn_q)) / (int(2) * curve.deg_y_q()))
}

/// `e_HK = (μ_HK(Syz) - degY² Σ d_i²) / (2 degY)`.
pub fn ehk_from_syzygy(hn_syz: &HNData, degrees: &[u64], curve: &CurveData) -> Result<Rational> {
    if degrees.len() < 2 {
        return Err(Error::InconsistentSyzygy(
            "need at least two generator degrees".into(),
        ));
    }
    let n = degrees.len() as u64;
    if hn_syz.rank() != n - 1 {
        return Err(Error::InconsistentSyzygy(format!(
            "syzygy rank {} but {} generators",
            hn_syz.rank(),
            n
        )));
    }
    let sum: u64 = degrees.iter().sum();
    let expected = -int(curve.deg_y * sum);
    if hn_syz.degree() != expected {
        return Err(Error::InconsistentSyzygy(format!(
            "syzygy degree {} but -degY * sum(d_i) = {}",
            fmt_rational(&hn_syz.degree()),
            fmt_rational(&expected)
        )));
    }
    let dy = curve.deg_y_q();
    let sq: u64 = degrees.iter().map(|d| d * d).sum();
    Ok((hk_slope(hn_syz) - &dy * &dy * int(sq)) / (int(2) * dy))
}

/// HN data of `⊕ O(a_i)`: equal degrees grouped, slopes `a_i degY` descending.
pub fn direct_sum_hn(degrees: &[i64], curve: &CurveData) -> Result<HNData> {
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut pairs: Vec<(u64, Rational)> = Vec::new();
    for a in sorted {
        let mubar = int(a) * curve.deg_y_q();
        match pairs.last_mut() {
            Some((r, m)) if *m == mubar => *r += 1,
            _ => pairs.push((1, mubar)),
        }
    }
    HNData::from_pairs(&pairs)
}
