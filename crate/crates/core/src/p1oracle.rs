//! The projective line, where everything is explicit: split bundles
//! `⊕ O(a_i)`, their Frobenius pull-backs `⊕ O(q a_i)`, and `h⁰`, `h¹` in
//! closed form. Used as an independent oracle for [`crate::bundlecalc`].

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundlecalc::{
    exact_sequence_coefficient, section_formula, CurveData, H1Oracle, HNData,
};
use crate::error::{Error, ParseError, Result};
use crate::hkfit::eventual_period;
use crate::rational::{ceil, fmt_rational, int, rat, Rational};

/// `⊕ O(a_i)` with `a_1 ≥ ... ≥ a_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplitBundle {
    degrees: Vec<i64>,
}

impl SplitBundle {
    pub fn new(mut degrees: Vec<i64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidInput("split bundle needs at least one summand".into()));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplitBundle { degrees })
    }

    /// Comma-separated integers, e.g. `0,-1,-1`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut degrees = Vec::new();
        let mut col = 1;
        for part in text.split(',') {
            let lead = part.len() - part.trim_start().len();
            let a: i64 = part.trim().parse().map_err(|_| {
                ParseError::new(col + lead, format!("expected an integer, found '{}'", part.trim()))
            })?;
            degrees.push(a);
            col += part.len() + 1;
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplitBundle { degrees })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> u64 {
        self.degrees.len() as u64
    }

    pub fn degree(&self) -> i64 {
        self.degrees.iter().sum()
    }
}

impl fmt::Display for SplitBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn p1_h0(a: i64) -> u64 {
    (a + 1).max(0) as u64
}

pub fn p1_h1(a: i64) -> u64 {
    (-a - 1).max(0) as u64
}

pub fn p1_frobenius(b: &SplitBundle, q: u64) -> SplitBundle {
    SplitBundle {
        degrees: b.degrees.iter().map(|a| a * q as i64).collect(),
    }
}

fn check_p1(curve: &CurveData) -> Result<()> {
    if *curve != CurveData::projective_line() {
        return Err(Error::InvalidCurve(format!(
            "split bundles live on the projective line (g=0,degY=1), not {curve}"
        )));
    }
    Ok(())
}

/// Equal degrees grouped, slopes descending.
pub fn split_hn(b: &SplitBundle, curve: &CurveData) -> Result<HNData> {
    check_p1(curve)?;
    let mut pairs: Vec<(u64, Rational)> = Vec::new();
    for &a in &b.degrees {
        match pairs.last_mut() {
            Some((r, m)) if *m == int(a) => *r += 1,
            _ => pairs.push((1, int(a))),
        }
    }
    HNData::from_pairs(&pairs)
}

fn window(q: u64, sigma: &Rational, rho: &Rational) -> Result<(i64, i64)> {
    let lo = ceil(&(int(q) * sigma));
    let hi = ceil(&(int(q) * rho));
    let conv = |n: BigInt| {
        i64::try_from(n).map_err(|_| Error::InvalidRange("window does not fit in 64 bits".into()))
    };
    Ok((conv(lo)?, conv(hi)?))
}

/// `Σ_{m=⌈qσ⌉}^{⌈qρ⌉-1} Σ_i h⁰(O(q a_i + m))`, one term at a time.
pub fn p1_window_sum_direct(b: &SplitBundle, sigma: &Rational, rho: &Rational, q: u64) -> Result<u128> {
    if sigma >= rho {
        return Err(Error::InvalidRange(format!(
            "sigma = {} must be below rho = {}",
            fmt_rational(sigma),
            fmt_rational(rho)
        )));
    }
    let (lo, hi) = window(q, sigma, rho)?;
    let fb = p1_frobenius(b, q);
    let mut total = 0u128;
    for m in lo..hi {
        for a in &fb.degrees {
            total += p1_h0(a + m) as u128;
        }
    }
    Ok(total)
}

/// `h¹` of the `k`-th HN block of a split bundle: `Σ_{a in block} h¹(O(q a + m))`.
#[derive(Clone, Debug)]
pub struct P1H1Oracle {
    blocks: Vec<(i64, u64)>,
}

impl H1Oracle for P1H1Oracle {
    fn h1(&self, k: usize, m: i64, q: u64) -> u64 {
        let (a, mult) = self.blocks[k];
        mult * p1_h1(q as i64 * a + m)
    }
}

pub fn p1_h1_oracle(b: &SplitBundle) -> P1H1Oracle {
    let mut blocks: Vec<(i64, u64)> = Vec::new();
    for &a in &b.degrees {
        match blocks.last_mut() {
            Some((d, r)) if *d == a => *r += 1,
            _ => blocks.push((a, 1)),
        }
    }
    P1H1Oracle { blocks }
}

const PRIMES: [u32; 4] = [2, 3, 5, 7];

/// Independent stream for trial `i` of a suite seeded with `seed`, so that
/// any single trial can be replayed alone.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_bundle(rng: &mut impl Rng, min_rank: usize, max_rank: usize) -> SplitBundle {
    let r = rng.random_range(min_rank..=max_rank);
    SplitBundle::new((0..r).map(|_| rng.random_range(-6..=6)).collect()).unwrap()
}

/// Random rational in `[0, 3]` with denominator at most 6.
fn random_slack(rng: &mut impl Rng) -> Rational {
    let d = rng.random_range(1..=6i64);
    rat(rng.random_range(0..=3 * d), d)
}

/// One formula-vs-oracle case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaTrial {
    pub bundle: SplitBundle,
    pub p: u32,
    pub e: u32,
    pub sigma: Rational,
    pub rho: Rational,
}

impl FormulaTrial {
    /// Bundle with rank ≤ 5 and `|a_i| ≤ 6`, `p ∈ {2,3,5,7}`, `1 ≤ e ≤ 6`,
    /// `σ ≤ ν_1`, `ρ ≥ ν_t`.
    pub fn generate(rng: &mut impl Rng) -> Self {
        let bundle = random_bundle(rng, 1, 5);
        let p = PRIMES[rng.random_range(0..PRIMES.len())];
        let e = rng.random_range(1..=6);
        let nu_1 = int(-bundle.degrees[0]);
        let nu_t = int(-*bundle.degrees.last().unwrap());
        let sigma = nu_1 - random_slack(rng);
        let mut rho = nu_t + random_slack(rng);
        if rho <= sigma {
            rho = &sigma + rat(1, 1);
        }
        FormulaTrial {
            bundle,
            p,
            e,
            sigma,
            rho,
        }
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    /// `(formula, direct)`.
    pub fn evaluate(&self) -> Result<(Rational, u128)> {
        let curve = CurveData::projective_line();
        let hn = split_hn(&self.bundle, &curve)?;
        let oracle = p1_h1_oracle(&self.bundle);
        let f = section_formula(&hn, &curve, &self.sigma, &self.rho, self.q(), &oracle)?;
        let d = p1_window_sum_direct(&self.bundle, &self.sigma, &self.rho, self.q())?;
        Ok((f.total, d))
    }
}

impl fmt::Display for FormulaTrial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bundle={} p={} e={} sigma={} rho={}",
            self.bundle,
            self.p,
            self.e,
            fmt_rational(&self.sigma),
            fmt_rational(&self.rho)
        )
    }
}

/// A split sequence `0 → S → S ⊕ Q → Q → 0` with a window covering all
/// three bundles.
#[derive(Clone, Debug)]
pub struct SequenceTrial {
    pub s: SplitBundle,
    pub q_part: SplitBundle,
    pub p: u32,
    pub sigma: Rational,
    pub rho: Rational,
}

impl SequenceTrial {
    /// `p ∈ {2, 3}` so that `e = 8` stays a short direct sum.
    pub fn generate(rng: &mut impl Rng) -> Self {
        let t = random_bundle(rng, 2, 5);
        let r = t.degrees.len();
        let split = rng.random_range(1..r);
        let mut idx: Vec<usize> = (0..r).collect();
        for i in (1..r).rev() {
            idx.swap(i, rng.random_range(0..=i));
        }
        let pick = |ids: &[usize]| SplitBundle::new(ids.iter().map(|&i| t.degrees[i]).collect()).unwrap();
        let s = pick(&idx[..split]);
        let q_part = pick(&idx[split..]);
        let p = [2u32, 3][rng.random_range(0..2)];
        let sigma = int(-t.degrees[0]) - random_slack(rng);
        let rho = int(-*t.degrees.last().unwrap()) + random_slack(rng) + rat(1, 1);
        SequenceTrial {
            s,
            q_part,
            p,
            sigma,
            rho,
        }
    }

    pub fn middle(&self) -> SplitBundle {
        let mut d = self.s.degrees.clone();
        d.extend_from_slice(&self.q_part.degrees);
        SplitBundle::new(d).unwrap()
    }

    /// `Σ(h⁰S - h⁰T + h⁰Q) - c q²` for `e = 1..=e_max`, with `c` the exact
    /// sequence coefficient.
    pub fn residuals(&self, e_max: u32) -> Result<(Rational, Vec<Rational>)> {
        let curve = CurveData::projective_line();
        let t = self.middle();
        let coeff = exact_sequence_coefficient(
            &split_hn(&self.s, &curve)?,
            &split_hn(&t, &curve)?,
            &split_hn(&self.q_part, &curve)?,
            &curve,
        )?;
        let mut out = Vec::new();
        for e in 1..=e_max {
            let q = (self.p as u64).pow(e);
            let h = |b: &SplitBundle| -> Result<Rational> {
                Ok(int(p1_window_sum_direct(b, &self.sigma, &self.rho, q)?))
            };
            let alt = h(&self.s)? - h(&t)? + h(&self.q_part)?;
            out.push(alt - &coeff * int(q * q));
        }
        Ok((coeff, out))
    }
}

impl fmt::Display for SequenceTrial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S={} Q={} p={} sigma={} rho={}",
            self.s,
            self.q_part,
            self.p,
            fmt_rational(&self.sigma),
            fmt_rational(&self.rho)
        )
    }
}

/// Outcome of one of the seeded suites.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: u64,
    pub exact: u64,
    /// One replay line per failing trial.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.exact == self.trials
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}/{} exact", self.name, self.exact, self.trials)?;
        for line in &self.failures {
            write!(f, "\n  {line}")?;
        }
        Ok(())
    }
}

/// `section_formula` with the explicit `h¹` oracle against direct summation.
pub fn formula_suite(seed: u64, trials: Range<u64>) -> SuiteReport {
    let mut rep = SuiteReport {
        name: "formula-vs-oracle",
        trials: trials.end.saturating_sub(trials.start),
        ..Default::default()
    };
    for i in trials {
        let t = FormulaTrial::generate(&mut trial_rng(seed, i));
        match t.evaluate() {
            Ok((f, d)) if f == int(d) => rep.exact += 1,
            Ok((f, d)) => rep.failures.push(format!(
                "replay: hkw p1check --seed {seed} --only {i}: {t}: formula {} direct {d}",
                fmt_rational(&f)
            )),
            Err(err) => rep
                .failures
                .push(format!("replay: hkw p1check --seed {seed} --only {i}: {t}: error {err}")),
        }
    }
    rep
}

/// Result of auditing one split sequence over `e = 1..=e_max`.
#[derive(Clone, Debug)]
pub struct SequenceAudit {
    pub coefficient: Rational,
    pub residuals: Vec<Rational>,
    /// `(period, onset)` of the residual sequence, if one `≤ max_period` exists.
    pub period: Option<(usize, usize)>,
    pub all_zero: bool,
}

pub fn audit_sequence(t: &SequenceTrial, e_max: u32, max_period: usize) -> Result<SequenceAudit> {
    let (coefficient, residuals) = t.residuals(e_max)?;
    let period = eventual_period(&residuals, max_period);
    let all_zero = coefficient.is_zero() && residuals.iter().all(Zero::is_zero);
    Ok(SequenceAudit {
        coefficient,
        residuals,
        period,
        all_zero,
    })
}

/// Split sequences: residual eventually periodic and identically zero.
pub fn sequence_suite(seed: u64, trials: Range<u64>, e_max: u32, max_period: usize) -> SuiteReport {
    let mut rep = SuiteReport {
        name: "exact-sequence",
        trials: trials.end.saturating_sub(trials.start),
        ..Default::default()
    };
    // the sequence suite draws from streams disjoint from the formula suite
    let offset = 1u64 << 32;
    for i in trials {
        let t = SequenceTrial::generate(&mut trial_rng(seed, offset + i));
        match audit_sequence(&t, e_max, max_period) {
            Ok(a) if a.period.is_some() && a.all_zero => rep.exact += 1,
            Ok(a) => rep.failures.push(format!(
                "replay: hkw p1check --seed {seed} --only {i}: {t}: coefficient {} residuals [{}]",
                fmt_rational(&a.coefficient),
                a.residuals.iter().map(fmt_rational).collect::<Vec<_>>().join(",")
            )),
            Err(err) => rep
                .failures
                .push(format!("replay: hkw p1check --seed {seed} --only {i}: {t}: error {err}")),
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cohomology_examples() {
        assert_eq!((p1_h0(3), p1_h1(3)), (4, 0));
        assert_eq!((p1_h0(-1), p1_h1(-1)), (0, 0));
        assert_eq!((p1_h0(-5), p1_h1(-5)), (0, 4));
        for a in -20..20 {
            assert_eq!(p1_h0(a) as i64 - p1_h1(a) as i64, a + 1);
        }
    }

    #[test]
    fn frobenius_and_hn() {
        let b = SplitBundle::parse("0,-1").unwrap();
        assert_eq!(p1_frobenius(&b, 4).degrees(), &[0, -4]);
        assert_eq!(p1_frobenius(&b, 1), b);
        assert_eq!(p1_frobenius(&SplitBundle::parse("-2").unwrap(), 3).degrees(), &[-6]);
        let p1 = CurveData::projective_line();
        let hn = |t: &str| split_hn(&SplitBundle::parse(t).unwrap(), &p1).unwrap().to_string();
        assert_eq!(hn("0,0,-2"), "2:0/1;1:-2/1");
        assert_eq!(hn("5"), "1:5/1");
        assert_eq!(hn("-1,1,0"), "1:1/1;1:0/1;1:-1/1");
        assert!(matches!(
            split_hn(&b, &CurveData::new(1, 3).unwrap()),
            Err(Error::InvalidCurve(_))
        ));
        assert_eq!(SplitBundle::parse("0, x").unwrap_err().column, 4);
    }

    #[test]
    fn direct_sum_examples() {
        let b0 = SplitBundle::parse("0").unwrap();
        for q in [1u64, 2, 3, 7, 16] {
            assert_eq!(
                p1_window_sum_direct(&b0, &rat(0, 1), &rat(1, 1), q).unwrap(),
                (q * (q + 1) / 2) as u128
            );
        }
        let bm = SplitBundle::parse("-1").unwrap();
        assert_eq!(p1_window_sum_direct(&bm, &rat(0, 1), &rat(1, 1), 2).unwrap(), 0);
        // m = -2..3: h⁰(O(m)) + h⁰(O(m-2)) = 0,0,1,2,4,6
        let b = SplitBundle::parse("0,-1").unwrap();
        assert_eq!(p1_window_sum_direct(&b, &rat(-1, 1), &rat(2, 1), 2).unwrap(), 13);
    }

    #[test]
    fn formula_matches_on_split_pair() {
        let b = SplitBundle::parse("0,-1").unwrap();
        let p1 = CurveData::projective_line();
        let hn = split_hn(&b, &p1).unwrap();
        for q in [1u64, 2, 4, 8, 3, 9] {
            let f = section_formula(&hn, &p1, &rat(-1, 2), &rat(2, 1), q, &p1_h1_oracle(&b)).unwrap();
            let d = p1_window_sum_direct(&b, &rat(-1, 2), &rat(2, 1), q).unwrap();
            assert_eq!(f.total, int(d), "q={q}");
        }
    }

    #[test]
    fn koszul_sequence() {
        // 0 → O(-2) → O(-1)² → O → 0 on the projective line is not split,
        // yet its alternating section sum over a wide window is exactly q²
        let p1 = CurveData::projective_line();
        let s = SplitBundle::parse("-2").unwrap();
        let t = SplitBundle::parse("-1,-1").unwrap();
        let qb = SplitBundle::parse("0").unwrap();
        let coeff = exact_sequence_coefficient(
            &split_hn(&s, &p1).unwrap(),
            &split_hn(&t, &p1).unwrap(),
            &split_hn(&qb, &p1).unwrap(),
            &p1,
        )
        .unwrap();
        assert_eq!(coeff, rat(1, 1));
        for q in [2u64, 3, 4, 8, 27] {
            let h = |b: &SplitBundle| p1_window_sum_direct(b, &rat(0, 1), &rat(3, 1), q).unwrap() as i128;
            let alt = h(&s) - h(&t) + h(&qb);
            assert_eq!(alt, (q * q) as i128, "q={q}");
        }
        // the Euler sequence twisted by O(1): 0 → O(-1) → O² → O(1) → 0
        let s = SplitBundle::parse("-1").unwrap();
        let t = SplitBundle::parse("0,0").unwrap();
        let qb = SplitBundle::parse("1").unwrap();
        let coeff = exact_sequence_coefficient(
            &split_hn(&s, &p1).unwrap(),
            &split_hn(&t, &p1).unwrap(),
            &split_hn(&qb, &p1).unwrap(),
            &p1,
        )
        .unwrap();
        assert_eq!(coeff, rat(1, 1));
        for q in [2u64, 5, 9] {
            let h = |b: &SplitBundle| p1_window_sum_direct(b, &rat(-1, 1), &rat(2, 1), q).unwrap() as i128;
            assert_eq!(h(&s) - h(&t) + h(&qb), (q * q) as i128, "q={q}");
        }
    }

    #[test]
    fn suites_are_deterministic_and_exact() {
        let a = formula_suite(7, 0..50);
        let b = formula_suite(7, 0..50);
        assert!(a.passed(), "{a}");
        assert_eq!(a.to_string(), b.to_string());
        let s = sequence_suite(7, 0..20, 6, 4);
        assert!(s.passed(), "{s}");
        assert_eq!(a.to_string(), "formula-vs-oracle: 50/50 exact");
    }

    #[test]
    fn replay_reproduces_a_trial() {
        let t1 = FormulaTrial::generate(&mut trial_rng(42, 17));
        let t2 = FormulaTrial::generate(&mut trial_rng(42, 17));
        assert_eq!(t1.to_string(), t2.to_string());
    }
}
