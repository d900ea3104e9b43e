use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::{ceil, int, Rational};

/// `⌈qρ⌉ - qρ`, in `[0, 1)`.
pub fn rounding_part(q: &BigInt, rho: &Rational) -> Rational {
    let x = int(q.clone()) * rho;
    int(ceil(&x)) - x
}

/// The rounding part of a fixed rational `ρ = a/b` along `q = p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingPart {
    pub rho: Rational,
    pub p: u32,
}

/// Value at one exponent together with the period of the whole sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingEval {
    pub value: Rational,
    pub period: u64,
    pub onset: u64,
}

impl RoundingPart {
    pub fn new(rho: Rational, p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidInput(format!("characteristic {p} is not prime")));
        }
        Ok(RoundingPart { rho, p })
    }

    /// `((-p^e a) mod b) / b`, using only `p^e mod b`.
    pub fn eval(&self, e: u32) -> Rational {
        let b = self.rho.denom();
        let r = BigInt::from(self.p).modpow(&BigInt::from(e), b);
        self.value_from_residue(&r)
    }

    fn value_from_residue(&self, r: &BigInt) -> Rational {
        let b = self.rho.denom();
        let v = (-(r * self.rho.numer())).mod_floor(b);
        Rational::new(v, b.clone())
    }

    /// Minimal `(period, onset)` of `e ↦ eval(e)`, `e ≥ 0`.
    ///
    /// The value is an injective function of `p^e mod b` (as `gcd(a, b) =
    /// 1`), so the cycle of that residue sequence is the cycle of the values.
    pub fn period(&self) -> (u64, u64) {
        let b = self.rho.denom();
        if b.is_one() {
            return (1, 0);
        }
        let p = BigInt::from(self.p);
        let mut seen: HashMap<BigInt, u64> = HashMap::new();
        let mut r = BigInt::one().mod_floor(b);
        let mut e = 0u64;
        loop {
            if let Some(&first) = seen.get(&r) {
                return (e - first, first);
            }
            seen.insert(r.clone(), e);
            r = (&r * &p).mod_floor(b);
            e += 1;
        }
    }
}

pub fn rounding_eval(rp: &RoundingPart, e: u32) -> RoundingEval {
    let (period, onset) = rp.period();
    RoundingEval {
        value: rp.eval(e),
        period,
        onset,
    }
}

/// Multiplicative order of `p` modulo `b`, for `gcd(p, b) = 1`.
pub fn multiplicative_order(p: u64, b: u64) -> Option<u64> {
    if b == 0 || p.gcd(&b) != 1 {
        return None;
    }
    if b == 1 {
        return Some(1);
    }
    let mut x = p % b;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * p as u128) % b as u128) as u64;
        k += 1;
    }
    Some(k)
}
