//! Prime fields `F_p` and small extensions `F_{p^k}`.
//!
//! Elements are `u32`. In the prime field an element is its residue in
//! `0..p`. In an extension of degree `k` an element `c_0 + c_1 t + ... +
//! c_{k-1} t^{k-1}` (with `t` a root of the modulus polynomial) is stored as
//! the base-`p` integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, so the prime
//! subfield keeps its natural encoding.

use std::sync::Arc;

use crate::error::{Error, Result};

pub type Elem = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    p: u32,
    ext_degree: u32,
    /// Monic modulus, low coefficient first, length `ext_degree + 1`.
    modulus: Option<Arc<[u32]>>,
    order: u64,
    barrett: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldCtx {
            p,
            ext_degree: 1,
            modulus: None,
            order: p as u64,
            barrett: u64::MAX / p as u64,
        })
    }

    /// `F_{p^k}` built on the lexicographically first monic irreducible of
    /// degree `k`.
    pub fn extension(p: u32, k: u32) -> Result<Self> {
        if k == 1 {
            return Self::prime(p);
        }
        Self::check_order(p, k)?;
        let base = Self::prime(p)?;
        let count = (p as u64).pow(k);
        for code in 0..count {
            let mut poly = digits(code, p, k as usize);
            poly.push(1);
            if base.poly_is_irreducible(&poly) {
                return Self::with_modulus(p, &poly);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// `F_{p^k}` with an explicit monic modulus (low coefficient first).
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        let base = Self::prime(p)?;
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        let k = (modulus.len() - 1) as u32;
        if modulus.iter().any(|&c| c >= p) || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField(
                "modulus must be monic with coefficients in 0..p".into(),
            ));
        }
        if k == 1 {
            return Ok(base);
        }
        Self::check_order(p, k)?;
        if !base.poly_is_irreducible(modulus) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        Ok(FieldCtx {
            p,
            ext_degree: k,
            modulus: Some(modulus.into()),
            order: (p as u64).pow(k),
            barrett: base.barrett,
        })
    }

    fn check_order(p: u32, k: u32) -> Result<()> {
        match (p as u64).checked_pow(k) {
            Some(o) if o <= u32::MAX as u64 => Ok(()),
            _ => Err(Error::UnsupportedField(format!(
                "F_{{{p}^{k}}} does not fit the 32-bit element encoding"
            ))),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ext_degree(&self) -> u32 {
        self.ext_degree
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.ext_degree == 1
    }

    /// Reduces `x < 2^64` modulo `p`.
    #[inline(always)]
    pub fn reduce(&self, x: u64) -> u32 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p as u64;
        if r >= self.p as u64 {
            r -= self.p as u64;
        }
        r as u32
    }

    /// Embeds an integer into the prime subfield.
    pub fn from_i64(&self, v: i64) -> Elem {
        v.rem_euclid(self.p as i64) as Elem
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.ext_degree == 1 {
            let s = a as u64 + b as u64;
            let p = self.p as u64;
            (if s >= p { s - p } else { s }) as Elem
        } else {
            let (x, y) = (self.decode(a), self.decode(b));
            let sum: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
            self.encode(&sum)
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.ext_degree == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let x = self.decode(a);
            let n: Vec<u32> = x.iter().map(|&c| (self.p - c) % self.p).collect();
            self.encode(&n)
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.ext_degree == 1 {
            return self.reduce(a as u64 * b as u64);
        }
        let (x, y) = (self.decode(a), self.decode(b));
        let k = self.ext_degree as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &u) in x.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % self.p as u64;
            }
        }
        let modulus = self.modulus.as_ref().expect("extension has a modulus");
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            // t^k = -(m_0 + ... + m_{k-1} t^{k-1})
            for (i, &m) in modulus[..k].iter().enumerate() {
                let sub = c * m as u64 % self.p as u64;
                let slot = &mut prod[d - k + i];
                *slot = (*slot + self.p as u64 - sub) % self.p as u64;
            }
        }
        let coeffs: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.encode(&coeffs)
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    /// Writes `a` as its base-`p` coefficient vector (low first).
    pub fn decode(&self, a: Elem) -> Vec<u32> {
        digits(a as u64, self.p, self.ext_degree as usize)
    }

    pub fn encode(&self, coeffs: &[u32]) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64) as Elem
    }

    /// Exhaustive check that no monic polynomial of degree `1..=deg/2`
    /// divides `poly` (coefficients in the prime field, low first, monic).
    fn poly_is_irreducible(&self, poly: &[u32]) -> bool {
        let deg = poly.len() - 1;
        for d in 1..=deg / 2 {
            let count = (self.p as u64).pow(d as u32);
            for code in 0..count {
                let mut divisor = digits(code, self.p, d);
                divisor.push(1);
                if self.poly_rem_is_zero(poly, &divisor) {
                    return false;
                }
            }
        }
        true
    }

    fn poly_rem_is_zero(&self, num: &[u32], monic: &[u32]) -> bool {
        let mut r = num.to_vec();
        let d = monic.len() - 1;
        for top in (d..r.len()).rev() {
            let c = r[top];
            if c == 0 {
                continue;
            }
            for (i, &m) in monic.iter().enumerate() {
                let slot = &mut r[top - d + i];
                *slot = self.sub(*slot, self.mul(c, m));
            }
        }
        r[..d].iter().all(|&c| c == 0)
    }
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

/// `a^{-1}` in the given field.
pub fn field_inv(a: Elem, ctx: &FieldCtx) -> Result<Elem> {
    ctx.inv(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_in_prime_fields() {
        assert_eq!(field_inv(3, &FieldCtx::prime(7).unwrap()).unwrap(), 5);
        assert_eq!(field_inv(1, &FieldCtx::prime(2).unwrap()).unwrap(), 1);
        assert_eq!(field_inv(4, &FieldCtx::prime(5).unwrap()).unwrap(), 4);
        assert!(matches!(
            field_inv(0, &FieldCtx::prime(5).unwrap()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn rejects_composite_and_reducible() {
        assert!(FieldCtx::prime(9).is_err());
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(FieldCtx::with_modulus(2, &[1, 0, 1]).is_err());
        // x^2 + 1 is irreducible over F_3
        assert!(FieldCtx::with_modulus(3, &[1, 0, 1]).is_ok());
    }

    #[test]
    fn extension_picks_irreducible() {
        let f4 = FieldCtx::extension(2, 2).unwrap();
        assert_eq!(f4.modulus(), Some(&[1, 1, 1][..]));
        assert_eq!(f4.order(), 4);
        for a in 1..4 {
            let inv = f4.inv(a).unwrap();
            assert_eq!(f4.mul(a, inv), 1);
        }
        // multiplicative group of F_4 is cyclic of order 3
        for a in 1..4 {
            assert_eq!(f4.pow(a, 3), 1);
        }
    }

    #[test]
    fn field_axioms_on_all_triples() {
        let ctxs = [
            FieldCtx::prime(2).unwrap(),
            FieldCtx::prime(3).unwrap(),
            FieldCtx::prime(5).unwrap(),
            FieldCtx::prime(7).unwrap(),
            FieldCtx::extension(2, 3).unwrap(),
            FieldCtx::extension(3, 2).unwrap(),
            FieldCtx::extension(5, 2).unwrap(),
            FieldCtx::extension(7, 2).unwrap(),
        ];
        for ctx in &ctxs {
            let n = ctx.order() as u32;
            let step = (n / 7).max(1);
            for a in (0..n).step_by(step as usize) {
                for b in (0..n).step_by(step as usize) {
                    for c in (0..n).step_by(step as usize) {
                        assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                        assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                        assert_eq!(
                            ctx.mul(a, ctx.add(b, c)),
                            ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                        );
                    }
                }
                if a != 0 {
                    assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), 1);
                }
                assert_eq!(ctx.add(a, ctx.neg(a)), 0);
            }
        }
    }

    #[test]
    fn barrett_matches_remainder() {
        let ctx = FieldCtx::prime(65521).unwrap();
        for x in [0u64, 1, 65520, 65521, 1 << 40, u64::MAX, u64::MAX - 7] {
            assert_eq!(ctx.reduce(x) as u64, x % 65521);
        }
    }
}
