//! Graded polynomials over finite fields and hypersurface quotient rings.

mod monomial;
mod poly;
mod ring;

pub use monomial::{binomial, monomials_of_degree, Monomial, MAX_VARS};
pub use poly::{Poly, DEFAULT_VARS};
pub use ring::RingPresentation;
pub(crate) use ring::DegreeIndex;

use crate::error::Result;

/// Normal form of `f` modulo the ring's relation.
pub fn normal_form(f: &Poly, ring: &RingPresentation) -> Poly {
    ring.normal_form(f)
}

/// `dim_K R_m`.
pub fn hilbert_function(ring: &RingPresentation, m: u32) -> u64 {
    ring.hilbert_function(m)
}

/// `f^q` in characteristic `p`, `q = p^e`.
pub fn frobenius_power(f: &Poly, q: u64) -> Result<Poly> {
    f.frobenius_power(q)
}
