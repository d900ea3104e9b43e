use std::cmp::Ordering;

pub const MAX_VARS: usize = 3;

/// Exponent vector in at most three variables. Unused trailing slots are 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u32; MAX_VARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; MAX_VARS] };

    pub fn new(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        let mut m = Monomial::ONE;
        m.exps[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::ONE;
        m.exps[i] = 1;
        m
    }

    pub fn exps(&self) -> &[u32; MAX_VARS] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps) {
            *a += b;
        }
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps).all(|(a, b)| *a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = *other;
        for (a, b) in m.exps.iter_mut().zip(self.exps) {
            *a -= b;
        }
        m
    }

    pub fn scale_exponents(&self, q: u32) -> Monomial {
        let mut m = *self;
        for a in m.exps.iter_mut() {
            *a *= q;
        }
        m
    }
}

/// Graded lexicographic order with `x > y > z`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `m` in `nvars` variables, largest first
/// under graded-lex.
pub fn monomials_of_degree(nvars: usize, m: u32) -> Vec<Monomial> {
    assert!((1..=MAX_VARS).contains(&nvars));
    let mut out = Vec::new();
    match nvars {
        1 => out.push(Monomial::new(&[m])),
        2 => {
            for a in (0..=m).rev() {
                out.push(Monomial::new(&[a, m - a]));
            }
        }
        _ => {
            for a in (0..=m).rev() {
                for b in (0..=m - a).rev() {
                    out.push(Monomial::new(&[a, b, m - a - b]));
                }
            }
        }
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 5).len(), 6);
        assert_eq!(monomials_of_degree(3, 0), vec![Monomial::ONE]);
        for m in 0..12 {
            assert_eq!(
                monomials_of_degree(3, m).len() as u64,
                binomial(m as u64 + 2, 2)
            );
        }
    }

    #[test]
    fn order_is_descending_grlex() {
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms[0], Monomial::new(&[2, 0, 0]));
        assert_eq!(ms[1], Monomial::new(&[1, 1, 0]));
        assert_eq!(ms[5], Monomial::new(&[0, 0, 2]));
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert!(Monomial::new(&[0, 0, 3]) > Monomial::new(&[2, 0, 0]));
    }
}
