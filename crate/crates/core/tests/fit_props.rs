use hkw_core::bundlecalc::{multiplicative_order, CurveData};
use hkw_core::hkfit::{fit_quadratic_periodic, linear_term_audit, max_deviation, HKFit, HKSample};
use hkw_core::infer_mu_hk;
use hkw_core::rational::{abs, ceil, int, rat, Rational};
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// `φ(p^e) = ⌈α q²⌉ + c[e mod τ0]` with distinct offsets `c`, so the
/// minimal period of `γ` is `lcm(τ0, ord_D(p²))`.
#[derive(Clone, Debug)]
struct Synthetic {
    p: u32,
    alpha: Rational,
    offsets: Vec<u64>,
}

impl Synthetic {
    fn phi(&self, e: u32) -> u64 {
        let q = (self.p as u64).pow(e);
        let main = ceil(&(&self.alpha * int(q) * int(q))).to_u64().unwrap();
        main + self.offsets[e as usize % self.offsets.len()]
    }

    fn samples(&self, e_max: u32) -> Vec<HKSample> {
        (1..=e_max)
            .map(|e| HKSample { e, q: (self.p as u64).pow(e), phi: self.phi(e) })
            .collect()
    }

    fn period(&self) -> u32 {
        let d = self.alpha.denom().to_u64().unwrap();
        let pp = (self.p * self.p) as u64;
        let ord = multiplicative_order(pp, d).unwrap();
        (self.offsets.len() as u64).lcm(&ord) as u32
    }
}

fn synthetic() -> impl Strategy<Value = Synthetic> {
    (
        prop::sample::select(vec![2u32, 3, 5, 7]),
        1i64..40,
        prop::sample::select(vec![1i64, 3, 5, 7]),
        Just(()).prop_perturb(|_, mut rng| {
            let len = 1 + (rng.next_u32() % 3) as usize;
            let mut offs: Vec<u64> = (0..6).collect();
            for i in (1..offs.len()).rev() {
                offs.swap(i, rng.next_u32() as usize % (i + 1));
            }
            offs.truncate(len);
            offs
        }),
    )
        .prop_filter_map("denominator must be coprime to p", |(p, k, d, offsets)| {
            if d % p as i64 == 0 || k.gcd(&d) != 1 {
                return None;
            }
            Some(Synthetic { p, alpha: rat(k, d), offsets })
        })
}

fn e_budget(s: &Synthetic) -> u32 {
    // keep φ inside u64
    match s.p {
        2 => 14,
        3 => 12,
        5 => 10,
        _ => 9,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fit_recovers_the_generator(s in synthetic()) {
        let tau = s.period();
        let e_max = (tau + 3).min(e_budget(&s));
        prop_assume!(e_max >= tau + 2);
        let samples = s.samples(e_max);
        let fit = fit_quadratic_periodic(&samples, 6).unwrap();
        prop_assert_eq!(&fit.e_hk, &s.alpha);
        prop_assert_eq!(fit.tau, tau);
        prop_assert_eq!(fit.e0, 1);
        for sample in &samples {
            let q = int(sample.q);
            let gamma = int(sample.phi) - &fit.e_hk * &q * &q;
            prop_assert_eq!(fit.gamma_at(sample.e).unwrap(), &gamma);
        }
        let bound = fit.gamma.iter().map(abs).max().unwrap();
        prop_assert!(max_deviation(&samples, &fit) <= bound);
    }

    #[test]
    fn refit_is_stable(s in synthetic(), extra in 0u32..3) {
        let tau = s.period();
        let e_max = (tau + 2 + extra).min(e_budget(&s) - 1);
        prop_assume!(e_max >= tau + 2);
        let small = s.samples(e_max);
        let large = s.samples(e_max + 1);
        let (Ok(a), Ok(b)) = (fit_quadratic_periodic(&small, 6), fit_quadratic_periodic(&large, 6)) else {
            return Ok(());
        };
        prop_assert_eq!(&a.e_hk, &b.e_hk);
        prop_assert_eq!(a.tau, b.tau);
        for e in a.e0.max(b.e0)..=e_max {
            prop_assert_eq!(a.gamma_at(e), b.gamma_at(e));
        }
    }

    #[test]
    fn linear_audit_recovers_beta(p in prop::sample::select(vec![2u32, 3, 5]), alpha in 1u64..30, beta in 0u64..30, tau in 1u32..4) {
        let samples: Vec<HKSample> = (1..=tau + 4)
            .map(|e| {
                let q = (p as u64).pow(e);
                HKSample { e, q, phi: alpha * q * q + beta * q + (e % tau) as u64 }
            })
            .collect();
        let fit = HKFit { e_hk: int(alpha), tau, e0: 1, gamma: vec![int(0); tau as usize], verified_equations: 0 };
        prop_assert_eq!(linear_term_audit(&samples, &fit).unwrap(), int(beta));
    }

    #[test]
    fn inferred_slope_round_trips(s in synthetic(), g in 0u64..4, deg_y in 1u64..5, degs in prop::collection::vec(1u64..4, 2..5)) {
        let tau = s.period();
        let e_max = (tau + 3).min(e_budget(&s));
        prop_assume!(e_max >= tau + 2);
        let fit = fit_quadratic_periodic(&s.samples(e_max), 6).unwrap();
        let curve = CurveData::new(g, deg_y).unwrap();
        let sq: u64 = degs.iter().map(|d| d * d).sum();
        let expected = int(2 * deg_y) * &s.alpha + int(deg_y * deg_y * sq);
        prop_assert_eq!(infer_mu_hk(&fit, &degs, &curve), expected);
    }
}
