use hkw_core::bundlecalc::{rr_window_sum, section_formula, CurveData};
use hkw_core::p1oracle::{
    audit_sequence, p1_frobenius, p1_h0, p1_h1, p1_h1_oracle, p1_window_sum_direct, split_hn,
    trial_rng, FormulaTrial, SequenceTrial,
};
use hkw_core::rational::{int, rat, Rational};
use hkw_core::SplitBundle;
use proptest::prelude::*;

fn bundle() -> impl Strategy<Value = SplitBundle> {
    prop::collection::vec(-6i64..=6, 1..=5).prop_map(|d| SplitBundle::new(d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn euler_characteristic_matches_riemann_roch(b in bundle(), q in 1u64..30, lo in -40i64..40, len in 0i64..40) {
        let twisted = p1_frobenius(&b, q);
        let mut chi = 0i64;
        for m in lo..lo + len {
            for &a in twisted.degrees() {
                chi += p1_h0(a + m) as i64 - p1_h1(a + m) as i64;
            }
        }
        let line = CurveData::projective_line();
        let sigma = rat(lo, q as i64);
        let rho = rat(lo + len, q as i64);
        let rr = rr_window_sum(&int(b.degree()), b.rank(), &line, &sigma, &rho, q, 0).unwrap();
        prop_assert_eq!(int(chi), rr);
    }

    #[test]
    fn formula_matches_direct_enumeration(b in bundle(), e in 0u32..5, p in prop::sample::select(vec![2u64, 3, 5, 7]),
                                          sigma_slack in 1i64..12, rho_slack in 0i64..12) {
        let q = p.pow(e);
        let line = CurveData::projective_line();
        let hn = split_hn(&b, &line).unwrap();
        let nu1 = hn.nus(&line)[0].clone();
        let sigma = &nu1 - rat(sigma_slack, 4);
        let rho = hkw_core::bundlecalc::rho_lower_bound(&hn, &line) + rat(rho_slack, 3);
        let oracle = p1_h1_oracle(&b);
        let formula = section_formula(&hn, &line, &sigma, &rho, q, &oracle).unwrap();
        let direct = p1_window_sum_direct(&b, &sigma, &rho, q).unwrap();
        prop_assert_eq!(formula.total, int(direct));
    }

    #[test]
    fn generated_trials_replay(seed in any::<u64>(), trial in 0u64..10_000) {
        let a = FormulaTrial::generate(&mut trial_rng(seed, trial));
        let b = FormulaTrial::generate(&mut trial_rng(seed, trial));
        prop_assert_eq!(&a, &b);
        let (formula, direct) = a.evaluate().unwrap();
        prop_assert_eq!(formula, int(direct));
    }

    #[test]
    fn split_sequences_have_zero_alternating_sum(seed in any::<u64>(), trial in 0u64..1000) {
        let t = SequenceTrial::generate(&mut trial_rng(seed, trial));
        let audit = audit_sequence(&t, 6, 4).unwrap();
        prop_assert_eq!(&audit.coefficient, &Rational::from_integer(0.into()));
        prop_assert!(audit.residuals.iter().all(|r| r == &int(0)));
    }
}

#[test]
fn line_bundle_window_is_arithmetic_series() {
    // O: sum_{m=0}^{q-1} (m + 1)
    let b = SplitBundle::new(vec![0]).unwrap();
    for q in [1u64, 2, 4, 8, 27] {
        let direct = p1_window_sum_direct(&b, &rat(0, 1), &rat(1, 1), q).unwrap();
        assert_eq!(direct as u64, q * (q + 1) / 2);
    }
}
