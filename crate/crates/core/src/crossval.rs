//! Measured `e_HK` (colength samples + fit) against the syzygy-bundle
//! prediction, and the inverse direction: the `μ_HK` a measurement implies.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bundlecalc::{ehk_from_syzygy, hk_slope, CurveData, HNData};
use crate::colength::{DegreeCache, IdealSpec};
use crate::error::Result;
use crate::gradedring::RingPresentation;
use crate::hkfit::{fit_quadratic_periodic, hk_samples, linear_term_audit, HKFit, HKSample};
use crate::rational::{int, Rational};

/// `μ_HK(Syz) = 2 degY e_HK + degY² Σ d_i²`.
pub fn infer_mu_hk(fit: &HKFit, degrees: &[u64], curve: &CurveData) -> Rational {
    let dy = curve.deg_y_q();
    let sq: u64 = degrees.iter().map(|d| d * d).sum();
    int(2) * &dy * &fit.e_hk + &dy * &dy * int(sq)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub ring: String,
    pub ideal: String,
    pub curve: String,
    pub hn_syz: Option<String>,
    pub e_max: u32,
    pub tau_max: u32,
}

/// `φ(q) - c q²` for one sample, with `c` the measured or predicted
/// coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub e: u32,
    pub q: u64,
    pub phi: u64,
    #[serde(with = "crate::rational::serde_str")]
    pub residual: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossReport {
    pub inputs: ReportInputs,
    #[serde(with = "crate::rational::serde_str")]
    pub measured_e_hk: Rational,
    #[serde(with = "crate::rational::serde_opt")]
    pub predicted_e_hk: Option<Rational>,
    /// `None` when no HN data was supplied; otherwise exact equality.
    pub agree: Option<bool>,
    #[serde(with = "crate::rational::serde_str")]
    pub inferred_mu_hk: Rational,
    #[serde(with = "crate::rational::serde_opt")]
    pub supplied_mu_hk: Option<Rational>,
    pub tau: u32,
    pub e0: u32,
    #[serde(with = "crate::rational::serde_vec")]
    pub gamma: Vec<Rational>,
    #[serde(with = "crate::rational::serde_opt")]
    pub beta_audit: Option<Rational>,
    pub measured_residuals: Vec<ResidualRow>,
    pub predicted_residuals: Option<Vec<ResidualRow>>,
}

impl CrossReport {
    /// Human summary; a disagreement is stated, never hidden.
    pub fn summary(&self) -> String {
        use crate::rational::fmt_rational as f;
        let mut s = format!(
            "measured e_HK = {} (tau = {}, e0 = {}), inferred mu_HK = {}",
            f(&self.measured_e_hk),
            self.tau,
            self.e0,
            f(&self.inferred_mu_hk)
        );
        if let (Some(pred), Some(agree)) = (&self.predicted_e_hk, self.agree) {
            if agree {
                s.push_str(&format!("\npredicted e_HK = {}: agree", f(pred)));
            } else {
                s.push_str(&format!(
                    "\npredicted e_HK = {}: DISAGREE (the supplied HN data is inconsistent with the measurement at p = {})",
                    f(pred),
                    self.inputs.ring.split(';').next().unwrap_or("?").trim_start_matches("p=")
                ));
            }
        }
        s
    }
}

fn residuals(samples: &[HKSample], c: &Rational) -> Vec<ResidualRow> {
    samples
        .iter()
        .map(|s| {
            let q = BigInt::from(s.q);
            ResidualRow {
                e: s.e,
                q: s.q,
                phi: s.phi,
                residual: int(s.phi) - c * int(&q * &q),
            }
        })
        .collect()
}

/// Builds a report from samples already in hand.
pub fn reconcile_samples(
    inputs: ReportInputs,
    samples: &[HKSample],
    degrees: &[u64],
    curve: &CurveData,
    hn_syz: Option<&HNData>,
) -> Result<CrossReport> {
    let fit = fit_quadratic_periodic(samples, inputs.tau_max)?;
    let beta_audit = linear_term_audit(samples, &fit).ok();
    let predicted = hn_syz
        .map(|hn| ehk_from_syzygy(hn, degrees, curve))
        .transpose()?;
    Ok(CrossReport {
        measured_e_hk: fit.e_hk.clone(),
        agree: predicted.as_ref().map(|p| *p == fit.e_hk),
        inferred_mu_hk: infer_mu_hk(&fit, degrees, curve),
        supplied_mu_hk: hn_syz.map(hk_slope),
        tau: fit.tau,
        e0: fit.e0,
        gamma: fit.gamma.clone(),
        beta_audit,
        measured_residuals: residuals(samples, &fit.e_hk),
        predicted_residuals: predicted.as_ref().map(|p| residuals(samples, p)),
        predicted_e_hk: predicted,
        inputs,
    })
}

/// Samples `φ(p^e)` for `e = 1..=e_max`, fits, and compares.
#[allow(clippy::too_many_arguments)]
pub fn reconcile(
    ring: &RingPresentation,
    ideal: &IdealSpec,
    curve: &CurveData,
    hn_syz: Option<&HNData>,
    e_max: u32,
    tau_max: u32,
    cache: Option<&DegreeCache>,
) -> Result<CrossReport> {
    let samples = hk_samples(ring, ideal, e_max, cache)?;
    let degrees: Vec<u64> = ideal.degrees().iter().map(|&d| d as u64).collect();
    let inputs = ReportInputs {
        ring: ring.to_spec(),
        ideal: ideal.to_text(ring),
        curve: curve.to_string(),
        hn_syz: hn_syz.map(|h| h.to_string()),
        e_max,
        tau_max,
    };
    reconcile_samples(inputs, &samples, &degrees, curve, hn_syz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::FieldCtx;
    use crate::rational::rat;

    fn fit_with(e_hk: Rational) -> HKFit {
        HKFit {
            e_hk,
            tau: 1,
            e0: 1,
            gamma: vec![rat(0, 1)],
            verified_equations: 2,
        }
    }

    #[test]
    fn inference_examples() {
        let p1 = CurveData::projective_line();
        assert_eq!(infer_mu_hk(&fit_with(rat(1, 1)), &[1, 1], &p1), rat(4, 1));
        for (a, b) in [(1u64, 2u64), (2, 3), (3, 4)] {
            assert_eq!(
                infer_mu_hk(&fit_with(int(a * b)), &[a, b], &p1),
                int((a + b) * (a + b))
            );
        }
        let cubic = CurveData::plane_curve(3).unwrap();
        assert_eq!(infer_mu_hk(&fit_with(rat(9, 4)), &[1, 1, 1], &cubic), rat(81, 2));
    }

    #[test]
    fn reconcile_plane() {
        let ring = RingPresentation::polynomial_ring(FieldCtx::prime(2).unwrap());
        let p1 = CurveData::projective_line();
        let ideal = IdealSpec::parse(&ring, "x,y").unwrap();
        let hn = HNData::parse("1:-2").unwrap();
        let r = reconcile(&ring, &ideal, &p1, Some(&hn), 4, 3, None).unwrap();
        assert_eq!(r.measured_e_hk, rat(1, 1));
        assert_eq!(r.agree, Some(true));
        assert_eq!(r.inferred_mu_hk, rat(4, 1));
        assert_eq!(r.supplied_mu_hk, Some(rat(4, 1)));

        let ideal = IdealSpec::parse(&ring, "x^2,y^3").unwrap();
        let hn = HNData::parse("1:-5").unwrap();
        let r = reconcile(&ring, &ideal, &p1, Some(&hn), 3, 2, None).unwrap();
        assert_eq!(r.predicted_e_hk, Some(rat(6, 1)));
        assert_eq!(r.agree, Some(true));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["measured_e_hk"], "6/1");
        assert_eq!(json["gamma"][0], "0/1");
    }

    #[test]
    fn disagreement_is_reported() {
        let inputs = ReportInputs {
            ring: "p=2;vars=x,y".into(),
            ideal: "x,y".into(),
            curve: "g=0,degY=1".into(),
            hn_syz: Some("1:-2".into()),
            e_max: 4,
            tau_max: 2,
        };
        let samples: Vec<HKSample> = (1..=4)
            .map(|e| HKSample { e, q: 1 << e, phi: 2 << (2 * e) })
            .collect();
        let hn = HNData::parse("1:-2").unwrap();
        let r = reconcile_samples(inputs, &samples, &[1, 1], &CurveData::projective_line(), Some(&hn))
            .unwrap();
        assert_eq!(r.agree, Some(false));
        assert!(r.summary().contains("DISAGREE"));
    }
}
