//! Hilbert-Kunz functions of graded rings of dimension two: brute-force
//! colengths over finite fields, exact fitting of `e_HK q² + γ(q)`, and the
//! vector-bundle side (Harder-Narasimhan data on curves) that predicts them.

pub mod bundlecalc;
pub mod colength;
pub mod crossval;
pub mod error;
pub mod exactla;
pub mod gradedring;
pub mod hkfit;
pub mod p1oracle;
pub mod rational;

pub use bundlecalc::{CurveData, HNData, HNQuotient, H1Oracle, RoundingPart};
pub use colength::{colength, colength_naive, ColengthResult, DegreeCache, IdealSpec};
pub use crossval::{infer_mu_hk, reconcile, CrossReport};
pub use error::{Error, ParseError, Result};
pub use exactla::{Elem, FieldCtx, FpMatrix};
pub use gradedring::{Monomial, Poly, RingPresentation};
pub use hkfit::{fit_quadratic_periodic, hk_samples, linear_term_audit, FitFailure, HKFit, HKSample};
pub use p1oracle::SplitBundle;
pub use rational::Rational;
