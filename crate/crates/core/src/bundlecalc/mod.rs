//! Exact section counts for Frobenius pull-backs of vector bundles on a
//! smooth projective curve, from numerical data (genus, `deg O(1)`, strong
//! Harder-Narasimhan ranks and slopes).

mod data;
mod rounding;
mod sections;

pub use data::{CurveData, HNData, HNQuotient};
pub use rounding::{multiplicative_order, rounding_eval, rounding_part, RoundingEval, RoundingPart};
pub use sections::{
    direct_sum_hn, ehk_from_syzygy, exact_sequence_coefficient, hk_slope, rho_lower_bound,
    rr_window_sum, section_formula, H1Oracle, SectionFormula, TableH1, ZeroH1,
};
