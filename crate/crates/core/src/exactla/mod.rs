//! Exact arithmetic in finite fields and exact matrix rank.

mod bitpacked;
pub mod field;
pub mod matrix;
pub mod sparse;

pub use bitpacked::BitMatrix;
pub use field::{field_inv, is_prime, Elem, FieldCtx};
pub use matrix::{rank, rank_bitpacked, FpMatrix};
pub use sparse::{SparseColumn, SparseColumns};
