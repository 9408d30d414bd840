//! Bit-packed linear algebra over GF(2).
//!
//! Rows are packed 64 columns per word and elimination works on whole words,
//! so rank and null-space queries on the 24–48 variable systems used by the
//! sweeps cost a few hundred word operations.

mod matrix;
mod vector;

pub use matrix::BitMatrix;
pub(crate) use matrix::parse_matrix_lines;
pub use vector::BitVector;
