//! Exact stopping-set and weight enumerators for binary parity-check
//! matrices.
//!
//! A *stopping set* of a parity-check matrix `H` is a column subset `S`
//! such that the restriction of `H` to the columns in `S` contains no row
//! of weight exactly one.  Stopping sets govern the failure behaviour of
//! iterative (peeling) decoding on the binary erasure channel: the decoder
//! started from an erasure pattern `E` gets stuck precisely when `E`
//! contains a nonempty stopping set.
//!
//! The crate computes the full enumerator `S(x) = sum_l S_l x^l` (and the
//! codeword-weight enumerator `A(x)`) by several independent routes:
//!
//! * brute-force subset enumeration, for any matrix with few columns;
//! * a row-subset inclusion–exclusion formula, for any matrix with few
//!   rows;
//! * closed forms special to full-rank parity-check matrices of binary
//!   Hamming codes, parameterized by `m` (the number of rows).
//!
//! The routes deliberately overlap so that they validate one another, and
//! a peeling decoder ([`peeling`]) ties the counts to observable decoder
//! behaviour.  All counting is exact big-integer arithmetic.

pub mod combinatorics;
pub mod enumerator;
pub mod error;
pub mod matrix;
pub mod peeling;

pub use error::{Error, Result};
pub use matrix::BitMatrix;
