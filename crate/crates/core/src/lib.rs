//! Ranking and unranking of necklaces and Lyndon words in time polynomial in
//! `n` and `log q`, with applications to irreducible polynomials over finite
//! fields and to BCH code matrices.

pub mod bch;
pub mod branching_program;
pub mod counting;
pub mod error;
pub mod finite_field;
pub mod indexing;
pub mod irreducible;
pub mod oracle;
pub mod strings;
pub mod top_heavy;

pub use error::{Error, Result};
