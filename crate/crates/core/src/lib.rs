//! Exact analysis of transversal diagonal gates on stabilizer and CSS codes.
//!
//! The crate decides whether a code supports transversal `T`, mixed `T`/`T†`
//! patterns or `π/2^ℓ` Z-rotations, produces constructive certificates, and
//! computes the logical diagonal operator the gate induces.
//!
//! Module map:
//! - [`gf2core`]: bit-packed GF(2) linear algebra
//! - [`pauli`]: `E(a,b)` operators with exact phases
//! - [`scalar`]: exact cyclotomic scalars with dyadic denominators
//! - [`conjugation`]: closed-form and brute-force conjugation by diagonal gates
//! - [`csst`]: code model and the finite-geometry checkers
//! - [`logical`]: induced logical operators
//! - [`rmcodes`]: Reed-Muller constructions and the example catalog
//! - [`codefile`]: text format for codes

pub mod conjugation;
pub mod csst;
pub mod error;
pub mod gf2core;
pub mod logical;
pub mod pauli;
pub mod rmcodes;
pub mod scalar;

pub use error::{Error, Result, DEFAULT_CAP};
