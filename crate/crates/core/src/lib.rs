//! Certificates and invariants for S-adic subshifts.
//!
//! A subshift is described by a [`DirectiveSequence`] of substitutions. From
//! it the crate computes primitivity, properness and unimodularity
//! certificates, factor languages and extension graphs, return words,
//! rigorous enclosures of the letter-measure simplex, dimension-group
//! descriptors, infinitesimal lattices, strong orbit equivalence witnesses
//! and balance diagnostics. All arithmetic that feeds a certificate is exact.

pub mod balance;
pub mod dimgroup;
pub mod directive;
mod error;
pub mod families;
pub mod free_group;
pub mod json;
pub mod language;
pub mod lattice;
pub mod matrix;
pub mod measures;
pub mod numeric;
pub mod quadratic;
pub mod returns;
mod suffix;
pub mod words;

pub use directive::{certify, DirectiveSequence, SequenceCertificate};
pub use error::{Error, Result};
pub use language::LanguageTable;
pub use matrix::IntegerMatrix;
pub use words::{count_occurrences, Alphabet, Morphism, Properness, Word};
