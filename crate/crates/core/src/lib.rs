//! Three-term recurrence tables for Charlier-type weights `a^k/((β)_k k!)` and their
//! independent cross-checks.
//!
//! The weight `a^k / ((β)_k k!)` is supported on the lattice `ℕ`, on the
//! shifted lattice `ℕ + 1 - β`, and on their union. For each choice the monic
//! orthogonal polynomials satisfy `x P_n = P_(n+1) + b_n P_n + a_n² P_(n-1)`.
//! This crate computes `(a_n², b_n)` from moments ([`oracle`]), from the
//! nonlinear discrete system they satisfy ([`laxchain`]), and from a chain of
//! Bäcklund transformations of Painlevé V ([`painleve`]), and checks the Toda
//! flow in the parameter `a` ([`toda`]).

pub mod error;
pub mod laxchain;
pub mod measures;
pub mod mpnum;
pub mod oracle;
pub mod painleve;
pub mod report;
pub mod suites;
pub mod toda;
pub mod cli;

pub use error::{Error, Result};
pub use measures::{Lattice, MeasureSpec};
pub use mpnum::BigReal;
pub use oracle::{RecurrenceTable, Source};
pub use report::VerificationReport;
