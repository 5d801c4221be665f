//! Equivalent-mutant detection for a small imperative language.
//!
//! A program and one of its mutants are unrolled to a fixed loop depth,
//! converted to static single assignment form and encoded as one joint
//! finite-domain constraint system whose solutions are inputs on which the
//! two programs disagree. No solution up to the maximum depth means the
//! mutant is reported equivalent within that bound.

pub mod constraint;
pub mod detect;
pub mod domain;
pub mod lang;
pub mod mutation;
pub mod report;
pub mod ssa;
pub mod unroll;

pub use domain::DomainConfig;
