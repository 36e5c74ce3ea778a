//! Exact-arithmetic calculator for Sullivan models of free loop spaces.
//!
//! The crate builds the loop-space model of a simply-connected Sullivan
//! model, computes its cohomology with the word-length (Hodge) grading,
//! realizes the suspension operator and the Cartan calculus operators on
//! the model, and machine-checks the algebraic identities they satisfy.
//! Finite presentations of loop-homology algebras with their multiplication
//! and BV operator live in [`stringbv`], together with axiom suites and an
//! additive cross-check against the model.
//!
//! All coefficients are exact rationals; no floating point is used anywhere.

pub mod builtins;
pub mod cartan;
pub mod cdga;
pub mod check;
pub mod gca;
pub mod loopmodel;
pub mod stringbv;

pub use gca::{q_int, q_ratio, Q};
