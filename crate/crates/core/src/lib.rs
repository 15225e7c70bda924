//! K-theoretic invariants of Cuntz–Krieger algebras `O_A` and their Toeplitz
//! extensions, computed exactly from 0-1 matrices.
//!
//! The crate is layered bottom-up:
//!
//! * [`intmat`]: big-integer matrices, Smith and Hermite forms, kernels;
//! * [`fgab`]: presented abelian groups, homomorphisms, exactness and the
//!   marked-isomorphism decision;
//! * [`ckalg`]: the matrices `Â`, `A₁`, the invariant groups and all the
//!   named maps between them;
//! * [`diagrams`]: the two six-term sequences, the ladder between them and
//!   their mechanical verification;
//! * [`classify`]: isomorphism criteria for Toeplitz and Cuntz–Krieger
//!   algebras;
//! * [`cli`]: matrix documents, JSON reports and the `ckdual` commands.

pub mod ckalg;
pub mod classify;
pub mod cli;
pub mod corpus;
pub mod diagrams;
pub mod error;
pub mod fgab;
pub mod intmat;
pub mod json;

pub use error::{Error, Result};
