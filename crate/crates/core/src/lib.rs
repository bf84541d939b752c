//! Ordered vector spaces, Jordan-algebraic cones and axiom checkers for
//! finite-dimensional generalized probabilistic theories.
//!
//! Systems are cones with a unit functional ([`ovs::System`]). The
//! [`axioms`] module checks self-duality, homogeneity and pure
//! transitivity and returns either a re-checkable witness or an
//! automorphism-invariant counterexample. [`composite`] builds bipartite
//! systems and steering maps; [`classify`] runs the rank/dimension counting
//! over the table of simple Euclidean Jordan algebras.

pub mod axioms;
pub mod classify;
pub mod composite;
pub mod eja;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod ovs;
pub mod rational;

pub use error::{Error, Result};
