//! Exact exterior calculus on Lie algebras with invariant complex structures.
//!
//! The crate computes structure equations, twisted differentials, Lefschetz
//! operators and cohomology over `Q(i)`, and decides existence of locally
//! conformal Kähler, balanced and holomorphic-tamed structures by exact
//! witnesses or checked nonexistence certificates.

pub mod algebra;
pub mod cohomology;
pub mod error;
pub mod feasibility;
pub mod operators;
pub mod runtime;
pub mod structures;
pub mod suites;

pub use algebra::{Bidegree, Form, Frame, GaussRat, Scalar, Var};
pub use error::{Error, Result};
pub use structures::{load_catalog, AlgebraSpec, ValidationReport};
