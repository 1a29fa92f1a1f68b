//! Exact scalars, polynomials and the exterior algebra.

pub mod expr;
pub mod form;
pub mod gauss;
pub mod linalg;
pub mod scalar;

pub use form::{Bidegree, Form, Frame};
pub use gauss::{rat, rat_int, GaussRat, Rational};
pub use scalar::{Monomial, Scalar, Var, VarKind};
