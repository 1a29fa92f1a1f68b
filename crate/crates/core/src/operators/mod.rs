//! Differentials, twisted differentials, the Lefschetz triple and the Hodge
//! star as exact linear maps.

pub mod identities;
pub mod matrix;
pub mod metric;

pub use matrix::{
    assemble_d, assemble_partial, d_twisted, d_twisted_c, j_inverse, j_op, partial, partial_bar, twisted_d, OperatorMatrix, Variant,
};
pub use metric::{hermitian_matrix, leading_minors, lefschetz_ops, scalar_det, skew_matrix, standard_omega, LefschetzOps, MetricData};
