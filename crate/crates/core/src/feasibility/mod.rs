//! Existence of special Hermitian structures: ansätze, residual systems,
//! witnesses and nonexistence certificates.

pub mod ansatz;
pub mod positivity;
pub mod residual;

pub use ansatz::{build_ansatz, GenericAnsatz, Mode, Role, Unknown};
pub use positivity::{positivity_check, PositivityProfile, Verdict};
pub use residual::{conformal_parts, residual_conformal, residual_for, ResidualEntry, ResidualSystem};
pub mod witness;

pub use witness::{verify_witness, witness_search, SearchOptions, SearchOutcome, Witness};
pub mod certificate;
pub use certificate::{certificate_check, check_all, check_certificate, prepare, CertVerdict, Certificate, CheckContext, Factor, Node, Summand, Term};
pub mod certlib;
pub use certlib::{bundled, Bundled, BUNDLED};
pub mod solve;
pub use solve::{contact_search, d_theta_exact_solve, d_theta_kernel, k_gauduchon_scalar, positivity_coefficient, ContactWitness};
