//! Specifications of Lie algebras with complex structures: parsing,
//! validation and the fixture catalog.

pub mod catalog;
pub mod params;
pub mod parse;
pub mod spec;

pub use catalog::{catalog_names, default_point, load_catalog, load_instance};
pub use params::{Constraint, Param, ParamKind, ParamRegistry};
pub use parse::{from_json, parse_any, parse_complex_dsl, parse_salamon, to_dsl, to_json, to_salamon};
pub use spec::{AlgebraSpec, ValidationReport};
