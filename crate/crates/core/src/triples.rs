//! Module triples `(A, B, V)`, their endomorphism algebras and the relations
//! `≥_c` and `≥_b` between them.

mod module;
mod reduction;
mod relations;
mod suite;

pub use module::{build_triple, endo_algebra, EndoAlgebra, ModuleTriple};
pub use reduction::{cyclotomic_poly, Reduction, ReductionJson};
pub use relations::{
    brauer_compatibility_check, character_twist, transport_cbar, verify_geq_b, verify_geq_c, BrauerCompatReport,
    GeqBReport, GeqCReport, JReport, TripleCertificate,
};
pub use suite::{
    check_graded_iso, power_embedding, power_extension, wreath_embedding, wreath_extension, wreath_triple_suite,
    WreathScope,
};
