//! Exact computations with group-graded block algebras over finite fields:
//! Brauer quotients, defect groups, wreath products of graded algebras,
//! bimodules and chain complexes, and the module-triple relations built on
//! them.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod brauer;
pub mod catalog;
pub mod certificate;
pub mod complexes;
pub mod error;
pub mod field;
pub mod graded;
pub mod groups;
pub mod linalg;
pub mod report;
pub mod suites;
pub mod triples;
pub mod wreath;

pub use error::{Error, Result};
pub use field::{Elem, Fq};
pub use linalg::{Mat, Subspace};
