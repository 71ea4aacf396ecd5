//! Spin-j free fields with SU(2), C and T symmetry: canonical field
//! equation, spectrum, the statistics forced by a positive Hamiltonian and
//! causality, and the branch-point structure of `E(p)`.

pub mod analytic;
pub mod catalog;
pub mod error;
pub mod field;
pub mod linalg;
pub mod quantization;
pub mod ratfunc;
pub mod spectrum;
pub mod spin;

pub use analytic::{branch_points, verify_corollary, BranchPointReport, CorollaryReport};
pub use catalog::CatalogEntry;
pub use error::{Error, Result};
pub use field::{build, verify_symmetries, CanonicalField, FieldSpec, SymmetryReport};
pub use quantization::{decide_statistics, LambdaSpace, Statistics, StatisticsVerdict, Verdict};
pub use ratfunc::{parse_expr, Params, Rational, RationalFunc1, RationalFunc2};
pub use spectrum::{eigenvectors, validate_spectrum, ModeSolution, ValidationReport};
