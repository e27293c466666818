//! Exact computations with differential graded algebras.
//!
//! The crate validates finitely presented graded algebras (optionally
//! Laurent-periodic), their differentials and modules, computes homology and
//! cycle subalgebras, builds twisted Laurent rings and acyclic extensions,
//! and decides separability of algebra extensions and splitting of short
//! exact sequences by exact linear algebra. Negative answers come with
//! auditable transcripts, positive ones with certificates that re-verify
//! independently of the solver.

pub mod algebra;
pub mod construct;
pub mod demos;
pub mod error;
pub mod field;
pub mod graded;
pub mod json;
pub mod modules;
pub mod report;
pub mod separability;

pub use algebra::{cycles, homology, opposite, DgAlgebra, Presentation};
pub use construct::{
    acyclic_division_from_cycles, dual_numbers, ground_field, laurent_ring, tensor_over_source,
    twisted_laurent, DgExtension, TensorBimodule,
};
pub use error::{Error, Result};
pub use separability::{
    check_main_theorem, classify_gr_division, find_casimir, is_dg_division, verify_casimir,
    CasimirOutcome, GrDivisionClass,
};
pub use field::{Field, Scalar};
pub use graded::{GradedBasis, GradedVector, Matrix, Window};
pub use modules::{
    cycles_module, find_dg_splitting, find_module_isomorphism, free_dg_module, hom_complex,
    induce_from_cycles, lift_splitting, restrict_module, restrict_ses, validate_ses, DgModule,
    ShortExactSequence, SplitOutcome,
};
pub use report::{ValidationReport, Verdict};
