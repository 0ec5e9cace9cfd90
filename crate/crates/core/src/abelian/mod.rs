//! Integer linear algebra over finitely generated abelian groups:
//! matrices, Hermite and Smith normal forms, groups presented by
//! relation matrices, homomorphisms with kernels and cokernels, exact
//! sequences with the splicing construction, and extension resolution.

pub mod exact;
pub mod extension;
pub mod group;
pub mod hom;
pub mod matrix;
pub mod normal_forms;

pub use exact::{column_role, induced_maps_equal, splice, ColumnRole, ExactSeq, SpliceDiagram, Spliced};
pub use extension::{solve_extension, ExtensionHint, ExtensionOutcome};
pub use group::FinAbGroup;
pub use hom::{is_exact_at, AbHom};
pub use matrix::IntMatrix;
pub use normal_forms::{
    hnf_col, hnf_row, kernel_basis, lattice_canonical_basis, lattice_contains,
    lattice_contains_all, smith, solve, Smith,
};
