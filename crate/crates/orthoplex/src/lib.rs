//! Generalized hypergraph-product codes on hypercubic lattices ("orthoplex
//! models"), with exact GF(2) tooling to analyze them.
//!
//! The crate builds codes two ways (tensor products of repetition complexes
//! with a summand partition, and direct lattice rules) and then studies them:
//! logical operators, ground-state degeneracy, syndromes of membranes and
//! strings, excitation mobility, and a dislocation defect.

pub mod analysis;
pub mod chain;
pub mod defect;
pub mod dynamics;
pub mod error;
pub mod f2;
pub mod hgp;
pub mod lattice;
pub mod manifest;
pub mod model;

pub use chain::{repetition_complex, tensor_power, tensor_product, validate_complex, ChainComplex, Label};
pub use defect::{build_dislocation, DefectModel};
pub use dynamics::{syndrome, PauliOp, Syndrome};
pub use error::{Error, Result};
pub use f2::{mat_mul, nullspace_basis, quotient_basis, rank, BitMatrix, BitVector};
pub use hgp::{build_css, code_params, orthoplex_partition, standard_hgp_partition, CssCode, Partition, Role};
pub use lattice::{Cell, LatticeShape};
pub use manifest::CodeManifest;
pub use model::{cross_validate, OrthoplexModel};
