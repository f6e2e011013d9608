//! girthlab: homological girth invariants of finite simplicial complexes.
//!
//! The crate computes exact reduced homology over prime fields, searches
//! for the smallest induced-link subcomplex carrying homology in a given
//! degree (the generalized girth) with certifying witnesses, counts
//! non-returning walks on the directed 1-skeleton, generates high-girth
//! complexes, evaluates Moore-type face-number bounds, and cross-checks
//! everything against Hochster-style algebraic Betti tables.

pub mod bounds;
pub mod complex;
pub mod error;
pub mod generators;
pub mod girth;
pub mod homology;
pub mod scx;
pub mod stanley_reisner;
pub mod walks;

pub use complex::{flag_completion, FVector, Face, SimplicialComplex, VertexId};
pub use error::{Error, Result};
pub use girth::{
    check_cycle_hypothesis, girth, girth_all, girth_exceeds, girth_flag_fast, graph_girth,
    minimal_homology_support, verify_witness, GirthValue, GirthWitness, SearchParams,
};
pub use homology::{
    betti_vector, boundary_matrix, rank, reduced_betti, BettiVector, BoundaryMatrix, PrimeField,
};
pub use scx::{emit_scx, emit_scx_file, parse_scx, parse_scx_file};
