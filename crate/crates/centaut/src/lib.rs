//! Construction and exhaustive verification of finite p-groups of
//! nilpotence class 2 in which every automorphism is central.
//!
//! The pipeline: pick a primitive polynomial over GF(p), form its companion
//! matrix, assemble an alternating-form map f from V = GF(p)^(n+1) into the
//! exterior square of V, check that only the identity of GL(V) is
//! compatible with f, and then realize f as the power-commutator structure
//! of a finite p-group whose automorphism group turns out to be as small as
//! it can be.

pub mod construction;
pub mod exterior;
pub mod field;
pub mod gl;
pub mod matrix;
pub mod pgroup;
pub mod poly;
pub mod report;
pub mod stabilizer;
pub mod subspace;

pub use construction::{ConstructionError, FMatrix};
pub use exterior::ExtBasis;
pub use field::{FieldError, PrimeField};
pub use gl::{gl_order, GlEnumerator};
pub use matrix::Matrix;
pub use pgroup::{
    CentralSetInfo, GroupElement, ObstructionOutcome, PGroupError, Presentation, QuantityCheck,
    StructureReport, ENUMERATION_LIMIT,
};
pub use poly::{
    char_poly, companion_matrix, find_primitive_polynomial, poly_is_irreducible,
    poly_is_primitive, PolyError, PolyOverF,
};
pub use report::{CheckItem, CheckReport};
pub use stabilizer::{
    commutes_with_f, commuting_endomorphisms, embed_block_diag, stabilizer_bruteforce,
    stabilizer_structured, verify_proof_steps, SearchError, SearchOptions, StabResult,
    DEFAULT_SCAN_LIMIT,
};
pub use subspace::Subspace;
