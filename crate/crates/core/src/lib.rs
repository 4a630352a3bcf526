//! Construction and verification of planar maximally entangled qudit states.
//!
//! A planar system places `n` qudits on a circle. A quantum structure splits
//! the circle into alternating contiguous arcs forming regions A and B; a
//! state is PKME for a family of structures when region A of every one of
//! them is maximally mixed. The crate provides the dense state kernel, the
//! structure enumerator, explicit constructors, controlled-unitary
//! pipelines, the verifier, and file formats.

pub mod constructors;
pub mod error;
pub mod gates;
pub mod io;
pub mod structures;
pub mod tensor;
pub mod verifier;

pub use error::{Error, Result};
pub use gates::{apply_controlled, apply_pipeline, ControlledOp, NamedPipeline, Pipeline};
pub use structures::{enumerate_structures, four_partite_spec, PlanarStructure, StructureSpec};
pub use tensor::{partial_trace, DensityMatrix, PureState, RngState, UnitaryMatrix};
pub use verifier::{classify, verify_ame, verify_pkme, verify_pme, Classification, Mode, VerificationReport};
