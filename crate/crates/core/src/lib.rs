//! Exact arithmetic for convolutional codes over finite fields: encoders,
//! controller canonical forms, weight adjacency matrices and the
//! MacWilliams identity relating a code to its dual.

pub mod ccf;
pub mod cyclo;
pub mod duality;
pub mod error;
pub mod field;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod polymat;
pub mod random;
pub mod sequence;
pub mod wam;
pub mod weight;

pub use ccf::{build_ccf, CcfRealization};
pub use cyclo::{conjugate_wam, CharacterMatrix, CycloRational};
pub use duality::{verify_macwilliams, DualPair, DualityCertificate};
pub use error::{Error, Result};
pub use field::{Field, FieldContext, FieldElement};
pub use linalg::{Mat, Subspace};
pub use poly::Poly;
pub use polymat::{CodeProfile, PolyMatrix};
pub use sequence::{verify_sequence_macwilliams, SequenceCertificate};
pub use wam::{compute_wam, StateIndexer, StateMatrix, Wam};
pub use weight::{mw_transform, Ring, WeightPoly};
