// index-based loops are the clearer idiom in the matrix kernels
#![allow(clippy::needless_range_loop)]

//! Exact representation theory of bismash product Hopf algebras.
//!
//! Starting from a factorizable finite group `Q = FG`, the library builds
//! the bismash product `H = E^G # EF`, computes its simple modules in
//! characteristic 0 and in odd characteristic `p`, their characters and
//! Brauer characters, Frobenius-Schur indicators, and the decomposition
//! and Cartan matrices relating the two characteristics. All arithmetic
//! is exact: cyclotomic integers carry character values, finite fields
//! carry modular representations, and a fixed root-of-unity lift connects
//! the two worlds.

pub mod bismash;
pub mod brauer;
pub mod chartable;
pub mod cyclotomic;
pub mod error;
pub mod factored;
pub mod ffield;
pub mod ffmat;
pub mod hreps;
pub mod meataxe;
pub mod par;
pub mod perm;
pub mod ratmat;
pub mod thompson;

pub use error::{AlgebraError, GroupError, ScalarError};
pub use perm::{Perm, PermGroup};

/// Tag describing the composition convention baked into every table.
pub const COMPOSITION_CONVENTION: &str = "right-to-left";
/// Tag naming the comultiplication variant verified at construction time.
pub const COPRODUCT_VARIANT: &str = "standard";
/// Report schema version embedded in all JSON output.
pub const SCHEMA_VERSION: u32 = 1;
