//! Finite, exact models of oligomorphic-group machinery.
//!
//! * [`categories`]: FI, OI, BI, CI and SI on the objects `[n]`.
//! * [`actions`]: permutation groups, orbit counts and density checks.
//! * [`structures`]: relational structures, embeddings and amalgamation.
//! * [`orbitcat`]: orbit categories of pointwise stabilizers.
//! * [`modlab`]: polynomial presheaves over the five categories and
//!   Gröbner-based submodule experiments.

pub mod actions;
pub mod categories;
mod error;
pub mod modlab;
pub mod orbitcat;
pub mod structures;

pub use actions::{FiniteAction, OrbitMode, Permutation};
pub use categories::{CategoryKind, InjectionMorphism};
pub use error::{Error, Result};

/// Version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
