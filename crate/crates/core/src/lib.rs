//! Exact computation with cluster algebras of geometric type: extended
//! exchange matrices, labeled seeds, monomial maps between seeds, exchange
//! graph exploration and automorphism groups.

pub mod error;
pub mod examples;
pub mod explorer;
pub mod formulas;
pub mod groups;
pub mod lattice;
pub mod matrix;
pub mod morphism;
pub mod quiver;
pub mod seed;
pub mod symbolic;

pub use error::{Error, Result};
pub use matrix::ExtMatrix;
pub use seed::LabeledSeed;
