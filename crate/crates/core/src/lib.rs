//! Exact computations in generalized affine buildings over ordered abelian
//! groups: the model space 𝔸(R, Λ), chart-atlas presentations of buildings,
//! the base-change functors along morphisms of Λ, fiber buildings, and a
//! layered fixed-point algorithm for finite isometry groups.
//!
//! All arithmetic is exact: Λ is a finite lexicographic power of ℚ and every
//! predicate (membership, emptiness, axiom checks) is decided by rational
//! arithmetic and variable elimination. There is no floating point anywhere
//! in the core.

pub mod chart;
pub mod json;
pub mod linear;
pub mod model;
pub mod ordered;
pub mod roots;

pub use ordered::{GroupValue, LeadingIndex};
pub use roots::{RootSystem, RootType};
