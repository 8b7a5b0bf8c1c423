//! Exact moments and operator-valued free cumulants for the path algebras of
//! finite weighted graphs, the free Poisson law of their two-vertex building
//! block, and the matching spectral densities.
//!
//! The exact modules ([`graph`], [`path_algebra`], [`noncrossing`],
//! [`cumulants`], [`fock`]) work over arbitrary-precision rationals. The
//! [`spectral`] module is double precision and meets the exact side only
//! through moment integrals.

pub mod cumulants;
pub mod fock;
pub mod graph;
pub mod noncrossing;
pub mod path_algebra;
pub mod rational;
pub mod spectral;

pub use graph::{EdgeId, Path, VertexId, WeightedGraph};
pub use path_algebra::{P0Element, PathVector};
pub use rational::Rational;
