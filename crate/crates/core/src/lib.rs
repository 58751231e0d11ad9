//! Exact-arithmetic engine for rational singular loci of nilpotent orbit
//! closures in the classical complex simple Lie algebras.
//!
//! Two independent methods are implemented:
//!
//! * a torus fixed-point dimension count at the origin (`ratsmooth::brion_zero_check`),
//!   which is a necessary condition for rational smoothness at 0, and
//! * intersection-cohomology stalk polynomials obtained from Weyl group
//!   character data through the Springer correspondence and the
//!   Lusztig–Shoji triangular factorization (`springer`, `ratsmooth`).
//!
//! Everything is computed over the integers; there is no floating point
//! anywhere in the crate.

pub mod cache;
pub mod engine;
pub mod error;
pub mod kostka;
pub mod orbits;
pub mod qpoly;
pub mod ratsmooth;
pub mod selfcheck;
pub mod springer;
pub mod weyl;

pub use engine::{Engine, EngineOptions, Limits, Solved};
pub use error::{Error, Result};
pub use orbits::{Algebra, ClassicalOrbit, Family, G2Orbit, OrbitLabel, Partition, VeryEvenTag};
pub use qpoly::QPoly;
pub use springer::OmegaConvention;
