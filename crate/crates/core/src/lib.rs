//! Minimal free resolutions and defining equations of quiver orbit closures.
//!
//! The crate computes the terms of the Kempf–Lascoux–Weyman complex of
//! one-step orbit closures of Dynkin quivers, emits block-determinantal
//! generators and rank conditions for orbit closures of type-A quivers, and
//! checks everything against exact randomized samples.

pub mod bott;
pub mod error;
pub mod io;
pub mod linalg;
pub mod minors;
pub mod orbit;
pub mod partitions;
pub mod quiver;
pub mod rep;
pub mod resolution;
pub mod typea;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use partitions::Partition;
pub use quiver::{DimensionVector, DynkinType, Quiver, QuiverClass};
pub use rep::{Field, GroupElement, Representation};
