//! Finite étale groupoids, their twists and twisted convolution algebras,
//! with K₀ computation by Wedderburn decomposition.

pub mod algebra;
pub mod circle;
pub mod cocycle;
pub mod groupoid;
pub mod io;
pub mod ktheory;
pub mod report;
pub mod semidirect;
pub mod semigroup;
pub mod twist;
