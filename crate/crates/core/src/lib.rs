//! Combinatorial link Floer homology from grid diagrams, the unlink TQFT
//! model, and the cabled Floer lasagna computations built on top of them.
//!
//! All coefficients are in F2 and all half-integer gradings are stored
//! doubled, so every computation is exact.

pub mod f2;
pub mod graded;
pub mod grid;
pub mod laurent;
pub mod tqft;
pub mod cabled;
pub mod obstruction;
pub mod lasagna;
