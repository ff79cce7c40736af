//! tropkit: exact max-plus polynomial algebra and planar tropical geometry.
//!
//! The crate provides, over exact rational arithmetic throughout:
//!
//! * the max-plus scalar and Laurent-polynomial semirings, with essential
//!   parts and e-equivalence decided by exact linear feasibility;
//! * the combinatorial identities tying the tropical Vandermonde permanent to
//!   products of elementary symmetric factors and of pair binomials;
//! * Newton polytopes, regular (dual) subdivisions, weighted planar tropical
//!   curves, balancing, weighted unions and equality;
//! * binomial division and extraction, primitive reduction, supplements and
//!   completions, and the supplemental / reversal / symmetry dualities;
//! * a CLI (`tropkit`) with a polynomial expression grammar and JSON/SVG
//!   emission.

pub mod error;
pub mod geometry;
pub mod identities;
pub mod essential;
pub mod expr;
pub mod factor;
pub mod lp;
pub mod poly;
pub mod supplement;
pub mod scalar;

pub use error::{Result, TropError};
pub use poly::TropPoly;
pub use scalar::{Rat, TropScalar};
