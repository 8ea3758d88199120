//! Exact enumeration of domino and lozenge tilings for the quartered Aztec
//! rectangle and quartered hexagon families.
//!
//! Regions are built from parameter records ([`regions::RegionSpec`]), turned
//! into weighted planar bipartite graphs ([`graphs::MatchGraph`]) and counted by
//! three engines: brute-force matching recursion, a Kasteleyn determinant and,
//! for quartered hexagons, a nonintersecting lattice path determinant.
//! [`formulas`] holds the product formulas the counts are checked against and
//! [`rewrites`] the local matching-preserving graph transformations.

pub mod cli;
pub mod engines;
pub mod error;
pub mod formulas;
pub mod graphs;
pub mod numeric;
pub mod regions;
pub mod render;
pub mod rewrites;

pub use error::{Error, Result};
pub use numeric::Rational;
