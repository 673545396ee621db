//! Convex separable minimization over integral polymatroid base polytopes,
//! incremental reoptimization under parameter shifts, and pure Nash
//! equilibria of polymatroid congestion games.
//!
//! All arithmetic is exact ([`ExactValue`]); every fast path has a naive
//! enumeration counterpart in [`oracle`].

pub mod cost;
pub mod counterexample;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod game;
pub mod optimize;
pub mod oracle;
pub mod polytope;
pub mod random;
pub mod rank;
pub mod selftest;

pub use cost::{CostFunction, UnaryCost};
pub use error::{Error, Result};
pub use exact::ExactValue;
pub use polytope::{Allocation, BasePolytope};
pub use rank::{ElementSet, GroundSet, RankFunction};
