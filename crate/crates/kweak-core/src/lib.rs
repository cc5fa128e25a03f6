//! Sleep scheduling for κ-weak (trap) coverage in unit-disk sensor fields.
//!
//! A set of sensors is a κ-weak cover when no curve whose endpoints are κ
//! apart can cross the region undetected; equivalently, no uncovered
//! connected component joins two points at distance κ. This crate finds
//! sequences of such covers together with activation durations so that the
//! total lifetime is maximized:
//!
//! - [`geometry`]: planar primitives and the unit-disk adjacency graph.
//! - [`field`]: Poisson sensor-field generation, depth statistics, and the
//!   κ·d_R lifetime upper bound.
//! - [`grids`]: square and hexagonal tilings plus shift families.
//! - [`barrier`]: per-line barrier construction, the Min-Max heuristic and
//!   the binary-search BFS cover finder.
//! - [`flow`]: the max-flow linear program for square grids, an
//!   augmenting-path oracle, and flow path decomposition.
//! - [`schedule`]: activation policies and the round-robin outer loop.
//! - [`seeds`]: GPS-free cover construction from random seeds.
//! - [`verify`]: the rasterized coverage-hole oracle used to certify every
//!   produced cover.

pub mod barrier;
pub mod field;
pub mod flow;
pub mod geometry;
pub mod grids;
pub mod rng;
pub mod schedule;
pub mod seeds;
pub mod verify;
