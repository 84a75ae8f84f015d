//! Two disjoint total dominating sets in planar near-triangulations.
//!
//! Every simple planar near-triangulation with minimum degree at least three
//! admits a two-coloring in which every vertex sees both colors in its open
//! neighborhood — equivalently, two disjoint total dominating sets. More
//! generally, for any near-triangulation and any set S of at most two
//! designated 2-vertices there is a two-coloring satisfying every 3⁺-vertex
//! and every member of S. This crate turns the constructive argument behind
//! that fact into a solver:
//!
//! * [`embedding`] — planar graphs as rotation systems: face tracing,
//!   validation, boundary orientation, and embedding-preserving edits;
//! * [`reduction`] — the rewrite system that peels off components, bridges,
//!   cut vertices, removable boundary edges and 2-vertices, with base cases
//!   K3, K4 and the diamond, plus [`reduction::solve`];
//! * [`pipeline`] — the irreducible-case engine: independent set,
//!   contraction to (G', P'), color-pair merge, and the repair loop;
//! * [`fair`] — fair four-colorings via a constrained local-search cut and
//!   an exact planar four-coloring search;
//! * [`oracle`] — brute-force searches and checkers used as ground truth;
//! * [`generators`] — named families and seeded random (near-)triangulations;
//! * [`io`] — graph/coloring JSON and DOT export.

pub mod coloring;
pub mod embedding;
pub mod error;
pub mod fair;
pub mod generators;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod reduction;

pub use coloring::{Color, FourColoring, SpecialSet, TwoColoring};
pub use embedding::{BoundaryCycle, EmbeddedGraph, Face, ValidationReport};
pub use error::{Error, Result};
pub use fair::{FourColorConfig, Side};
pub use oracle::OracleConfig;
pub use reduction::{solve, solve_with_stats, SolveConfig, SolveStats};
