//! Hat guessing games on graphs.
//!
//! A game pairs a simple undirected graph with a *hatness* function giving
//! the number of possible hat colors at each vertex. Every player guesses
//! their own hat color from the colors visible on neighboring vertices, and
//! the team wins a coloring when at least one guess is correct. A game is
//! *winning* if some strategy profile wins every coloring.
//!
//! The crate provides:
//!
//! - [`model`]: graphs, games, colorings, strategies and the structural
//!   operations (subgames, gluing) everything else builds on.
//! - [`solver`]: the exhaustive ground-truth solver, strategy verification,
//!   and DIMACS CNF export for external cross-checking.
//! - [`classify`]: fast theorem-backed deciders for paths, triangles,
//!   cycles and cactus graphs, plus the two vertex-deletion reductions.
//! - [`construct`]: explicit winning-strategy builders (clique strategies,
//!   gluing composition, hatness restriction, cactus lower-bound
//!   certificates) with replayable provenance.
//! - [`doc`]: line-oriented text formats for games and certificates.

pub mod classify;
pub mod construct;
pub mod doc;
pub mod model;
pub mod solver;

pub use model::{Coloring, Game, Graph, Hatness, Strategy, Verdict};
pub use solver::{exact_solve, verify_strategy, SolveLimits};
