//! Core domain types: graphs, hatness functions, games, colorings, views,
//! strategies and certificates.

mod certificate;
mod game;
mod graph;
mod strategy;

pub use certificate::{Certificate, Provenance};
pub use game::{glue_graphs, Coloring, ColoringIter, Game, GluedGame, Hatness, Subgame};
pub use graph::Graph;
pub use strategy::{LimitHit, LosingStats, PartialStrategy, Strategy, Verdict};

use thiserror::Error;

/// Structural validation failures for graphs, hatness functions and games.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex identifier is empty")]
    EmptyIdentifier,
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("self-loop at vertex {0:?}")]
    SelfLoop(String),
    #[error("edge endpoint {0:?} is not a declared vertex")]
    UnknownEndpoint(String),
    #[error("duplicate edge ({0:?}, {1:?})")]
    DuplicateEdge(String, String),
    #[error("hatness of vertex {0:?} must be at least 1")]
    NonPositiveHatness(String),
    #[error("hatness domain does not match the vertex set (at {0:?})")]
    DomainMismatch(String),
    #[error("vertex {0:?} does not exist")]
    UnknownVertex(String),
    #[error("subgame vertex subset is empty")]
    EmptySubset,
    #[error("merged hatness overflows at vertex {0:?}")]
    HatnessOverflow(String),
}
