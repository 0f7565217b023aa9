use super::{Game, Strategy};

/// How a certified strategy was constructed.
///
/// Leaves are base strategies; internal nodes are gluing or restriction
/// steps. Replaying the tree (see `construct::replay`) reproduces the
/// strategy tables bit for bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `clique_strategy` on a complete graph with the given vertex names
    /// and hatnesses (in that vertex order).
    Clique {
        vertices: Vec<String>,
        hatnesses: Vec<u32>,
    },
    /// A strategy found by the exact solver; the solver is deterministic,
    /// so the game itself is enough to reproduce it.
    Solved { game: Game },
    /// `glue_strategies(left @ at_left, right @ at_right)`.
    Glue {
        left: Box<Provenance>,
        right: Box<Provenance>,
        at_left: String,
        at_right: String,
    },
    /// `restrict_hatness` to the given per-vertex values (canonical order
    /// of the inner game).
    Restrict {
        inner: Box<Provenance>,
        hatnesses: Vec<(String, u32)>,
    },
}

/// A winning game together with its strategy and replayable provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub game: Game,
    pub strategy: Strategy,
    pub provenance: Provenance,
}
