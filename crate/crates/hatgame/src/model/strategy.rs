use super::Game;

/// A deterministic strategy profile: for every vertex, a total map from
/// view index to guessed color.
///
/// Table `v` has one entry per view of `v` (see [`Game::view_index`]);
/// totality and guess ranges are checked by the verifier, not here, so a
/// parsed candidate can be represented and then rejected with a precise
/// error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    tables: Vec<Vec<u32>>,
}

impl Strategy {
    pub fn new(tables: Vec<Vec<u32>>) -> Self {
        Strategy { tables }
    }

    /// The all-zero strategy with the right table shape for `game`.
    pub fn zeroed(game: &Game) -> Self {
        let tables = (0..game.vertex_count())
            .map(|v| vec![0u32; game.view_count(v) as usize])
            .collect();
        Strategy { tables }
    }

    pub fn tables(&self) -> &[Vec<u32>] {
        &self.tables
    }

    pub fn table(&self, v: usize) -> &[u32] {
        &self.tables[v]
    }

    pub fn guess(&self, v: usize, view: usize) -> u32 {
        self.tables[v][view]
    }

    pub fn set_guess(&mut self, v: usize, view: usize, guess: u32) {
        self.tables[v][view] = guess;
    }
}

/// A strategy under construction: entries may be unassigned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialStrategy {
    tables: Vec<Vec<Option<u32>>>,
}

impl PartialStrategy {
    pub fn empty(game: &Game) -> Self {
        let tables = (0..game.vertex_count())
            .map(|v| vec![None; game.view_count(v) as usize])
            .collect();
        PartialStrategy { tables }
    }

    pub fn get(&self, v: usize, view: usize) -> Option<u32> {
        self.tables[v][view]
    }

    pub fn set(&mut self, v: usize, view: usize, guess: u32) {
        self.tables[v][view] = Some(guess);
    }

    pub fn clear(&mut self, v: usize, view: usize) {
        self.tables[v][view] = None;
    }

    /// Completes unassigned entries with guess 0. Any completion of a
    /// covering partial strategy remains winning.
    pub fn complete_with_zero(&self) -> Strategy {
        Strategy {
            tables: self
                .tables
                .iter()
                .map(|t| t.iter().map(|e| e.unwrap_or(0)).collect())
                .collect(),
        }
    }
}

/// Exhaustion statistics carried by a losing verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LosingStats {
    /// Branching decisions made while exhausting the search space.
    pub nodes_explored: u64,
    /// Peak number of simultaneously covered colorings observed at
    /// consistent search states. Strictly less than the coloring count for
    /// a losing game.
    pub colorings_covered: u64,
}

/// Which resource cap an inconclusive solve ran into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitHit {
    Nodes,
    Timeout,
}

/// Outcome of an exact solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The game is winning; the strategy passes verification.
    Winning(Strategy),
    /// The game is losing; the whole search tree was exhausted.
    Losing(LosingStats),
    /// A resource cap was hit before the search finished.
    Inconclusive(LimitHit),
}

impl Verdict {
    pub fn is_winning(&self) -> bool {
        matches!(self, Verdict::Winning(_))
    }

    pub fn is_losing(&self) -> bool {
        matches!(self, Verdict::Losing(_))
    }
}
