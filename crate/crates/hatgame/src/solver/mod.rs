//! The exhaustive ground-truth solver and its companions: strategy
//! verification and DIMACS CNF export.

mod cnf;
mod sat;
mod search;

pub use cnf::{export_cnf, CnfDocument, CnfVar};

use std::time::Duration;

use thiserror::Error;

use crate::model::{Coloring, Game, Strategy, Verdict};

/// Marker for a strategy entry that carries no guess (used by parsed
/// certificate candidates; the verifier reports it as incomplete).
pub const MISSING_GUESS: u32 = u32::MAX;

/// Resource caps for [`exact_solve`].
#[derive(Clone, Copy, Debug)]
pub struct SolveLimits {
    /// Upper bound on `∏ h(v)`; larger games are rejected up front.
    pub max_colorings: u64,
    /// Branching-decision budget for the search.
    pub max_nodes: u64,
    /// Wall-clock budget.
    pub timeout: Duration,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            max_colorings: 100_000,
            max_nodes: 50_000_000,
            timeout: Duration::from_secs(300),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("game has {colorings} colorings, above the cap of {cap}")]
    TooLarge { colorings: u128, cap: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("strategy is missing an entry for vertex {vertex:?} (view {view})")]
    IncompleteStrategy { vertex: String, view: usize },
    #[error("guess {guess} for vertex {vertex:?} (view {view}) is outside its hatness {hatness}")]
    GuessOutOfRange {
        vertex: String,
        view: usize,
        guess: u32,
        hatness: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("CNF encoding needs {needed} variables, above the cap of {cap}")]
    TooLarge { needed: u128, cap: u64 },
}

/// Decides winnability by exhaustive strategy-cover search.
///
/// Colorings are scanned in canonical order; at the first coloring not yet
/// covered by an assigned strategy entry, the search branches over each
/// vertex whose entry on its view is still unassigned, assigning it that
/// vertex's color. Any winning strategy covers every coloring through some
/// vertex, so exhausting the branches proves the game losing. Branch
/// vertices are tried in canonical order, which makes the result — the
/// returned strategy included — deterministic.
pub fn exact_solve(game: &Game, limits: &SolveLimits) -> Result<Verdict, SolveError> {
    let colorings = game.coloring_count();
    if colorings > limits.max_colorings as u128 || colorings > u32::MAX as u128 {
        return Err(SolveError::TooLarge {
            colorings,
            cap: limits.max_colorings.min(u32::MAX as u64),
        });
    }
    let verdict = search::run(game, limits);
    if let Verdict::Winning(strategy) = &verdict {
        // Soundness gate: a winning verdict must carry a verified strategy.
        let check = verify_strategy(game, strategy)
            .expect("solver produced a malformed strategy");
        assert!(
            check.is_none(),
            "solver returned a strategy with counterexample {check:?}"
        );
    }
    Ok(verdict)
}

/// Checks a strategy against every coloring.
///
/// Returns `None` when some vertex guesses correctly on every coloring,
/// otherwise the canonically-first coloring on which all guesses are wrong.
pub fn verify_strategy(
    game: &Game,
    strategy: &Strategy,
) -> Result<Option<Coloring>, VerifyError> {
    let n = game.vertex_count();
    for v in 0..n {
        let expected = game.view_count(v);
        let table = strategy
            .tables()
            .get(v)
            .map(|t| t.as_slice())
            .unwrap_or(&[]);
        if (table.len() as u128) < expected {
            return Err(VerifyError::IncompleteStrategy {
                vertex: game.graph().name(v).to_string(),
                view: table.len(),
            });
        }
        for (view, &guess) in table.iter().enumerate() {
            if guess == MISSING_GUESS {
                return Err(VerifyError::IncompleteStrategy {
                    vertex: game.graph().name(v).to_string(),
                    view,
                });
            }
            if guess >= game.h(v) {
                return Err(VerifyError::GuessOutOfRange {
                    vertex: game.graph().name(v).to_string(),
                    view,
                    guess,
                    hatness: game.h(v),
                });
            }
        }
    }
    'colorings: for coloring in game.colorings() {
        for v in 0..n {
            if strategy.guess(v, game.view_index(v, &coloring)) == coloring.color(v) {
                continue 'colorings;
            }
        }
        return Ok(Some(coloring));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Graph, LimitHit};

    fn solve(game: &Game) -> Verdict {
        exact_solve(game, &SolveLimits::default()).unwrap()
    }

    #[test]
    fn k2_star2_is_winning() {
        let game = Game::path_from_hatnesses(&[2, 2]).unwrap();
        assert!(solve(&game).is_winning());
    }

    #[test]
    fn lone_vertex_with_two_colors_is_losing() {
        let g = Graph::new(vec!["a"], Vec::<(&str, &str)>::new()).unwrap();
        let game = Game::from_values(g, vec![2]).unwrap();
        match solve(&game) {
            Verdict::Losing(stats) => {
                assert!(stats.colorings_covered < 2);
            }
            other => panic!("expected losing, got {other:?}"),
        }
    }

    #[test]
    fn lone_vertex_with_one_color_is_winning() {
        let g = Graph::new(vec!["a"], Vec::<(&str, &str)>::new()).unwrap();
        let game = Game::from_values(g, vec![1]).unwrap();
        assert!(solve(&game).is_winning());
    }

    #[test]
    fn path_2_5_2_is_losing() {
        let game = Game::path_from_hatnesses(&[2, 5, 2]).unwrap();
        assert!(solve(&game).is_losing());
    }

    #[test]
    fn c4_star3_is_winning() {
        let game = Game::cycle_from_hatnesses(&[3, 3, 3, 3]).unwrap();
        assert!(solve(&game).is_winning());
    }

    #[test]
    fn c5_star3_is_losing() {
        let game = Game::cycle_from_hatnesses(&[3, 3, 3, 3, 3]).unwrap();
        assert!(solve(&game).is_losing());
    }

    #[test]
    fn too_large_is_an_error_not_a_verdict() {
        let game = Game::path_from_hatnesses(&[10, 10, 10]).unwrap();
        let limits = SolveLimits {
            max_colorings: 100,
            ..SolveLimits::default()
        };
        assert_eq!(
            exact_solve(&game, &limits).unwrap_err(),
            SolveError::TooLarge {
                colorings: 1000,
                cap: 100
            }
        );
    }

    #[test]
    fn node_budget_yields_inconclusive() {
        let game = Game::cycle_from_hatnesses(&[3, 3, 3, 3, 3]).unwrap();
        let limits = SolveLimits {
            max_nodes: 10,
            ..SolveLimits::default()
        };
        assert_eq!(
            exact_solve(&game, &limits).unwrap(),
            Verdict::Inconclusive(LimitHit::Nodes)
        );
    }

    #[test]
    fn solver_is_deterministic_including_strategy() {
        let game = Game::cycle_from_hatnesses(&[2, 3, 3, 3]).unwrap();
        let a = solve(&game);
        let b = solve(&game);
        assert_eq!(a, b);
    }

    #[test]
    fn constant_zero_strategy_on_k2_fails_at_1_1() {
        let game = Game::path_from_hatnesses(&[2, 2]).unwrap();
        let strategy = Strategy::zeroed(&game);
        let counterexample = verify_strategy(&game, &strategy).unwrap();
        assert_eq!(counterexample, Some(Coloring(vec![1, 1])));
    }

    #[test]
    fn hatness_one_vertex_makes_any_strategy_win() {
        let game = Game::path_from_hatnesses(&[1, 4, 4]).unwrap();
        let strategy = Strategy::zeroed(&game);
        assert_eq!(verify_strategy(&game, &strategy).unwrap(), None);
    }

    #[test]
    fn verify_rejects_incomplete_and_out_of_range() {
        let game = Game::path_from_hatnesses(&[2, 2]).unwrap();
        let short = Strategy::new(vec![vec![0, 0], vec![0]]);
        assert!(matches!(
            verify_strategy(&game, &short),
            Err(VerifyError::IncompleteStrategy { .. })
        ));
        let wild = Strategy::new(vec![vec![0, 5], vec![0, 0]]);
        assert!(matches!(
            verify_strategy(&game, &wild),
            Err(VerifyError::GuessOutOfRange { .. })
        ));
    }

    #[test]
    fn disconnected_game_wins_iff_some_component_wins() {
        // Two components: K2 (2,2) is winning, so the union is winning.
        let g = Graph::new(vec!["a", "b", "c"], vec![("a", "b")]).unwrap();
        let game = Game::from_values(g, vec![2, 2, 3]).unwrap();
        assert!(solve(&game).is_winning());

        // Two losing components: the union is losing.
        let g = Graph::new(vec!["a", "b", "c"], vec![("a", "b")]).unwrap();
        let game = Game::from_values(g, vec![2, 3, 2]).unwrap();
        assert!(solve(&game).is_losing());
    }

    #[test]
    fn losing_stats_cover_less_than_everything() {
        for hs in [vec![2, 3], vec![3, 3, 3], vec![2, 5, 2]] {
            let game = Game::path_from_hatnesses(&hs).unwrap();
            if let Verdict::Losing(stats) = solve(&game) {
                assert!((stats.colorings_covered as u128) < game.coloring_count());
            } else {
                panic!("expected losing for {hs:?}");
            }
        }
    }
}
