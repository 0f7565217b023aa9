//! Propositional encoding of winnability: one variable per (vertex, view,
//! color) strategy entry, exactly-one constraints per table cell, and one
//! coverage clause per coloring. The formula is satisfiable iff the game is
//! winning, and any model decodes to a winning strategy.

use std::fmt::Write as _;

use crate::model::{Game, Strategy};

use super::CnfError;

const MAX_VARIABLES: u64 = 10_000_000;

/// Legend entry tying a CNF variable to its strategy entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfVar {
    /// 1-based DIMACS variable index.
    pub index: u32,
    pub vertex: String,
    /// Neighbor colors of the view, in canonical order.
    pub view_colors: Vec<u32>,
    pub color: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfDocument {
    pub variable_count: u32,
    pub clauses: Vec<Vec<i32>>,
    pub legend: Vec<CnfVar>,
}

impl CnfDocument {
    /// DIMACS text: legend comments, `p cnf` header, then clauses.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for var in &self.legend {
            let view = if var.view_colors.is_empty() {
                "-".to_string()
            } else {
                var.view_colors
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            writeln!(
                out,
                "c map {} {} {} {}",
                var.index, var.vertex, view, var.color
            )
            .unwrap();
        }
        writeln!(out, "p cnf {} {}", self.variable_count, self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            writeln!(out, "0").unwrap();
        }
        out
    }

    /// Evaluates the formula under a full assignment (`assignment[i]` is the
    /// value of variable `i + 1`).
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[(lit.unsigned_abs() - 1) as usize];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }

    /// Decodes a model into a strategy for `game` (the game the document
    /// was exported from).
    pub fn decode_model(&self, game: &Game, assignment: &[bool]) -> Strategy {
        let mut strategy = Strategy::zeroed(game);
        for var in &self.legend {
            if assignment[(var.index - 1) as usize] {
                let v = game.graph().index_of(&var.vertex).unwrap();
                let mut view = 0usize;
                for (slot, &n) in game.graph().neighbors(v).iter().enumerate() {
                    view = view * game.h(n) as usize + var.view_colors[slot] as usize;
                }
                strategy.set_guess(v, view, var.color);
            }
        }
        strategy
    }
}

/// Exports the winnability formula of `game`.
pub fn export_cnf(game: &Game) -> Result<CnfDocument, CnfError> {
    let n = game.vertex_count();
    let mut needed: u128 = 0;
    for v in 0..n {
        needed += game.view_count(v) * game.h(v) as u128;
    }
    let colorings = game.coloring_count();
    if needed > MAX_VARIABLES as u128 || colorings > MAX_VARIABLES as u128 {
        return Err(CnfError::TooLarge {
            needed: needed.max(colorings),
            cap: MAX_VARIABLES,
        });
    }

    let mut legend = Vec::with_capacity(needed as usize);
    let mut base = vec![0u32; n + 1];
    let mut next = 0u32;
    for v in 0..n {
        base[v] = next;
        let views = game.view_count(v) as usize;
        for view in 0..views {
            let view_colors = game.view_colors(v, view);
            for color in 0..game.h(v) {
                next += 1;
                legend.push(CnfVar {
                    index: next,
                    vertex: game.graph().name(v).to_string(),
                    view_colors: view_colors.clone(),
                    color,
                });
            }
        }
    }
    base[n] = next;

    let var = |v: usize, view: usize, color: u32| -> i32 {
        (base[v] + view as u32 * game.h(v) + color + 1) as i32
    };

    let mut clauses = Vec::new();
    // Exactly-one constraints per (vertex, view) table cell.
    for v in 0..n {
        let h = game.h(v);
        for view in 0..game.view_count(v) as usize {
            clauses.push((0..h).map(|c| var(v, view, c)).collect());
            for c1 in 0..h {
                for c2 in c1 + 1..h {
                    clauses.push(vec![-var(v, view, c1), -var(v, view, c2)]);
                }
            }
        }
    }
    // Coverage clause per coloring: some vertex guesses its color.
    for coloring in game.colorings() {
        clauses.push(
            (0..n)
                .map(|v| var(v, game.view_index(v, &coloring), coloring.color(v)))
                .collect(),
        );
    }

    Ok(CnfDocument {
        variable_count: next,
        clauses,
        legend,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Graph;

    fn k1(h: u32) -> Game {
        let g = Graph::new(vec!["a"], Vec::<(&str, &str)>::new()).unwrap();
        Game::from_values(g, vec![h]).unwrap()
    }

    /// Brute-force satisfiability by enumerating all assignments. Test-only
    /// oracle, deliberately independent of the search code.
    pub(crate) fn brute_force_sat(doc: &CnfDocument) -> Option<Vec<bool>> {
        let vars = doc.variable_count as usize;
        assert!(vars <= 24, "brute force oracle limited to small formulas");
        for bits in 0u64..(1u64 << vars) {
            let assignment: Vec<bool> = (0..vars).map(|i| bits >> i & 1 == 1).collect();
            if doc.is_satisfied_by(&assignment) {
                return Some(assignment);
            }
        }
        None
    }

    #[test]
    fn single_vertex_one_color() {
        let doc = export_cnf(&k1(1)).unwrap();
        assert_eq!(doc.variable_count, 1);
        assert_eq!(doc.clauses, vec![vec![1], vec![1]]);
        assert!(brute_force_sat(&doc).is_some());
    }

    #[test]
    fn single_vertex_two_colors() {
        let doc = export_cnf(&k1(2)).unwrap();
        assert_eq!(doc.variable_count, 2);
        assert_eq!(
            doc.clauses,
            vec![vec![1, 2], vec![-1, -2], vec![1], vec![2]]
        );
        assert!(brute_force_sat(&doc).is_none());
    }

    #[test]
    fn k2_star2_counts_and_satisfiability() {
        let game = Game::path_from_hatnesses(&[2, 2]).unwrap();
        let doc = export_cnf(&game).unwrap();
        assert_eq!(doc.variable_count, 8);
        // 4 exactly-one groups (at-least-one + single at-most-one pair each)
        // plus 4 coverage clauses.
        assert_eq!(doc.clauses.len(), 12);
        let model = brute_force_sat(&doc).expect("K2 star-2 should be satisfiable");
        let strategy = doc.decode_model(&game, &model);
        assert_eq!(crate::solver::verify_strategy(&game, &strategy).unwrap(), None);
    }

    #[test]
    fn no_empty_clauses_and_vars_in_range() {
        let game = Game::cycle_from_hatnesses(&[2, 3, 2]).unwrap();
        let doc = export_cnf(&game).unwrap();
        for clause in &doc.clauses {
            assert!(!clause.is_empty());
            for &lit in clause {
                assert!(lit != 0);
                assert!(lit.unsigned_abs() <= doc.variable_count);
            }
        }
    }

    #[test]
    fn dimacs_header_and_legend_shape() {
        let doc = export_cnf(&k1(2)).unwrap();
        let text = doc.to_dimacs();
        assert!(text.contains("p cnf 2 4"));
        assert!(text.starts_with("c map 1 a - 0\nc map 2 a - 1\n"));
    }
}
