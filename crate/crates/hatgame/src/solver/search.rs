//! Bridge between games and the conflict-driven engine.
//!
//! Variables are strategy entries (vertex, view, color). Each table cell
//! carries an at-most-one constraint — a cell guessing two colors at once
//! would cover colorings no real strategy covers — and each coloring
//! contributes a coverage clause: some vertex guesses its color there. A
//! satisfying assignment is a partial strategy covering every coloring, and
//! any zero-completion of it wins; unsatisfiability is exactly losingness.
//! At-least-one constraints are unnecessary for that equivalence and are
//! left out.
//!
//! One symmetry is broken up front: relabeling the first vertex's colors is
//! a winnability-preserving bijection on strategy profiles, so its guess on
//! the all-zeros view can be pinned to color 0.

use std::time::Instant;

use crate::model::{Game, LimitHit, LosingStats, PartialStrategy, Verdict};

use super::sat::{lit, CoverTracker, SatOutcome, Solver};
use super::SolveLimits;

pub(super) fn run(game: &Game, limits: &SolveLimits) -> Verdict {
    let n = game.vertex_count();
    let total = game.coloring_count() as usize;
    let hatness = game.hatness().values();

    // Entry variable layout: `entry_base[v] + view*h(v) + color`.
    let mut entry_base = Vec::with_capacity(n + 1);
    let mut entry_vars = 0usize;
    for v in 0..n {
        entry_base.push(entry_vars);
        entry_vars += game.view_count(v) as usize * hatness[v] as usize;
    }
    entry_base.push(entry_vars);

    // Coverage clauses and, for the losing statistics, the list of
    // colorings each entry covers.
    let mut coverage: Vec<Vec<u32>> = Vec::with_capacity(total);
    let mut span_len = vec![0u32; entry_vars];
    for coloring in game.colorings() {
        let mut clause = Vec::with_capacity(n);
        for v in 0..n {
            let entry = entry_base[v]
                + game.view_index(v, &coloring) * hatness[v] as usize
                + coloring.color(v) as usize;
            clause.push(lit(entry, true));
            span_len[entry] += 1;
        }
        coverage.push(clause);
    }
    let mut span_start = Vec::with_capacity(entry_vars + 1);
    let mut acc = 0u32;
    for &len in &span_len {
        span_start.push(acc);
        acc += len;
    }
    span_start.push(acc);
    let mut fill = span_start.clone();
    let mut covered_ranks = vec![0u32; acc as usize];
    for (rank, clause) in coverage.iter().enumerate() {
        for l in clause {
            let entry = (l >> 1) as usize;
            covered_ranks[fill[entry] as usize] = rank as u32;
            fill[entry] += 1;
        }
    }

    // Cells with many colors get the sequential at-most-one encoding to
    // avoid a quadratic clause count; auxiliary variables follow the entry
    // variables.
    let mut aux = 0usize;
    for v in 0..n {
        if hatness[v] > 8 {
            aux += game.view_count(v) as usize * (hatness[v] as usize - 1);
        }
    }
    let nvars = entry_vars + aux;

    let mut solver = Solver::new(nvars);
    let mut next_aux = entry_vars;
    for v in 0..n {
        let h = hatness[v] as usize;
        if h == 1 {
            continue;
        }
        for view in 0..game.view_count(v) as usize {
            let base = entry_base[v] + view * h;
            if h <= 8 {
                for c1 in 0..h {
                    for c2 in c1 + 1..h {
                        solver.add_clause(vec![
                            lit(base + c1, false),
                            lit(base + c2, false),
                        ]);
                    }
                }
            } else {
                let s0 = next_aux;
                next_aux += h - 1;
                for i in 0..h - 1 {
                    solver.add_clause(vec![lit(base + i, false), lit(s0 + i, true)]);
                    if i + 1 < h - 1 {
                        solver.add_clause(vec![lit(s0 + i, false), lit(s0 + i + 1, true)]);
                    }
                    solver.add_clause(vec![lit(s0 + i, false), lit(base + i + 1, false)]);
                }
            }
        }
    }
    for clause in &coverage {
        solver.add_clause(clause.clone());
    }
    // Symmetry: vertex 0's guess on the all-zeros view is color 0.
    solver.add_clause(vec![lit(entry_base[0], true)]);

    let mut tracker_spans = span_start;
    tracker_spans.resize(nvars + 1, acc);
    solver.tracker = Some(CoverTracker {
        span_start: tracker_spans,
        covered_ranks,
        cover: vec![0u16; total],
        covered_count: 0,
        max_at_decision: 0,
    });

    let started = Instant::now();
    match solver.solve(limits.max_nodes, Some((started, limits.timeout))) {
        SatOutcome::Sat(model) => {
            let mut partial = PartialStrategy::empty(game);
            for v in 0..n {
                let h = hatness[v] as usize;
                for view in 0..game.view_count(v) as usize {
                    for color in 0..h {
                        if model[entry_base[v] + view * h + color] {
                            partial.set(v, view, color as u32);
                        }
                    }
                }
            }
            Verdict::Winning(partial.complete_with_zero())
        }
        SatOutcome::Unsat => Verdict::Losing(LosingStats {
            nodes_explored: solver.stats.decisions,
            colorings_covered: solver
                .tracker
                .as_ref()
                .map(|t| t.max_at_decision as u64)
                .unwrap_or(0),
        }),
        SatOutcome::DecisionBudget => Verdict::Inconclusive(LimitHit::Nodes),
        SatOutcome::Timeout => Verdict::Inconclusive(LimitHit::Timeout),
    }
}
