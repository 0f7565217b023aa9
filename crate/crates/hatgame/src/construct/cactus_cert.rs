//! Lower-bound certificates for cactus hat guessing numbers.
//!
//! The target `q` comes from the cactus characterization; the certificate
//! is a winning game `⟨G', ★q⟩` on a subgraph of the host, built by gluing
//! base strategies along a connecting path:
//!
//! - `q = 4`: two triangles with hatnesses (2,4,4), glued to the ends of a
//!   (2,4,...,4,2) chain of (2,2) edges (possibly empty). Every merged
//!   vertex becomes 4, so the result is uniformly 4.
//! - `q = 3`, two cycles: the same shape with (2,3,...,3) cycles at the
//!   ends, then everything restricted down to 3.
//! - `q = 3`, one good cycle: a winning all-3 strategy on that cycle
//!   (clique arcs for a triangle, the exact solver otherwise).
//! - `q = 2`: a single (2,2) edge.

use std::collections::VecDeque;

use crate::classify::{analyze_cactus, Block, BlockKind, CactusError};
use crate::model::{Certificate, Game, Graph, Provenance, Strategy};
use crate::solver::{exact_solve, SolveError, SolveLimits};

use super::{
    certify, clique_strategy, glue_strategies, restrict_hatness, ConstructError,
    SYNTHESIS_CAP,
};

type Piece = (Game, Strategy, Provenance);

/// Builds a verified winning certificate establishing `HG(graph) >= q` for
/// the cactus characterization's `q`.
pub fn cactus_lower_bound_certificate(graph: &Graph) -> Result<Certificate, ConstructError> {
    let report = analyze_cactus(graph).map_err(|e| match e {
        CactusError::Disconnected => ConstructError::Disconnected,
        CactusError::NotCactus(_) => ConstructError::NotCactus,
    })?;
    match report.hg {
        1 => Err(ConstructError::TargetTooSmall),
        2 => {
            let (u, v) = graph.edges().next().expect("hg 2 needs an edge");
            let names = vec![graph.name(u).to_string(), graph.name(v).to_string()];
            let (game, strategy) = clique_strategy(&names, &[2, 2])?;
            certify(
                game,
                strategy,
                Provenance::Clique {
                    vertices: names,
                    hatnesses: vec![2, 2],
                },
            )
        }
        3 => {
            let cycles: Vec<&Block> = report
                .blocks
                .iter()
                .filter(|b| matches!(b.kind, BlockKind::Cycle(_)))
                .collect();
            if cycles.len() >= 2 {
                let (game, strategy, provenance) =
                    glue_across(graph, cycles[0], cycles[1], 3)?;
                // Merged vertices sit at 4; bring the whole game down to 3.
                let names: Vec<(String, u32)> = game
                    .graph()
                    .names()
                    .iter()
                    .map(|n| (n.clone(), 3))
                    .collect();
                let hatness =
                    crate::model::Hatness::from_pairs(game.graph(), &names)?;
                let (game, strategy) = restrict_hatness(&game, &strategy, hatness)?;
                certify(
                    game,
                    strategy,
                    Provenance::Restrict {
                        inner: Box::new(provenance),
                        hatnesses: names,
                    },
                )
            } else {
                let good = cycles
                    .iter()
                    .find(|b| match b.kind {
                        BlockKind::Cycle(len) => len == 4 || len % 3 == 0,
                        _ => false,
                    })
                    .expect("hg 3 with one cycle implies a good cycle");
                let (game, strategy, provenance) = uniform_cycle_piece(graph, good, 3)?;
                certify(game, strategy, provenance)
            }
        }
        4 => {
            let triangles: Vec<&Block> = report
                .blocks
                .iter()
                .filter(|b| b.kind == BlockKind::Cycle(3))
                .collect();
            let (game, strategy, provenance) =
                glue_across(graph, triangles[0], triangles[1], 4)?;
            certify(game, strategy, provenance)
        }
        _ => unreachable!("cactus hat guessing numbers are 1 through 4"),
    }
}

/// Winning strategy for `⟨C, ★q⟩` on a good cycle block.
fn uniform_cycle_piece(graph: &Graph, block: &Block, q: u32) -> Result<Piece, ConstructError> {
    if block.vertices.len() == 3 {
        let hats = vec![q; 3];
        let (game, strategy) = clique_strategy(&block.vertices, &hats)?;
        return Ok((
            game,
            strategy,
            Provenance::Clique {
                vertices: block.vertices.clone(),
                hatnesses: hats,
            },
        ));
    }
    let game = induced_cycle_game(graph, block, |_| q)?;
    solve_piece(game)
}

/// Winning strategy for a cycle block with hatness 2 at `anchor` and 3
/// elsewhere.
fn anchored_cycle_piece(
    graph: &Graph,
    block: &Block,
    anchor: &str,
) -> Result<Piece, ConstructError> {
    if block.vertices.len() == 3 {
        let hats: Vec<u32> = block
            .vertices
            .iter()
            .map(|n| if n == anchor { 2 } else { 3 })
            .collect();
        let (game, strategy) = clique_strategy(&block.vertices, &hats)?;
        return Ok((
            game,
            strategy,
            Provenance::Clique {
                vertices: block.vertices.clone(),
                hatnesses: hats,
            },
        ));
    }
    let game = induced_cycle_game(graph, block, |name| if name == anchor { 2 } else { 3 })?;
    solve_piece(game)
}

fn induced_cycle_game(
    graph: &Graph,
    block: &Block,
    hat: impl Fn(&str) -> u32,
) -> Result<Game, ConstructError> {
    let members: Vec<usize> = block
        .vertices
        .iter()
        .map(|n| graph.index_of(n).unwrap())
        .collect();
    let edges: Vec<(String, String)> = graph
        .edges()
        .filter(|&(u, v)| members.contains(&u) && members.contains(&v))
        .map(|(u, v)| (graph.name(u).to_string(), graph.name(v).to_string()))
        .collect();
    let sub = Graph::new(block.vertices.clone(), edges)?;
    let values = block.vertices.iter().map(|n| hat(n)).collect();
    Ok(Game::from_values(sub, values)?)
}

fn solve_piece(game: Game) -> Result<Piece, ConstructError> {
    let limits = SolveLimits {
        max_colorings: SYNTHESIS_CAP,
        ..SolveLimits::default()
    };
    match exact_solve(&game, &limits) {
        Ok(crate::model::Verdict::Winning(strategy)) => {
            let provenance = Provenance::Solved { game: game.clone() };
            Ok((game, strategy, provenance))
        }
        Ok(crate::model::Verdict::Inconclusive(_)) => {
            Err(ConstructError::SynthesisCapExceeded(game.coloring_count()))
        }
        Ok(other) => Err(ConstructError::ReplayFailed(format!(
            "cycle piece unexpectedly not winning: {other:?}"
        ))),
        Err(SolveError::TooLarge { colorings, .. }) => {
            Err(ConstructError::SynthesisCapExceeded(colorings))
        }
    }
}

/// Glues winning pieces on `left` and `right` blocks to the two ends of the
/// shortest connecting path. `q = 4` uses (2,4,4) triangles; `q = 3` uses
/// (2,3,...,3) cycles (the caller restricts afterwards).
fn glue_across(
    graph: &Graph,
    left: &Block,
    right: &Block,
    q: u32,
) -> Result<Piece, ConstructError> {
    let path = connecting_path(graph, left, right);
    let a = graph.name(path[0]).to_string();
    let b = graph.name(*path.last().unwrap()).to_string();

    let left_piece = if q == 4 {
        triangle_piece(left, &a)?
    } else {
        anchored_cycle_piece(graph, left, &a)?
    };
    let right_piece = if q == 4 {
        triangle_piece(right, &b)?
    } else {
        anchored_cycle_piece(graph, right, &b)?
    };

    let (mut game, mut strategy, mut provenance) = left_piece;
    if path.len() > 1 {
        let names: Vec<String> = path
            .iter()
            .map(|&v| graph.name(v).to_string())
            .collect();
        let (chain_game, chain_strategy, chain_prov) = edge_chain(&names)?;
        let (g, s) =
            glue_strategies(&game, &strategy, &a, &chain_game, &chain_strategy, &a)?;
        provenance = Provenance::Glue {
            left: Box::new(provenance),
            right: Box::new(chain_prov),
            at_left: a.clone(),
            at_right: a.clone(),
        };
        game = g;
        strategy = s;
    }
    let (g, s) = glue_strategies(
        &game,
        &strategy,
        &b,
        &right_piece.0,
        &right_piece.1,
        &b,
    )?;
    provenance = Provenance::Glue {
        left: Box::new(provenance),
        right: Box::new(right_piece.2),
        at_left: b.clone(),
        at_right: b,
    };
    Ok((g, s, provenance))
}

/// Triangle with hatness 2 at the anchor and 4 at the other two corners.
fn triangle_piece(block: &Block, anchor: &str) -> Result<Piece, ConstructError> {
    let hats: Vec<u32> = block
        .vertices
        .iter()
        .map(|n| if n == anchor { 2 } else { 4 })
        .collect();
    let (game, strategy) = clique_strategy(&block.vertices, &hats)?;
    Ok((
        game,
        strategy,
        Provenance::Clique {
            vertices: block.vertices.clone(),
            hatnesses: hats,
        },
    ))
}

/// Chain of (2,2) edges glued end to end along the path: hatnesses come
/// out as (2,4,...,4,2).
fn edge_chain(names: &[String]) -> Result<Piece, ConstructError> {
    let first = vec![names[0].clone(), names[1].clone()];
    let (mut game, mut strategy) = clique_strategy(&first, &[2, 2])?;
    let mut provenance = Provenance::Clique {
        vertices: first,
        hatnesses: vec![2, 2],
    };
    for k in 2..names.len() {
        let link = vec![names[k - 1].clone(), names[k].clone()];
        let (lg, ls) = clique_strategy(&link, &[2, 2])?;
        let link_prov = Provenance::Clique {
            vertices: link,
            hatnesses: vec![2, 2],
        };
        let (g, s) = glue_strategies(&game, &strategy, &names[k - 1], &lg, &ls, &names[k - 1])?;
        provenance = Provenance::Glue {
            left: Box::new(provenance),
            right: Box::new(link_prov),
            at_left: names[k - 1].clone(),
            at_right: names[k - 1].clone(),
        };
        game = g;
        strategy = s;
    }
    Ok((game, strategy, provenance))
}

/// Shortest path between two blocks: multi-source BFS from the left
/// block's vertices, stopping at the closest right-block vertex (smallest
/// distance, then smallest canonical index). Length 0 when they share a
/// vertex.
fn connecting_path(graph: &Graph, left: &Block, right: &Block) -> Vec<usize> {
    let sources: Vec<usize> = left
        .vertices
        .iter()
        .map(|n| graph.index_of(n).unwrap())
        .collect();
    let targets: Vec<usize> = right
        .vertices
        .iter()
        .map(|n| graph.index_of(n).unwrap())
        .collect();
    let n = graph.vertex_count();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut ordered_sources = sources.clone();
    ordered_sources.sort_unstable();
    for &s in &ordered_sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &w in graph.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let &best = targets
        .iter()
        .min_by_key(|&&t| (dist[t], t))
        .expect("blocks are nonempty");
    let mut path = vec![best];
    let mut cur = best;
    while parent[cur] != usize::MAX {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::replay;
    use crate::solver::verify_strategy;

    fn bowtie() -> Graph {
        Graph::new(
            vec!["a", "b", "c", "d", "e"],
            vec![
                ("a", "b"),
                ("b", "c"),
                ("c", "a"),
                ("c", "d"),
                ("d", "e"),
                ("e", "c"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bowtie_certificate_is_star4_on_all_vertices() {
        let cert = cactus_lower_bound_certificate(&bowtie()).unwrap();
        assert_eq!(cert.game.vertex_count(), 5);
        assert!(cert.game.hatness().values().iter().all(|&h| h == 4));
        assert_eq!(cert.game.coloring_count(), 1024);
        assert_eq!(verify_strategy(&cert.game, &cert.strategy).unwrap(), None);
    }

    #[test]
    fn triangle_certificate_uses_clique_strategy() {
        let g = Graph::cycle(&["a", "b", "c"]).unwrap();
        let cert = cactus_lower_bound_certificate(&g).unwrap();
        assert!(matches!(cert.provenance, Provenance::Clique { .. }));
        assert!(cert.game.hatness().values().iter().all(|&h| h == 3));
    }

    #[test]
    fn tree_certificate_is_an_edge() {
        let g = Graph::path(&["a", "b", "c", "d"]).unwrap();
        let cert = cactus_lower_bound_certificate(&g).unwrap();
        assert_eq!(cert.game.vertex_count(), 2);
        assert_eq!(cert.game.hatness().values(), &[2, 2]);
    }

    #[test]
    fn c4_certificate_is_solved_star3() {
        let g = Graph::cycle(&["a", "b", "c", "d"]).unwrap();
        let cert = cactus_lower_bound_certificate(&g).unwrap();
        assert!(matches!(cert.provenance, Provenance::Solved { .. }));
        assert_eq!(cert.game.hatness().values(), &[3, 3, 3, 3]);
    }

    #[test]
    fn single_vertex_has_no_certificate() {
        let g = Graph::new(vec!["a"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(
            cactus_lower_bound_certificate(&g).unwrap_err(),
            ConstructError::TargetTooSmall
        );
    }

    #[test]
    fn two_c4s_give_a_star3_certificate() {
        // Two 4-cycles joined by an edge.
        let g = Graph::new(
            vec!["a", "b", "c", "d", "e", "f", "g", "h"],
            vec![
                ("a", "b"),
                ("b", "c"),
                ("c", "d"),
                ("d", "a"),
                ("d", "e"),
                ("e", "f"),
                ("f", "g"),
                ("g", "h"),
                ("h", "e"),
            ],
        )
        .unwrap();
        let cert = cactus_lower_bound_certificate(&g).unwrap();
        assert!(cert.game.hatness().values().iter().all(|&h| h == 3));
        // Both 4-cycles plus the bridging edge, no interior path vertices.
        assert_eq!(cert.game.vertex_count(), 8);
        assert_eq!(cert.game.graph().edge_count(), 9);
        assert_eq!(verify_strategy(&cert.game, &cert.strategy).unwrap(), None);
    }

    #[test]
    fn certificate_replays_bit_for_bit() {
        let cert = cactus_lower_bound_certificate(&bowtie()).unwrap();
        let (game, strategy) = replay(&cert.provenance).unwrap();
        assert_eq!(game, cert.game);
        assert_eq!(strategy, cert.strategy);
    }
}
