//! Browser bindings for the hat guessing workbench.
//!
//! Three operations back the demo page: cycle classification, the exact
//! solver on a game document, and cactus analysis with an optional
//! lower-bound certificate. Results come back as JSON strings so the page
//! stays framework-free.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use hatgame::classify::{
    analyze_cactus, classify_cycle, BlockKind, CactusError, CycleClassification,
    CycleWitness, HgStatement,
};
use hatgame::construct::cactus_lower_bound_certificate;
use hatgame::doc::parse_game;
use hatgame::model::{Game, LimitHit, Verdict};
use hatgame::solver::{exact_solve, verify_strategy, SolveLimits};

#[derive(Serialize)]
struct CycleResponse {
    ok: bool,
    error: Option<String>,
    winning: Option<bool>,
    condition: Option<u8>,
    arc: Option<Vec<String>>,
    summary: Option<String>,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("response serializes")
}

fn cycle_error(message: String) -> String {
    json(&CycleResponse {
        ok: false,
        error: Some(message),
        winning: None,
        condition: None,
        arc: None,
        summary: None,
    })
}

/// Classifies the cycle with the given hatnesses (in cyclic order).
#[wasm_bindgen]
pub fn classify_cycle_json(hatnesses: Vec<u32>) -> String {
    if hatnesses.len() < 3 {
        return cycle_error("a cycle needs at least 3 vertices".into());
    }
    if hatnesses.iter().any(|&h| h == 0) {
        return cycle_error("hatnesses must be at least 1".into());
    }
    let game = match Game::cycle_from_hatnesses(&hatnesses) {
        Ok(game) => game,
        Err(e) => return cycle_error(e.to_string()),
    };
    match classify_cycle(&game) {
        Ok(CycleClassification::Winning(witness)) => {
            let (condition, arc, summary) = match witness {
                CycleWitness::Condition1 => (
                    1,
                    None,
                    "length 4 or divisible by 3, all hatnesses at most 3".to_string(),
                ),
                CycleWitness::Condition2 => {
                    (2, None, "triangle with reciprocal sum at least 1".to_string())
                }
                CycleWitness::Condition3 { arc } => {
                    let summary = format!("winning arc {}", arc.join(","));
                    (3, Some(arc), summary)
                }
                CycleWitness::Condition4 => (
                    4,
                    None,
                    "(2,3,3) or (3,2,3) stretch, all hatnesses at most 4".to_string(),
                ),
            };
            json(&CycleResponse {
                ok: true,
                error: None,
                winning: Some(true),
                condition: Some(condition),
                arc,
                summary: Some(summary),
            })
        }
        Ok(CycleClassification::Losing) => json(&CycleResponse {
            ok: true,
            error: None,
            winning: Some(false),
            condition: None,
            arc: None,
            summary: Some("no condition of the cycle characterization holds".into()),
        }),
        Err(e) => cycle_error(e.to_string()),
    }
}

#[derive(Serialize)]
struct StrategyRow {
    view: String,
    guess: u32,
}

#[derive(Serialize)]
struct StrategyTable {
    vertex: String,
    neighbors: Vec<String>,
    rows: Vec<StrategyRow>,
}

#[derive(Serialize)]
struct SolveResponse {
    ok: bool,
    error: Option<String>,
    verdict: Option<String>,
    vertices: Option<Vec<String>>,
    edges: Option<Vec<(String, String)>>,
    hatnesses: Option<Vec<u32>>,
    colorings: Option<u64>,
    strategy: Option<Vec<StrategyTable>>,
    nodes_explored: Option<u64>,
    colorings_covered: Option<u64>,
    limit: Option<String>,
}

fn solve_error(message: String) -> String {
    json(&SolveResponse {
        ok: false,
        error: Some(message),
        verdict: None,
        vertices: None,
        edges: None,
        hatnesses: None,
        colorings: None,
        strategy: None,
        nodes_explored: None,
        colorings_covered: None,
        limit: None,
    })
}

/// Runs the exact solver on a game document.
#[wasm_bindgen]
pub fn solve_document_json(document: &str, max_colorings: u32, timeout_ms: u32) -> String {
    let game = match parse_game(document) {
        Ok(game) => game,
        Err(e) => return solve_error(e.to_string()),
    };
    let limits = SolveLimits {
        max_colorings: max_colorings.max(1) as u64,
        timeout: std::time::Duration::from_millis(timeout_ms.max(1) as u64),
        ..SolveLimits::default()
    };
    let vertices: Vec<String> = game.graph().names().to_vec();
    let edges: Vec<(String, String)> = game
        .graph()
        .edges()
        .map(|(u, v)| {
            (
                game.graph().name(u).to_string(),
                game.graph().name(v).to_string(),
            )
        })
        .collect();
    let hatnesses = game.hatness().values().to_vec();
    let base = SolveResponse {
        ok: true,
        error: None,
        verdict: None,
        vertices: Some(vertices),
        edges: Some(edges),
        hatnesses: Some(hatnesses),
        colorings: Some(game.coloring_count() as u64),
        strategy: None,
        nodes_explored: None,
        colorings_covered: None,
        limit: None,
    };
    match exact_solve(&game, &limits) {
        Ok(Verdict::Winning(strategy)) => {
            debug_assert_eq!(verify_strategy(&game, &strategy), Ok(None));
            let tables = (0..game.vertex_count())
                .map(|v| StrategyTable {
                    vertex: game.graph().name(v).to_string(),
                    neighbors: game
                        .graph()
                        .neighbors(v)
                        .iter()
                        .map(|&u| game.graph().name(u).to_string())
                        .collect(),
                    rows: (0..game.view_count(v) as usize)
                        .map(|view| StrategyRow {
                            view: game
                                .view_colors(v, view)
                                .iter()
                                .map(|c| c.to_string())
                                .collect::<Vec<_>>()
                                .join(","),
                            guess: strategy.guess(v, view),
                        })
                        .collect(),
                })
                .collect();
            json(&SolveResponse {
                verdict: Some("winning".into()),
                strategy: Some(tables),
                ..base
            })
        }
        Ok(Verdict::Losing(stats)) => json(&SolveResponse {
            verdict: Some("losing".into()),
            nodes_explored: Some(stats.nodes_explored),
            colorings_covered: Some(stats.colorings_covered),
            ..base
        }),
        Ok(Verdict::Inconclusive(limit)) => json(&SolveResponse {
            verdict: Some("inconclusive".into()),
            limit: Some(
                match limit {
                    LimitHit::Nodes => "node budget",
                    LimitHit::Timeout => "timeout",
                }
                .into(),
            ),
            ..base
        }),
        Err(e) => solve_error(e.to_string()),
    }
}

#[derive(Serialize)]
struct BlockInfo {
    vertices: Vec<String>,
    kind: String,
    leaf: bool,
}

#[derive(Serialize)]
struct CactusResponse {
    ok: bool,
    error: Option<String>,
    vertices: Option<Vec<String>>,
    edges: Option<Vec<(String, String)>>,
    is_cactus: Option<bool>,
    blocks: Option<Vec<BlockInfo>>,
    triangle_count: Option<usize>,
    cycle_count: Option<usize>,
    good_cycle: Option<bool>,
    hg: Option<u32>,
    statement: Option<String>,
    certificate_vertices: Option<Vec<String>>,
    certificate_verified: Option<bool>,
}

fn empty_cactus_response() -> CactusResponse {
    CactusResponse {
        ok: false,
        error: None,
        vertices: None,
        edges: None,
        is_cactus: None,
        blocks: None,
        triangle_count: None,
        cycle_count: None,
        good_cycle: None,
        hg: None,
        statement: None,
        certificate_vertices: None,
        certificate_verified: None,
    }
}

fn cactus_error(message: String, base: Option<CactusResponse>) -> String {
    let mut response = base.unwrap_or_else(empty_cactus_response);
    response.ok = false;
    response.error = Some(message);
    json(&response)
}

/// Analyzes a cactus document: blocks, census, hat guessing number, and a
/// verified lower-bound certificate when one fits the synthesis cap.
#[wasm_bindgen]
pub fn cactus_report_json(document: &str) -> String {
    let game = match parse_game(document) {
        Ok(game) => game,
        Err(e) => return cactus_error(e.to_string(), None),
    };
    let graph = game.graph();
    let vertices: Vec<String> = graph.names().to_vec();
    let edges: Vec<(String, String)> = graph
        .edges()
        .map(|(u, v)| (graph.name(u).to_string(), graph.name(v).to_string()))
        .collect();
    let mut base = empty_cactus_response();
    base.ok = true;
    base.vertices = Some(vertices);
    base.edges = Some(edges);
    let report = match analyze_cactus(graph) {
        Ok(report) => report,
        Err(CactusError::Disconnected) => {
            return cactus_error("graph is not connected".into(), Some(base))
        }
        Err(CactusError::NotCactus(blocks)) => {
            let infos = blocks
                .iter()
                .map(|b| BlockInfo {
                    vertices: b.vertices.clone(),
                    kind: kind_label(b.kind),
                    leaf: false,
                })
                .collect();
            base.is_cactus = Some(false);
            base.blocks = Some(infos);
            return cactus_error("graph is not a cactus".into(), Some(base));
        }
    };
    let blocks = report
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| BlockInfo {
            vertices: b.vertices.clone(),
            kind: kind_label(b.kind),
            leaf: report.leaf_cycles.contains(&i),
        })
        .collect();
    let (certificate_vertices, certificate_verified) =
        match cactus_lower_bound_certificate(graph) {
            Ok(cert) => {
                let verified = verify_strategy(&cert.game, &cert.strategy) == Ok(None);
                (Some(cert.game.graph().names().to_vec()), Some(verified))
            }
            Err(_) => (None, None),
        };
    json(&CactusResponse {
        is_cactus: Some(true),
        blocks: Some(blocks),
        triangle_count: Some(report.triangle_count),
        cycle_count: Some(report.cycle_count),
        good_cycle: Some(report.good_cycle),
        hg: Some(report.hg),
        statement: Some(
            match report.statement {
                HgStatement::TwoTriangles => "at least two triangles",
                HgStatement::GoodOrTwoCycles => {
                    "two cycles, or a cycle of length 4 or divisible by 3"
                }
                HgStatement::PseudotreeWithEdge => "pseudotree with an edge, no good cycle",
                HgStatement::SingleVertex => "single vertex",
            }
            .into(),
        ),
        certificate_vertices,
        certificate_verified,
        ..base
    })
}

fn kind_label(kind: BlockKind) -> String {
    match kind {
        BlockKind::Edge => "edge".into(),
        BlockKind::Cycle(len) => format!("cycle-{len}"),
        BlockKind::Other => "other".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_classification_round_trips_through_json() {
        let response = classify_cycle_json(vec![3, 3, 3, 3]);
        let value: serde_json::Value = serde_json::from_str(&response).unwrap();
        assert_eq!(value["ok"], true);
        assert_eq!(value["winning"], true);
        assert_eq!(value["condition"], 1);

        let response = classify_cycle_json(vec![3, 3, 3, 3, 3]);
        let value: serde_json::Value = serde_json::from_str(&response).unwrap();
        assert_eq!(value["winning"], false);
    }

    #[test]
    fn cycle_rejects_degenerate_input() {
        let value: serde_json::Value =
            serde_json::from_str(&classify_cycle_json(vec![2, 2])).unwrap();
        assert_eq!(value["ok"], false);
    }

    #[test]
    fn solver_reports_strategy_tables() {
        let doc = "vertex a 2\nvertex b 2\nedge a b\n";
        let value: serde_json::Value =
            serde_json::from_str(&solve_document_json(doc, 100000, 60_000)).unwrap();
        assert_eq!(value["verdict"], "winning");
        assert_eq!(value["strategy"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn solver_reports_losing_stats() {
        let doc = "vertex a 2\nvertex b 5\nvertex c 2\nedge a b\nedge b c\n";
        let value: serde_json::Value =
            serde_json::from_str(&solve_document_json(doc, 100000, 60_000)).unwrap();
        assert_eq!(value["verdict"], "losing");
        assert!(value["colorings_covered"].as_u64().unwrap() < 20);
    }

    #[test]
    fn cactus_report_covers_bowtie() {
        let doc = "vertex a 4\nvertex b 4\nvertex c 4\nvertex d 4\nvertex e 4\n\
edge a b\nedge b c\nedge c a\nedge c d\nedge d e\nedge e c\n";
        let value: serde_json::Value =
            serde_json::from_str(&cactus_report_json(doc)).unwrap();
        assert_eq!(value["hg"], 4);
        assert_eq!(value["triangle_count"], 2);
        assert_eq!(value["certificate_verified"], true);
    }

    #[test]
    fn cactus_report_flags_non_cactus() {
        let doc = "vertex a 2\nvertex b 2\nvertex c 2\nvertex d 2\n\
edge a b\nedge b c\nedge c a\nedge b d\nedge d c\n";
        let value: serde_json::Value =
            serde_json::from_str(&cactus_report_json(doc)).unwrap();
        assert_eq!(value["ok"], false);
        assert_eq!(value["is_cactus"], false);
        assert!(value["blocks"].as_array().unwrap().len() == 1);
    }
}
