//! Line-oriented text formats for games and certificates.
//!
//! A game document lists `vertex <id> <hatness>` lines followed by
//! `edge <id> <id>` lines; `#` starts a comment. A certificate document
//! embeds a game section, one strategy table per vertex (one line per view,
//! neighbor colors comma-joined in canonical order, `-` for an empty
//! view), and a provenance section replayable as a stack program.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Certificate, Game, Graph, Provenance, Strategy};
use crate::solver::MISSING_GUESS;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DocError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> DocError {
    DocError {
        line,
        message: message.into(),
    }
}

fn valid_id(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct GameLines {
    vertices: Vec<(String, u32)>,
    edges: Vec<(String, String)>,
}

impl GameLines {
    fn new() -> Self {
        GameLines {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn feed(&mut self, lineno: usize, parts: &[&str]) -> Result<(), DocError> {
        match parts[0] {
            "vertex" => {
                if parts.len() != 3 {
                    return Err(err(lineno, "expected: vertex <id> <hatness>"));
                }
                let id = parts[1];
                if !valid_id(id) {
                    return Err(err(lineno, format!("invalid identifier {id:?}")));
                }
                if self.vertices.iter().any(|(v, _)| v == id) {
                    return Err(err(lineno, format!("duplicate vertex {id:?}")));
                }
                let hatness: u32 = parts[2]
                    .parse()
                    .map_err(|_| err(lineno, format!("invalid hatness {:?}", parts[2])))?;
                if hatness == 0 {
                    return Err(err(lineno, format!("hatness of {id:?} must be at least 1")));
                }
                self.vertices.push((id.to_string(), hatness));
                Ok(())
            }
            "edge" => {
                if parts.len() != 3 {
                    return Err(err(lineno, "expected: edge <id> <id>"));
                }
                for endpoint in &parts[1..] {
                    if !self.vertices.iter().any(|(v, _)| v == endpoint) {
                        return Err(err(
                            lineno,
                            format!("unknown endpoint {endpoint:?}"),
                        ));
                    }
                }
                if parts[1] == parts[2] {
                    return Err(err(lineno, format!("self-loop at {:?}", parts[1])));
                }
                let (a, b) = (parts[1].to_string(), parts[2].to_string());
                if self
                    .edges
                    .iter()
                    .any(|(x, y)| (x == &a && y == &b) || (x == &b && y == &a))
                {
                    return Err(err(lineno, format!("duplicate edge ({a:?}, {b:?})")));
                }
                self.edges.push((a, b));
                Ok(())
            }
            other => Err(err(lineno, format!("unknown directive {other:?}"))),
        }
    }

    fn finish(self, lineno: usize) -> Result<Game, DocError> {
        if self.vertices.is_empty() {
            return Err(err(lineno, "document declares no vertices"));
        }
        let names: Vec<String> = self.vertices.iter().map(|(v, _)| v.clone()).collect();
        let values: Vec<u32> = self.vertices.iter().map(|&(_, h)| h).collect();
        let graph = Graph::new(names, self.edges)
            .map_err(|e| err(lineno, e.to_string()))?;
        Game::from_values(graph, values).map_err(|e| err(lineno, e.to_string()))
    }
}

/// Parses a game document. Whitespace-tolerant; `#` comments ignored.
pub fn parse_game(text: &str) -> Result<Game, DocError> {
    let mut lines = GameLines::new();
    let mut last = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        last = lineno;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        lines.feed(lineno, &parts)?;
    }
    lines.finish(last)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

/// Serializes a game document: vertices in canonical order, then edges.
pub fn serialize_game(game: &Game) -> String {
    let mut out = String::new();
    for (v, name) in game.graph().names().iter().enumerate() {
        writeln!(out, "vertex {name} {}", game.h(v)).unwrap();
    }
    for (u, v) in game.graph().edges() {
        writeln!(out, "edge {} {}", game.graph().name(u), game.graph().name(v)).unwrap();
    }
    out
}

fn view_label(colors: &[u32]) -> String {
    if colors.is_empty() {
        "-".to_string()
    } else {
        colors
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn provenance_lines(p: &Provenance, out: &mut String) {
    match p {
        Provenance::Clique {
            vertices,
            hatnesses,
        } => {
            writeln!(
                out,
                "clique {} {}",
                vertices.join(","),
                hatnesses
                    .iter()
                    .map(|h| h.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
            .unwrap();
        }
        Provenance::Solved { game } => {
            let vertices = game
                .graph()
                .names()
                .iter()
                .enumerate()
                .map(|(v, n)| format!("{n}:{}", game.h(v)))
                .collect::<Vec<_>>()
                .join(",");
            let edges = game
                .graph()
                .edges()
                .map(|(u, v)| format!("{}-{}", game.graph().name(u), game.graph().name(v)))
                .collect::<Vec<_>>()
                .join(",");
            writeln!(out, "solved {vertices};{edges}").unwrap();
        }
        Provenance::Glue {
            left,
            right,
            at_left,
            at_right,
        } => {
            provenance_lines(left, out);
            provenance_lines(right, out);
            writeln!(out, "glue {at_left} {at_right}").unwrap();
        }
        Provenance::Restrict { inner, hatnesses } => {
            provenance_lines(inner, out);
            let pairs = hatnesses
                .iter()
                .map(|(v, h)| format!("{v}:{h}"))
                .collect::<Vec<_>>()
                .join(",");
            writeln!(out, "restrict {pairs}").unwrap();
        }
    }
}

/// Serializes a certificate: game section, strategy tables, provenance.
pub fn serialize_certificate(cert: &Certificate) -> String {
    let game = &cert.game;
    let mut out = String::new();
    writeln!(out, "game").unwrap();
    out.push_str(&serialize_game(game));
    for (v, name) in game.graph().names().iter().enumerate() {
        writeln!(out, "strategy {name}").unwrap();
        for view in 0..game.view_count(v) as usize {
            let colors = game.view_colors(v, view);
            writeln!(
                out,
                "{} -> {}",
                view_label(&colors),
                cert.strategy.guess(v, view)
            )
            .unwrap();
        }
    }
    writeln!(out, "provenance").unwrap();
    provenance_lines(&cert.provenance, &mut out);
    out
}

/// A parsed certificate document. The strategy may be incomplete (missing
/// view lines); verification reports that precisely.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCertificate {
    pub game: Game,
    pub strategy: Strategy,
    pub provenance: Option<Provenance>,
}

enum Section {
    Preamble,
    Game,
    Strategy(usize),
    Provenance,
}

/// Parses a certificate document.
pub fn parse_certificate(text: &str) -> Result<ParsedCertificate, DocError> {
    let mut section = Section::Preamble;
    let mut game_lines = GameLines::new();
    let mut game: Option<Game> = None;
    let mut tables: Vec<Vec<u32>> = Vec::new();
    let mut stack: Vec<Provenance> = Vec::new();
    let mut game_end_line = 0;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();

        // Section headers.
        match parts[0] {
            "game" if parts.len() == 1 => {
                section = Section::Game;
                continue;
            }
            "strategy" => {
                if game.is_none() {
                    game_end_line = lineno;
                    let g = game_lines.finish(lineno)?;
                    tables = (0..g.vertex_count())
                        .map(|v| vec![MISSING_GUESS; g.view_count(v) as usize])
                        .collect();
                    game_lines = GameLines::new();
                    game = Some(g);
                }
                if parts.len() != 2 {
                    return Err(err(lineno, "expected: strategy <vertex>"));
                }
                let g = game.as_ref().unwrap();
                let v = g
                    .graph()
                    .index_of(parts[1])
                    .ok_or_else(|| err(lineno, format!("unknown vertex {:?}", parts[1])))?;
                section = Section::Strategy(v);
                continue;
            }
            "provenance" if parts.len() == 1 => {
                if game.is_none() {
                    game_end_line = lineno;
                    let g = game_lines.finish(lineno)?;
                    tables = (0..g.vertex_count())
                        .map(|v| vec![MISSING_GUESS; g.view_count(v) as usize])
                        .collect();
                    game_lines = GameLines::new();
                    game = Some(g);
                }
                section = Section::Provenance;
                continue;
            }
            _ => {}
        }

        match section {
            Section::Preamble => {
                return Err(err(lineno, "expected a 'game' section first"));
            }
            Section::Game => game_lines.feed(lineno, &parts)?,
            Section::Strategy(v) => {
                let g = game.as_ref().unwrap();
                let arrow = parts
                    .iter()
                    .position(|&p| p == "->")
                    .ok_or_else(|| err(lineno, "expected: <view> -> <guess>"))?;
                if arrow != 1 || parts.len() != 3 {
                    return Err(err(lineno, "expected: <view> -> <guess>"));
                }
                let neighbors = g.graph().neighbors(v);
                let colors: Vec<u32> = if parts[0] == "-" {
                    Vec::new()
                } else {
                    parts[0]
                        .split(',')
                        .map(|c| {
                            c.parse()
                                .map_err(|_| err(lineno, format!("invalid color {c:?}")))
                        })
                        .collect::<Result<_, _>>()?
                };
                if colors.len() != neighbors.len() {
                    return Err(err(
                        lineno,
                        format!(
                            "view has {} colors, vertex {:?} has {} neighbors",
                            colors.len(),
                            g.graph().name(v),
                            neighbors.len()
                        ),
                    ));
                }
                let mut view = 0usize;
                for (slot, &u) in neighbors.iter().enumerate() {
                    if colors[slot] >= g.h(u) {
                        return Err(err(
                            lineno,
                            format!(
                                "color {} is outside the hatness of {:?}",
                                colors[slot],
                                g.graph().name(u)
                            ),
                        ));
                    }
                    view = view * g.h(u) as usize + colors[slot] as usize;
                }
                let guess: u32 = parts[2]
                    .parse()
                    .map_err(|_| err(lineno, format!("invalid guess {:?}", parts[2])))?;
                if tables[v][view] != MISSING_GUESS {
                    return Err(err(lineno, "duplicate view line"));
                }
                tables[v][view] = guess;
            }
            Section::Provenance => {
                parse_provenance_line(lineno, &parts, &mut stack)?;
            }
        }
    }

    let game = match game {
        Some(g) => g,
        None => game_lines.finish(game_end_line.max(1))?,
    };
    let provenance = match stack.len() {
        0 => None,
        1 => Some(stack.pop().unwrap()),
        n => {
            return Err(err(
                game_end_line,
                format!("provenance program left {n} items on the stack"),
            ))
        }
    };
    Ok(ParsedCertificate {
        game,
        strategy: Strategy::new(tables),
        provenance,
    })
}

fn parse_provenance_line(
    lineno: usize,
    parts: &[&str],
    stack: &mut Vec<Provenance>,
) -> Result<(), DocError> {
    match parts[0] {
        "clique" => {
            if parts.len() != 3 {
                return Err(err(lineno, "expected: clique <names> <hatnesses>"));
            }
            let vertices: Vec<String> = parts[1].split(',').map(String::from).collect();
            let hatnesses: Vec<u32> = parts[2]
                .split(',')
                .map(|h| h.parse().map_err(|_| err(lineno, "invalid hatness")))
                .collect::<Result<_, _>>()?;
            if vertices.len() != hatnesses.len() {
                return Err(err(lineno, "name and hatness counts differ"));
            }
            stack.push(Provenance::Clique {
                vertices,
                hatnesses,
            });
            Ok(())
        }
        "solved" => {
            if parts.len() != 2 {
                return Err(err(lineno, "expected: solved <v:h,...>;<u-v,...>"));
            }
            let (vertex_part, edge_part) = parts[1]
                .split_once(';')
                .ok_or_else(|| err(lineno, "expected ';' between vertices and edges"))?;
            let mut names = Vec::new();
            let mut values = Vec::new();
            for item in vertex_part.split(',') {
                let (name, h) = item
                    .split_once(':')
                    .ok_or_else(|| err(lineno, format!("expected <name>:<hatness>, got {item:?}")))?;
                names.push(name.to_string());
                values.push(
                    h.parse()
                        .map_err(|_| err(lineno, format!("invalid hatness {h:?}")))?,
                );
            }
            let mut edges = Vec::new();
            if !edge_part.is_empty() {
                for item in edge_part.split(',') {
                    let (u, v) = item
                        .split_once('-')
                        .ok_or_else(|| err(lineno, format!("expected <u>-<v>, got {item:?}")))?;
                    edges.push((u.to_string(), v.to_string()));
                }
            }
            let graph = Graph::new(names, edges).map_err(|e| err(lineno, e.to_string()))?;
            let game =
                Game::from_values(graph, values).map_err(|e| err(lineno, e.to_string()))?;
            stack.push(Provenance::Solved { game });
            Ok(())
        }
        "glue" => {
            if parts.len() != 3 {
                return Err(err(lineno, "expected: glue <v1> <v2>"));
            }
            let right = stack
                .pop()
                .ok_or_else(|| err(lineno, "glue needs two operands"))?;
            let left = stack
                .pop()
                .ok_or_else(|| err(lineno, "glue needs two operands"))?;
            stack.push(Provenance::Glue {
                left: Box::new(left),
                right: Box::new(right),
                at_left: parts[1].to_string(),
                at_right: parts[2].to_string(),
            });
            Ok(())
        }
        "restrict" => {
            if parts.len() != 2 {
                return Err(err(lineno, "expected: restrict <v:h,...>"));
            }
            let inner = stack
                .pop()
                .ok_or_else(|| err(lineno, "restrict needs an operand"))?;
            let mut hatnesses = Vec::new();
            for item in parts[1].split(',') {
                let (name, h) = item
                    .split_once(':')
                    .ok_or_else(|| err(lineno, format!("expected <name>:<hatness>, got {item:?}")))?;
                hatnesses.push((
                    name.to_string(),
                    h.parse()
                        .map_err(|_| err(lineno, format!("invalid hatness {h:?}")))?,
                ));
            }
            stack.push(Provenance::Restrict {
                inner: Box::new(inner),
                hatnesses,
            });
            Ok(())
        }
        other => Err(err(lineno, format!("unknown provenance step {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{cactus_lower_bound_certificate, replay};
    use crate::solver::verify_strategy;

    #[test]
    fn parses_k2() {
        let game = parse_game("vertex a 2\nvertex b 2\nedge a b\n").unwrap();
        assert_eq!(game.vertex_count(), 2);
        assert_eq!(game.hatness().values(), &[2, 2]);
        assert_eq!(game.graph().edge_count(), 1);
    }

    #[test]
    fn comments_and_whitespace_are_tolerated() {
        let text = "# a triangle\n  vertex a 2 # first\n\nvertex b 4\nvertex c 4\n edge a b\nedge b c\nedge c a\n";
        let game = parse_game(text).unwrap();
        assert_eq!(game.vertex_count(), 3);
    }

    #[test]
    fn undeclared_endpoint_is_an_error_with_line() {
        let e = parse_game("edge a b\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.message.contains("unknown endpoint"));
    }

    #[test]
    fn duplicate_vertex_is_an_error() {
        let e = parse_game("vertex a 2\nvertex a 3\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("duplicate vertex"));
    }

    #[test]
    fn zero_hatness_is_an_error() {
        let e = parse_game("vertex a 0\n").unwrap_err();
        assert!(e.message.contains("at least 1"));
    }

    #[test]
    fn game_round_trip() {
        let game = Game::cycle_from_hatnesses(&[2, 3, 4, 5]).unwrap();
        let text = serialize_game(&game);
        assert_eq!(parse_game(&text).unwrap(), game);
    }

    #[test]
    fn certificate_round_trip() {
        let g = Graph::new(
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
        .unwrap();
        let cert = cactus_lower_bound_certificate(&g).unwrap();
        let text = serialize_certificate(&cert);
        let parsed = parse_certificate(&text).unwrap();
        assert_eq!(parsed.game, cert.game);
        assert_eq!(parsed.strategy, cert.strategy);
        assert_eq!(parsed.provenance.as_ref(), Some(&cert.provenance));
        assert_eq!(verify_strategy(&parsed.game, &parsed.strategy).unwrap(), None);
        let (rg, rs) = replay(parsed.provenance.as_ref().unwrap()).unwrap();
        assert_eq!(rg, parsed.game);
        assert_eq!(rs, parsed.strategy);
    }

    #[test]
    fn missing_strategy_lines_read_as_incomplete() {
        let text = "game\nvertex a 2\nvertex b 2\nedge a b\nstrategy a\n0 -> 0\n";
        let parsed = parse_certificate(&text).unwrap();
        assert!(matches!(
            verify_strategy(&parsed.game, &parsed.strategy),
            Err(crate::solver::VerifyError::IncompleteStrategy { .. })
        ));
    }

    #[test]
    fn strategy_line_errors_carry_line_numbers() {
        let text = "game\nvertex a 2\nvertex b 2\nedge a b\nstrategy a\n0,1 -> 0\n";
        let e = parse_certificate(text).unwrap_err();
        assert_eq!(e.line, 6);
    }

    #[test]
    fn empty_view_serializes_as_dash() {
        let g = Graph::new(vec!["a"], Vec::<(&str, &str)>::new()).unwrap();
        let game = Game::from_values(g, vec![1]).unwrap();
        let cert = Certificate {
            strategy: Strategy::zeroed(&game),
            provenance: Provenance::Solved { game: game.clone() },
            game,
        };
        let text = serialize_certificate(&cert);
        assert!(text.contains("- -> 0"));
        let parsed = parse_certificate(&text).unwrap();
        assert_eq!(parsed.strategy, cert.strategy);
    }
}
