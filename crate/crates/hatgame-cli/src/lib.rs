//! Command dispatch for the hat guessing workbench.
//!
//! Exit codes: 0 winning/valid, 1 losing/invalid, 2 inconclusive,
//! 64 usage error, 65 input error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use hatgame::classify::{
    analyze_cactus, classify_cycle, path_winning_with_oracle, reduce_delete2,
    reduce_h5_path, CactusError, CycleClassification, CycleWitness, HgStatement,
};
use hatgame::construct::{cactus_lower_bound_certificate, ConstructError};
use hatgame::doc::{parse_certificate, parse_game, serialize_certificate, serialize_game};
use hatgame::model::{Certificate, Coloring, Game, LimitHit, Provenance, Verdict};
use hatgame::solver::{exact_solve, export_cnf, verify_strategy, SolveLimits};

pub const EXIT_WINNING: i32 = 0;
pub const EXIT_LOSING: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INPUT: i32 = 65;

#[derive(Parser)]
#[command(name = "hatgame", version, about = "Hat guessing games on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a path, cycle, tree or cactus game.
    Classify { file: PathBuf },
    /// Decide winnability by exhaustive search.
    Solve {
        file: PathBuf,
        #[arg(long)]
        max_colorings: Option<u64>,
        #[arg(long)]
        max_nodes: Option<u64>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        timeout: Option<u64>,
        /// Write a winning certificate here.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Check a certificate against a game.
    Verify {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Hat guessing number of a cactus graph.
    Hg {
        file: PathBuf,
        /// Write a lower-bound certificate here.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Apply a vertex-deletion reduction and print the reduced game.
    Reduce {
        file: PathBuf,
        /// `delete2` or `h5`.
        #[arg(long)]
        lemma: String,
        /// `t,u,v,w` for delete2; the hatness-5 vertex for h5.
        #[arg(long)]
        at: String,
    },
    /// Export the winnability formula in DIMACS CNF.
    ExportCnf {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// Runs the command line; output goes to the given writers.
pub fn run_cli<O: Write, E: Write>(args: &[String], out: &mut O, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}

fn load_game(path: &PathBuf) -> Result<Game, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_game(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn dispatch<O: Write, E: Write>(cli: Cli, out: &mut O, err: &mut E) -> Result<i32, String> {
    match cli.command {
        Command::Classify { file } => classify(&load_game(&file)?, out),
        Command::Solve {
            file,
            max_colorings,
            max_nodes,
            timeout,
            cert,
        } => {
            let game = load_game(&file)?;
            let mut limits = SolveLimits::default();
            if let Some(n) = max_colorings {
                limits.max_colorings = n;
            }
            if let Some(n) = max_nodes {
                limits.max_nodes = n;
            }
            if let Some(s) = timeout {
                limits.timeout = Duration::from_secs(s);
            }
            solve(&game, &limits, cert, out)
        }
        Command::Verify { file, cert } => {
            let game = load_game(&file)?;
            let text = fs::read_to_string(&cert)
                .map_err(|e| format!("cannot read {}: {e}", cert.display()))?;
            verify(&game, &text, out)
        }
        Command::Hg { file, cert } => {
            let game = load_game(&file)?;
            hg(&game, cert, out, err)
        }
        Command::Reduce { file, lemma, at } => {
            let game = load_game(&file)?;
            reduce(&game, &lemma, &at, out)
        }
        Command::ExportCnf { file, output } => {
            let game = load_game(&file)?;
            let doc = export_cnf(&game).map_err(|e| e.to_string())?;
            fs::write(&output, doc.to_dimacs())
                .map_err(|e| format!("cannot write {}: {e}", output.display()))?;
            writeln!(
                out,
                "wrote {} ({} variables, {} clauses)",
                output.display(),
                doc.variable_count,
                doc.clauses.len()
            )
            .unwrap();
            Ok(EXIT_WINNING)
        }
    }
}

fn statement_label(statement: HgStatement) -> &'static str {
    match statement {
        HgStatement::TwoTriangles => "Theorem 2, Statement 1",
        HgStatement::GoodOrTwoCycles => "Theorem 2, Statement 2",
        HgStatement::PseudotreeWithEdge => "Theorem 2, Statement 3",
        HgStatement::SingleVertex => "single vertex",
    }
}

fn classify<O: Write>(game: &Game, out: &mut O) -> Result<i32, String> {
    let graph = game.graph();
    if !graph.is_connected() {
        return Err("classify expects a connected graph (use 'solve')".into());
    }
    if let Some(order) = graph.path_order() {
        let hs: Vec<u32> = order.iter().map(|&v| game.h(v)).collect();
        let winning = path_winning_with_oracle(&hs, &SolveLimits::default())
            .map_err(|e| e.to_string())?;
        let verdict = if winning { "WINNING" } else { "LOSING" };
        writeln!(out, "{verdict} (path reduction)").unwrap();
        return Ok(if winning { EXIT_WINNING } else { EXIT_LOSING });
    }
    if graph.cycle_order().is_some() {
        let classification = classify_cycle(game).map_err(|e| e.to_string())?;
        return Ok(match classification {
            CycleClassification::Winning(witness) => {
                let label = match witness {
                    CycleWitness::Condition1 => "Condition 1".to_string(),
                    CycleWitness::Condition2 => "Condition 2".to_string(),
                    CycleWitness::Condition3 { arc } => {
                        format!("Condition 3: arc {}", arc.join(","))
                    }
                    CycleWitness::Condition4 => "Condition 4".to_string(),
                };
                writeln!(out, "WINNING (Theorem 1, {label})").unwrap();
                EXIT_WINNING
            }
            CycleClassification::Losing => {
                writeln!(out, "LOSING (Theorem 1: no condition holds)").unwrap();
                EXIT_LOSING
            }
        });
    }
    // General cactus topology: only constant hatness is covered by the
    // characterization.
    let q = game.h(0);
    if (1..game.vertex_count()).any(|v| game.h(v) != q) {
        return Err(
            "classify needs constant hatness on cactus topologies (use 'solve')".into(),
        );
    }
    let report = analyze_cactus(graph).map_err(|e| match e {
        CactusError::Disconnected => "graph is not connected".to_string(),
        CactusError::NotCactus(_) => {
            "graph is not a path, cycle, tree or cactus (use 'solve')".to_string()
        }
    })?;
    let winning = q <= report.hg;
    let verdict = if winning { "WINNING" } else { "LOSING" };
    writeln!(
        out,
        "{verdict} ({}: HG = {})",
        statement_label(report.statement),
        report.hg
    )
    .unwrap();
    Ok(if winning { EXIT_WINNING } else { EXIT_LOSING })
}

fn solve<O: Write>(
    game: &Game,
    limits: &SolveLimits,
    cert: Option<PathBuf>,
    out: &mut O,
) -> Result<i32, String> {
    match exact_solve(game, limits).map_err(|e| e.to_string())? {
        Verdict::Winning(strategy) => {
            writeln!(out, "WINNING").unwrap();
            if let Some(path) = cert {
                let certificate = Certificate {
                    game: game.clone(),
                    strategy,
                    provenance: Provenance::Solved { game: game.clone() },
                };
                fs::write(&path, serialize_certificate(&certificate))
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                writeln!(out, "certificate written to {}", path.display()).unwrap();
            }
            Ok(EXIT_WINNING)
        }
        Verdict::Losing(stats) => {
            writeln!(out, "LOSING").unwrap();
            writeln!(out, "nodes explored: {}", stats.nodes_explored).unwrap();
            writeln!(out, "colorings covered: {}", stats.colorings_covered).unwrap();
            Ok(EXIT_LOSING)
        }
        Verdict::Inconclusive(limit) => {
            let which = match limit {
                LimitHit::Nodes => "node budget",
                LimitHit::Timeout => "timeout",
            };
            writeln!(out, "INCONCLUSIVE ({which})").unwrap();
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn format_coloring(game: &Game, coloring: &Coloring) -> String {
    (0..game.vertex_count())
        .map(|v| format!("{}={}", game.graph().name(v), coloring.color(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn verify<O: Write>(game: &Game, cert_text: &str, out: &mut O) -> Result<i32, String> {
    let parsed = parse_certificate(cert_text).map_err(|e| e.to_string())?;
    // The certified game must live inside the target graph.
    for name in parsed.game.graph().names() {
        if game.graph().index_of(name).is_none() {
            writeln!(out, "INVALID").unwrap();
            writeln!(out, "reason: vertex {name:?} is not in the game").unwrap();
            return Ok(EXIT_LOSING);
        }
    }
    for (u, v) in parsed.game.graph().edges() {
        let a = game
            .graph()
            .index_of(parsed.game.graph().name(u))
            .unwrap();
        let b = game
            .graph()
            .index_of(parsed.game.graph().name(v))
            .unwrap();
        if !game.graph().has_edge(a, b) {
            writeln!(out, "INVALID").unwrap();
            writeln!(
                out,
                "reason: edge ({}, {}) is not in the game",
                parsed.game.graph().name(u),
                parsed.game.graph().name(v)
            )
            .unwrap();
            return Ok(EXIT_LOSING);
        }
    }
    match verify_strategy(&parsed.game, &parsed.strategy) {
        Ok(None) => {
            writeln!(out, "VALID").unwrap();
            Ok(EXIT_WINNING)
        }
        Ok(Some(coloring)) => {
            writeln!(out, "INVALID").unwrap();
            writeln!(
                out,
                "counterexample: {}",
                format_coloring(&parsed.game, &coloring)
            )
            .unwrap();
            Ok(EXIT_LOSING)
        }
        Err(e) => {
            writeln!(out, "INVALID").unwrap();
            writeln!(out, "reason: {e}").unwrap();
            Ok(EXIT_LOSING)
        }
    }
}

fn hg<O: Write, E: Write>(
    game: &Game,
    cert: Option<PathBuf>,
    out: &mut O,
    err: &mut E,
) -> Result<i32, String> {
    let report = analyze_cactus(game.graph()).map_err(|e| match e {
        CactusError::Disconnected => "graph is not connected".to_string(),
        CactusError::NotCactus(_) => "graph is not a cactus".to_string(),
    })?;
    writeln!(
        out,
        "HG = {} ({})",
        report.hg,
        statement_label(report.statement)
    )
    .unwrap();
    if let Some(path) = cert {
        match cactus_lower_bound_certificate(game.graph()) {
            Ok(certificate) => {
                fs::write(&path, serialize_certificate(&certificate))
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                writeln!(out, "certificate written to {}", path.display()).unwrap();
            }
            Err(ConstructError::TargetTooSmall) => {
                let _ = writeln!(err, "note: no lower-bound certificate for HG = 1");
            }
            Err(ConstructError::SynthesisCapExceeded(n)) => {
                let _ = writeln!(
                    err,
                    "note: certificate unavailable, a needed cycle strategy is above the synthesis cap ({n} colorings); the classification stands"
                );
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(EXIT_WINNING)
}

fn reduce<O: Write>(game: &Game, lemma: &str, at: &str, out: &mut O) -> Result<i32, String> {
    match lemma {
        "delete2" => {
            let names: Vec<&str> = at.split(',').collect();
            if names.len() != 4 {
                return Err("delete2 needs --at t,u,v,w".into());
            }
            let result = reduce_delete2(game, names[0], names[1], names[2], names[3])
                .map_err(|e| e.to_string())?;
            writeln!(out, "# removed: {}", result.removed.join(" ")).unwrap();
            for (vertex, old, new) in &result.updates {
                writeln!(out, "# hatness {vertex}: {old} -> {new}").unwrap();
            }
            write!(out, "{}", serialize_game(&result.game)).unwrap();
            Ok(EXIT_WINNING)
        }
        "h5" => {
            let candidates = reduce_h5_path(game, at).map_err(|e| e.to_string())?;
            if candidates.is_empty() {
                writeln!(out, "# no proper connected subgames").unwrap();
            }
            for (i, sub) in candidates.iter().enumerate() {
                writeln!(out, "# candidate subpath {}", i + 1).unwrap();
                write!(out, "{}", serialize_game(sub)).unwrap();
            }
            Ok(EXIT_WINNING)
        }
        other => Err(format!("unknown lemma {other:?} (use delete2 or h5)")),
    }
}
