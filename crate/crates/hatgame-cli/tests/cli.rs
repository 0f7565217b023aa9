//! End-to-end checks of the command surface: documents in, reports and
//! exit codes out.

use std::fs;

use hatgame_cli::{run_cli, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_LOSING, EXIT_USAGE, EXIT_WINNING};

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("hatgame")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_doc(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const C4_STAR3: &str = "vertex a 3\nvertex b 3\nvertex c 3\nvertex d 3\n\
edge a b\nedge b c\nedge c d\nedge d a\n";

const PATH_252: &str = "vertex a 2\nvertex b 5\nvertex c 2\nedge a b\nedge b c\n";

const BOWTIE: &str = "vertex a 4\nvertex b 4\nvertex c 4\nvertex d 4\nvertex e 4\n\
edge a b\nedge b c\nedge c a\nedge c d\nedge d e\nedge e c\n";

#[test]
fn classify_c4_star3_cites_condition_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "c4.game", C4_STAR3);
    let (code, out, _) = run(&["classify", &file]);
    assert_eq!(code, EXIT_WINNING);
    assert_eq!(out, "WINNING (Theorem 1, Condition 1)\n");
}

#[test]
fn classify_losing_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(
        &dir,
        "c5.game",
        "vertex a 3\nvertex b 3\nvertex c 3\nvertex d 3\nvertex e 3\n\
edge a b\nedge b c\nedge c d\nedge d e\nedge e a\n",
    );
    let (code, out, _) = run(&["classify", &file]);
    assert_eq!(code, EXIT_LOSING);
    assert_eq!(out, "LOSING (Theorem 1: no condition holds)\n");
}

#[test]
fn classify_path() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "p.game", PATH_252);
    let (code, out, _) = run(&["classify", &file]);
    assert_eq!(code, EXIT_LOSING);
    assert_eq!(out, "LOSING (path reduction)\n");
}

#[test]
fn classify_cactus_with_constant_hatness() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "bowtie.game", BOWTIE);
    let (code, out, _) = run(&["classify", &file]);
    assert_eq!(code, EXIT_WINNING);
    assert_eq!(out, "WINNING (Theorem 2, Statement 1: HG = 4)\n");
}

#[test]
fn classify_rejects_mixed_hatness_cactus() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(
        &dir,
        "mixed.game",
        "vertex a 2\nvertex b 3\nvertex c 4\nvertex d 2\n\
edge a b\nedge b c\nedge c a\nedge c d\n",
    );
    let (code, _, err) = run(&["classify", &file]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("constant hatness"));
}

#[test]
fn solve_reports_losing_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "p.game", PATH_252);
    let (code, out, _) = run(&["solve", &file]);
    assert_eq!(code, EXIT_LOSING);
    assert!(out.starts_with("LOSING\n"));
}

#[test]
fn solve_writes_verifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "c4.game", C4_STAR3);
    let cert = dir.path().join("c4.cert");
    let cert_path = cert.to_string_lossy().into_owned();
    let (code, out, _) = run(&["solve", &file, "--cert", &cert_path]);
    assert_eq!(code, EXIT_WINNING);
    assert!(out.starts_with("WINNING\n"));

    let (code, out, _) = run(&["verify", &file, "--cert", &cert_path]);
    assert_eq!(code, EXIT_WINNING);
    assert_eq!(out, "VALID\n");
}

#[test]
fn solve_inconclusive_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(
        &dir,
        "c5.game",
        "vertex a 3\nvertex b 3\nvertex c 3\nvertex d 3\nvertex e 3\n\
edge a b\nedge b c\nedge c d\nedge d e\nedge e a\n",
    );
    let (code, out, _) = run(&["solve", &file, "--max-nodes", "5"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert_eq!(out, "INCONCLUSIVE (node budget)\n");
}

#[test]
fn verify_rejects_tampered_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = write_doc(&dir, "k2.game", "vertex a 2\nvertex b 2\nedge a b\n");
    let cert = write_doc(
        &dir,
        "bad.cert",
        "game\nvertex a 2\nvertex b 2\nedge a b\n\
strategy a\n0 -> 0\n1 -> 0\nstrategy b\n0 -> 0\n1 -> 0\n",
    );
    let (code, out, _) = run(&["verify", &k2, "--cert", &cert]);
    assert_eq!(code, EXIT_LOSING);
    assert!(out.starts_with("INVALID\n"));
    assert!(out.contains("counterexample: a=1 b=1"));
}

#[test]
fn verify_rejects_certificate_outside_the_graph() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = write_doc(&dir, "k2.game", "vertex a 2\nvertex b 2\nedge a b\n");
    let cert = write_doc(
        &dir,
        "alien.cert",
        "game\nvertex x 1\nstrategy x\n- -> 0\n",
    );
    let (code, out, _) = run(&["verify", &k2, "--cert", &cert]);
    assert_eq!(code, EXIT_LOSING);
    assert!(out.contains("not in the game"));
}

#[test]
fn hg_bowtie_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "bowtie.game", BOWTIE);
    let cert = dir.path().join("bowtie.cert");
    let cert_path = cert.to_string_lossy().into_owned();
    let (code, out, _) = run(&["hg", &file, "--cert", &cert_path]);
    assert_eq!(code, EXIT_WINNING);
    assert!(out.starts_with("HG = 4 (Theorem 2, Statement 1)\n"));

    // The certificate verifies against the same graph.
    let (code, out, _) = run(&["verify", &file, "--cert", &cert_path]);
    assert_eq!(code, EXIT_WINNING, "{out}");
    assert_eq!(out, "VALID\n");
}

#[test]
fn hg_single_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "k1.game", "vertex a 2\n");
    let (code, out, _) = run(&["hg", &file]);
    assert_eq!(code, EXIT_WINNING);
    assert_eq!(out, "HG = 1 (single vertex)\n");
}

#[test]
fn hg_rejects_non_cactus() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(
        &dir,
        "k4.game",
        "vertex a 2\nvertex b 2\nvertex c 2\nvertex d 2\n\
edge a b\nedge a c\nedge a d\nedge b c\nedge b d\nedge c d\n",
    );
    let (code, _, err) = run(&["hg", &file]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("not a cactus"));
}

#[test]
fn reduce_delete2_prints_reduced_document() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(
        &dir,
        "c4.game",
        "vertex t 5\nvertex u 2\nvertex v 3\nvertex w 5\n\
edge t u\nedge u v\nedge v w\nedge w t\n",
    );
    let (code, out, _) = run(&["reduce", &file, "--lemma", "delete2", "--at", "t,u,v,w"]);
    assert_eq!(code, EXIT_WINNING);
    assert!(out.contains("# removed: u v"));
    assert!(out.contains("# hatness t: 5 -> 3"));
    assert!(out.contains("# hatness w: 5 -> 3"));
    assert!(out.contains("vertex w 3\nvertex t 3\nedge w t\n"));
}

#[test]
fn reduce_h5_prints_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "p.game", PATH_252);
    let (code, out, _) = run(&["reduce", &file, "--lemma", "h5", "--at", "b"]);
    assert_eq!(code, EXIT_WINNING);
    assert!(out.contains("# candidate subpath 1"));
    assert!(out.contains("# candidate subpath 2"));
}

#[test]
fn export_cnf_writes_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "k2.game", "vertex a 2\nvertex b 2\nedge a b\n");
    let out_path = dir.path().join("k2.cnf");
    let out_str = out_path.to_string_lossy().into_owned();
    let (code, out, _) = run(&["export-cnf", &file, "-o", &out_str]);
    assert_eq!(code, EXIT_WINNING);
    assert!(out.contains("8 variables, 12 clauses"));
    let text = fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("p cnf 8 12"));
    assert!(text.starts_with("c map 1 a 0 0\n"));
}

#[test]
fn usage_error_is_64() {
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn missing_file_is_65() {
    let (code, _, err) = run(&["classify", "/nonexistent/x.game"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("cannot read"));
}

#[test]
fn malformed_document_is_65_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "bad.game", "vertex a 2\nedge a b\n");
    let (code, _, err) = run(&["classify", &file]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 2"));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_doc(&dir, "c4.game", C4_STAR3);
    let a = run(&["solve", &file]);
    let b = run(&["solve", &file]);
    assert_eq!(a, b);
}
