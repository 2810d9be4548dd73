//! End-to-end checks of the command-line surface: exit codes, output
//! shapes, and the witness/check loop.

use std::path::Path;
use std::process::{Command, Output};

fn mec2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mec2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

#[test]
fn gen_solve_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("petersen.gr");
    let coloring_path = dir.path().join("petersen.col");

    let gen = mec2(&["gen", "petersen"]);
    assert!(gen.status.success());
    write(&graph_path, &stdout(&gen));

    for engine in ["auto", "brute", "cyclespace", "branchdp"] {
        let solve = mec2(&[
            "solve",
            graph_path.to_str().unwrap(),
            "--engine",
            engine,
            "-o",
            coloring_path.to_str().unwrap(),
        ]);
        assert!(solve.status.success(), "engine {engine}");
        assert!(stdout(&solve).contains("value 9"), "engine {engine}: {}", stdout(&solve));

        let check = mec2(&["check", graph_path.to_str().unwrap(), coloring_path.to_str().unwrap()]);
        assert!(check.status.success());
        assert!(stdout(&check).starts_with("valid"));
    }
}

#[test]
fn json_schema_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("c4.gr");
    write(&graph_path, "p 4 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3\n");
    let out = mec2(&["solve", graph_path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["value"], 4);
    assert!(parsed["engine"].is_string());
    assert!(parsed["millis"].is_number());
    assert!(parsed.get("coloring_path").is_none());

    let coloring_path = dir.path().join("c4.col");
    let out = mec2(&[
        "solve",
        graph_path.to_str().unwrap(),
        "--json",
        "-o",
        coloring_path.to_str().unwrap(),
    ]);
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["coloring_path"], coloring_path.to_str().unwrap());
}

#[test]
fn decide_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("p.gr");
    write(&graph_path, &stdout(&mec2(&["gen", "petersen"])));
    let yes = mec2(&["decide", graph_path.to_str().unwrap(), "--t", "9"]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(stdout(&yes).trim(), "yes");
    let no = mec2(&["decide", graph_path.to_str().unwrap(), "--t", "10"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(stdout(&no).trim(), "no");
}

#[test]
fn check_detects_violations_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("c4.gr");
    write(&graph_path, "p 4 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3\n");
    let bad = dir.path().join("bad.col");
    // Edges (0,1) and (0,3) share vertex 0 and both claim color 1.
    write(&bad, "c 0 1\nc 1 1\nc 2 2\nc 3 2\nv 4\n");
    let out = mec2(&["check", graph_path.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("invalid: vertex 0"), "{}", stdout(&out));

    let malformed = dir.path().join("malformed.col");
    write(&malformed, "c 0 7\nv 1\n");
    let out = mec2(&["check", graph_path.to_str().unwrap(), malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn deletion_commands_emit_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("k4.gr");
    write(&graph_path, &stdout(&mec2(&["gen", "k4"])));

    let out = mec2(&["delete-edges", graph_path.to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("X: "));
    assert_eq!(first.split_whitespace().count(), 3, "two removed edges: {first}");
    // The residual witness is itself parseable and checkable against the
    // residual graph.
    assert!(text.lines().any(|l| l == "v 4"));

    let no = mec2(&["delete-edges", graph_path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(stdout(&no).trim(), "no");

    let out = mec2(&["delete-vertices", graph_path.to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let no = mec2(&["delete-vertices", graph_path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn check_accepts_deletion_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("k4.gr");
    write(&graph_path, &stdout(&mec2(&["gen", "k4"])));
    let out = mec2(&["delete-edges", graph_path.to_str().unwrap(), "--k", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    let removed: Vec<usize> = lines
        .next()
        .unwrap()
        .trim_start_matches("X:")
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    let witness: String = lines.map(|l| format!("{l}\n")).collect();

    // Rebuild the residual graph and feed both files to `check`.
    let g = mec2::formats::parse_graph(&std::fs::read_to_string(&graph_path).unwrap()).unwrap();
    let (residual, _) = g.edge_subgraph(|e| !removed.contains(&e));
    let residual_path = dir.path().join("residual.gr");
    write(&residual_path, &mec2::formats::emit_graph(&residual));
    let witness_path = dir.path().join("residual.col");
    write(&witness_path, &witness);
    let check = mec2(&["check", residual_path.to_str().unwrap(), witness_path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0), "{}", stdout(&check));
}

#[test]
fn threads_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("c5.gr");
    write(&graph_path, &stdout(&mec2(&["gen", "cycle", "--n", "5"])));
    let out = Command::new(env!("CARGO_BIN_EXE_mec2"))
        .args(["solve", graph_path.to_str().unwrap(), "--engine", "cyclespace"])
        .env("MEC2_THREADS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("value 4"));
}

#[test]
fn solve_reads_stdin_and_reports_welfare() {
    use std::io::Write as _;
    let mut child = Command::new(env!("CARGO_BIN_EXE_mec2"))
        .args(["solve", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"tasks 4 2 2\ntask 0 1\ntask 2 3\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(text.contains("tasks_executed 2"));
    assert!(text.contains("social_welfare 4"));
}

#[test]
fn bd_and_td_files_drive_the_branchdp_engine() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("c4.gr");
    write(&graph_path, "p 4 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3\n");
    let td_path = dir.path().join("c4.td");
    write(&td_path, "td 2 2\nb 0 0 1 2\nb 1 0 2 3\nt 0 1\n");
    let out = mec2(&[
        "solve",
        graph_path.to_str().unwrap(),
        "--engine",
        "branchdp",
        "--td",
        td_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("value 4"));

    // Emit a branch decomposition through the library, then feed it back.
    let g = mec2::formats::parse_graph(&std::fs::read_to_string(&graph_path).unwrap()).unwrap();
    let bd = mec2::decomp::heuristic_branch_decomposition(&g).unwrap();
    let bd_path = dir.path().join("c4.bd");
    write(&bd_path, &mec2::formats::emit_branchdecomp(&bd));
    let out = mec2(&[
        "solve",
        graph_path.to_str().unwrap(),
        "--engine",
        "branchdp",
        "--bd",
        bd_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("value 4"));
}

#[test]
fn bench_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("a_c4.gr"), "p 4 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3\n");
    write(&dir.path().join("b_c5.gr"), "p 5 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 0 4\n");
    let out = mec2(&[
        "bench",
        dir.path().to_str().unwrap(),
        "--engines",
        "brute,cyclespace",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "instance,n,m,engine,value,millis");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("a_c4,4,4,brute,4,"));
    assert!(rows[1].starts_with("a_c4,4,4,cyclespace,4,"));
    assert!(rows[2].starts_with("b_c5,5,5,brute,4,"));
}

#[test]
fn gen_rejects_unknown_names() {
    let out = mec2(&["gen", "dodecahedron"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown graph name"));
}

#[test]
fn threads_flag_keeps_results_identical() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("p.gr");
    write(&graph_path, &stdout(&mec2(&["gen", "petersen"])));
    let a = mec2(&["solve", graph_path.to_str().unwrap(), "--engine", "cyclespace"]);
    let b = mec2(&[
        "solve",
        graph_path.to_str().unwrap(),
        "--engine",
        "cyclespace",
        "--threads",
        "4",
    ]);
    let strip_millis = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("millis"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip_millis(&stdout(&a)), strip_millis(&stdout(&b)));
}
