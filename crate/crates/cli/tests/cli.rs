//! End-to-end runs of the `covers` binary and of `covers_cli::run`, compared
//! against direct library calls on the same inputs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use covers_cli::{run, EXIT_RESOURCE, EXIT_USAGE, EXIT_VALIDATION};
use covers_core::cnf::parse_dimacs;
use covers_core::covering::is_covering_set;
use covers_core::harness::random_cnf;
use covers_core::mcgarvey::{majority_graph, mcgarvey_profile, PreferenceProfile};
use covers_core::reductions::build_upward_conp_graph;
use covers_core::solver::{decide, minimal_covering_sets};
use covers_core::{Budget, Direction, DominanceGraph, Notion, ProblemKind};
use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "fixtures", name].iter().collect()
}

fn graph(name: &str) -> DominanceGraph {
    DominanceGraph::parse_dg(&fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

struct Out {
    code: u8,
    stdout: String,
    stderr: String,
}

impl Out {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn covers(args: &[&str]) -> Out {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("covers").chain(args.iter().copied()), &mut out, &mut err);
    Out { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn solve_member_on_fig1() {
    let g = fixture("fig1.dg");
    let o = covers(&["solve", "--graph", p(&g), "--direction", "up", "--notion", "minimal", "--problem", "member", "--alt", "d"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = o.json();
    assert_eq!(v["answer"], true);
    assert_eq!(v["problem"], "member");
    assert_eq!(v["direction"], "upward");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["problem", "direction", "notion", "answer", "stats"] {
        assert!(keys.contains(&k), "missing {k} in {keys:?}");
    }
}

#[test]
fn check_minimal_fig1_witness() {
    let g = fixture("fig1.dg");
    let o = covers(&["check", "--graph", p(&g), "--set", "xb1,xbp1,xb2,xbp2,xb3,xbp3,d", "--direction", "up", "--minimal"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.json()["answer"], true);
    let plain = covers(&["--plain", "check", "--graph", p(&g), "--set", "d", "--direction", "up"]);
    assert_eq!(plain.stdout.lines().next(), Some("false"));
}

#[test]
fn reduce_cons1_matches_golden() {
    let dir = TempDir::new().unwrap();
    let (gp, lp) = (dir.path().join("g.dg"), dir.path().join("l.json"));
    let o = covers(&["reduce", "--construction", "cons1", "--cnf", p(&fixture("fig3.cnf")), "--out", p(&gp), "--labels", p(&lp)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let emitted = DominanceGraph::parse_dg(&fs::read_to_string(&gp).unwrap()).unwrap();
    assert_eq!(emitted, graph("fig3.dg"));
    let labels: Value = serde_json::from_str(&fs::read_to_string(&lp).unwrap()).unwrap();
    let golden: Value = serde_json::from_str(&fs::read_to_string(fixture("fig3.labels.json")).unwrap()).unwrap();
    assert_eq!(labels, golden);
    let phi = parse_dimacs(&fs::read_to_string(fixture("fig3.cnf")).unwrap(), false).unwrap();
    assert_eq!(emitted, build_upward_conp_graph(&phi).unwrap().graph);
}

#[test]
fn solve_matches_library_for_every_problem() {
    let path = fixture("fig3.dg");
    let g = graph("fig3.dg");
    let budget = Budget::default();
    let cases: [(&[&str], ProblemKind); 7] = [
        (&["--problem", "size", "--k", "9"], ProblemKind::Size(9)),
        (&["--problem", "member", "--alt", "e1"], ProblemKind::Member(g.require("e1").unwrap())),
        (&["--problem", "member-all", "--alt", "a1"], ProblemKind::MemberAll(g.require("a1").unwrap())),
        (&["--problem", "unique"], ProblemKind::Unique),
        (&["--problem", "test", "--set", "u1,up1,u2,up2,u3,up3,a1,a2,a3"], ProblemKind::Test(g.set_of(["u1", "up1", "u2", "up2", "u3", "up3", "a1", "a2", "a3"]).unwrap())),
        (&["--problem", "find"], ProblemKind::Find),
        (&["--problem", "exists"], ProblemKind::Exists),
    ];
    for (dir, dflag) in [(Direction::Upward, "up"), (Direction::Downward, "down")] {
        for (notion, nflag) in [(Notion::InclusionMinimal, "minimal"), (Notion::MinimumSize, "minimum")] {
            for (extra, kind) in &cases {
                let mut args = vec!["solve", "--graph", p(&path), "--direction", dflag, "--notion", nflag];
                args.extend_from_slice(extra);
                let o = covers(&args);
                assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
                let v = o.json();
                let lib = decide(&g, dir, notion, kind, &budget).unwrap();
                assert_eq!(v["answer"].as_bool(), lib.verdict, "{args:?}");
                assert_eq!(v["witness"].as_str().map(str::to_string), lib.witness.map(|w| g.format_set(w)), "{args:?}");
            }
        }
    }
}

#[test]
fn solve_all_lists_the_family() {
    let path = fixture("fig3.dg");
    let g = graph("fig3.dg");
    let o = covers(&["solve", "--graph", p(&path), "--direction", "up", "--notion", "minimal", "--problem", "exists", "--all"]);
    let all: Vec<String> = o.json()["all"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect();
    let lib: Vec<String> =
        minimal_covering_sets(&g, Direction::Upward, &Budget::default()).unwrap().iter().map(|s| g.format_set(*s)).collect();
    assert_eq!(all, lib);
    assert_eq!(all.len(), 4);
}

#[test]
fn find_without_solution_is_null_and_succeeds() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("chain.dg");
    fs::write(&path, "dg 3\na\nb\nc\na b\nb c\n").unwrap();
    let g = DominanceGraph::parse_dg("dg 3\na\nb\nc\na b\nb c\n").unwrap();
    assert!(minimal_covering_sets(&g, Direction::Downward, &Budget::default()).unwrap().is_empty());
    let o = covers(&["solve", "--graph", p(&path), "--direction", "down", "--notion", "minimal", "--problem", "find"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("\"answer\": null"), "{}", o.stdout);
    assert!(o.json().get("witness").is_none());
}

#[test]
fn usage_errors_exit_64() {
    let g = fixture("fig1.dg");
    for args in [
        vec!["frobnicate"],
        vec!["solve", "--graph", p(&g), "--direction", "sideways", "--notion", "minimal", "--problem", "find"],
        vec!["solve", "--graph", p(&g), "--direction", "up", "--notion", "minimal", "--problem", "member"],
        vec!["solve", "--graph", p(&g), "--direction", "up", "--notion", "minimal", "--problem", "find", "--k", "3"],
        vec!["check", "--graph", p(&g), "--set", "d", "--direction", "up", "--minimal", "--notion", "minimum"],
        vec!["realize"],
        vec!["verify", "--claim", "CLAIM99", "--cnf", "x.cnf"],
    ] {
        let o = covers(&args);
        assert_eq!(o.code, EXIT_USAGE, "{args:?}: {}", o.stderr);
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(covers(&["--help"]).code, 0);
}

#[test]
fn validation_errors_exit_65() {
    let dir = TempDir::new().unwrap();
    let bad_dg = dir.path().join("bad.dg");
    fs::write(&bad_dg, "dg 2\na\nb\na b\nb a\n").unwrap();
    let bad_cnf = dir.path().join("bad.cnf");
    fs::write(&bad_cnf, "p cnf 1 1\n2 0\n").unwrap();
    let g = fixture("fig1.dg");
    let missing = dir.path().join("missing.dg");
    for args in [
        vec!["check", "--graph", p(&bad_dg), "--set", "a", "--direction", "up"],
        vec!["check", "--graph", p(&g), "--set", "nosuch", "--direction", "up"],
        vec!["check", "--graph", p(&missing), "--set", "a", "--direction", "up"],
        vec!["reduce", "--construction", "thm3", "--cnf", p(&bad_cnf)],
        vec!["random-cnf", "--vars", "2", "--clauses", "1", "--width", "3"],
    ] {
        let o = covers(&args);
        assert_eq!(o.code, EXIT_VALIDATION, "{args:?}: {}", o.stderr);
    }
}

#[test]
fn budget_exhaustion_exits_75() {
    let g = fixture("fig3.dg");
    let args = ["solve", "--graph", p(&g), "--direction", "up", "--notion", "minimum", "--problem", "find"];
    let mut with_flag = vec!["--budget-subsets", "3"];
    with_flag.extend_from_slice(&args);
    assert_eq!(covers(&with_flag).code, EXIT_RESOURCE);

    let bin = env!("CARGO_BIN_EXE_covers");
    let status = Command::new(bin).args(args).env("COVERS_BUDGET_SUBSETS", "3").output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_RESOURCE as i32));
    let ok = Command::new(bin).args(args).env_remove("COVERS_BUDGET_SUBSETS").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn verify_reports_and_exit_codes() {
    let fig3 = fixture("fig3.cnf");
    let o = covers(&["verify", "--claim", "CLAIM2", "--claim", "CLAIM1", "--cnf", p(&fig3)]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let reports = o.json();
    assert_eq!(reports.as_array().unwrap().len(), 2);
    assert_eq!(reports[0]["claim"], "CLAIM2");
    assert_eq!(reports[0]["verdict"], "pass");

    let skipped = covers(&["--budget-subsets", "2", "verify", "--claim", "CLAIM1", "--cnf", p(&fig3)]);
    assert_eq!(skipped.code, 2, "{}", skipped.stdout);
    assert_eq!(skipped.json()[0]["verdict"], "skipped-budget");

    // The one-clause defect of the minimum-size remark is caught by the proviso.
    let dir = TempDir::new().unwrap();
    let one = dir.path().join("one.cnf");
    fs::write(&one, "p cnf 3 1\n1 3 0\n").unwrap();
    assert_eq!(covers(&["verify", "--claim", "SIZE_3NRK", "--cnf", p(&one)]).code, EXIT_VALIDATION);

    let chain = [fixture("parity_up_1.cnf"), fixture("parity_up_2.cnf")];
    let fail = covers(&["--plain", "verify", "--claim", "CLAIM1", "--cnf", p(&chain[0]), "--cnf", p(&chain[1])]);
    assert_eq!(fail.code, EXIT_USAGE);
}

#[test]
fn verify_failure_exits_1() {
    // The first formula has a non-model falsifying a single clause, so some
    // minimum-size upward set of the m = 1 chain avoids d_1.
    let o = covers(&["verify", "--claim", "PARITY_UP", "--cnf", p(&fixture("parity_up_1.cnf")), "--cnf", p(&fixture("parity_up_2.cnf"))]);
    assert_eq!(o.code, 1, "{}", o.stdout);
    let r = &o.json()[0];
    assert_eq!(r["verdict"], "fail");
    assert!(r["counterexample"]["set"].is_string());
}

#[test]
fn realize_round_trip() {
    let dir = TempDir::new().unwrap();
    let prof = dir.path().join("p.json");
    let back = dir.path().join("back.dg");
    assert_eq!(covers(&["realize", "--graph", p(&fixture("fig1.dg")), "--out", p(&prof)]).code, 0);
    let text = fs::read_to_string(&prof).unwrap();
    let g = graph("fig1.dg");
    assert_eq!(PreferenceProfile::from_json(&text).unwrap(), mcgarvey_profile(&g));
    assert_eq!(covers(&["realize", "--profile", p(&prof), "--out", p(&back)]).code, 0);
    let again = DominanceGraph::parse_dg(&fs::read_to_string(&back).unwrap()).unwrap();
    assert_eq!(again, g);
    assert_eq!(again, majority_graph(&mcgarvey_profile(&g)).unwrap());
}

#[test]
fn random_cnf_matches_library_and_golden() {
    let o = covers(&["random-cnf", "--vars", "3", "--clauses", "4", "--width", "2", "--seed", "1"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, fs::read_to_string(fixture("random_3_4_2_seed1.cnf")).unwrap());
    assert_eq!(o.stdout, random_cnf(3, 4, 2, 1).unwrap().to_dimacs());
}

#[test]
fn binary_reads_graph_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_covers"))
        .args(["--plain", "check", "--graph", "-", "--set", "a", "--direction", "up"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"dg 2\na\nb\na b\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let g = DominanceGraph::parse_dg("dg 2\na\nb\na b\n").unwrap();
    let expected = is_covering_set(&g, g.set_of(["a"]).unwrap(), Direction::Upward).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().next(), Some(expected.to_string().as_str()));
}
