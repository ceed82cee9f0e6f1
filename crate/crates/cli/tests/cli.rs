use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use stripecover::io;

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

fn example(name: &str) -> String {
    examples().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stripecover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn verify_all_on_bundled_corpus() {
    let corpus = examples().display().to_string();
    let o = run(&["verify", "--all", "--seed", "7", "--corpus", &corpus]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("# stripecover verify seed=7\n"));
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 12 + 8);
    assert!(!out.contains("FAIL"));
}

#[test]
fn malformed_breakpoints_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"axis":1,"delta":["1","2"],"curves":[
            {"breakpoints":[["1","1"],["0","1"]],"values":[["0","1"],["0","1"]],
             "left_slope":["0","1"],"right_slope":["0","1"],"domain":null}]}"#,
    )
    .unwrap();
    let o = run(&["uncross", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("$.curves[0].breakpoints"), "{}", stderr(&o));
}

#[test]
fn syntax_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"dim\": 1,\n  \"points\": [[1]\n}").unwrap();
    let o = run(&["extend", "--samples", path.to_str().unwrap(), "--query", "0"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn disjointify_requires_ordered_curves() {
    let o = run(&["disjointify", &example("arrangement.json")]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("precondition") && err.contains("--uncross-first"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let svg = dir.path().join("out.svg");
    let o = run(&[
        "disjointify",
        &example("arrangement.json"),
        "--uncross-first",
        "-o",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let a = io::arrangement_from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(a.is_ordered() && a.has_disjoint_interiors());
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let o = run(&[
        "covers",
        "--stripes",
        out.to_str().unwrap(),
        "--original",
        &example("arrangement.json"),
        "--samples",
        "300",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("checked 300 points: all covered"));
}

#[test]
fn uncovered_point_is_a_verification_failure() {
    let o = run(&["covers", "--stripes", &example("arrangement_disjoint.json"), "--point", "0,5"]);
    assert_eq!(code(&o), 2);
    let witness: serde_json::Value = serde_json::from_str(stdout(&o).lines().nth(1).unwrap()).unwrap();
    assert_eq!(witness["point"], "0,5");
    assert!(witness["reproduce"].as_str().unwrap().contains("--point 0,5"));
}

#[test]
fn phi_evaluation() {
    // stripes of thickness 1/4 around 1/2 and around a curve from 1 to 5/4
    let o = run(&[
        "phi",
        "--arrangement",
        &example("arrangement_disjoint.json"),
        "--eval",
        "1/2,2",
        "--eval",
        "0,1/2",
        "--eval",
        "0,-1",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "3/2\n3/8\n-1\n");
}

#[test]
fn phi_reports_are_deterministic() {
    let args = [
        "phi",
        "--arrangement",
        &example("arrangement_disjoint.json"),
        "--verify",
        "lipschitz",
        "--samples",
        "400",
        "--seed",
        "11",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# stripecover phi --verify lipschitz --samples 400 --seed 11\n"));
    assert!(text.contains("\nlipschitz,400,"));

    let o = run(&[
        "phi",
        "--arrangement",
        &example("arrangement_disjoint.json"),
        "--verify",
        "univariate",
        "--samples",
        "20",
    ]);
    assert_eq!(code(&o), 0);
    // phi minus the centre line: -delta/2 on the lower stripe, -3 delta/2 on the upper
    assert!(stdout(&o).contains("univariate:0,20,-1/8,"));
    assert!(stdout(&o).contains("univariate:1,20,-3/8,"));
}

#[test]
fn verify_subset_is_byte_identical() {
    let args = ["verify", "--criterion", "9", "--criterion", "12", "--seed", "3"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# stripecover verify seed=3\n"));
}

#[test]
fn null1d_commands() {
    let cover = example("cover.json");
    let o = run(&["null1d", "phi", "--cover", &cover, "--eval", "1", "--eval", "9/20", "--eval", "11/20"]);
    assert_eq!(stdout(&o), "4/5\n2/5\n2/5\n");
    let o = run(&["null1d", "deficit", "--cover", &cover]);
    assert_eq!(stdout(&o), "max_deficit 1/5\nargmax 3/5\ncover_length 1/5\n");
    let o = run(&["null1d", "phi", "--cover", &cover]);
    let phi = io::pl_from_json(&stdout(&o)).unwrap();
    assert!(phi.slopes().all(|s| *s == stripecover::scalar::int(0) || *s == stripecover::scalar::int(1)));

    let o = run(&[
        "null1d",
        "derive",
        "--measure",
        &example("measure.json"),
        "--weight",
        &example("step_weight.json"),
        "--function",
        &example("pl_function.json"),
        "--eval",
        "1/4",
        "--eval",
        "1/3",
        "--eval",
        "0",
        "--eval",
        "3/4",
    ]);
    // weight 2 times slope -1 on the density; atom at 1/3; kink at 0; no density past 1/2
    assert_eq!(stdout(&o), "-2\n0\nundefined\n0\n");
}

#[test]
fn extend_queries() {
    let s = example("samples.json");
    let o = run(&["extend", "--samples", &s, "--query", "0,0", "--query", "1,0"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let vals: Vec<f64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    assert!((vals[0] - 0.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
    let o = run(&["extend", "--samples", &s, "--query", "5,5", "--bounded"]);
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 1.0);
    let o = run(&["extend", "--samples", &s, "--query", "0,0", "--lip", "1/10"]);
    assert_eq!(code(&o), 1);
    let o = run(&["extend", "--samples", &s, "--query", "0"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn projections() {
    let o = run(&["project", "--set", "four-corner", "--depth", "2", "--dir", "1,0", "--dir", "1,-1"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<&str> = std::str::from_utf8(&o.stdout).unwrap().lines().collect();
    assert_eq!(rows[0], "set,depth,p,q,exact,normalized");
    assert!(rows[1].starts_with("four-corner,2,1,0,1/4,"));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("report.csv");
    let o = run(&["project", "--report", "--depths", "1,2,3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 6 * 3 + 6);
    assert!(text.contains("control-diagonal,,1,1,2,1.414213562373"));

    let o = run(&["project", "--squares", &example("squares.json")]);
    assert!(stdout(&o).contains("custom,1,1,0,1/2,"));
    let o = run(&["project", "--set", "four-corner", "--depth", "11"]);
    assert_eq!(code(&o), 1);
    let o = run(&["project", "--set", "four-corner", "--dir", "2,2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["verify"])), 1);
    assert_eq!(code(&run(&["phi", "--arrangement", &example("arrangement_disjoint.json")])), 1);
    assert_eq!(code(&run(&["uncross", "/nonexistent/file.json"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_stripecover"))
        .args(["verify", "--criterion", "12"])
        .env("STRIPECOVER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}
