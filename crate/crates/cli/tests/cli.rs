use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn epicert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epicert")).args(args).output().expect("spawn epicert")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decide_both_follows_the_fundamental_verdict() {
    let o = epicert(&["decide", path_str(&fixture("five_generic_pairs.csv"))]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["fundamental"]["verdict"], "EXISTS");
    assert_eq!(v["essential"]["verdict"], "UNDECIDED");
    assert_eq!(v["essential"]["case"], "RANGE_5_7");
}

#[test]
fn text_output_names_the_branch() {
    let o = epicert(&["decide-f", "--format", "text", path_str(&fixture("cube_no_witness.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("NOT_EXISTS via CUBE_NO_MINOR"));
}

#[test]
fn timings_appear_only_on_request() {
    let f = fixture("cube_with_witness.csv");
    assert!(!stdout(&epicert(&["decide-f", path_str(&f)])).contains("timings"));
    assert!(stdout(&epicert(&["decide-f", "--timings", path_str(&f)])).contains("fundamental_ms"));
}

#[test]
fn witness_prints_only_the_matrix() {
    let o = epicert(&["witness", path_str(&fixture("cube_with_witness.csv"))]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "EXACT");
    assert_eq!(v["matrix"], serde_json::json!([["0", "1", "0"], ["0", "0", "1"], ["0", "0", "0"]]));
    let none = epicert(&["witness", path_str(&fixture("cube_no_witness.json"))]);
    assert_eq!(none.status.code(), Some(1));
    assert!(stdout(&none).is_empty());
}

#[test]
fn verify_accepts_the_known_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "0 1 0\n0 0 1\n0 0 0\n").unwrap();
    let o = epicert(&["verify", path_str(&fixture("cube_with_witness.csv")), "--matrix", path_str(&good)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["fundamental"], true);
    assert_eq!(v["rank"], 2);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"[["1", 0, 0], [0, 1, 0], [0, 0, 1]]"#).unwrap();
    let o = epicert(&["verify", path_str(&fixture("cube_with_witness.csv")), "--matrix", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_64_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.csv");
    std::fs::write(&f, "1,2,3,4\n1,two,3,4\n").unwrap();
    let o = epicert(&["decide", path_str(&f)]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "# nothing\n").unwrap();
    assert_eq!(epicert(&["decide", path_str(&empty)]).status.code(), Some(64));
    assert_eq!(epicert(&["decide", path_str(&dir.path().join("missing.csv"))]).status.code(), Some(64));
}

#[test]
fn bad_flags_exit_64() {
    let f = fixture("cube_with_witness.csv");
    assert_eq!(epicert(&["decide", "--grid-radius", "1", path_str(&f)]).status.code(), Some(64));
    assert_eq!(epicert(&["decide", "--tol-res", "-1", path_str(&f)]).status.code(), Some(64));
    assert_eq!(epicert(&["no-such-command"]).status.code(), Some(64));
}

#[test]
fn input_format_flag_overrides_the_extension() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("pairs.dat");
    std::fs::write(&f, r#"{"correspondences": [{"x": ["3", "0"], "y": ["2", "0"]}]}"#).unwrap();
    assert_eq!(epicert(&["decide-f", path_str(&f)]).status.code(), Some(64));
    assert_eq!(epicert(&["decide-f", "--input-format", "json", path_str(&f)]).status.code(), Some(0));
}

#[test]
fn batch_mode_reports_every_file() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["cube_no_witness.json", "cube_with_witness.csv", "five_generic_pairs.csv"] {
        std::fs::copy(fixture(name), dir.path().join(name)).unwrap();
    }
    let out = dir.path().join("reports");
    let o = epicert(&["decide-f", path_str(dir.path()), "--out-dir", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let files = v["files"].as_array().unwrap();
    assert_eq!(files.len(), 3);
    assert_eq!(files[0]["file"], "cube_no_witness.json");
    assert_eq!(files[0]["exit_code"], 1);
    assert_eq!(v["counts"]["exists"], 2);
    assert_eq!(v["counts"]["not_exists"], 1);
    assert!(out.join("cube_with_witness.report.json").exists());
    let again = epicert(&["decide-f", path_str(dir.path())]);
    assert_eq!(stdout(&again), stdout(&o));

    std::fs::write(dir.path().join("zz_broken.csv"), "1,2\n").unwrap();
    let o = epicert(&["decide-f", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(64));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counts"]["input_error"], 1);
}

#[test]
fn classify_reports_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("six.csv");
    std::fs::write(&f, "0,0,1,1\n1,3,2,2\n4,1,3,3\n2,7,4,4\n5,5,-1,-1\n-3,2,7,7\n").unwrap();
    let o = epicert(&["classify", path_str(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["geometry"]["y"], "COLLINEAR");
    assert_eq!(v["classification"]["rank_one_kernel"]["certificate"]["kind"], "SIX");
}
