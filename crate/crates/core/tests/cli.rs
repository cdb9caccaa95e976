use std::path::PathBuf;
use std::process::Command;

use powidx::report::{parse_report, Format, IndexReport};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn powidx(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_powidx")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("")
}

#[test]
fn index_examples() {
    let ghat = fixture("ghat.json");
    let (code, out, _) = powidx(&["index", "--game", ghat.to_str().unwrap(), "--index", "ssi", "--method", "exact"]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "(1/6, 1/3, 1/2)");

    let (code, out, _) = powidx(&["index", "--game", fixture("majority3.json").to_str().unwrap(), "--index", "ssi"]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "(1/3, 1/3, 1/3)");

    let (code, out, _) = powidx(&["index", "--game", fixture("jk32.json").to_str().unwrap(), "--index", "bzi"]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "(8/9, 1/9, 1/9)");
}

#[test]
fn check_examples() {
    let (code, out, _) = powidx(&["check", "--game", fixture("threshold06.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("proper") && l.contains("yes")), "{out}");
    assert!(out.lines().any(|l| l.starts_with("strong") && l.contains(" no ")), "{out}");

    let (_, out, _) = powidx(&["check", "--game", fixture("w2110.json").to_str().unwrap()]);
    assert!(out.contains("null voters    {3}"), "{out}");

    let (_, out, _) = powidx(&["check", "--game", fixture("linear.json").to_str().unwrap()]);
    assert!(out.lines().any(|l| l.starts_with("constant-sum") && l.contains("yes")), "{out}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"class\": \"binary\",\n  \"kind\": \"weighted\",\n  \"quota\": 2\n  \"weights\": [1]\n}\n").unwrap();
    let (code, _, err) = powidx(&["index", "--game", bad.to_str().unwrap()]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("line 5"), "{err}");

    let big = dir.path().join("big.json");
    std::fs::write(&big, r#"{"class": "continuous", "kind": "median", "n": 9}"#).unwrap();
    let (code, _, err) = powidx(&["index", "--game", big.to_str().unwrap(), "--samples", "100"]);
    assert_eq!(code, 3, "{err}");

    let (code, _, _) = powidx(&["index", "--game", fixture("jk32.json").to_str().unwrap(), "--index", "nucleolus"]);
    assert_eq!(code, 4);

    let (code, out, _) = powidx(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("reproduce"));
    let (code, _, _) = powidx(&["index", "--no-such-flag"]);
    assert_eq!(code, 2);
}

#[test]
fn json_reports_round_trip() {
    let cases: [&[&str]; 3] = [
        &["--index", "ssi", "--game", "gtilde.json"],
        &["--index", "bzi", "--game", "median5321.json", "--samples", "20000"],
        &["--index", "nucleolus", "--game", "x1x2sq.json", "--method", "mc", "--samples", "20000"],
    ];
    for case in cases {
        let mut args = vec!["index".to_string(), "--output".into(), "json".into()];
        for (k, a) in case.iter().enumerate() {
            if k > 0 && case[k - 1] == "--game" {
                args.push(fixture(a).to_str().unwrap().to_string());
            } else {
                args.push(a.to_string());
            }
        }
        let refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let (code, out, err) = powidx(&refs);
        assert_eq!(code, 0, "{err}");
        let report: IndexReport = parse_report(&out).unwrap();
        assert_eq!(report.render(Format::Json), out);
    }
}

#[test]
fn directory_batch_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["ghat.json", "majority3.json"] {
        std::fs::copy(fixture(name), dir.path().join(name)).unwrap();
    }
    let (code, out, _) = powidx(&["index", "--game", dir.path().to_str().unwrap(), "--output", "json"]);
    assert_eq!(code, 0);
    let all: Vec<IndexReport> = serde_json::from_str(&out).unwrap();
    assert_eq!(all.len(), 2);
    assert_eq!(all[0].game, "ghat");

    let (_, out, _) = powidx(&["index", "--game", fixture("ghat.json").to_str().unwrap(), "--output", "csv"]);
    assert_eq!(out.lines().nth(2).unwrap(), format!("2,{},1/3,", 1.0f64 / 3.0));
}

#[test]
fn reproduce_filters_and_repeats() {
    let (code, out, _) = powidx(&["reproduce", "--only", "jk"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| !l.starts_with("[FAIL]")));
    assert!(out.lines().filter(|l| l.starts_with('[')).all(|l| l.contains("] jk: ")));

    let a = powidx(&["reproduce", "--only", "median", "--seed", "7"]);
    let b = powidx(&["reproduce", "--only", "median", "--seed", "7"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    let (code, _, _) = powidx(&["reproduce", "--only", "nothing-matches-this"]);
    assert_eq!(code, 2);
}
