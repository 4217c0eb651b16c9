use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(format!("{name}.json"))
}

fn momentlab(args: &[&str], threads: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_momentlab"));
    c.args(args);
    match threads {
        Some(t) => c.env("MOMENTLAB_THREADS", t),
        None => c.env_remove("MOMENTLAB_THREADS"),
    };
    c.output().unwrap()
}

fn run(name: &str, out: &Path, threads: Option<&str>) -> Output {
    momentlab(
        &[
            "run",
            scenario(name).to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        threads,
    )
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

#[test]
fn segment_run_writes_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run("segment", tmp.path(), None);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report = std::fs::read_to_string(tmp.path().join("report.txt")).unwrap();
    for needle in [
        "vertex (1, 0)",
        "vertex (0, 1)",
        "rational: yes",
        "indices: {0,2}",
        "null ideal: span{(1, 1)}",
    ] {
        assert!(report.contains(needle), "missing {needle}");
    }
    for f in ["contact.csv", "sample.csv", "sample.svg", "image.svg"] {
        assert!(tmp.path().join(f).exists(), "missing {f}");
    }
}

#[test]
fn irrational_report() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run("irrational", tmp.path(), None).status.code(), Some(0));
    let report = std::fs::read_to_string(tmp.path().join("report.txt")).unwrap();
    assert!(report
        .contains("rational: no; quasilattice rank 2 of expected 1; null subgroup not closed"));
    assert!(report.contains("vertex (0, 1/2*sqrt2)"));
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    for name in ["segment", "circle", "deform", "contact"] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        assert_eq!(run(name, a.path(), Some("1")).status.code(), Some(0));
        assert_eq!(run(name, b.path(), Some("4")).status.code(), Some(0));
        assert_eq!(files(a.path()), files(b.path()), "{name}");
    }
}

#[test]
fn seed_override_changes_sampled_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let path = scenario("circle");
    let p = path.to_str().unwrap();
    let oa = momentlab(
        &["run", p, "--out", a.path().to_str().unwrap(), "--seed", "1"],
        None,
    );
    let ob = momentlab(
        &["run", p, "--out", b.path().to_str().unwrap(), "--seed", "2"],
        None,
    );
    assert_eq!((oa.status.code(), ob.status.code()), (Some(0), Some(0)));
    let ra = std::fs::read_to_string(a.path().join("report.txt")).unwrap();
    assert!(ra.contains("seed: 1"));
    assert_ne!(
        std::fs::read(a.path().join("sample.csv")).unwrap(),
        std::fs::read(b.path().join("sample.csv")).unwrap()
    );
}

#[test]
fn malformed_scenario_exits_2_naming_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "bad", "model": {"torus_rank": 2, "weights": [[1, 0], [0, 1]], "lambda": ["x", 0]}}"#).unwrap();
    for cmd in ["validate", "run"] {
        let o = momentlab(&[cmd, bad.to_str().unwrap()], None);
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains("model.lambda[0]"));
    }
    std::fs::write(
        &bad,
        r#"{"name": "bad", "model": {"torus_rank": 2, "wieghts": []}}"#,
    )
    .unwrap();
    let o = momentlab(&["validate", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wieghts"));
}

#[test]
fn validate_accepts_every_shipped_scenario() {
    for e in std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")).unwrap() {
        let p = e.unwrap().path();
        let o = momentlab(&["validate", p.to_str().unwrap()], None);
        assert_eq!(o.status.code(), Some(0), "{}", p.display());
    }
}

#[test]
fn unwritable_output_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = run("product", &blocker.join("sub"), None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_thread_cap_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        run("product", tmp.path(), Some("zero")).status.code(),
        Some(2)
    );
    assert_eq!(run("product", tmp.path(), Some("0")).status.code(), Some(2));
}

#[test]
fn missing_file_exits_2() {
    assert_eq!(
        momentlab(&["validate", "/nonexistent/scenario.json"], None)
            .status
            .code(),
        Some(2)
    );
}
