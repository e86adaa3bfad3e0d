use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qwt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwt")).args(args).output().expect("spawn qwt")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_and_query_running_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("text");
    let index = dir.path().join("text.qwt");
    std::fs::write(&input, "accessandselect").unwrap();
    let built = json(&qwt(&["build", path(&input), "-o", path(&index), "--geometry", "256", "--prefetch"]));
    assert_eq!(built["n"], 15);
    assert_eq!(built["sigma"], 8);
    assert_eq!(built["levels"], 2);

    let rank = json(&qwt(&["query", path(&index), "--kind", "rank", "--pos", "11", "--sym", "s"]));
    assert_eq!(rank["answer"], 3);
    let select = json(&qwt(&["query", path(&index), "--kind", "select", "--pos", "2", "--sym", "a"]));
    assert_eq!(select["answer"], 7);
    let access = json(&qwt(&["query", path(&index), "--kind", "access", "--pos", "14"]));
    assert_eq!(access["char"], "t");
    let absent = json(&qwt(&["query", path(&index), "--kind", "rank", "--pos", "15", "--sym", "z"]));
    assert_eq!(absent["answer"], 0);
    let by_value = json(&qwt(&["query", path(&index), "--kind", "rank", "--pos", "15", "--sym", "99"]));
    assert_eq!(by_value["answer"], 3);

    let stats = json(&qwt(&["stats", path(&index)]));
    assert_eq!(stats["kind"], "plain");
    assert_eq!(stats["tail_level"], true);
    assert_eq!(stats["block"], 256);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing");
    assert_eq!(qwt(&["stats", path(&missing)]).status.code(), Some(2));
    assert_eq!(qwt(&["build", path(&missing), "-o", "x"]).status.code(), Some(2));

    let empty = dir.path().join("empty");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(qwt(&["build", path(&empty), "-o", path(&dir.path().join("e.qwt"))]).status.code(), Some(1));

    let garbage = dir.path().join("garbage.qwt");
    std::fs::write(&garbage, "not an index").unwrap();
    assert_eq!(qwt(&["stats", path(&garbage)]).status.code(), Some(1));

    let input = dir.path().join("t");
    let index = dir.path().join("t.qwt");
    std::fs::write(&input, "abracadabra").unwrap();
    assert!(qwt(&["build", path(&input), "-o", path(&index)]).status.success());
    assert_eq!(qwt(&["query", path(&index), "--kind", "access", "--pos", "11"]).status.code(), Some(1));
    assert_eq!(qwt(&["query", path(&index), "--kind", "select", "--pos", "0", "--sym", "a"]).status.code(), Some(1));
    assert_eq!(qwt(&["build", path(&input), "-o", "x", "--geometry", "1024"]).status.code(), Some(1));
    assert_eq!(qwt(&["search", path(&index), "--pattern", "abra"]).status.code(), Some(1));
    assert_eq!(qwt(&["--help"]).status.code(), Some(0));
}

#[test]
fn search_counts_patterns() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t");
    let index = dir.path().join("t.fm");
    std::fs::write(&input, "abracadabra abracadabra").unwrap();
    for extra in [&[][..], &["--prefetch", "--epsilon", "64"][..]] {
        let mut args = vec!["build", path(&input), "-o", path(&index), "--fm"];
        args.extend_from_slice(extra);
        assert_eq!(json(&qwt(&args))["kind"], "fm");
        for (p, want) in [("abra", 4), ("a", 10), ("cad", 2), ("abracadabra abracadabra", 1), ("zz", 0)] {
            assert_eq!(json(&qwt(&["search", path(&index), "--pattern", p]))["count"], want, "{p}");
        }
    }
}

#[test]
fn limit_reads_a_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t");
    let index = dir.path().join("t.qwt");
    std::fs::write(&input, "aaaabbbbcccc").unwrap();
    let built = json(&qwt(&["build", path(&input), "-o", path(&index), "--limit", "6"]));
    assert_eq!(built["n"], 6);
    assert_eq!(built["sigma"], 2);
}

#[test]
fn bench_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t");
    let index = dir.path().join("t.qwt");
    std::fs::write(&input, qwt_cli::corpus::words(200_000, 5)).unwrap();
    assert!(qwt(&["build", path(&input), "-o", path(&index), "--prefetch"]).status.success());
    let run = |kind: &str| {
        let out = qwt(&["bench", path(&index), "--kind", kind, "--count", "5000", "--seed", "3", "--reps", "2", "--chained", "--binwm"]);
        let mut v = json(&out);
        for r in v.as_array_mut().unwrap() {
            let r = r.as_object_mut().unwrap();
            for timing in ["wall_time_ns", "latency_ns", "throughput_qps"] {
                assert!(r.remove(timing).is_some());
            }
        }
        v
    };
    for kind in ["access", "rank", "select"] {
        let a = run(kind);
        assert_eq!(a, run(kind));
        let reports = a.as_array().unwrap();
        let names: Vec<&str> = reports.iter().map(|r| r["structure"].as_str().unwrap()).collect();
        if kind == "rank" {
            assert_eq!(names, ["qwm", "qwm+prefetch", "binwm"]);
        } else {
            assert_eq!(names, ["qwm", "binwm"]);
        }
        assert!(reports.iter().all(|r| r["checksum"] == reports[0]["checksum"]));
        assert_eq!(reports[0]["hardware"], "unspecified");
    }

    let csv = qwt(&["bench", path(&index), "--kind", "rank", "--count", "100", "--reps", "1", "--format", "csv"]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], qwt_cli::bench::BenchReport::CSV_HEADER);
    assert_eq!(lines.len(), 3);
}

#[test]
fn hardware_string_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t");
    let index = dir.path().join("t.qwt");
    std::fs::write(&input, "mississippi").unwrap();
    assert!(qwt(&["build", path(&input), "-o", path(&index)]).status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_qwt"))
        .args(["bench", path(&index), "--kind", "access", "--count", "10", "--reps", "1"])
        .env("QWT_HARDWARE", "test rig")
        .output()
        .unwrap();
    assert_eq!(json(&out)[0]["hardware"], "test rig");
}

#[test]
fn selftest_passes() {
    let out = qwt(&["selftest"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with("... ok")).count(), 5);
}
