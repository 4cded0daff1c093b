use std::io::Write;
use std::process::{Command, Output, Stdio};

fn ramsey33(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ramsey33"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn arrow_on_k6_and_k5() {
    let o = ramsey33(&["arrow"], "E~~w\nD~{\n");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "true\nfalse\n");
    let o = ramsey33(&["multiplicity"], "E~~w\n");
    assert_eq!(stdout(&o), "2\n");
    let o = ramsey33(&["minimal"], "E~~w\nF~~~w\n");
    assert_eq!(stdout(&o), "true\nfalse\n");
}

#[test]
fn pipeline_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("min9.g6");
    let report = dir.path().join("report.json");
    let o = ramsey33(
        &[
            "pipeline",
            "--n",
            "9",
            "--out",
            out.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
        ],
        "",
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let counts: Vec<u64> = json["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, vec![15471, 2365, 380, 7, 3, 1]);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 1);
    assert!(dir.path().join("min9.g6.manifest.json").exists());

    let o = ramsey33(&["props", "--in", out.to_str().unwrap()], "");
    let csv = stdout(&o);
    assert!(csv.starts_with("property,value,count\n"));
    assert!(csv.contains("edges,27,1\n"));
    assert!(csv.contains("chromatic_number,6,1\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        ramsey33(&["pipeline", "--n", "12"], "").status.code(),
        Some(2)
    );
    assert_eq!(ramsey33(&["gen", "--n", "13"], "").status.code(), Some(2));
    assert_eq!(
        ramsey33(&["gen", "--n", "20", "--force"], "").status.code(),
        Some(1)
    );
    assert_eq!(ramsey33(&["arrow"], "not graph6\n").status.code(), Some(1));
    assert_eq!(ramsey33(&["no-such-command"], "").status.code(), Some(1));
    assert_eq!(
        ramsey33(&["marked", "--set", "9"], "E~~w\n").status.code(),
        Some(1)
    );
}

#[test]
fn gen_counts_and_order() {
    let a = ramsey33(&["gen", "--n", "6", "--strict-order"], "");
    let b = ramsey33(&["gen", "--n", "6", "--strict-order"], "");
    assert_eq!(stdout(&a).lines().count(), 156);
    assert_eq!(stdout(&a), stdout(&b));
    let o = ramsey33(&["gen", "--n", "8", "--min-degree", "4", "--jobs", "2"], "");
    assert_eq!(stdout(&o).lines().count(), 424);
}
