use std::io::Write;
use std::process::{Command, Output, Stdio};

fn biext(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_biext"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn problem_file(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("problem.txt");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_from_stdin_passes() {
    let out = biext(&["analyze", "-"], Some("p=3 n=1 | [F - 1]"));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("r=0 r'=1"), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn json_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem_file(&dir, "p=2 | [F^2 - 1, 0; 0, F - 1]");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = biext(&["analyze", &input, "--json", out.to_str().unwrap()], None);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(v.get("timings").is_none());
}

#[test]
fn overrides_apply() {
    let out = biext(&["analyze", "-", "--json", "-", "--psi-exponent", "2"], Some("p=3 | [F - 1]"));
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["psi_exponent"], 2);
    let out = biext(&["analyze", "-", "--psi-exponent", "3"], Some("p=3 | [F - 1]"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ceiling_gives_partial_report_and_note() {
    let out = biext(&["analyze", "-", "--max-ext-degree", "1"], Some("p=3 | [F^2 + F + 2]"));
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("note:"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("kernel route: count"));
}

#[test]
fn syntax_errors_exit_with_two() {
    let out = biext(&["analyze", "-"], Some("p=3 [F]"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 5"));
}

#[test]
fn oracle_kernel_lists_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem_file(&dir, "p=2 | [F^2 - 1]");
    let out = biext(&["oracle", "kernel", &input, "--s-max", "2"], None);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["s"].as_u64(), v["size"].as_u64()), (Some(2), Some(4)));
    let out = biext(&["oracle", "kernel", &input, "--s-max", "30"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rep_check_reports_controls() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem_file(&dir, "p=3 | [F - 1]");
    let out = biext(&["rep", "check", &input], None);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["group_order"], 27);
    assert_eq!(v["doubled_schur_sum"], 108);
}

#[test]
fn selftest_passes() {
    let out = biext(&["selftest", "--cases", "10"], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}
