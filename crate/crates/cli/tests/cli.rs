use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubelab"))
        .args(args)
        .env("CUBELAB_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn constants_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--kind", "constants", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    let get = |name: &str| {
        v["constants"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()["value"].as_f64().unwrap()
    };
    assert!((get("c_V_Q") - 7.8711).abs() < 5e-5);
    assert!((get("c_Sym2V_Q") - 16.6656).abs() < 5e-5);
    assert!((get("c_Sym2(P1xP1)_Q") - 27.134).abs() < 5e-4);
}

#[test]
fn oracle_diff_rows_agree() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--kind", "oracle-diff", "--b", "1", "--b-max", "50", "--no-cache"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("B,count,predicted,rel_err,locus_breakdown"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 50);
    for r in rows {
        let f: Vec<&str> = r.splitn(5, ',').collect();
        assert_eq!(f[1], f[2], "{r}");
        assert_eq!(f[3], "0");
    }
}

#[test]
fn surface_count_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--kind", "count-v", "--field-disc", "1", "--b", "1e3", "--b-max", "1e5", "--steps", "3", "--tol", "0.02", "--format", "json"];
    let o = run(&args, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let bs: Vec<f64> = rows.iter().map(|r| r["B"].as_f64().unwrap()).collect();
    assert_eq!(bs, vec![1e3, 1e4, 1e5]);
    assert!(rows[2]["rel_err"].as_f64().unwrap() <= 0.02);
    assert_eq!(v["pass"], true);
}

#[test]
fn failing_tolerance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--kind", "count-v", "--b", "100", "--tol", "1e-6", "--no-cache"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unsupported_combinations_have_their_own_code() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        ["--kind", "sym2-v", "--field-disc", "-4"],
        ["--kind", "count-v", "--field-disc", "-23"],
        ["--kind", "count-u", "--field-disc", "5"],
    ] {
        let o = run(&args, dir.path());
        assert_eq!(o.status.code(), Some(3), "{args:?}");
    }
    // not a discriminant at all
    let o = run(&["--kind", "zeta", "--field-disc", "12"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invalid_specs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["--kind", "count-v", "--tol", "0"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["--kind", "count-v", "--b", "10", "--b-max", "5"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["--kind", "nonsense"], dir.path()).status.code(), Some(2));
}

#[test]
fn warm_cache_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--kind", "sym2-p1xp1", "--b", "20", "--b-max", "40", "--steps", "3", "--tol", "1"];
    let cold = run(&args, dir.path());
    assert_eq!(cold.status.code(), Some(0));
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 3);
    let warm = run(&args, dir.path());
    assert_eq!(cold.stdout, warm.stdout);
    assert!(String::from_utf8_lossy(&warm.stderr).contains("cached"));
}

#[test]
fn corrupt_cache_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--kind", "count-u", "--b", "50", "--tol", "1"];
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, text.replacen("\"count\":", "\"count\":9", 1)).unwrap();
    }
    assert_eq!(run(&args, dir.path()).status.code(), Some(4));
    // the cache can be bypassed
    assert_eq!(run(&["--kind", "count-u", "--b", "50", "--tol", "1", "--no-cache"], dir.path()).status.code(), Some(0));
}

#[test]
fn reports_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["--kind", "sym2-v", "--b", "30", "--b-max", "60", "--steps", "2", "--tol", "1", "--no-cache", "--format", "json"];
    let one = run(&[&base[..], &["--workers", "1"]].concat(), dir.path());
    let three = run(&[&base[..], &["--workers", "3"]].concat(), dir.path());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn report_file_and_seeded_densities() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tamagawa.csv");
    let args = ["--kind", "tamagawa", "--b", "2", "--b-max", "9", "--tol", "1e-2", "--seed", "11", "--out", out.to_str().unwrap(), "--no-cache"];
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(first.lines().count(), 9);
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
}

#[test]
fn l_sum_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--kind", "l-sums", "--b", "1e3", "--b-max", "1e4", "--steps", "2", "--format", "json", "--no-cache"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let e = v["rows"][0]["locus_breakdown"]["s1_exponent"].as_f64().unwrap();
    assert!((0.4..=0.6).contains(&e));
}
