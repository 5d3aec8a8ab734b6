use std::f64::consts::PI;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_equidist"));
    c.env_remove("EQUIDIST_CACHE_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(|s| s.to_string()).collect()).collect()
}

#[test]
fn classgroup_minus_23() {
    let o = run(&["classgroup", "-D", "-23"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "class,b,a,c,order,inverse,h,w");
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[6] == "3"));
    assert_eq!(rows[0][1..4], ["1", "1", "6"]);
}

#[test]
fn validation_errors_exit_2() {
    assert_eq!(run(&["classgroup", "-D", "-12"]).status.code(), Some(2));
    assert_eq!(run(&["classgroup", "-D", "5"]).status.code(), Some(2));
    assert_eq!(run(&["classgroup", "--nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["period", "-D", "-23", "-l", "10", "--chi", "7"]).status.code(), Some(2));
    assert_eq!(run(&["main-term", "-D", "-23", "-l", "11"]).status.code(), Some(2));
    let o = run(&["lambda", "-D", "-4", "-S", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd prime"));
}

#[test]
fn tolerance_failures_exit_3() {
    let o = run(&["lambda", "-D", "-4", "-S", "3", "--symbol", "spin", "--nodes", "16", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(3));
    // The table is still written.
    assert_eq!(csv_rows(&o).len(), 1);
}

#[test]
fn main_term_example() {
    let o = run(&["main-term", "-D", "-4", "--chi", "trivial", "-l", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    let get = |name: &str| rows.iter().find(|r| r[3] == name || r[3] == format!("\"{name}\"")).map(|r| r[4].parse::<f64>().unwrap());
    assert!(get("P").unwrap().is_finite());
    let text = stdout(&o);
    let l1 = text.lines().find(|l| l.contains("\"L(1,eta)\"")).unwrap();
    let v: f64 = l1.rsplit(',').next().unwrap().parse().unwrap();
    assert!((v - PI / 4.0).abs() < 1e-8);
}

#[test]
fn lambda_of_empty_set_is_one() {
    let o = run(&["lambda", "-D", "-4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows[0][4].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn bridge_json_report() {
    let o = run(&["bridge", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"][0], "bridge");
    let rows = v["rows"].as_array().unwrap();
    let get = |name: &str| rows.iter().find(|r| r["check"] == name).unwrap()["detail"].as_str().unwrap().to_string();
    assert_eq!(get("corollary_constant"), "32/1");
    assert_eq!(get("norm_ratio"), "16/1");
    assert_eq!(get("theorem_factor"), "2/1");
    assert!(rows.iter().all(|r| r["ok"] == "true"));
    assert!(v.get("wall_time_s").is_none());
}

#[test]
fn verify_selected_suites() {
    for suite in ["quadform", "ortho5", "plancherel"] {
        let o = run(&["verify", "--suite", suite, "--seed", "7", "--max-disc", "500"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(csv_rows(&o).iter().all(|r| r[2] == "true"));
    }
}

#[test]
fn verify_all() {
    let o = run(&["verify", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let rows = csv_rows(&o);
    for suite in ["quadform", "siegel", "satake", "plancherel", "bessel", "ortho5"] {
        assert!(rows.iter().any(|r| r[0] == suite));
    }
}

#[test]
fn weights_are_deterministic() {
    let a = run(&["weights", "-D", "-23", "-l", "20"]);
    let b = run(&["weights", "-D", "-23", "-l", "20"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("l,form_id,is_sk,D,chi_id,R_re,R_im,omega_times_norm2,lambda_2,alpha,l_proxy,contribution,flags\n"));
    // 3 embeddings × 3 characters, then the two aggregates.
    assert_eq!(text.lines().count(), 1 + 9 + 2);
    assert!(text.contains("central-value proxy: not certified"));
}

#[test]
fn hecke_and_eigen_weight_10() {
    let o = run(&["hecke", "-l", "10", "-p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&o), vec![vec!["0".to_string(), "0".into(), "240/1".into()]]);
    let o = run(&["eigen", "-l", "10", "--primes", "2,3"]);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][5], "240/1");
    assert_eq!(rows[0][3], "true");
}

#[test]
fn satake_and_period_tables() {
    let o = run(&["satake", "-l", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&o).len(), 3);
    let o = run(&["period", "-D", "-23", "-l", "10", "--chi", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 3);
    // Twisted periods of a lift vanish.
    for r in &rows[1..] {
        assert!(r[6].parse::<f64>().unwrap().abs() < 1e-6);
    }
}

#[test]
fn basis_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let first = bin().args(["basis", "-l", "20", "--bound", "12", "--timing"]).env("EQUIDIST_CACHE_DIR", path).output().unwrap();
    assert_eq!(first.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&first.stderr).contains("built"));
    let second = bin().args(["basis", "-l", "20", "--bound", "12", "--timing"]).env("EQUIDIST_CACHE_DIR", path).output().unwrap();
    assert!(String::from_utf8_lossy(&second.stderr).contains(": hit"));
    assert_eq!(first.stdout, second.stdout);
    // A corrupt file is rebuilt with a warning.
    let victim = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&victim, "{ not json").unwrap();
    let third = bin().args(["basis", "-l", "20", "--bound", "12"]).env("EQUIDIST_CACHE_DIR", path).output().unwrap();
    assert_eq!(third.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&third.stderr).contains("warning: rebuilt"));
    assert_eq!(third.stdout, first.stdout);
    // The flag wins over the environment.
    let other = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["basis", "-l", "10", "--bound", "5", "--cache-dir", other.path().to_str().unwrap()])
        .env("EQUIDIST_CACHE_DIR", path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(other.path()).unwrap().count(), 1);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cg.csv");
    let o = run(&["classgroup", "-D", "-47", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 6);
}
