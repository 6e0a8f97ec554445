use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn steklov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steklov"))
        .args(args)
        .env_remove("STEKLOV_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn ball_spectrum_prints_the_leading_cluster() {
    let o = steklov(&["ball-spectrum", "--n", "2", "--tau", "1", "--sigma", "0.3", "--count", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let values: Vec<f64> = stdout(&o).trim().split(", ").map(|v| v.parse().unwrap()).collect();
    assert_eq!(values, vec![0.0, 1.0, 1.0]);
}

#[test]
fn inadmissible_poisson_ratio_exits_2() {
    let o = steklov(&["ball-spectrum", "--n", "3", "--tau", "1", "--sigma", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sigma"), "{}", stderr(&o));
}

#[test]
fn missing_domain_file_exits_1_and_bad_json_exits_2() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.json");
    let o = steklov(&["solve", "--domain", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));

    let bad = write(&dir, "bad.json", "{\"kind\":\"disk\",");
    let o = steklov(&["solve", "--domain", &bad]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn disk_solve_writes_spectrum_and_config() {
    let dir = TempDir::new().unwrap();
    let domain = write(&dir, "disk.json", r#"{"kind":"disk","radius":1.0}"#);
    let out = dir.path().join("disk_out.json");
    let o = steklov(&["solve", "--domain", &domain, "--tau", "1", "--sigma", "0.2", "--degree", "8", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("lambda_2 = "));

    let doc = read_json(&out);
    let eig = doc["eigenvalues"].as_array().unwrap();
    assert!(eig[0].as_f64().unwrap().abs() < 1e-10);
    for k in [1, 2] {
        assert!((eig[k].as_f64().unwrap() - 1.0).abs() < 1e-8);
    }
    for key in ["residuals", "clusters"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["config"]["subcommand"], "solve");
    assert_eq!(doc["config"]["solver"]["degree"], 8);
}

#[test]
fn shell_density_solve_reports_the_density() {
    let dir = TempDir::new().unwrap();
    let domain = write(&dir, "disk.json", r#"{"kind":"disk","radius":1.0}"#);
    let out = dir.path().join("shell.json");
    let o = steklov(&[
        "solve", "--domain", &domain, "--degree", "8", "--neumann-eps", "0.1", "--mass", "6.283185307179586",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc = read_json(&out);
    let rho = &doc["density"];
    assert_eq!(rho["eps"], 0.1);
    let total = rho["total_mass"].as_f64().unwrap();
    assert!((total - 2.0 * std::f64::consts::PI).abs() < 1e-6 * total);
    assert!(doc["eigenvalues"][0].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn reciprocal_sum_on_the_disk_is_sharp() {
    let dir = TempDir::new().unwrap();
    let domain = write(&dir, "disk.json", r#"{"kind":"disk","radius":1.0}"#);
    let out = dir.path().join("rs.json");
    let o = steklov(&["verify", "reciprocal-sum", "--domain", &domain, "--tau", "4", "--degree", "8", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc = read_json(&out);
    assert!((doc["bound"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((doc["sum"].as_f64().unwrap() - 0.5).abs() < 1e-8);
}

#[test]
fn scaling_holds_for_several_factors() {
    let dir = TempDir::new().unwrap();
    let domain = write(&dir, "ell.json", r#"{"kind":"ellipse","a":1.4,"b":0.8}"#);
    let out = dir.path().join("sc.csv");
    let o = steklov(&[
        "verify", "scaling", "--domain", &domain, "--tau", "2", "--sigma", "0.1", "--degree", "8", "--s", "0.5,3",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# run_config="));
    assert_eq!(lines.next().unwrap(), "s,original,rescaled,relative_error");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let err: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(err <= 1e-6);
    }
}

#[test]
fn mass_concentration_csv_replays_bit_identically() {
    let dir = TempDir::new().unwrap();
    let domain = write(&dir, "disk.json", r#"{"kind":"disk","radius":1.0}"#);
    let first = dir.path().join("mc.csv");
    let o = steklov(&[
        "verify", "mass-concentration", "--domain", &domain, "--degree", "8", "--eps", "0.2,0.1",
        "--out", first.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let original = fs::read_to_string(&first).unwrap();
    assert!(original.starts_with("# run_config={"));
    assert_eq!(original.lines().nth(1).unwrap(), "eps,lambda1,lambda2,gap,shell_value,warnings");

    let second = dir.path().join("mc2.csv");
    let o = steklov(&["replay", first.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let replayed = fs::read_to_string(&second).unwrap();
    let data = |t: &str| t.lines().skip(1).map(String::from).collect::<Vec<_>>();
    assert_eq!(data(&original), data(&replayed));
}

#[test]
fn replay_of_a_json_run_reproduces_it() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("ball.json");
    let o = steklov(&["ball-spectrum", "--n", "3", "--tau", "5", "--sigma", "0.1", "--out", first.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let second = dir.path().join("ball2.json");
    let o = steklov(&["replay", first.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (a, b) = (read_json(&first), read_json(&second));
    assert_eq!(a["eigenvalues"], b["eigenvalues"]);
    assert_eq!(a["config"]["params"], b["config"]["params"]);
}

#[test]
fn failed_family_member_exits_3_and_keeps_the_rest() {
    let dir = TempDir::new().unwrap();
    let family = write(
        &dir,
        "fam.json",
        r#"{"kind":"list","shapes":[
            {"id":"disk","domain":{"kind":"disk","radius":1.0}},
            {"id":"bad","domain":{"kind":"ellipse","a":-1.0,"b":1.0}}]}"#,
    );
    let out = dir.path().join("iso.json");
    let o = steklov(&[
        "verify", "isoperimetric", "--family", &family, "--degree", "6", "--reference-degree", "4",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let doc = read_json(&out);
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports[0]["error"].is_null());
    assert!(reports[1]["error"].as_str().unwrap().contains("semi-axis"));
}

#[test]
fn thread_count_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_steklov"))
        .args(["ball-spectrum", "--tau", "1", "--sigma", "0", "--count", "3"])
        .env("STEKLOV_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));

    let o = Command::new(env!("CARGO_BIN_EXE_steklov"))
        .args(["ball-spectrum", "--tau", "1", "--sigma", "0"])
        .env("STEKLOV_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_describes_the_checks() {
    let o = steklov(&["verify", "isoperimetric", "--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("stability_bound"));
    assert!(text.contains("asymmetry"));
    let o = steklov(&["--help"]);
    assert!(stdout(&o).contains("STEKLOV_THREADS"));
}
