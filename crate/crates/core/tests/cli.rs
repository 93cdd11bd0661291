use std::path::Path;
use std::process::{Command, Output};

fn umbilic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umbilic")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn profile_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let out = umbilic(&["profile", "--space", "s", "--family", "sphere", "--c", "1", "--samples", "100", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,rho,phi,lambda"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 100);
    for r in &rows {
        assert!((r[2] - (1.0 / r[0].cos()).ln()).abs() < 1e-8, "{r:?}");
    }
}

#[test]
fn invalid_parameters_exit_2_and_name_the_precondition() {
    let out = umbilic(&["profile", "--c", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('c'));
    let out = umbilic(&["profile", "--family", "equidistant", "--c", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(stderr.contains("0 < c < 1"), "{stderr}");
    assert_eq!(umbilic(&["build", "--dim", "1"]).status.code(), Some(2));
    assert_eq!(umbilic(&["warp", "--omega", "sinh"]).status.code(), Some(2));
}

#[test]
fn build_metadata_examples() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("sphere");
    let out = umbilic(&["build", "--space", "s", "--family", "sphere", "--c", "2", "--dim", "2", "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let meta = read_json(&dir.path().join("sphere.json"));
    assert_eq!(meta["topology"], "sphere");
    assert!((meta["vertical_diameter"].as_f64().unwrap() - 1.098612).abs() < 1e-6);
    let obj = std::fs::read_to_string(dir.path().join("sphere.obj")).unwrap();
    assert!(obj.lines().any(|l| l.starts_with("v ")) && obj.lines().any(|l| l.starts_with("f ")));

    let meta = json(&umbilic(&["build", "--space", "h", "--family", "horosphere", "--dim", "3"]));
    let slab: Vec<f64> = meta["slab"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!((slab[0] + 1.570796).abs() < 1e-6 && (slab[1] - 1.570796).abs() < 1e-6);

    let meta = json(&umbilic(&["build", "--space", "h", "--family", "equidistant", "--c", "0.5", "--dim", "2"]));
    assert!((meta["period"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-9);

    // higher dimensions export a point cloud
    let prefix = dir.path().join("cloud");
    let out = umbilic(&["build", "--c", "2", "--dim", "4", "--ns", "5", "--nc", "3", "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("cloud.csv")).unwrap();
    assert!(csv.starts_with("piece,s,chart_1,chart_2,chart_3,x_0"));
}

#[test]
fn verify_exit_codes() {
    let out = umbilic(&["verify", "--space", "h", "--family", "sphere", "--c", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report["max_spread"].as_f64().unwrap() <= 1e-4);
    assert_eq!(report["oracle"], "flat");

    let out = umbilic(&["verify", "--space", "s", "--c", "2", "--perturb", "0.01"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);

    let out = umbilic(&["verify", "--family", "equidistant", "--c", "0.5", "--cylinder", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["max_spread"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn warp_classification_examples() {
    let meta = json(&umbilic(&["warp", "--omega", "t", "--family", "sphere", "--space", "h", "--c", "1"]));
    assert_eq!(meta["topology"], "sphere");
    assert_eq!(meta["complete"], true);

    let meta = json(&umbilic(&["warp", "--omega", "t", "--family", "equidistant", "--c", "0.5"]));
    assert_eq!(meta["complete"], false);

    let meta = json(&umbilic(&["warp", "--omega", "const:1", "--delta", "0.4", "--family", "sphere", "--space", "s", "--c", "2"]));
    assert_eq!(meta["topology"], "annulus");
    assert!(meta["clipped"].as_u64().unwrap() > 0);

    let out = umbilic(&["warp", "--omega", "exp-neg", "--offset", "-5", "--c", "2"]);
    assert_eq!(out.status.code(), Some(4));

    let meta = json(&umbilic(&["classify", "--family", "horosphere", "--omega", "cosh"]));
    assert_eq!(meta["topology"], "ball");
    assert_eq!(meta["warped"]["complete"], true);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let prefix = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_umbilic"))
            .args(["warp", "--omega", "exp-neg", "--family", "equidistant", "--c", "0.5", "--dim", "3", "--ns", "12", "--nc", "4"])
            .arg("--out")
            .arg(&prefix)
            .env("UMBILIC_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        (
            std::fs::read(dir.path().join(format!("{name}.csv"))).unwrap(),
            std::fs::read(dir.path().join(format!("{name}.json"))).unwrap(),
        )
    };
    let a = run("a", "1");
    let b = run("b", "4");
    assert_eq!(a, b);

    let obj = |name: &str| {
        let prefix = dir.path().join(name);
        umbilic(&["build", "--family", "sphere", "--space", "h", "--c", "0.7", "--out", prefix.to_str().unwrap()]);
        std::fs::read(dir.path().join(format!("{name}.obj"))).unwrap()
    };
    assert_eq!(obj("m1"), obj("m2"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sphere.cfg");
    std::fs::write(&cfg, "space=s\nc=2\ndim=2\n").unwrap();
    let meta = json(&umbilic(&["build", "--config", cfg.to_str().unwrap()]));
    assert_eq!(meta["c"], 2.0);
    assert_eq!(meta["topology"], "sphere");
    let meta = json(&umbilic(&["build", "--config", cfg.to_str().unwrap(), "--c", "3"]));
    assert_eq!(meta["c"], 3.0);

    std::fs::write(&cfg, "radius=2\n").unwrap();
    let out = umbilic(&["build", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radius"));
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_umbilic"))
        .args(["profile", "--samples", "3"])
        .env("UMBILIC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
