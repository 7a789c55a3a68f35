use std::path::Path;
use std::process::{Command, Output};

fn fillin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fillin")).args(args).env_remove("FILLIN_JOBS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn check_exit_codes() {
    let o = fillin(&["check", "--preset", "round", "--n", "3", "--r", "1", "--H", "1", "--C", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["m_max"].as_f64().unwrap(), 0.375);

    let o = fillin(&["check", "--preset", "round", "--n", "3", "--r", "1", "--H", "3", "--C", "-6"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["feasible"], false);

    let o = fillin(&["check", "--preset", "round", "--r", "1", "--C", "6"]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["causes"][0].as_str().unwrap().contains("radius"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(code(&fillin(&["check"])), 2);
    assert_eq!(code(&fillin(&["check", "--preset", "round", "--input", "x.json"])), 2);
    assert_eq!(code(&fillin(&["check", "--preset", "round", "-C", "1"])), 2);
    assert_eq!(code(&fillin(&["check", "--input", "/definitely/missing.json"])), 2);
    assert_eq!(code(&fillin(&["check", "--preset", "round", "--H", "-1"])), 2);
    assert_eq!(code(&fillin(&["sweep", "--preset", "round"])), 2);
    assert_eq!(code(&fillin(&["sweep", "--preset", "round", "--sweep", "m=1:0:3"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 3, \"nodes\": [{\"weight\": 1}]}").unwrap();
    let o = fillin(&["check", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed"));
}

#[test]
fn generated_data_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("data.json");
    let f = file.to_str().unwrap();
    let o = fillin(&["generate", "--preset", "axisym", "--H", "2", "--h-amp", "1", "--grid-x", "64", "--out", f]);
    assert_eq!(code(&o), 0);
    let from_file = fillin(&["check", "--input", f, "--C", "-60"]);
    let from_preset = fillin(&["check", "--preset", "axisym", "--H", "2", "--h-amp", "1", "--grid-x", "64", "--C", "-60"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, from_preset.stdout);
}

#[test]
fn build_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("collar");
    let o = fillin(&["build", "--preset", "round", "--H", "1", "--C", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for f in ["profile.csv", "grid.csv", "collar.json", "certificate.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["pass"], true);
    assert_eq!(cert["lower_bound"]["grid"][0], 200);
    let profile = std::fs::read_to_string(out.join("profile.csv")).unwrap();
    assert!(profile.starts_with("t,u,uprime\n"));
    assert_eq!(profile.lines().count(), 201);
}

#[test]
fn forced_overmassive_build_fails() {
    let o = fillin(&["build", "--preset", "round", "--m", "0.45"]);
    assert_eq!(code(&o), 1);
    let o = fillin(&["build", "--preset", "round", "--m", "0.45", "--force"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["admissible"], false);
    assert!(v["lower_bound"]["min_margin"].as_f64().unwrap() < 0.0);
}

#[test]
fn charged_model_round_trip() {
    let o = fillin(&["build", "--preset", "rn", "--model-m", "2", "--model-q", "1", "--r", "5"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["energy_condition"]["pass"], true);
    assert_eq!(v["divergence_free"]["pass"], true);
    assert!((v["m"].as_f64().unwrap() - 2.0).abs() < 1e-10);

    let o = fillin(&["mass", "--preset", "rn", "--model-m", "2", "--model-q", "1", "--r", "5"]);
    assert_eq!(code(&o), 0);
    let b = &json(&o)["charged_bound"];
    assert!((b["value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn mass_exit_codes() {
    let o = fillin(&["mass", "--preset", "sads", "--C", "-6", "--model-m", "1", "--r", "2"]);
    assert_eq!(code(&o), 0);
    assert!((json(&o)["ah_bound"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(code(&fillin(&["mass", "--preset", "round", "--H", "2"])), 1);
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn lambda_sweep_flips_at_two() {
    let o = fillin(&["sweep", "--preset", "round", "--sweep", "lambda=0.1:3:30"]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    assert!(csv.starts_with("row,lambda,feasible,"));
    for r in rows(&csv).iter().filter(|r| r[0] == "point") {
        let lambda: f64 = r[1].parse().unwrap();
        assert_eq!(r[2] == "true", lambda < 2.0 - 1e-12, "{r:?}");
    }
}

#[test]
fn mass_sweep_maximizes_at_m_max() {
    let o = fillin(&["sweep", "--preset", "round", "--sweep", "m=0.05:0.375:8"]);
    let rows = rows(&stdout(&o));
    let summary = rows.last().unwrap();
    assert_eq!(summary[0], "argmax_r_h");
    assert_eq!(summary[1].parse::<f64>().unwrap(), 0.375);
}

#[test]
fn hunt_mode_on_own_model_flags_nothing() {
    let args = ["sweep", "--preset", "sads", "--C", "-6", "--r", "2", "--model-m", "1", "--sweep", "m=0.2:1:9", "--exterior-mass", "1"];
    let o = fillin(&args);
    assert_eq!(code(&o), 0);
    let rows = rows(&stdout(&o));
    assert!(rows.iter().all(|r| r[11] == "false"));
    assert!(rows.iter().filter(|r| r[0] == "point").all(|r| r[9] == "true"));
    // A smaller exterior mass is exceeded by the heavier fill-ins.
    let mut low = args.to_vec();
    low[12] = "0.5";
    let rows = rows_of(&fillin(&low));
    assert!(rows.iter().any(|r| r[11] == "true"));
}

fn rows_of(o: &Output) -> Vec<Vec<String>> {
    rows(&stdout(o))
}

#[test]
fn all_infeasible_sweep_exits_1() {
    let o = fillin(&["sweep", "--preset", "round", "--sweep", "lambda=2:3:4"]);
    assert_eq!(code(&o), 1);
    assert_eq!(rows_of(&o).len(), 5);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, jobs: &str| {
        let p = dir.path().join(name);
        let o = fillin(&[
            "sweep", "--preset", "axisym", "--H", "2", "--h-amp", "1", "--grid-x", "64", "--grid-t", "50", "--C", "-60",
            "--sweep", "lambda=0.5:1.5:12", "--jobs", jobs, "--out", p.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        std::fs::read(&p).unwrap()
    };
    let a = run("a.csv", "1");
    assert_eq!(a, run("b.csv", "4"));
    assert_eq!(a, run("c.csv", "4"));

    let build = |name: &str| {
        let p = dir.path().join(name);
        assert_eq!(code(&fillin(&["build", "--preset", "round", "--C", "6", "--r", "0.5", "--out", p.to_str().unwrap()])), 0);
        ["grid.csv", "certificate.json", "collar.json"].map(|f| std::fs::read(Path::new(&p).join(f)).unwrap())
    };
    assert_eq!(build("x"), build("y"));
}
