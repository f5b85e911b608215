use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wakimoto"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn act_examples() {
    let o = run(&["act", "--expr", "e[0]", "--state", "|1,0,0>"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");

    let o = run(&["act", "--expr", "eta0 eta0", "--state", "achi[-1] |0,0,0>"]);
    assert_eq!(stdout(&o).trim(), "0");

    // h⁺(u)|l,0,0⟩ = (1 + lħ/u + …)|l,0,0⟩, so hp[0] has eigenvalue lħ
    let o = run(&["act", "--expr", "hp[0]", "--state", "|1,0,0>"]);
    assert_eq!(stdout(&o).trim(), "(1)*h |1,0,0>");
}

#[test]
fn act_errors() {
    let o = run(&["act", "--expr", "e[0", "--state", "|1,0,0>"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["act", "--expr", "e[0]", "--state", "|1,0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["act", "--expr", "nosuch[0]", "--state", "|1,0,0>"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["act", "--expr", "e[0]", "--state", "|1,0,0>", "--max-weight", "40"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn character_dimensions() {
    let o = run(&["character", "--max-weight", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "weight,dim\n0,1\n1,3\n2,9\n");
}

#[test]
fn kernel_table_is_consistent() {
    let o = run(&["kernel", "--l", "0", "--s", "0", "--max-weight", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l,s,weight,dim,target_weight,rank,kernel_dim"));
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let dim: usize = f[3].parse().unwrap();
        let rank: usize = f[5].parse().unwrap();
        let kernel: usize = f[6].parse().unwrap();
        assert_eq!(kernel, dim - rank, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 3);
}

#[test]
fn kernel_json_output() {
    let path = tmp("kernel.json");
    let o = run(&[
        "kernel",
        "--l",
        "1",
        "--s",
        "0",
        "--max-weight",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn unknown_suite_is_usage_error() {
    let o = run(&["verify", "--suite", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_config_is_usage_error() {
    let path = tmp("bad.json");
    std::fs::write(&path, r#"{"suite":"d_relations","colour":"red"}"#).unwrap();
    let o = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_limits_exit_three() {
    let path = tmp("limit.json");
    std::fs::write(
        &path,
        r#"{"suite":"d_relations","max_probe_weight":3,"limits":{"max_weight":2}}"#,
    )
    .unwrap();
    let o = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["study", "screening", "--J", "0:40"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_writes_report_deterministically() {
    let cfg = tmp("eval.json");
    std::fs::write(
        &cfg,
        r#"{"suite":"eval_module","eval_l":[1],"modes":[-1,1],"power_window":1}"#,
    )
    .unwrap();
    let mut reports = Vec::new();
    for name in ["r1.json", "r2.json"] {
        let out = tmp(name);
        let o = run(&["verify", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        reports.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let v: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    assert!(v["summary"]["pass"].as_u64().unwrap() > 0);
}

#[test]
fn screening_study_e_column_vanishes() {
    let o = run(&["study", "screening", "--J", "0:2", "--k", "3", "--hbar", "1/10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut seen = 0;
    for line in text.lines().filter(|l| l.starts_with("S_e,") || l.starts_with("eta0_S,")) {
        assert!(line.ends_with(",0,0,0"), "{line}");
        seen += 1;
    }
    // three modes of S_e and one η₀ row per J
    assert_eq!(seen, 12);
}

#[test]
fn study_float_column_only_on_request() {
    let o = run(&["study", "screening", "--J", "0:0"]);
    assert!(!stdout(&o).contains("ratio_f64"));
    let o = run(&["study", "screening", "--J", "0:0", "--float"]);
    assert!(stdout(&o).lines().next().unwrap().ends_with(",ratio_f64"));
}
