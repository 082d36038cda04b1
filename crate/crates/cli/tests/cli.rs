use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirichlet-atlas")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn zeros_csv() {
    let o = run(&["zeros", "--window", "0,1,0,30", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sigma,t,kind,multiplicity,residual"));
    let ts: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(ts.len(), 3);
    assert!((ts[0] - 14.134725141734694).abs() < 1e-8);
}

#[test]
fn exit_codes() {
    // validation: unknown target, bad window, svg from a data command, bad config
    assert_eq!(run(&["zeros", "--target", "gamma"]).status.code(), Some(2));
    assert_eq!(run(&["zeros", "--window", "1,0,0,1"]).status.code(), Some(2));
    assert_eq!(run(&["zeros", "--window", "-20,1,0,30"]).status.code(), Some(2));
    assert_eq!(run(&["zeros", "--format", "svg"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        "{\n  \"window\": {\"sigma_min\": 0, \"sigma_max\": 1, \"t_min\": 0, \"t_max\": 10},\n  \"colour\": 1\n}\n",
    )
    .unwrap();
    let o = run(&["zeros", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    // the pole and a seed off the fiber are input errors too
    assert_eq!(run(&["eval", "--sigma", "1", "--t", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["trace", "--path", "segment:0,0,1,0", "--seed", "3,0", "--window", "-5,5,-5,5"]).status.code(),
        Some(2)
    );
}

#[test]
fn eval_json() {
    let o = run(&["eval", "--sigma", "2", "--t", "0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let re = v["value"][0].as_f64().unwrap();
    assert!((re - 1.6449340668482264).abs() < 1e-12);
    assert!(v["error_estimate"].as_f64().unwrap() < 1e-12);
}

#[test]
fn probe_degenerate_on_line() {
    let o = run(&["probe", "--sigma", "0.5", "--t", "14.1347"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "degenerate");
}

#[test]
fn atlas_summary_has_two_zero_strip() {
    let o = run(&["atlas", "--window", "-10,12,0,30", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|r| r[1] == "2" && r[2] == "1" && r[5] == "true")
        .expect("a complete strip with j = 2 and one derivative zero");
    assert_eq!(row[3], "1");
    assert_eq!(row[4], "2");
    assert!(String::from_utf8_lossy(&o.stderr).contains("j_k"));
}

#[test]
fn plot_writes_svg_and_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["plot", "real-axis-preimage", "--window", "-4,8,10,30", "--seed-decimation", "2", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(dir.path().join("real-axis-preimage.svg")).unwrap();
    assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("<polyline"));
    let csv = std::fs::read_to_string(dir.path().join("real-axis-preimage.csv")).unwrap();
    assert!(csv.starts_with("curve,family,color,x,y"));
    assert!(csv.lines().count() > 100);

    let o = run(&["plot", "probe", "--sigma", "0.3", "--t", "14.134725141734695"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("<?xml"));
}

#[test]
fn deterministic_output() {
    let args = ["atlas", "--window", "-4,8,10,30"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn other_commands() {
    let o = run(&["--target", "blaschke", "abscissa"]);
    // blaschke needs its parameters in a config file
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("b.json");
    std::fs::write(&cfg, r#"{"target": {"kind": "power", "coefficients": [[1, 0], [0.5, 0], [0.25, 0]]}}"#).unwrap();
    let o = run(&["abscissa", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let o = run(&["bohr", "--n-max", "30", "--window", "0,1,10,30"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let z = &v["zeros"][0];
    assert!(z["identity_residual"].as_f64().unwrap() < 1e-12);
    assert!(z["re_over_beta"].as_array().unwrap().iter().all(|r| (r.as_f64().unwrap() - 0.5).abs() < 1e-12));

    let o = run(&["domains", "--window", "-10,12,0,30", "--k", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["domains"].as_array().unwrap().len(), 2);

    let o = run(&["trace", "--path", "segment:0,0,-1,0", "--seed", "0.5,14.134725141734695", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("tau,sigma,t,residual"));
}
