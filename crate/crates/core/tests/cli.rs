use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn aiecon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aiecon"))
        .args(args)
        .env_remove("AIECON_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn value_of(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .and_then(|rest| rest.split_whitespace().next())
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn simulate_writes_csv_with_header_and_21_rows() {
    let d = tempfile::tempdir().unwrap();
    let o = aiecon(&["simulate", "m1-cn", "--out", d.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(d.path().join("m1-cn.csv")).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "t,s,A,p,theta,y_total,y_human,y_ai");
    assert_eq!(lines.len(), 22);
    let y: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert!(y.iter().all(|v| *v == y[0]));
    assert!((y[0] / 9.031e12 - 1.0).abs() < 0.015);
}

#[test]
fn simulate_honours_env_out_dir_and_formats() {
    let d = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_aiecon"))
        .args(["simulate", "m5-us", "--format", "json,plotdata"])
        .env("AIECON_OUT", d.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(d.path().join("m5-us.json").is_file());
    assert!(d.path().join("m5-us.plot.csv").is_file());
    assert!(!d.path().join("m5-us.csv").exists());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("m5-us.json")).unwrap()).unwrap();
    assert_eq!(doc["result"]["records"].as_array().unwrap().len(), 21);
    assert_eq!(doc["deterministic"], true);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&d1, &d2] {
        let o = aiecon(&[
            "simulate",
            "m4-cn-joint",
            "--format",
            "csv,json,plotdata",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    for f in [
        "m4-cn-joint.csv",
        "m4-cn-joint.json",
        "m4-cn-joint.plot.csv",
    ] {
        assert_eq!(
            fs::read(d1.path().join(f)).unwrap(),
            fs::read(d2.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn simulate_to_stdout_with_overrides() {
    let o = aiecon(&["simulate", "m3-us", "--horizon", "5", "--set", "eta=0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 7);
    for l in out.lines().skip(1) {
        let theta: f64 = l.split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(theta, 1.0);
    }
}

#[test]
fn simulate_scenario_file() {
    let d = tempfile::tempdir().unwrap();
    let dump = aiecon(&["list-scenarios", "--dump"]);
    let text = stdout(&dump);
    assert!(text.contains("[[scenario]]"));
    let reg = write(d.path(), "reg.toml", &text);
    let o = aiecon(&["simulate", "m2-cn", "--registry", &reg, "--horizon", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let builtin = aiecon(&["simulate", "m2-cn", "--horizon", "2"]);
    assert_eq!(stdout(&o), stdout(&builtin));
}

#[test]
fn list_scenarios_shows_all_builtins() {
    let o = aiecon(&["list-scenarios"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in [
        "m1-cn",
        "m3-us",
        "m4-cn-accel-g",
        "m4-cn-phia-t",
        "m4-cn-joint",
        "m5-us",
    ] {
        assert!(out.contains(name), "{name}");
    }
}

#[test]
fn calibrate_reads_observations() {
    let d = tempfile::tempdir().unwrap();
    let obs = write(
        d.path(),
        "cn.csv",
        "year,gdp,capital,population\n2010,\"6,190,000,000,000\",3.93e13,7.7e8\n",
    );
    let o = aiecon(&["calibrate", "--obs", &obs, "--alpha", "0.58625"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let phi_h = value_of(&stdout(&o), "phi_h");
    assert!((phi_h / 90.0 - 1.0).abs() < 0.02, "{phi_h}");
}

#[test]
fn calibrate_ai_efficiency_needs_two_rows() {
    let d = tempfile::tempdir().unwrap();
    let obs = write(
        d.path(),
        "cn.csv",
        "year,gdp,capital,population\n2010,\"6,190,000,000,000\",3.93e13,7.7e8\n",
    );
    let o = aiecon(&["calibrate", "--obs", &obs, "--alpha", "0.58625", "--phi-a"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fit_commands() {
    let d = tempfile::tempdir().unwrap();
    let rows: String = (0..10)
        .map(|t| format!("{t},{}\n", 56_612 + 16_674 * t + 1_088 * t * t))
        .collect();
    let q = write(d.path(), "q.csv", &format!("t,value\n{rows}"));
    let o = aiecon(&["fit", "quadratic", "--data", &q]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!((value_of(&out, "c2") - 1088.0).abs() < 1e-3);
    assert!((value_of(&out, "c1") - 16_674.0).abs() < 1e-2);

    let rows: String = (0..=15)
        .map(|t| format!("{t},{}\n", 1.0 / (1.0 + (-0.38 * (t as f64 - 5.0)).exp())))
        .collect();
    let l = write(d.path(), "l.csv", &format!("t,value\n{rows}"));
    let out = stdout(&aiecon(&["fit", "logistic", "--data", &l]));
    assert!((value_of(&out, "k") - 0.38).abs() < 1e-4);
    assert!((value_of(&out, "t0") - 5.0).abs() < 1e-4);

    let g = write(d.path(), "g.csv", "t,value\n5,0.217\n6,0.034\n");
    let o = aiecon(&["fit", "gap", "--data", &g, "--pin", "delta0=0.42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(value_of(&out, "delta0"), 0.42);
    assert!(value_of(&out, "tau") > 0.0);

    let o = aiecon(&["fit", "gap", "--data", &g]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "two anchors cannot fix three parameters"
    );
}

#[test]
fn compare_reports_enhancement_and_crossover() {
    let o = aiecon(&["compare", "m5-us", "m4-us"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], "t,ratio,enhancement_pct");
    let first: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((first - 0.13).abs() < 0.05);
    assert!(out.contains("crossover: m5-us reaches m4-us at t=0"));

    let d = tempfile::tempdir().unwrap();
    let o = aiecon(&[
        "compare",
        "m1-cn",
        "m1-us",
        "--out",
        d.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("crossover: none"));
    assert!(d.path().join("m1-cn-vs-m1-us.csv").is_file());
}

#[test]
fn sweep_writes_one_row_per_grid_value() {
    let o = aiecon(&["sweep", "m3-cn", "--param", "eta", "--grid", "0,0.04,0.08"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], "eta,final_y_total,mean_enhancement_pct");
    assert_eq!(lines.len(), 4);

    let d = tempfile::tempdir().unwrap();
    let o = aiecon(&[
        "sweep",
        "m3-cn",
        "--param",
        "eta",
        "--grid",
        "0,0.1",
        "--out",
        d.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(d.path().join("m3-cn-sweep-eta.csv").is_file());
}

#[test]
fn exit_codes() {
    assert_eq!(aiecon(&["--help"]).status.code(), Some(0));
    assert_eq!(aiecon(&["--version"]).status.code(), Some(0));
    assert_eq!(aiecon(&[]).status.code(), Some(1));
    assert_eq!(aiecon(&["simulate", "nope"]).status.code(), Some(1));
    assert_eq!(
        aiecon(&["simulate", "m1-cn", "--set", "bogus=1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        aiecon(&["sweep", "m1-cn", "--param", "eta", "--grid", "x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        aiecon(&["simulate", "m1-cn", "--set", "alpha=1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        aiecon(&["fit", "quadratic", "--data", "/nonexistent/file.csv"])
            .status
            .code(),
        Some(2)
    );
    let o = aiecon(&["simulate", "m4-us", "--set", "g=-5e6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("t=9"), "{}", stderr(&o));
}
