//! Black-box tests of the command-line interface: exit codes, file
//! schemas, override precedence, sweep behaviour.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_gram-recur")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gram-recur-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("failed to spawn gram-recur")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

#[test]
fn unknown_kind_exits_with_config_code() {
    let out = run(&["fourier-disco"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_key_exits_with_config_code() {
    let dir = temp_dir("badkey");
    let out = run(&["mp-curve", "--set", "blorp=3", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("blorp"), "stderr should name the bad key: {stderr}");
}

#[test]
fn odd_baker_dimension_exits_with_config_code() {
    let dir = temp_dir("oddn");
    let out = run(&["baker-spectrum", "--set", "n=65", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_path_collision_exits_with_io_code() {
    let dir = temp_dir("iofail");
    std::fs::create_dir_all(dir.parent().unwrap()).unwrap();
    std::fs::write(&dir, "occupied").unwrap();
    let out = run(&["symbol-demo", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let _ = std::fs::remove_file(&dir);
}

#[test]
fn symbol_demo_reports_toy_spectrum() {
    let dir = temp_dir("symbol");
    let out = run(&["symbol-demo", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let spectrum = read(&dir.join("spectrum.csv"));
    let eigenvalues: Vec<f64> = spectrum
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(eigenvalues, vec![0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 3.0]);

    let report: serde_json::Value = serde_json::from_str(&read(&dir.join("report.json"))).unwrap();
    assert_eq!(report["summary"]["zero_count"], 3);
    assert_eq!(report["rng_tag"], "chacha12");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn mp_curve_has_closed_form_density_at_two() {
    let dir = temp_dir("mpcurve");
    let out = run(&[
        "mp-curve",
        "--set",
        "tau=1",
        "--set",
        "upper=4.5",
        "--set",
        "points=450",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let curve = read(&dir.join("curve.csv"));
    let mut found = false;
    for line in curve.lines().skip(1) {
        let mut fields = line.split(',');
        let t: f64 = fields.next().unwrap().parse().unwrap();
        if t == 2.0 {
            let density: f64 = fields.next().unwrap().parse().unwrap();
            let want = 1.0 / (2.0 * std::f64::consts::PI);
            assert!((density - want).abs() < 1e-9, "density {density} vs {want}");
            found = true;
        }
    }
    assert!(found, "curve grid should contain t = 2 exactly");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn histogram_csv_schema_and_masses() {
    let dir = temp_dir("histschema");
    let out = run(&[
        "random-spectrum",
        "--set",
        "n=64",
        "--set",
        "tau=1",
        "--seed",
        "11",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let hist = read(&dir.join("histogram.csv"));
    let mut lines = hist.lines();
    assert_eq!(lines.next().unwrap(), "bin_lo,bin_hi,mass,mp_density_at_midpoint");
    let mut total = 0.0f64;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4);
        total += fields[2].parse::<f64>().unwrap();
    }
    assert!((total - 1.0).abs() < 1e-12, "masses sum to {total}");

    let spectrum = read(&dir.join("spectrum.csv"));
    assert_eq!(spectrum.lines().next().unwrap(), "index,eigenvalue");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_file_applies_and_set_overrides() {
    let dir = temp_dir("cfgfile");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("run.cfg");
    std::fs::write(&cfg_path, "# comment line\nn=64\ntau=0.5\nseed=3\n").unwrap();
    let out_dir = dir.join("out");
    let out = run(&[
        "random-spectrum",
        "--config",
        cfg_path.to_str().unwrap(),
        "--set",
        "tau=1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&read(&out_dir.join("report.json"))).unwrap();
    assert_eq!(report["config"]["n"], "64");
    assert_eq!(report["config"]["tau"], "1", "--set must override the file");
    assert_eq!(report["config"]["seed"], "3");
    assert_eq!(report["summary"]["k"], 64);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_echo_reproduces_the_run() {
    // feed the echoed config back in as --set overrides and compare bytes
    let dir_a = temp_dir("echo-a");
    let out = run(&[
        "random-spectrum",
        "--set",
        "n=48",
        "--set",
        "tau=1.5",
        "--seed",
        "21",
        "--out",
        dir_a.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&read(&dir_a.join("report.json"))).unwrap();
    let echo = report["config"].as_object().unwrap();

    let dir_b = temp_dir("echo-b");
    let mut args: Vec<String> = vec!["random-spectrum".into()];
    for (key, value) in echo {
        let value = value.as_str().unwrap();
        if value.is_empty() {
            continue;
        }
        args.push("--set".into());
        args.push(format!("{key}={value}"));
    }
    args.push("--out".into());
    args.push(dir_b.to_str().unwrap().into());
    let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let out_b = run(&arg_refs);
    assert_eq!(out_b.status.code(), Some(0));

    assert_eq!(
        read(&dir_a.join("spectrum.csv")),
        read(&dir_b.join("spectrum.csv")),
        "echoed config must reproduce the spectrum bytes"
    );
    let _ = std::fs::remove_dir_all(&dir_a);
    let _ = std::fs::remove_dir_all(&dir_b);
}

#[test]
fn sweep_writes_index_and_cells() {
    let dir = temp_dir("sweep");
    let out = run(&[
        "sweep",
        "--set",
        "kind=random-spectrum",
        "--set",
        "grid_n=32,48",
        "--set",
        "grid_tau=0.5,1",
        "--jobs",
        "2",
        "--seed",
        "9",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let index: serde_json::Value = serde_json::from_str(&read(&dir.join("sweep.json"))).unwrap();
    let cells = index["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    for cell in cells {
        assert_eq!(cell["status"], "ok");
        let report_rel = cell["report"].as_str().unwrap();
        let report: serde_json::Value = serde_json::from_str(&read(&dir.join(report_rel))).unwrap();
        assert_eq!(report["seed"], cell["seed"]);
    }
    // distinct derived seeds per cell
    let seeds: std::collections::BTreeSet<u64> =
        cells.iter().map(|c| c["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds.len(), 4);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_records_cell_errors_and_keeps_going() {
    let dir = temp_dir("sweep-err");
    // n=33 is invalid for the baker map; the other cell still runs
    let out = run(&[
        "sweep",
        "--set",
        "kind=baker-spectrum",
        "--set",
        "grid_n=33,32",
        "--set",
        "grid_tau=0.5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_ne!(out.status.code(), Some(0));
    let index: serde_json::Value = serde_json::from_str(&read(&dir.join("sweep.json"))).unwrap();
    let cells = index["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    assert_eq!(cells[0]["status"], "error");
    assert!(cells[0]["error"].as_str().unwrap().contains("even"));
    assert_eq!(cells[1]["status"], "ok");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_kicked_top_parameter_grid() {
    // the (k,p) x tau layout: {(1.5,1),(6.5,1.5)} x {0.5,1} at N = 2j+1 = 201
    let dir = temp_dir("sweep-top");
    let out = run(&[
        "sweep",
        "--set",
        "kind=top-spectrum",
        "--set",
        "j=100",
        "--set",
        "grid_kp=1.5:1,6.5:1.5",
        "--set",
        "grid_tau=0.5,1",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let index: serde_json::Value = serde_json::from_str(&read(&dir.join("sweep.json"))).unwrap();
    let cells = index["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    let names: Vec<&str> = cells.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"k1.5_p1_tau0.5"));
    assert!(names.contains(&"k6.5_p1.5_tau1"));
    for cell in cells {
        assert_eq!(cell["status"], "ok");
        let report: serde_json::Value =
            serde_json::from_str(&read(&dir.join(cell["report"].as_str().unwrap()))).unwrap();
        let tau: f64 = report["config"]["tau"].as_str().unwrap().parse().unwrap();
        let expected_k = (tau * 201.0).round() as u64;
        assert_eq!(report["summary"]["k"].as_u64().unwrap(), expected_k);
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
#[ignore = "several minutes: the full N in {500,1000,1500} x tau in {0.5,1,1.5} grid"]
fn sweep_full_baker_grid() {
    let dir = temp_dir("sweep-fig1");
    let out = run(&[
        "sweep",
        "--set",
        "kind=baker-spectrum",
        "--set",
        "grid_n=500,1000,1500",
        "--set",
        "grid_tau=0.5,1,1.5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let index: serde_json::Value = serde_json::from_str(&read(&dir.join("sweep.json"))).unwrap();
    let cells = index["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 9);
    assert!(cells.iter().all(|c| c["status"] == "ok"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn empty_sweep_grid_is_rejected() {
    let dir = temp_dir("sweep-empty");
    let out = run(&["sweep", "--set", "kind=random-spectrum", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("empty grid"), "stderr: {stderr}");
}

#[test]
fn svg_output_present_when_requested() {
    let dir = temp_dir("svg");
    let out = run(&[
        "random-spectrum",
        "--set",
        "n=32",
        "--set",
        "formats=csv,json,svg",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let svg = read(&dir.join("histogram.svg"));
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<rect"));
    assert!(svg.contains("<polyline"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn classical_returns_report_fields() {
    let dir = temp_dir("classical");
    let out = run(&[
        "classical-returns",
        "--set",
        "cell_bits=4",
        "--set",
        "steps=200000",
        "--set",
        "hit_bits=6",
        "--set",
        "trials=400",
        "--seed",
        "33",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&read(&dir.join("report.json"))).unwrap();
    let classical = &report["classical"];
    let kac_mean = classical["kac_mean_return"].as_f64().unwrap();
    assert!((kac_mean - 16.0).abs() < 1.6, "kac mean {kac_mean}");
    let hit_mean = classical["hit_mean_rescaled"].as_f64().unwrap();
    assert!((hit_mean - 1.0).abs() < 0.25, "hitting mean {hit_mean}");
    assert!(classical["hit_ks_exp1"].as_f64().unwrap() < 0.2);
    let hist = read(&dir.join("histogram.csv"));
    assert!(hist.starts_with("bin_lo,bin_hi,mass,exp1_density_at_midpoint"));
    let _ = std::fs::remove_dir_all(&dir);
}
