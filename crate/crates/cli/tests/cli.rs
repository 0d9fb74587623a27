use std::f64::consts::PI;
use std::process::{Command, Output};

use ptloc_core::extensions::q3_eigenvalue;
use ptloc_core::ModelParams;
use serde_json::Value;

fn ptloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptloc")).args(args).output().expect("binary runs")
}

fn csv(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let out = ptloc(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = ptloc(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn figure1_lattice_rows() {
    let (header, rows) = csv(&["figure1", "--grid-points", "8", "--n-min", "-1", "--n-max", "2"]);
    assert_eq!(header, ["varphi", "n", "m_z"]);
    assert_eq!(rows.len(), 8 * 4);
    let find = |phi: f64, n: i64| rows.iter().find(|r| (num(&r[0]) - phi).abs() < 1e-15 && r[1] == n.to_string()).unwrap();
    assert_eq!(num(&find(0.0, 0)[2]), 0.0);
    assert_eq!(num(&find(0.0, 1)[2]), 2.0);
    let p = ModelParams::new(1.0).unwrap();
    for n in -1..2 {
        let at_pi = num(&find(PI, n)[2]);
        assert!((at_pi - q3_eigenvalue(n + 1, -PI + 1e-13, &p)).abs() < 1e-10);
    }
}

#[test]
fn csv_reals_round_trip() {
    let (_, rows) = csv(&["figure3", "--grid-points", "7"]);
    for r in &rows {
        for cell in r {
            let (mantissa, _) = cell.split_once('e').unwrap();
            assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 17, "{cell}");
        }
    }
    let p = ModelParams::new(1.0).unwrap();
    let back = num(&rows[3][1]);
    assert_eq!(back, ptloc_core::povm::hegerfeldt_pn(0, 2.0, &p));
}

#[test]
fn figure2_bars() {
    let v = json(&["figure2", "--format", "json"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["mass"], 1.0);
    let ds = &v["dataset"];
    let rows = ds["rows"].as_array().unwrap();
    let get = |mt: f64, n: i64| rows.iter().find(|r| r[0].as_f64() == Some(mt) && r[1].as_i64() == Some(n)).unwrap();
    assert_eq!(get(0.0, 0)[2].as_f64(), Some(1.0));
    assert_eq!(get(0.0, 3)[2].as_f64(), Some(0.0));
    assert!((get(1.0, 0)[2].as_f64().unwrap() - 0.5838773).abs() < 1e-7);
    assert_eq!(get(1.0, 2)[3], true);
    let s = &ds["summary"];
    let sum = s["sum_abs_n_le_50_mtau_3"].as_f64().unwrap();
    let tail = s["tail_abs_n_gt_50_mtau_3"].as_f64().unwrap();
    assert!((sum + tail - 1.0).abs() < 1e-12);
    assert!(ds["truncation_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn figure3_curves() {
    let (header, rows) = csv(&["figure3"]);
    assert_eq!(header, ["m_tau", "p_0", "p_1", "p_2"]);
    assert_eq!(rows.len(), 401);
    assert_eq!(num(&rows[0][2]), 0.0);
    assert!((num(&rows[1][0]) - 0.01).abs() < 1e-15);
    assert!(num(&rows[1][2]) > 0.0);
    let p0: Vec<f64> = rows.iter().take(101).map(|r| num(&r[1])).collect();
    assert!(p0.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn spectrum_and_povm_prob() {
    let (_, rows) = csv(&["spectrum", "--phi", "-2.2", "--n-min", "0", "--n-max", "3"]);
    for r in &rows {
        let (a, b, c) = (num(&r[2]), num(&r[3]), num(&r[4]));
        assert!((a - b).abs() < 1e-12 && (a - c).abs() < 1e-10);
    }
    let v = json(&["povm-prob", "--tau", "2", "--format", "json"]);
    let s = &v["dataset"]["summary"];
    assert!((s["sum"].as_f64().unwrap() + s["tail_outside_range"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let rows = v["dataset"]["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r[2] == true && r[1].as_f64().unwrap() > 1e-6));
}

#[test]
fn kernel_dataset() {
    let (_, rows) = csv(&["kernel", "--grid-points", "5", "--tau", "0.3"]);
    for r in &rows {
        assert!((num(&r[1]) - num(&r[2])).abs() < 1e-8);
        assert!((num(&r[5]).abs() - num(&r[6])).abs() < 1e-6 * num(&r[6]));
    }
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f1.csv");
    let out = ptloc(&["figure1", "--grid-points", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("varphi,n,m_z\n"));
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["figure1", "--mass", "-1"][..],
        &["figure1", "--phi", "4"],
        &["figure2", "--n-min", "3", "--n-max", "1"],
        &["figure3", "--grid-points", "1"],
        &["verify", "--tol", "0"],
        &["povm-prob", "--tau", "-1"],
        &["nonsense"],
    ] {
        assert_eq!(ptloc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_default_tight_and_deterministic() {
    let runs: Vec<_> = [
        vec!["verify", "--seed", "7", "--format", "json"],
        vec!["verify", "--seed", "7", "--format", "json"],
        vec!["verify", "--tol", "1e-15", "--format", "json"],
    ]
    .into_iter()
    .map(|a| std::thread::spawn(move || ptloc(&a)))
    .collect::<Vec<_>>()
    .into_iter()
    .map(|h| h.join().unwrap())
    .collect();
    assert_eq!(runs[0].status.code(), Some(0), "{}", String::from_utf8_lossy(&runs[0].stderr));
    assert_eq!(runs[0].stdout, runs[1].stdout);
    let rep: Value = serde_json::from_slice(&runs[0].stdout).unwrap();
    assert_eq!(rep["report"]["passed"], true);
    for c in rep["report"]["checks"].as_array().unwrap() {
        assert!(c["tolerance"].is_number() && c.get("truncation_bound").is_some());
    }
    assert_eq!(runs[2].status.code(), Some(1));
    let tight: Value = serde_json::from_slice(&runs[2].stdout).unwrap();
    let failed = tight["report"]["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).count();
    assert!(failed > 0);
    assert_eq!(tight["report"]["failed"].as_u64().unwrap() as usize, failed);
}
