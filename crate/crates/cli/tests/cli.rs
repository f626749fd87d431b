use std::path::PathBuf;
use std::process::{Command, Output};

use ic_outage::analysis::epsilon_bound;
use ic_outage::{DecoderMode, GaussianIC};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ic-outage"))
}

fn channels() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../channels")
}

fn gauss() -> String {
    channels().join("gauss.json").display().to_string()
}

fn binary() -> String {
    channels().join("binary.json").display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn analyze_gaussian_tin() {
    let o = run(&["analyze", "--channel", &gauss(), "--lambda", "1.0", "--d", "5", "--mode", "tin"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("epsilon       0.1071"), "{text}");
    assert!(text.contains("lambda_bar    4.9836"));
}

#[test]
fn analyze_json_is_full_precision() {
    let o = run(&["analyze", "--channel", &gauss(), "--lambda", "1.7", "--d", "5", "--mode", "di", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let g = GaussianIC::from_dbw(30.0, 30.0, 0.8, 1.5).unwrap();
    let lib = epsilon_bound(&g.info_quantities(), g.lambda_bar(), 1.7, 5.0, DecoderMode::Di)
        .unwrap()
        .value()
        .unwrap();
    assert_eq!(v["epsilon"]["epsilon"].as_f64().unwrap(), lib);
    assert!(v["case_label"].as_str().unwrap().starts_with("case"));
}

#[test]
fn analyze_below_threshold_is_zero() {
    let o = run(&[
        "analyze", "--channel", &binary(), "--lambda", "0.05", "--mode", "tin", "--pi1", "0.8,0.2", "--pi2", "0.8,0.2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("epsilon       0.0000  [zero]"));
}

#[test]
fn converse_violation_exit_code() {
    let o = run(&["analyze", "--channel", &gauss(), "--lambda", "6.0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("lambda 6 exceeds converse threshold 4.9836"), "{}", stderr(&o));
}

#[test]
fn gaussian_flags_match_file() {
    let a = run(&["analyze", "--channel", &gauss(), "--lambda", "2", "--json"]);
    let b = run(&[
        "analyze", "--p1-dbw", "30", "--p2", "1000", "--c1", "0.8", "--c2", "1.5", "--lambda", "2", "--json",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"type":"gaussian","p1_dbw":30}"#).unwrap();
    let o = run(&["analyze", "--channel", bad.to_str().unwrap(), "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["analyze", "--p1-dbw", "30", "--p1", "1000", "--p2", "1", "--c1", "1", "--c2", "1", "--lambda", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exactly one"));

    let o = run(&["simulate", "--channel", &gauss(), "--lambda", "1", "--r", "1.3", "--mode", "stochastic"]);
    assert_eq!(o.status.code(), Some(2));
}

fn lambda_sweep_args(out: &str) -> Vec<String> {
    [
        "sweep", "--channel", &gauss(), "--variable", "lambda", "--range", "0.3,2.49,60", "--d", "5", "--mode", "tin,di",
        "--out", out,
    ]
    .map(String::from)
    .to_vec()
}

#[test]
fn sweep_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let o = bin().args(lambda_sweep_args(a.to_str().unwrap())).env("IC_OUTAGE_THREADS", "1").output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = bin().args(lambda_sweep_args(b.to_str().unwrap())).env("IC_OUTAGE_THREADS", "4").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "variable,value,user,N,mode,rho,beta,kappa,chi1,chi2,p_outage_finiteN,p_outage_limit,epsilon,case_label"
    );
    assert_eq!(lines.count(), 60 * 2 * 2);
}

#[test]
fn sweep_rows_match_analyze() {
    for lambda in ["0.9", "1.6", "2.2"] {
        let o = run(&[
            "sweep", "--channel", &gauss(), "--variable", "lambda", "--values", lambda, "--r", "1.8", "--d", "5",
            "--n-packets", "8", "--mode", "di",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
        let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 2);

        let a = run(&[
            "analyze", "--channel", &gauss(), "--lambda", lambda, "--r", "1.8", "--d", "5", "--n-packets", "8", "--mode",
            "di", "--json",
        ]);
        let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
        for (i, row) in rows.iter().enumerate() {
            let u = &v["users"][i];
            let num = |k: usize| row[k].parse::<f64>().unwrap();
            assert_eq!(num(5), u["rho"].as_f64().unwrap());
            assert_eq!(num(6), u["beta"].as_f64().unwrap());
            assert_eq!(num(10), u["p_outage_finite_n"]["value"].as_f64().unwrap());
            assert_eq!(num(11), u["p_outage_limit"].as_f64().unwrap());
            assert_eq!(num(12), v["epsilon"]["epsilon"].as_f64().unwrap());
            assert_eq!(&row[13], v["case_label"].as_str().unwrap());
        }
    }
}

#[test]
fn alpha_sweep_with_fixed_rho() {
    let o = run(&[
        "sweep", "--rho1", "0.016", "--rho2", "0.0501", "--r", "1.1", "--variable", "alpha", "--range", "0.1,2,20",
        "--n-packets", "1,2,4,16,256",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20 * 5 * 2);
    let p = |alpha: &str, n: &str, user: &str| -> f64 {
        rows.iter()
            .find(|r| &r[1] == alpha && &r[3] == n && &r[2] == user)
            .map(|r| r[10].parse().unwrap())
            .unwrap()
    };
    // Above the critical alpha more packets cost more outage.
    assert!(p("2", "1", "2") <= p("2", "16", "2"));
    assert!(p("2", "16", "2") <= p("2", "256", "2"));
}

#[test]
fn simulate_is_deterministic() {
    let args = [
        "simulate", "--channel", &gauss(), "--lambda", "1", "--r", "1.3", "--n-packets", "8", "--d", "0.5", "--trials",
        "20000", "--seed", "11",
    ];
    let a = bin().args(args).env("IC_OUTAGE_THREADS", "1").output().unwrap();
    let b = bin().args(args).env("IC_OUTAGE_THREADS", "3").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    for key in ["outage", "halfwidth", "rates", "trials", "seed", "mode"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn simulate_check_passes_in_fluid_mode() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("sim.csv");
    let o = run(&[
        "simulate", "--channel", &gauss(), "--lambda", "0.6", "--r", "1.3", "--n-packets", "8", "--d", "1", "--trials",
        "100000", "--check", "--csv", csv_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(csv_path).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn simulate_check_fails_at_small_n() {
    let o = run(&[
        "simulate", "--channel", &gauss(), "--lambda", "0.6", "--r", "1.3", "--n-packets", "8", "--d", "1", "--trials",
        "20000", "--mode", "stochastic", "--n", "16", "--check",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("FAIL"));
}

#[test]
fn bad_thread_count() {
    let o = bin()
        .args(["analyze", "--channel", &gauss(), "--lambda", "1"])
        .env("IC_OUTAGE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
