use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qheine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qheine"))
        .args(args)
        .env_remove("Q_HEINE_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(stdout(out).lines().next().expect("one line")).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("qheine-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn eval_phi_kronecker_delta_is_exact() {
    let out = qheine(&["eval", "phi", "--a", "1", "--b", "0.7", "--c", "0.3", "--z", "0.5", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["exact"], "1");
    assert_eq!(v["error_bound"], 0.0);
    assert_eq!(v["value"]["re"], 1.0);
}

#[test]
fn eval_infinite_product_at_zero() {
    let v = json(&qheine(&["eval", "qpoch", "--x", "0", "--q", "0.5", "--inf"]));
    assert_eq!(v["value"]["re"], 1.0);
    assert_eq!(v["exact"], "1");
}

#[test]
fn eval_finite_product_is_exact_for_rationals() {
    let v = json(&qheine(&["eval", "qpoch", "--x", "1/2", "--q", "1/2", "--n", "2"]));
    assert_eq!(v["exact"], "3/8");
}

#[test]
fn eval_phi_matches_gauss_product() {
    let z = format!("{}", 0.1 / (0.3 * 0.4));
    let e = json(&qheine(&["eval", "phi", "--a", "0.3", "--b", "0.4", "--c", "0.1", "--z", &z, "--q", "0.5"]));
    let g = json(&qheine(&["verify", "q-gauss", "--a", "0.3", "--b", "0.4", "--c", "0.1", "--q", "0.5"]));
    let (x, y) = (e["value"]["re"].as_f64().unwrap(), g["rhs"]["value"]["re"].as_f64().unwrap());
    assert!((x - y).abs() <= 1e-10 * y.abs(), "{x} vs {y}");
}

#[test]
fn eval_cocycle_and_complex_literals() {
    let out = qheine(&[
        "eval", "cocycle", "--a", "0.3+0.1i", "--b", "-0.4", "--c", "0.6-1/5i", "--z", "0.5i", "--q", "0.5",
        "--element", "H^2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["element"], "H2");
}

#[test]
fn domain_errors_exit_two_and_name_the_condition() {
    let out = qheine(&["eval", "phi", "--a", "0.3", "--b", "0.4", "--c", "0.6", "--z", "1.5", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("|z| < 1"));

    let out = qheine(&["eval", "phi", "--a", "0.3", "--b", "0.4", "--c", "2", "--z", "0.5", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c q^N = 1"));

    let out = qheine(&["orbit", "--a", "0", "--b", "0.4", "--c", "0.6", "--z", "0.5", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(2));

    let out = qheine(&["verify", "q-gauss", "--a", "0.3", "--b", "0.4", "--c", "0.5", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("|c| < |ab|"));
}

#[test]
fn usage_errors_exit_two_help_exits_zero() {
    assert_eq!(qheine(&["eval", "phi", "--a", "x"]).status.code(), Some(2));
    assert_eq!(qheine(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qheine(&["verify", "heine", "--a", "0.3"]).status.code(), Some(2));
    let help = qheine(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    for sub in ["eval", "transform", "orbit", "verify", "sweep"] {
        assert!(stdout(&help).contains(sub), "{sub} missing from help");
    }
}

#[test]
fn transform_is_exact_for_rational_states() {
    let v = json(&qheine(&[
        "transform", "--element", "H3", "--a", "1/3", "--b", "1/4", "--c", "1/2", "--z", "1/5", "--q", "0.5",
    ]));
    assert_eq!(v["exact"]["a"], "2");
    assert_eq!(v["exact"]["b"], "3/2");
    assert_eq!(v["exact"]["c"], "1/2");
    assert_eq!(v["exact"]["z"], "1/30");
    let v = json(&qheine(&["transform", "--a", "0.3+0.1i", "--b", "0.4", "--c", "0.6", "--z", "0.5"]));
    assert!(v["exact"].is_null());
    assert_eq!(v["element"], "H");
}

#[test]
fn orbit_lists_twelve_rows_and_flags_fixed_points() {
    let out = qheine(&["orbit", "--a", "0.3", "--b", "0.4", "--c", "0.6", "--z", "0.5", "--q", "0.5", "--format", "jsonl"]);
    let rows: Vec<Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r["duplicate_of"].is_null()));
    assert_eq!(rows[11]["element"], "UH5");

    let out = qheine(&["orbit", "--a", "0.3", "--b", "0.3", "--c", "0.6", "--z", "0.5", "--q", "0.5"]);
    let table = stdout(&out);
    assert_eq!(table.lines().count(), 13);
    let u_row = table.lines().find(|l| l.starts_with("U ")).unwrap();
    assert!(u_row.ends_with("= e"), "{u_row}");

    let out = qheine(&["orbit", "--a", "1/3", "--b", "1/4", "--c", "1/2", "--z", "1/5", "--q", "1/2", "--element", "H3", "--format", "csv"]);
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("H3,2,1.5,0.5,0.0333"), "{row}");
}

#[test]
fn verify_examples() {
    let out = qheine(&["verify", "gauss-exact", "--m", "1", "--q", "1/2", "--b", "1/3", "--c", "1/5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["exact"]["lhs"], "1/2");
    assert_eq!(v["exact"]["rhs"], "1/2");
    assert_eq!(v["pass"], true);

    let out = qheine(&["verify", "abel", "--a", "0.3", "--b", "0.3", "--c", "0.3", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let (l, r) = (v["lhs"]["value"]["re"].as_f64().unwrap(), v["rhs"]["value"]["re"].as_f64().unwrap());
    assert!((l - r).abs() < 1e-10);

    let out = qheine(&["verify", "gauss-exact", "--m", "2", "--q", "0.5+0.1i", "--b", "1/3", "--c", "1/5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_example_has_no_failures() {
    let out = qheine(&["sweep", "--identity", "all", "--samples", "200", "--seed", "42", "--q", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 200 * 9);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(v["pass"] == true && v["skipped"] == false, "{line}");
    }
    let summary = String::from_utf8_lossy(&out.stderr);
    assert!(summary.contains("0 fail"), "{summary}");
}

#[test]
fn sweep_is_deterministic_across_jobs() {
    let args = ["sweep", "--identity", "heine,q-euler,abel", "--samples", "30", "--seed", "7"];
    let a = qheine(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_qheine"))
        .args(args)
        .env("Q_HEINE_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let c = qheine(&["sweep", "--identity", "heine,q-euler,abel", "--samples", "30", "--seed", "8"]);
    assert_eq!(c.status.code(), Some(0));
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sweep_config_file_with_flag_override() {
    let path = scratch(
        "sweep.toml",
        "identity = [\"q-gauss\", \"binomial-exact\"]\nsamples = 4\nseed = 5\nq = \"1/4\"\nformat = \"csv\"\n",
    );
    let p = path.to_str().unwrap();
    let out = qheine(&["sweep", "--config", p]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("identity,"));
    assert_eq!(text.lines().count(), 1 + 8);
    assert!(text.contains("binomial-exact"));

    let out = qheine(&["sweep", "--config", p, "--format", "jsonl", "--samples", "2"]);
    assert_eq!(stdout(&out).lines().count(), 4);
    assert!(stdout(&out).starts_with('{'));

    let bad = scratch("bad.toml", "samples = 3\ncolour = \"blue\"\n");
    let out = qheine(&["sweep", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = qheine(&["sweep", "--config", "/nonexistent/qheine.toml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qheine(&["sweep", "--q", "1.2"]);
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(path);
    let _ = std::fs::remove_file(bad);
}

#[test]
fn sweep_rejects_bad_job_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_qheine"))
        .args(["sweep", "--samples", "1"])
        .env("Q_HEINE_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
