use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn frbf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frbf"))
        .args(args)
        .output()
        .expect("run frbf")
}

fn config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const SWEEP: &str = r#"
family = "false_tps"
N = 3.22
frac_mode = "exponent_shift"
alpha = [0.0, 0.3, 0.6]
domain = [0.28, 1.48]
ni = 40
nb = 16
"#;

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().skip(1).filter(|l| !l.is_empty()).collect()
}

#[test]
fn interpolate_writes_one_row_per_alpha() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "sweep.toml", SWEEP);
    let out = dir.path().join("out.csv");
    let run = frbf(&[
        "interpolate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("alpha,rmse,cond,status"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 3);
    let hash = rows[0].rsplit(',').next().unwrap().to_string();
    assert_eq!(hash.len(), 16);
    assert!(rows.iter().all(|r| r.ends_with(&hash) && r.contains(",ok,")));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "sweep.toml", SWEEP);
    let first = frbf(&["interpolate", "--config", cfg.to_str().unwrap()]);
    let second = frbf(&["interpolate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_output_parses() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "sweep.toml", SWEEP);
    let run = frbf(&[
        "interpolate",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
        "--alpha",
        "0.1,0.2",
    ]);
    assert_eq!(run.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    assert_eq!(doc["mode"], "interpolate");
}

#[test]
fn kernel_table_has_fixed_length() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "table.toml", "family = \"two_term\"\nN = 2.01\n");
    let run = frbf(&["kernel-table", "--config", cfg.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let text = String::from_utf8(run.stdout).unwrap();
    assert_eq!(data_rows(&text).len(), 256);
}

#[test]
fn collocate_reports_skipped_alphas() {
    let dir = TempDir::new().unwrap();
    let body = r#"
family = "false_tps"
N = 4.255
frac_mode = "full_fractional"
beta = 0.15
alpha = [0.5, 2.5]
b = 1.0
ni = 60
nb = 24
"#;
    let cfg = config(dir.path(), "colloc.toml", body);
    let run = frbf(&["collocate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(data_rows(&String::from_utf8(run.stdout).unwrap()).len(), 1);
    assert!(String::from_utf8_lossy(&run.stderr).contains("skipped alpha = 2.5"));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "sweep.toml", SWEEP);
    let integer_n = frbf(&["interpolate", "--config", cfg.to_str().unwrap(), "--N", "3"]);
    assert_eq!(integer_n.status.code(), Some(2));
    let unknown = config(dir.path(), "unknown.toml", "N = 3.22\nbogus = 1\n");
    assert_eq!(
        frbf(&["interpolate", "--config", unknown.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("missing.toml");
    assert_eq!(
        frbf(&["interpolate", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn all_rows_failing_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let body = format!("{SWEEP}precondition = true\nM = 1.000001\nn_max = 1\n");
    let cfg = config(dir.path(), "fail.toml", &body);
    let run = frbf(&["interpolate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(3));
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(data_rows(&text).iter().all(|r| r.contains("error")));
}
