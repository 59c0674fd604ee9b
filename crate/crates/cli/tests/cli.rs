use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_coexsim");

fn default_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml")
}

fn coexsim(config: &Path, out: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn cdf_single_writes_monotone_cdf() {
    let tmp = tempfile::tempdir().unwrap();
    let o = coexsim(
        &default_config(),
        tmp.path(),
        &[
            "--command",
            "cdf-single",
            "--trials",
            "10000",
            "--r-min",
            "30",
            "--r-target",
            "50",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(tmp.path().join("cdf.csv")).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["threshold_db", "cdf"]);
    let cdf: Vec<f64> = r
        .records()
        .map(|x| x.unwrap()[1].parse().unwrap())
        .collect();
    assert_eq!(cdf.len(), 801);
    assert!(cdf.windows(2).all(|w| w[0] <= w[1]));
    assert!(tmp.path().join("cdf_analytic.csv").exists());

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["trials"], 10000);
    assert_eq!(
        manifest["config"]["deployment"]["protection_distance_km"],
        30.0
    );
    assert!(manifest["config_toml"]
        .as_str()
        .unwrap()
        .contains("[radar]"));
}

#[test]
fn manifest_config_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let o = coexsim(
        &default_config(),
        &a,
        &[
            "--command",
            "sinr-sweep",
            "--trials",
            "300",
            "--r-min",
            "30,50",
            "--seed",
            "9",
        ],
    );
    assert!(o.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    let resolved = tmp.path().join("resolved.toml");
    fs::write(&resolved, manifest["config_toml"].as_str().unwrap()).unwrap();
    let b = tmp.path().join("b");
    let o = coexsim(&resolved, &b, &["--command", "sinr-sweep"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read(a.join("sweep.csv")).unwrap(),
        fs::read(b.join("sweep.csv")).unwrap()
    );
}

#[test]
fn missing_radar_section_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "[cbsd]\nmax_power_dbm = 30.0\n").unwrap();
    let out = tmp.path().join("out");
    let o = coexsim(&cfg, &out, &["--command", "allocate"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("error.json")).unwrap()).unwrap();
    assert_eq!(err["error"], "config");
    assert!(err["message"].as_str().unwrap().contains("radar"));
}

#[test]
fn malformed_field_names_field_and_line() {
    let tmp = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(default_config())
        .unwrap()
        .replace("rcs_m2 = 100.0", "rcs_m2 = \"large\"");
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, text).unwrap();
    let out = tmp.path().join("out");
    let o = coexsim(&cfg, &out, &["--command", "cdf-single"]);
    assert_eq!(o.status.code(), Some(2));
    let msg = fs::read_to_string(out.join("error.json")).unwrap();
    assert!(msg.contains("rcs_m2") && msg.contains("line"), "{msg}");
}

#[test]
fn infeasible_allocation_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let o = coexsim(
        &default_config(),
        tmp.path(),
        &[
            "--command",
            "allocate",
            "--r-min",
            "1",
            "--i-th-dbm",
            "-150",
        ],
    );
    assert!(o.status.success());
    let a: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("allocation.json")).unwrap())
            .unwrap();
    assert_eq!(a["feasible"], false);
}

#[test]
fn adjacent_override_and_missing_fdr() {
    let tmp = tempfile::tempdir().unwrap();
    let o = coexsim(
        &default_config(),
        &tmp.path().join("adj"),
        &[
            "--command",
            "sinr-sweep",
            "--trials",
            "200",
            "--r-min",
            "1",
            "--fdr-db",
            "50",
        ],
    );
    assert!(o.status.success());

    let text = fs::read_to_string(default_config()).unwrap().replace(
        "redeploy = true",
        "redeploy = true\nchannel_offset_mhz = 20.0",
    );
    let cfg = tmp.path().join("adj.toml");
    fs::write(&cfg, text).unwrap();
    let out = tmp.path().join("err");
    let o = coexsim(&cfg, &out, &["--command", "sinr-sweep", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(fs::read_to_string(out.join("error.json"))
        .unwrap()
        .contains("missing-fdr"));
}

#[test]
fn allocation_csv_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let o = coexsim(
        &default_config(),
        tmp.path(),
        &[
            "--command",
            "allocate",
            "--method",
            "method2",
            "--sectors",
            "5",
            "--r-min",
            "20",
            "--i-th-dbm",
            "-117",
            "--power-step-db",
            "2",
        ],
    );
    assert!(o.status.success());
    let mut r = csv::Reader::from_path(tmp.path().join("allocation.csv")).unwrap();
    assert_eq!(
        r.headers().unwrap(),
        vec!["id", "sector", "range_km", "azimuth_deg", "power_dbm"]
    );
    for rec in r.records() {
        let p: f64 = rec.unwrap()[4].parse().unwrap();
        assert!((20.0..=30.0).contains(&p));
    }
}

#[test]
fn density_plan_and_verify_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let o = coexsim(
        &default_config(),
        &tmp.path().join("d"),
        &["--command", "density-plan"],
    );
    assert!(o.status.success());
    assert!(tmp.path().join("d/density_plan.csv").exists());
    let o = coexsim(
        &default_config(),
        &tmp.path().join("v"),
        &[
            "--command",
            "verify",
            "--trials",
            "200",
            "--r-min",
            "20",
            "--i-th-dbm",
            "-117",
        ],
    );
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("v/verification.json")).unwrap())
            .unwrap();
    let p = v["report"]["probability"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&p));
}
