use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hochgrav"))
}

fn job(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/jobs").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn write_job(dir: &Path, text: &str) -> String {
    let p = dir.join("job.txt");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn zero_bivector_on_a_line_matches_golden_table() {
    let out = scratch("golden");
    let o = run(&["gravity", "--input", job("zero_line.job").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let got = fs::read_to_string(out.join("gravity.json")).unwrap();
    let golden = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/zero_line_gravity.json")).unwrap();
    assert_eq!(got, golden);

    // Class i is x^{i-1} dx in weight i, class 0 is 1; {1, x^{q-1} dx} = -(q-1) x^{q-2} dx.
    let doc: Value = serde_json::from_str(&got).unwrap();
    assert_eq!(doc["schema"], "hochgrav/1");
    let binary = &doc["result"]["gravity"]["table"]["entries"]["2"];
    for q in 2..=4i64 {
        let left = &binary[format!("0,{q}")];
        let right = &binary[format!("{q},0")];
        assert_eq!(left[0]["weight"], q - 1);
        assert_eq!(left[1][0], (-(q - 1)).to_string());
        assert_eq!(right[1][0], (q - 1).to_string());
    }
}

#[test]
fn parse_errors_exit_four_with_line_numbers() {
    let dir = scratch("parse");
    let p = write_job(&dir, "[algebra]\nkind = polynomial\nn = 2\n[poisson]\nc = 1 3 1 2 1\n");
    let o = run(&["poisson", "--input", &p]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5: generator index 3"));
    assert_eq!(run(&["hh"]).status.code(), Some(4));
    assert_eq!(run(&["no-such-task"]).status.code(), Some(4));
    let p = write_job(&dir, "[algebra]\nkind = exterior\nn = 2\n");
    assert_eq!(run(&["gravity", "--input", &p]).status.code(), Some(4));
}

#[test]
fn non_poisson_bivector_exits_two() {
    let dir = scratch("jacobi");
    let p = write_job(&dir, "[algebra]\nkind = polynomial\nn = 3\n[poisson]\nc = 1 2 2 3 1\nc = 1 1 1 2 1\n");
    let o = run(&["poisson", "--input", &p]);
    assert_eq!(o.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["result"]["is_poisson"], false);
    assert_eq!(doc["status"], "fail");
}

#[test]
fn narrow_weight_window_exits_three_and_names_a_sufficient_one() {
    let o = run(&["gravity", "--input", job("exterior_frobenius.job").to_str().unwrap(), "--wmax", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["status"], "window-insufficient");
    assert_eq!(doc["result"]["gravity"]["sufficient_wmax"], 2);
}

#[test]
fn koszul_job_compares_dimensions_and_gravity_across_duality() {
    let o = run(&["koszul", "--input", job("plane.job").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &doc["result"];
    assert!(r["chain_dims"].as_array().unwrap().iter().all(|c| c["match"] == true));
    assert!(r["cohomology_dims"].as_array().unwrap().iter().all(|c| c["algebra"] == c["dual"]));
    assert_eq!(r["gravity_iso"]["comparison"]["mismatch_count"], 0);
    assert!(r["gravity_iso"]["negative_control"]["mismatch_count"].as_u64().unwrap() > 0);
}

#[test]
fn derived_unimodular_job_passes_poisson_checks() {
    let out = scratch("derived");
    let o = run(&["run", "--input", job("derived_unimodular.job").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let doc: Value = serde_json::from_str(&fs::read_to_string(out.join("poisson.json")).unwrap()).unwrap();
    assert_eq!(doc["result"]["unimodularity"]["diagram_commutes"], true);
    assert_eq!(doc["result"]["dual"]["unimodularity"]["volume_is_cycle"], true);
    assert_eq!(doc["result"]["bv"]["failure_count"], 0);
    assert!(out.join("koszul.txt").exists());
}

#[test]
fn rational_coefficients_stay_exact() {
    let dir = scratch("rational");
    let p = write_job(&dir, "[algebra]\nkind = polynomial\nn = 2\n[poisson]\nc = 1 2 1 2 2/3\n");
    let o = run(&["poisson", "--input", &p]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["result"]["bivector"], "(2/3)*x1*x2*Dx1*Dx2");
    assert_eq!(doc["result"]["unimodularity"]["divergence_free"], false);
}
