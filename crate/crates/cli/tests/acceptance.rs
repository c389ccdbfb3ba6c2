//! Runs the built-in suite through the binary, re-derives what can be derived
//! independently, and reports one line per criterion.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn run_suite(tag: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance").join(tag);
    let _ = fs::remove_dir_all(&dir);
    let o = Command::new(env!("CARGO_BIN_EXE_hochgrav"))
        .args(["check", "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    dir
}

fn run_job(tag: &str, task: &str, job: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance").join(tag);
    let _ = fs::remove_dir_all(&dir);
    let input = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/jobs").join(job);
    let o = Command::new(env!("CARGO_BIN_EXE_hochgrav"))
        .args([task, "--input", input.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    dir
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `x^α dx_B` in two variables with `|B| = p` and `|α| + p = w`.
fn two_variable_forms(p: u64, w: u64) -> u64 {
    if p > w {
        return 0;
    }
    binomial(2, p) * (w - p + 1)
}

fn u(v: &Value) -> u64 {
    v.as_u64().unwrap_or_else(|| panic!("not a count: {v}"))
}

fn all(v: &Value) -> &Vec<Value> {
    v.as_array().unwrap()
}

fn criterion_1(d: &Value) -> Result<(), String> {
    let rows = all(d);
    let count = |kind: &str| rows.iter().filter(|r| r["complex"] == kind).count();
    // three algebras in weights 0..=4, eight bivectors
    if count("hochschild") != 15 || count("coboundary") != 8 || count("poisson") == 0 {
        return Err(format!("unexpected coverage: {} / {} / {}", count("hochschild"), count("poisson"), count("coboundary")));
    }
    for r in rows {
        if u(&r["failures"]) != 0 {
            return Err(format!("failures in {r}"));
        }
        if u(&r["checked"]) == 0 && r["weight"] != 0 {
            return Err(format!("nothing checked in {r}"));
        }
    }
    Ok(())
}

fn criterion_2(d: &Value) -> Result<(), String> {
    for w in 0..=4u64 {
        for p in 0..=4u64 {
            let got = u(&d["hh_dims"][w.to_string()][p.to_string()]);
            let want = two_variable_forms(p, w);
            if got != want {
                return Err(format!("HH_{p} at weight {w}: {got} != {want}"));
            }
        }
    }
    Ok(())
}

fn criterion_3(d: &Value) -> Result<(), String> {
    let chains = all(&d["chains"]);
    if chains.len() != 10 {
        return Err(format!("{} chain rows", chains.len()));
    }
    for r in chains {
        if r["small"] != r["bar"] {
            return Err(format!("small model differs from bar complex: {r}"));
        }
    }
    for r in all(&d["cochains"]) {
        let (i, w) = (u(&r["i"]), u(&r["weight"]));
        // polyvectors x^α ∂_B with |B| = i, |α| = w
        let want = [1, 2, 1, 0][i as usize] * (w + 1);
        if u(&r["polynomial"]) != want || u(&r["exterior"]) != want {
            return Err(format!("HH^{i} at weight {w}: {r}, expected {want}"));
        }
    }
    Ok(())
}

fn criterion_4(d: &Value) -> Result<(), String> {
    for (k, r) in all(d).iter().enumerate() {
        let n = k as u32 + 1;
        let ok = r["nondegenerate"] == true
            && u(&r["triples_checked"]) == 8u64.pow(n)
            && u(&r["cyclic_violations"]) == 0
            && u(&r["eta_coboundary_defects"]) == 0;
        if !ok {
            return Err(format!("n = {n}: {r}"));
        }
    }
    Ok(())
}

fn criterion_5(d: &Value) -> Result<(), String> {
    if d["derived_bivector"] != "x2*x3*Dx2*Dx3 + (-1)*x1*x3*Dx1*Dx3 + x1*x2*Dx1*Dx2" {
        return Err(format!("unexpected derived bivector {}", d["derived_bivector"]));
    }
    for r in all(&d["reports"]) {
        if u(&r["failure_count"]) != 0 || u(&r["seven_term_checked"]) == 0 || u(&r["delta_square_checked"]) == 0 || u(&r["bracket_checked"]) == 0 {
            return Err(format!("{}: {} failures", r["label"], r["failure_count"]));
        }
    }
    Ok(())
}

fn criterion_6(d: &Value) -> Result<(), String> {
    for r in all(d) {
        if u(&r["les_failures"]) != 0 || !all(&r["unstable_degrees"]).is_empty() {
            return Err(format!("{r}"));
        }
    }
    Ok(())
}

fn criterion_7(d: &Value) -> Result<(), String> {
    let reports = all(d);
    if reports.len() != 3 {
        return Err(format!("{} models", reports.len()));
    }
    for r in reports {
        if u(&r["failure_count"]) != 0 || u(&r["skew_checked"]) == 0 || r["higher_nontrivial"] != true {
            return Err(format!("{}: {} failures", r["label"], r["failure_count"]));
        }
        for key in ["n=2,m=1", "n=2,m=3", "n=3,m=0", "n=3,m=2", "n=4,m=0", "n=4,m=1", "n=5,m=0"] {
            if r["jacobi_checked"][key].as_u64().unwrap_or(0) == 0 {
                return Err(format!("{}: {key} never exercised", r["label"]));
            }
        }
    }
    Ok(())
}

fn criterion_8(d: &Value) -> Result<(), String> {
    for r in all(d) {
        let ok = u(&r["identification_failures"]) == 0
            && u(&r["checked"]) > 0
            && u(&r["mismatches"]) == 0
            && u(&r["control_mismatches"]) > 0;
        if !ok {
            return Err(format!("{r}"));
        }
    }
    Ok(())
}

fn criterion_9(d: &Value) -> Result<(), String> {
    let expected = [true, false, false, true];
    let rows = all(d);
    if rows.len() != expected.len() {
        return Err(format!("{} cases", rows.len()));
    }
    for (r, e) in rows.iter().zip(expected) {
        if r["primal"] != e || r["frobenius_dual"] != e || r["divergence_free"] != e {
            return Err(format!("{}: expected unimodular = {e}, got {r}", r["bivector"]));
        }
    }
    Ok(())
}

type Check = fn(&Value) -> Result<(), String>;

fn same_bytes(a: &Path, b: &Path) -> Result<(), String> {
    let mut names: Vec<_> = fs::read_dir(a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    if names.is_empty() {
        return Err(format!("no artifacts in {}", a.display()));
    }
    for n in names {
        if fs::read(a.join(&n)).unwrap() != fs::read(b.join(&n)).map_err(|e| e.to_string())? {
            return Err(format!("{} differs between runs", n.to_string_lossy()));
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let first = run_suite("first");
    let second = run_suite("second");
    let doc: Value = serde_json::from_str(&fs::read_to_string(first.join("suite.json")).unwrap()).unwrap();
    assert_eq!(doc["schema"], "hochgrav/1");
    let criteria = all(&doc["result"]["criteria"]);
    let checks: [Check; 9] = [
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9,
    ];
    let mut failed = Vec::new();
    for (i, check) in checks.iter().enumerate() {
        let c = &criteria[i];
        assert_eq!(u(&c["id"]), i as u64 + 1);
        let verdict = if c["passed"] != true {
            Err("suite reports failure".to_string())
        } else {
            check(&c["data"])
        };
        match verdict {
            Ok(()) => println!("criterion {}: PASS ({})", i + 1, c["title"].as_str().unwrap()),
            Err(e) => {
                println!("criterion {}: FAIL ({}): {e}", i + 1, c["title"].as_str().unwrap());
                failed.push(i + 1);
            }
        }
    }
    let jobs = ["first", "second"].map(|t| run_job(&format!("job-{t}"), "run", "exterior_frobenius.job"));
    let determinism = same_bytes(&first, &second).and_then(|_| same_bytes(&jobs[0], &jobs[1]));
    match determinism {
        Ok(()) => println!("criterion 10: PASS (byte-identical artifacts across runs)"),
        Err(e) => {
            println!("criterion 10: FAIL: {e}");
            failed.push(10);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
