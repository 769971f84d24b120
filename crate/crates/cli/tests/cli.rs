use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn linv(cache: &Path, args: &[&str]) -> Run {
    let out =
        Command::new(env!("CARGO_BIN_EXE_linv")).args(args).env("LINV_CACHE_DIR", cache).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let s: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

#[test]
fn li_period_examples() {
    let dir = tempfile::tempdir().unwrap();
    let r = linv(dir.path(), &["li-period", "30^1", "-p", "5", "--branch", "p", "--prec", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["result"]["residue"], "55 mod 125");

    let r = linv(dir.path(), &["li-period", "5^1", "-p", "5", "--branch", "p"]);
    assert_eq!(r.json()["result"]["l_invariant"]["v"], "inf");

    let r = linv(dir.path(), &["li-period", "6^1", "-p", "5"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not a period"));
    assert_eq!(r.json()["error"]["kind"], "domain");

    for bad in ["6^x", "1/0", "2 ** 3", ""] {
        assert_eq!(linv(dir.path(), &["li-period", bad, "-p", "5"]).code, 3, "{bad:?}");
    }
    assert_eq!(linv(dir.path(), &["li-period", "5", "-p", "6"]).code, 2);
}

#[test]
fn curve_commands_report_domain_errors() {
    let dir = tempfile::tempdir().unwrap();
    let r = linv(dir.path(), &["li-curve", "--label", "11a1", "-p", "7"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("no Tate period"));
    assert_eq!(linv(dir.path(), &["li-curve", "--label", "99z9", "-p", "7"]).code, 2);
    assert_eq!(linv(dir.path(), &["check-ezc", "--label", "15a1", "-p", "3"]).code, 2);
    // desk-scale guards
    assert_eq!(linv(dir.path(), &["check-ezc", "--label", "11a1", "-p", "11", "--prec", "4"]).code, 2);
    assert_eq!(linv(dir.path(), &["check-ezc", "--label", "11a1", "-p", "11", "--depth", "5"]).code, 2);
    assert_eq!(linv(dir.path(), &["check-ezc", "--label", "11a1", "-p", "12"]).code, 2);
    assert_eq!(linv(dir.path(), &["li-curve", "--curve", "[0,0,0,0,0]", "-p", "2"]).code, 2);
    assert_eq!(linv(dir.path(), &["li-curve", "--curve", "[0,0,0]", "-p", "2"]).code, 3);
}

#[test]
fn argument_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(linv(dir.path(), &["frobnicate"]).code, 3);
    assert_eq!(linv(dir.path(), &["check-ezc", "-p", "11"]).code, 3);
    assert_eq!(linv(dir.path(), &["check-ezc", "--label", "11a1", "--curve", "[0,0,1,-1,0]", "-p", "37"]).code, 3);
    assert_eq!(linv(dir.path(), &["--help"]).code, 0);
    assert_eq!(linv(dir.path(), &["--version"]).code, 0);
}

#[test]
fn output_is_deterministic_without_meta() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["check-ezc", "--label", "11a1", "-p", "11", "--depth", "2", "--no-meta"];
    let first = linv(dir.path(), &args);
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert_eq!(first.json()["provenance"]["cache"]["misses"][1], "space 11+");
    let a = linv(dir.path(), &args);
    let b = linv(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.json()["provenance"]["cache"]["hits"][1], "space 11+");
    assert_eq!(a.json()["result"], first.json()["result"]);

    let with_meta = linv(dir.path(), &args[..args.len() - 1]).json();
    assert!(with_meta["meta"]["timestamp_unix"].as_u64().unwrap() > 0);
    assert!(a.json().get("meta").is_none());
}

#[test]
fn sequential_and_parallel_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["stickelberger", "--label", "21a1", "-p", "3", "--depth", "3", "--table", "--no-meta"];
    let par = linv(dir.path(), &args).json();
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let seq = linv(dir.path(), &seq_args).json();
    assert_eq!(par["result"], seq["result"]);
    assert_eq!(seq["provenance"]["parallel"], false);
}

#[test]
fn cache_corruption_exits_4_and_stale_versions_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["modsym", "--level", "11", "--no-meta"];
    assert_eq!(linv(dir.path(), &args).code, 0);
    let path = dir.path().join("spaces/11-plus.json");
    let text = fs::read_to_string(&path).unwrap();

    let mut env: Value = serde_json::from_str(&text).unwrap();
    env["version"] = Value::from(0);
    fs::write(&path, env.to_string()).unwrap();
    let r = linv(dir.path(), &args);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["provenance"]["cache"]["misses"][0], "space 11+");

    let text = fs::read_to_string(&path).unwrap();
    let mut env: Value = serde_json::from_str(&text).unwrap();
    env["checksum"] = Value::from("00");
    fs::write(&path, env.to_string()).unwrap();
    let r = linv(dir.path(), &args);
    assert_eq!(r.code, 4);
    assert_eq!(r.json()["error"]["kind"], "cache");

    fs::write(&path, "{ truncated").unwrap();
    assert_eq!(linv(dir.path(), &args).code, 4);

    fs::write(dir.path().join("j-coefficients.json"), "[]").unwrap();
    assert_eq!(linv(dir.path(), &["li-curve", "--label", "11a1", "-p", "11"]).code, 4);
}

#[test]
fn imported_curves_are_validated_and_usable() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.txt");
    fs::write(&rows, "# allcurves rows\n37 a 1 [0,0,1,-1,0] 1 1\n43 a 1 [0,1,1,0,0] 1 1\n").unwrap();
    let r = linv(dir.path(), &["curves", "import", rows.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["result"]["curves"].as_array().unwrap().len(), 2);

    let list = linv(dir.path(), &["curves", "list"]).json();
    let labels: Vec<&str> =
        list["result"]["curves"].as_array().unwrap().iter().map(|c| c["label"].as_str().unwrap()).collect();
    assert!(labels.contains(&"37a1") && labels.contains(&"11a1"));

    let r = linv(dir.path(), &["li-curve", "--label", "43a1", "-p", "43"]);
    assert_eq!(r.code, 0, "{}", r.stderr);

    fs::write(&rows, "x [0,0,0,0,0]\n").unwrap();
    assert_eq!(linv(dir.path(), &["curves", "import", rows.to_str().unwrap()]).code, 2);
    fs::write(&rows, "37 a 1\n").unwrap();
    assert_eq!(linv(dir.path(), &["curves", "import", rows.to_str().unwrap()]).code, 3);
    fs::write(&rows, "y [0,0,1,-1,0] 38\n").unwrap();
    assert_ne!(linv(dir.path(), &["curves", "import", rows.to_str().unwrap()]).code, 0);
}

#[test]
fn dual_convention_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let r = linv(dir.path(), &["check-ezc", "--label", "11a1", "-p", "11", "--depth", "2", "--dual"]).json();
    assert_eq!(r["conventions"]["sigma_convention"], "sigma_a <-> a^-1");
    assert_eq!(r["config"]["dual"], true);
    assert_eq!(r["result"]["passed"], true);
}

#[test]
fn table_format_flattens() {
    let dir = tempfile::tempdir().unwrap();
    let r = linv(dir.path(), &["li-period", "30", "-p", "5", "--branch", "p", "--prec", "3", "--format", "table"]);
    assert!(r.stdout.lines().any(|l| l.starts_with("result.residue") && l.ends_with("55 mod 125")));
}

#[test]
fn reports_match_the_shipped_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let report = schema("report.schema.json");
    let error = schema("error.schema.json");
    let runs: &[&[&str]] = &[
        &["li-period", "2^3 * (5/3)^-1", "-p", "5"],
        &["li-period", "10", "-p", "5", "--branch", "cyclotomic"],
        &["li-curve", "--label", "14a1", "-p", "2"],
        &["check-ezc", "--label", "21a1", "-p", "3", "--depth", "2"],
        &["check-twist", "--label", "11a1", "-p", "11"],
        &["check-twist", "--label", "11a1", "-p", "11", "--inert"],
        &["stickelberger", "--label", "11a1", "-p", "11", "--table"],
        &["stickelberger", "--label", "15a1", "-p", "3"],
        &["lp", "--label", "14a1", "-p", "7", "--depth", "1", "--table"],
        &["lp", "--label", "11a1", "-p", "5", "--depth", "2"],
        &["modsym", "--level", "14", "--sign", "-", "--hecke", "3,5"],
        &["modsym", "dump", "--level", "11", "--sign", "+"],
        &["curves", "list"],
    ];
    for args in runs {
        let r = linv(dir.path(), args);
        assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
        let v = r.json();
        let errors: Vec<String> = report.iter_errors(&v).map(|e| format!("{e} at {}", e.instance_path)).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    for args in [&["li-period", "6", "-p", "5"][..], &["li-period", "6^", "-p", "5"]] {
        let v = linv(dir.path(), args).json();
        assert!(error.is_valid(&v), "{args:?}");
    }
}
