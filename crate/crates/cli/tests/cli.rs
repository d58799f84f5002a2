use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use warpcurv::models::MODEL_NAMES;

fn warpcurv(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_warpcurv"))
        .args(args)
        .current_dir(dir)
        .env_remove("WARPCURV_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

fn csv_rows(text: &str) -> (String, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    (
        header,
        lines.map(|l| l.split(',').map(String::from).collect()).collect(),
    )
}

#[test]
fn catalog_and_exports_match_schemas() {
    let dir = TempDir::new().unwrap();
    let out = warpcurv(dir.path(), &["catalog", "--format", "json"]);
    assert!(out.status.success());
    let cat: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_valid(&schema("catalog.schema.json"), &cat);
    let spec_schema = schema("spec.schema.json");
    for e in cat.as_array().unwrap() {
        assert_valid(&spec_schema, &e["spec"]);
    }
    for name in MODEL_NAMES {
        let out = warpcurv(dir.path(), &["export", name]);
        assert!(out.status.success(), "{name}");
        let spec: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_valid(&spec_schema, &spec);
        let file = dir.path().join(format!("{name}.json"));
        std::fs::write(&file, &out.stdout).unwrap();
        let again = warpcurv(dir.path(), &["export", "--spec", file.to_str().unwrap()]);
        assert_eq!(again.stdout, out.stdout, "{name}");
    }
}

#[test]
fn text_catalog_lists_every_model() {
    let dir = TempDir::new().unwrap();
    let text = stdout(&warpcurv(dir.path(), &["catalog"]));
    for name in MODEL_NAMES {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn report_is_deterministic_and_valid() {
    let dir = TempDir::new().unwrap();
    let report = schema("report.schema.json");
    for name in MODEL_NAMES {
        let a = warpcurv(dir.path(), &["report", name, "--seed", "11", "--planes", "4"]);
        let b = warpcurv(dir.path(), &["report", name, "--seed", "11", "--planes", "4"]);
        assert!(a.status.success(), "{name}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{name}");
        let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_valid(&report, &doc);
        assert_eq!(doc["discrepancies"], 0, "{name}");
        assert_eq!(doc["planes"].as_array().unwrap().len(), 4);
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let flag = warpcurv(dir.path(), &["report", "kasner_vacuum", "--seed", "5"]);
    let env = Command::new(env!("CARGO_BIN_EXE_warpcurv"))
        .args(["report", "kasner_vacuum"])
        .current_dir(dir.path())
        .env("WARPCURV_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    let other = warpcurv(dir.path(), &["report", "kasner_vacuum", "--seed", "6"]);
    assert_ne!(flag.stdout, other.stdout);
}

#[test]
fn report_point_and_other_formats() {
    let dir = TempDir::new().unwrap();
    let out = warpcurv(
        dir.path(),
        &["report", "grw_exponential", "--point", "t=0.5", "--format", "csv"],
    );
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, "item,quantity,value,oracle_value,abs_diff");
    assert_eq!(rows.len(), 16 + 10);
    for r in &rows {
        assert_eq!(r.len(), 5);
        let v: f64 = r[2].parse().unwrap();
        let o: f64 = r[3].parse().unwrap();
        assert!((v - o).abs() <= 1e-10 * v.abs().max(1.0), "{r:?}");
    }
    let ku = rows.iter().find(|r| r[1] == "KU").unwrap();
    let k: f64 = ku[2].parse().unwrap();
    assert!((k - (-1.0f64).exp()).abs() <= 1e-11);
    let text = stdout(&warpcurv(dir.path(), &["report", "minkowski", "--format", "text"]));
    assert!(text.contains("discrepancies 0"));
}

#[test]
fn compare_writes_the_ledger() {
    let dir = TempDir::new().unwrap();
    let ledger_schema = schema("ledger.schema.json");

    let out = warpcurv(dir.path(), &["compare", "minkowski", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let ledger: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ledger.json")).unwrap()).unwrap();
    assert_eq!(ledger, Value::Array(vec![]));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["agree"], true);

    let path = dir.path().join("printed.json");
    let out = warpcurv(
        dir.path(),
        &[
            "compare",
            "grw_exponential",
            "--samples",
            "20",
            "--path",
            "as-printed",
            "--ledger",
            path.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let ledger: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid(&ledger_schema, &ledger);
    let entries = ledger.as_array().unwrap();
    assert!(entries
        .iter()
        .any(|e| e["term"].as_str().unwrap().starts_with("theorem.")));
    assert!(entries.iter().all(|e| e["path_a"] == "as_printed"));
}

#[test]
fn scan_exponential_warp() {
    let dir = TempDir::new().unwrap();
    let out = warpcurv(
        dir.path(),
        &[
            "scan",
            "grw_exponential",
            "--var",
            "t",
            "--from",
            "0",
            "--to",
            "2",
            "--steps",
            "21",
        ],
    );
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, "coordinate,quantity,value,oracle_value,abs_diff");
    assert_eq!(rows.len(), 21);
    let row_schema = schema("scan.schema.json");
    for r in &rows {
        let t: f64 = r[0].parse().unwrap();
        let k: f64 = r[2].parse().unwrap();
        assert!((k - (-2.0 * t).exp()).abs() <= 1e-11 * k.abs().max(1.0), "t = {t}: {k}");
        let doc = serde_json::json!({
            "coordinate": t,
            "quantity": r[1],
            "value": k,
            "oracle_value": r[3].parse::<f64>().unwrap(),
            "abs_diff": r[4].parse::<f64>().unwrap(),
        });
        assert_valid(&row_schema, &doc);
    }
}

#[test]
fn scan_kasner_decays_as_inverse_square() {
    let dir = TempDir::new().unwrap();
    let out = warpcurv(
        dir.path(),
        &[
            "scan",
            "kasner_vacuum",
            "--from",
            "0.5",
            "--to",
            "4",
            "--steps",
            "8",
            "--quantity",
            "KU",
        ],
    );
    assert!(out.status.success());
    let (_, rows) = csv_rows(&stdout(&out));
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r[0].parse::<f64>().unwrap().ln(), r[2].parse::<f64>().unwrap().ln()))
        .collect();
    for w in pts.windows(2) {
        let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        assert!((slope + 2.0).abs() <= 1e-9, "{slope}");
    }
}

#[test]
fn scan_ricci_and_numerator() {
    let dir = TempDir::new().unwrap();
    for q in ["ricci", "numerator"] {
        let out = warpcurv(
            dir.path(),
            &[
                "scan",
                "einstein_static",
                "--var",
                "t",
                "--from",
                "-1",
                "--to",
                "1",
                "--steps",
                "3",
                "--quantity",
                q,
            ],
        );
        assert!(out.status.success(), "{q}");
        let (_, rows) = csv_rows(&stdout(&out));
        for r in rows {
            let v: f64 = r[2].parse().unwrap();
            let o: f64 = r[3].parse().unwrap();
            assert!((v - o).abs() <= 1e-9, "{q}: {r:?}");
            if q == "ricci" {
                assert!((v - 6.0).abs() <= 1e-9, "{v}");
            }
        }
    }
}

#[test]
fn validate_reports_known_facts() {
    let dir = TempDir::new().unwrap();
    let out = warpcurv(dir.path(), &["validate", "anti_de_sitter_cover"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!doc["results"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let cases: [(&[&str], i32); 7] = [
        (&["report", "kasner_vacuum", "--point", "t=-1"], 3),
        (
            &[
                "scan",
                "schwarzschild_exterior",
                "--var",
                "t",
                "--from",
                "0",
                "--to",
                "1",
                "--point",
                "r=1.5",
            ],
            3,
        ),
        (&["report", "no_such_model"], 2),
        (&["report", "minkowski", "--point", "q=1"], 2),
        (&["report", "minkowski", "--mass", "2"], 2),
        (&["report", "schwarzschild_exterior", "--mass", "-1"], 2),
        (&["report"], 2),
    ];
    for (args, code) in cases {
        let out = warpcurv(dir.path(), args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"kind":"GRW","base":{"t1":null,"t2":null},"warpings":[],"fibers":[]}"#,
    )
    .unwrap();
    let out = warpcurv(dir.path(), &["report", "--spec", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn schwarzschild_mass_changes_the_spec() {
    let dir = TempDir::new().unwrap();
    let a = stdout(&warpcurv(dir.path(), &["export", "schwarzschild_exterior"]));
    let b = stdout(&warpcurv(
        dir.path(),
        &["export", "schwarzschild_exterior", "--mass", "2"],
    ));
    assert_ne!(a, b);
    assert!(b.contains("2.0"));
}
