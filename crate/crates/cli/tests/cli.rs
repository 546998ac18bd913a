use assert_cmd::Command;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::cargo_bin("curvebounds").unwrap().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, text) = run(&all);
    (code, serde_json::from_str(&text).unwrap_or(Value::Null))
}

fn seq(v: &Value) -> Vec<u64> {
    v["seq"]["values"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn orders_examples() {
    let (code, doc) = json(&["orders", "hermitian", "--q", "3", "--morphism", "lines", "--u", "1", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], "curvebounds.report/1");
    assert_eq!(doc["config"]["seed"], 24301);
    let c = &doc["report"]["orders"]["classicality"];
    assert_eq!(seq(&c["epsilon"]), [0, 1, 3]);
    assert_eq!(seq(&c["kappa"]), [0]);

    let (code, doc) = json(&["orders", "f_mu", "--q", "2", "--u", "1", "--m", "3"]);
    assert_eq!(code, 0);
    assert_eq!(seq(&doc["report"]["orders"]["classicality"]["kappa"]), [2]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["orders", "hermitian", "--q", "3", "--morphism", "planes"]).0, 2);
    assert_eq!(run(&["orders", "hermitian"]).0, 2);
    assert_eq!(run(&["count", "nope", "--q", "2"]).0, 2);
    assert_eq!(run(&["count", "hermitian", "--q", "2", "--ext", "9"]).0, 2);
    assert_eq!(run(&["orders", "--spec-file", "/nonexistent.toml"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["verify", "--case", "nope"]).0, 2);
}

#[test]
fn count_examples() {
    let counts = |args: &[&str]| -> Vec<u64> {
        let (code, doc) = json(args);
        assert_eq!(code, 0);
        doc["report"]["count"]["counts"]["counts"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).collect()
    };
    assert_eq!(counts(&["count", "y_q3", "--q", "2", "--ext", "1,2"]), [21, 119]);
    assert_eq!(counts(&["count", "hermitian", "--q", "2", "--ext", "1,2,3"]), [9, 9, 81]);
    assert_eq!(counts(&["count", "f_mu", "--q", "2", "--u", "1", "--m", "3", "--ext", "1"]), [0]);
}

fn record<'a>(doc: &'a Value, id: &str) -> &'a Value {
    doc["report"]["bounds"]["records"].as_array().unwrap().iter().find(|r| r["formula_id"] == id).unwrap()
}

#[test]
fn bounds_examples() {
    let (code, doc) = json(&["bounds", "fermat", "--q", "9", "--d", "8", "--u", "1", "--m", "2"]);
    assert_eq!(code, 0);
    let sharp = record(&doc, "plane_sharp");
    assert_eq!(sharp["hypotheses_verified"], true);
    assert_eq!(sharp["slack"], serde_json::json!([0, 1]));
    assert_eq!(sharp["rhs"], serde_json::json!([728, 1]));

    let (code, doc) = json(&["bounds", "norm_trace", "--q", "2", "--u", "1", "--m", "2", "--with-corrections"]);
    assert_eq!(code, 0);
    assert_eq!(doc["report"]["bounds"]["best"]["2"]["value"], 89);

    let (code, doc) = json(&["bounds", "conic", "--q", "5"]);
    assert_eq!(code, 0);
    for rec in doc["report"]["bounds"]["records"].as_array().unwrap() {
        if rec["hypotheses_verified"] == true {
            assert!(rec["slack"][0].as_i64().unwrap() >= 0, "{rec}");
        }
    }
}

#[test]
fn bounds_filters_and_modes() {
    let (code, doc) = json(&["bounds", "hermitian", "--q", "2", "--formula", "hermitian,weil", "--c-mode", "analytic"]);
    assert_eq!(code, 0);
    let ids: Vec<&str> = doc["report"]["bounds"]["records"].as_array().unwrap().iter().map(|r| r["formula_id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["hermitian", "weil", "weil"]);
    let (code, text) = run(&["bounds", "hermitian", "--q", "2", "--no-corrections", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("label,formula,r,"));
}

#[test]
fn output_is_independent_of_threads() {
    let args = ["bounds", "y_q3", "--q", "2", "--format", "json"];
    let one = run(&[&args[..], &["--threads", "1"]].concat()).1;
    let four = run(&[&args[..], &["--threads", "4"]].concat()).1;
    let strip = |s: &str| s.replace("\"threads\": 1", "").replace("\"threads\": 4", "");
    assert_eq!(strip(&one), strip(&four));
}

#[test]
fn spec_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("curvebounds-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nt.toml");
    let (code, text) = run(&["export", "norm_trace", "--q", "2"]);
    assert_eq!(code, 0);
    std::fs::write(&path, &text).unwrap();
    let (code, doc) = json(&["count", "--spec-file", path.to_str().unwrap(), "--ext", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["report"]["count"]["counts"]["counts"]["2"], 89);
    // A smooth model's genus is recomputed, so a wrong declared value is rejected.
    let (_, herm) = run(&["export", "hermitian", "--q", "2"]);
    std::fs::write(&path, herm.replace("genus = 1", "genus = 2")).unwrap();
    assert_eq!(run(&["count", "--spec-file", path.to_str().unwrap()]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_reports_each_case() {
    let (code, text) = run(&["verify"]);
    // Ihara's bound exceeds Weil's for Y_(2,3) over F_64, so one stated ordering fails.
    assert_eq!(code, 1);
    assert!(text.contains("FAIL y_q3"));
    assert!(text.contains("ihara_below_weil"));
    for case in ["fermat_sharp", "norm_trace", "hermitian", "f_mu", "filling"] {
        assert!(text.contains(&format!("PASS {case}")), "{case}");
    }
    assert!(text.contains("SKIP fermat_conics"));
    assert_eq!(run(&["verify", "--case", "fermat_sharp,hermitian"]).0, 0);
    assert_eq!(run(&["verify", "--case", "fermat_conics"]).0, 0);
}

#[test]
fn catalog_lists_families() {
    let (code, text) = run(&["catalog"]);
    assert_eq!(code, 0);
    for f in ["fermat", "hermitian", "y_q3", "norm_trace", "fermat_half", "f_mu", "hk_filling", "total_inflection", "conic"] {
        assert!(text.contains(f), "{f}");
    }
}
