use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udsponge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn keys_sorted(v: &Value) -> bool {
    match v {
        Value::Object(m) => {
            let keys: Vec<&String> = m.keys().collect();
            keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(keys_sorted)
        }
        Value::Array(a) => a.iter().all(keys_sorted),
        _ => true,
    }
}

#[test]
fn classify_reports() {
    let v = json(&["classify", &fixture("lg5.ifs"), "--format", "json"]);
    assert_eq!(v["payload"]["uniformly_disconnected"], true);
    assert_eq!(v["payload"]["conformal_dim_class"], "Zero");
    assert_eq!(v["payload"]["witness"], Value::Null);
    let v = json(&["classify", &fixture("lg4.ifs")]);
    assert_eq!(v["payload"]["conformal_dim_class"], "ExactlyOne");
    assert_eq!(v["payload"]["witness"], "root");
    assert_eq!(v["subcommand"], "classify");
    assert!(v["input_digest"].as_str().unwrap().starts_with("sha256:"));
    assert!(v.get("timing").is_none());
}

#[test]
fn bedford_mcmullen_has_a_root_witness() {
    let v = json(&["classify", &fixture("bedford_mcmullen.ifs")]);
    // All three columns are used, so the root fiber tiles [0,1]; the
    // column fibers have two or three rows and are not singletons.
    assert_eq!(v["payload"]["uniformly_disconnected"], false);
    assert_eq!(v["payload"]["conformal_dim_class"], "AtLeastOne");
    assert_eq!(v["payload"]["witness"], "root");
}

#[test]
fn rejection_lists_the_overlap() {
    let out = run(&["validate", &fixture("overlapping.ifs")]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let viol = &v["payload"]["violations"][0];
    assert_eq!(viol["condition"], "neat_projection");
    assert_eq!(viol["maps"], serde_json::json!([0, 1]));
    assert!(!out.stderr.is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "/nonexistent.ifs"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["components", &fixture("lg5.ifs"), "--delta", "0"]).status.code(), Some(1));
    assert_eq!(run(&["components", &fixture("lg5.ifs"), "--delta", "1/0"]).status.code(), Some(1));
    assert_eq!(run(&["classify", &fixture("overlapping.ifs")]).status.code(), Some(2));
    assert_eq!(run(&["cantor", &fixture("lg5.ifs")]).status.code(), Some(2));
    assert_eq!(run(&["components", &fixture("lg4.ifs"), "--depth", "9"]).status.code(), Some(3));
    assert_eq!(run(&["components", &fixture("lg4.ifs"), "--depth", "3", "--cap", "10"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_errors_exit_one() {
    let dir = std::env::temp_dir().join(format!("udsponge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.ifs");
    std::fs::write(&path, "dim 2\nmap 1/2 0 ; 1/3\n").unwrap();
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[ifs]"));
    assert!(out.stdout.is_empty());
}

#[test]
fn components_csv_schema() {
    let out = run(&["components", &fixture("lg5.ifs"), "--format", "csv", "--delta", "1/8", "--delta", "1/16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,num_components,max_diam_sq,max_diam_decimal,ratio_decimal"));
    assert!(lines.next().unwrap().starts_with("1/8,"));
    assert!(lines.next().unwrap().starts_with("1/16,"));
    assert_eq!(lines.next(), None);
}

#[test]
fn json_is_sorted_and_exact() {
    let v = json(&["cantor", &fixture("lg4.ifs"), "--check", "tree"]);
    assert!(keys_sorted(&v));
    assert_eq!(v["payload"]["system"]["L"], "613/73");
    assert_eq!(v["payload"]["system"]["tau"], serde_json::json!([2, 2, 2]));
    assert_eq!(v["payload"]["tree"]["additivity"]["ok"], true);
    assert!(v["payload"].get("binary").is_none());
    let all = json(&["all"]);
    assert!(keys_sorted(&all));
}

#[test]
fn timing_only_on_request() {
    let v = json(&["tree", &fixture("lg5.ifs"), "--timing"]);
    assert!(v["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn repeated_runs_are_identical() {
    let a = run(&["cantor", &fixture("lg4.ifs"), "--workers", "1"]);
    let b = run(&["cantor", &fixture("lg4.ifs"), "--workers", "8"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn text_and_other_csv_views() {
    let out = run(&["premoran", &fixture("lg5.ifs"), "--word", "1,0", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("num_intervals: 6"));
    let out = run(&["square", &fixture("lg5.ifs"), "--word", "0,0,0,0", "--delta", "1/10", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "delta,depths,box\n1/10,3 2,\"[0, 1/27]x[0, 1/36]\"\n");
    let out = run(&["all", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}
