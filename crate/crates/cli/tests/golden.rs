//! Golden-file tests. Set `STARFREE_BLESS=1` to rewrite the files under
//! `tests/golden` and `tests/data` from the current output.

use std::path::{Path, PathBuf};

use serde_json::Value;
use starfree::{fixtures, Automaton, Transform};
use starfree_cli::run;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn bless() -> bool {
    std::env::var_os("STARFREE_BLESS").is_some()
}

/// Path of the stored fixture file, regenerated first when blessing.
fn data(name: &str) -> String {
    let path = root().join("data").join(format!("{name}.json"));
    if bless() {
        let dfa = fixtures::by_name(name).unwrap();
        std::fs::create_dir_all(root().join("data")).unwrap();
        std::fs::write(&path, Automaton::Dfa(dfa).to_json() + "\n").unwrap();
    }
    path.display().to_string()
}

const CLASSIFIED: [&str; 5] = ["partially-monotonic", "nearly-monotonic", "four-state", "union-example", "concat-product"];

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("starfree").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn check_golden(name: &str, actual: &str) {
    let path = root().join("golden").join(name);
    if bless() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn golden(name: &str, args: &[&str]) -> String {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    check_golden(name, &out);
    out
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = invoke(&full);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

/// Value of the text row whose label is `key`.
fn row<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).filter(|rest| rest.starts_with("  ")).map(str::trim))
        .unwrap_or_else(|| panic!("no row {key} in\n{text}"))
}

#[test]
fn data_files_match_fixtures() {
    for name in CLASSIFIED {
        let dfa = fixtures::by_name(name).unwrap();
        let path = data(name);
        let stored = std::fs::read_to_string(&path).unwrap();
        assert_eq!(Automaton::from_json(&stored).unwrap().into_dfa(), dfa, "{name}");
    }
}

#[test]
fn family_then_report() {
    let (code, family, _) = invoke(&["family", "C", "3"]);
    assert_eq!(code, 0);
    check_golden("family_C_3.json", &family);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c3.json");
    std::fs::write(&file, &family).unwrap();
    let file = file.to_str().unwrap();

    let text = golden("report_C_3.txt", &["report", file]);
    assert_eq!(row(&text, "κ"), "3");
    assert_eq!(row(&text, "σ"), "10");

    let doc = json(&["report", file]);
    check_golden("report_C_3.json", &(serde_json::to_string_pretty(&doc).unwrap() + "\n"));
    assert_eq!(doc["kappa"], 3);
    assert_eq!(doc["sigma"], 10);
    assert_eq!(doc["mu"].to_string(), row(&text, "μ"));
}

#[test]
fn tables_to_six() {
    let text = golden("tables_6.txt", &["tables", "--max-n", "6"]);
    let line = |label: &str| -> Vec<String> {
        let l = text.lines().find(|l| l.starts_with(label)).unwrap();
        l[label.len()..].split_whitespace().map(String::from).collect()
    };
    assert_eq!(line("f(n)"), ["1", "3", "10", "35", "126", "462"]);
    assert_eq!(line("g(n-1)"), ["-", "2", "8", "38", "192", "1002"]);
    assert_eq!(line("h(n)"), ["-", "3", "10", "41", "196", "1007"]);
    assert_eq!(line("(n+1)^(n-1)"), ["1", "3", "16", "125", "1296", "16807"]);

    let doc = json(&["tables", "--max-n", "6"]);
    check_golden("tables_6.json", &(serde_json::to_string_pretty(&doc).unwrap() + "\n"));
    for (key, label) in [("f", "f(n)"), ("g", "g(n-1)"), ("h", "h(n)"), ("aperiodic", "(n+1)^(n-1)")] {
        let from_json: Vec<String> = doc[key]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| if v.is_null() { "-".into() } else { v.to_string() })
            .collect();
        assert_eq!(from_json, line(label), "{key}");
    }
}

#[test]
fn classify_fixtures() {
    let cases = [
        ("partially-monotonic", "partially monotonic; not monotonic"),
        ("nearly-monotonic", "nearly monotonic; not partially monotonic"),
        ("four-state", "monotonic"),
        ("union-example", "star-free; not nearly monotonic"),
        ("concat-product", "star-free; not nearly monotonic"),
    ];
    for (name, summary) in cases {
        let file = data(name);
        let text = golden(&format!("classify_{name}.txt"), &["classify", &file]);
        assert_eq!(row(&text, "summary"), summary, "{name}");

        let doc = json(&["classify", &file]);
        assert_eq!(doc["summary"], summary);
        for (key, label) in [
            ("monotonic", "monotonic"),
            ("partially_monotonic", "partially monotonic"),
            ("nearly_monotonic", "nearly monotonic"),
            ("star_free", "star-free"),
        ] {
            let flag = row(&text, label).split_whitespace().next().unwrap();
            assert_eq!(doc[key].as_bool().unwrap(), flag == "yes", "{name} {key}");
        }
        if let Some(order) = doc["monotonic_order"]["order"].as_array() {
            let labels: Vec<String> = order.iter().map(|v| v.to_string()).collect();
            assert!(row(&text, "monotonic").ends_with(&labels.join(" < ")));
        }
    }
}

#[test]
fn closure_lists_elements() {
    let args = ["closure", "[1,1,2]", "[2,2,3]", "[1,3,3]", "[1,2,3]"];
    let text = golden("closure_A_3.txt", &args);
    assert_eq!(row(&text, "size"), "10");
    let doc = json(&args);
    assert_eq!(doc["size"], 10);
    let elements = doc["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 10);
    for e in elements {
        assert_eq!(row(&text, e["element"].as_str().unwrap()), e["word"].as_str().unwrap());
    }

    let doc = json(&["closure", "[2,_]"]);
    assert_eq!(doc["size"], 2);
    assert_eq!(doc["elements"][1]["element"], "[_,_]");
}

#[test]
fn search_and_conflicts() {
    let text = golden("search_3_4.txt", &["search", "3", "4", "--workers", "2"]);
    assert_eq!(row(&text, "best size"), "10");
    assert_eq!(row(&text, "status"), "verified");
    let doc = json(&["search", "3", "4"]);
    assert_eq!(doc["best_size"], 10);
    assert_eq!(doc["explored"].to_string(), row(&text, "explored"));
    assert_eq!(doc["status"], "verified");

    let text = golden("conflicts_3.txt", &["conflicts", "3"]);
    assert!(text.contains("max conflict-free 6"));
    assert!(text.lines().any(|l| l == "bound 10"));
    let doc = json(&["conflicts", "3"]);
    check_golden("conflicts_3.json", &(serde_json::to_string_pretty(&doc).unwrap() + "\n"));
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 12);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 12);
    assert_eq!(doc["bound"], 10);
    let marked = text.matches('*').count() - 1;
    let periodic = doc["products"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r.as_array().unwrap())
        .filter(|p| !p.as_str().unwrap().parse::<starfree::Transformation>().unwrap().is_aperiodic())
        .count();
    assert_eq!(marked, periodic);
}

#[test]
fn search_beyond_reference_is_unverified() {
    let doc = json(&["search", "4", "5", "--override-budget"]);
    assert_eq!(doc["best_size"], 37);
    assert_eq!(doc["status"], "unverified");
    assert!(doc["reference"].is_null());
}
