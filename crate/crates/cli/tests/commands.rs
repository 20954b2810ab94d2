use starfree::{fixtures, langops, Automaton, Dfa};
use starfree_cli::{run, EXIT_BUDGET, EXIT_IO, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("starfree").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &tempfile::TempDir, name: &str, dfa: Dfa) -> String {
    let path = dir.path().join(format!("{name}.json"));
    std::fs::write(&path, Automaton::Dfa(dfa).to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

fn parse(out: &str) -> Dfa {
    Automaton::from_json(out).unwrap().into_dfa()
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(invoke(&[]).0, EXIT_USAGE);
    assert_eq!(invoke(&["--help"]).0, EXIT_OK);
    assert_eq!(invoke(&["family", "Z", "3"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["family", "A", "0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["search", "5", "3"]).0, EXIT_BUDGET);
    assert_eq!(invoke(&["search", "9", "1", "--override-budget"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["report", "/definitely/not/here.json"]).0, EXIT_IO);
    assert_eq!(invoke(&["closure", "[1,4]"]).0, EXIT_IO);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"states\": 2}").unwrap();
    let (code, _, err) = invoke(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_IO);
    assert!(err.starts_with("error:"));
}

#[test]
fn op_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let left = write(&dir, "left", fixtures::concat_left());
    let right = write(&dir, "right", fixtures::concat_right());
    let l1 = write(&dir, "l1", fixtures::ends_after_a());
    let l2 = write(&dir, "l2", fixtures::b_to_b());

    let (code, out, _) = invoke(&["op", "concat", &left, &right]);
    assert_eq!(code, EXIT_OK);
    assert!(parse(&out).is_isomorphic(&fixtures::concat_product()));

    let (_, out, _) = invoke(&["op", "union", &l1, &l2]);
    assert!(parse(&out).is_isomorphic(&fixtures::union_example()));

    let a = fixtures::ends_after_a();
    let b = fixtures::b_to_b();
    for (verb, op) in [
        ("intersect", langops::intersection(&a, &b).unwrap()),
        ("difference", langops::difference(&a, &b).unwrap()),
        ("xor", langops::boolean_op(&a, &b, langops::BoolOp::SymmetricDifference).unwrap()),
    ] {
        let (code, out, _) = invoke(&["op", verb, &l1, &l2]);
        assert_eq!(code, EXIT_OK, "{verb}");
        assert!(parse(&out).is_isomorphic(&op), "{verb}");
    }

    let (_, out, _) = invoke(&["op", "complement", &l1]);
    assert!(parse(&out).is_isomorphic(&langops::complement(&a)));
    let (_, out, _) = invoke(&["op", "star", &l2]);
    assert!(parse(&out).is_isomorphic(&langops::star(&b)));

    // `ab` and `a b` name the same word
    let expected = langops::left_quotient(&a, &["a", "b"]).unwrap();
    for args in [vec!["ab"], vec!["a", "b"]] {
        let mut full = vec!["op", "quotient", l1.as_str()];
        full.extend(args);
        let (code, out, err) = invoke(&full);
        assert_eq!(code, EXIT_OK, "{err}");
        assert!(parse(&out).is_isomorphic(&expected));
    }
    assert_eq!(invoke(&["op", "quotient", &l1, "z"]).0, EXIT_IO);

    assert_eq!(invoke(&["op", "union", &l1]).0, EXIT_USAGE);
    assert_eq!(invoke(&["op", "star", &l1, &l2]).0, EXIT_USAGE);
}

#[test]
fn family_files_round_trip() {
    for tag in ["A", "B", "Bprime", "C"] {
        let (code, out, err) = invoke(&["family", tag, "4"]);
        assert_eq!(code, EXIT_OK, "{tag}: {err}");
        let automaton = Automaton::from_json(&out).unwrap();
        let expected = starfree::families::build(starfree::FamilyId::new(tag.parse().unwrap(), 4).unwrap()).unwrap();
        assert_eq!(automaton, expected, "{tag}");
    }
}

#[test]
fn verify_is_deterministic_and_passes() {
    let first = invoke(&["verify", "--workers", "2"]);
    assert_eq!(first.0, EXIT_OK, "{}", first.1);
    assert!(first.1.lines().filter(|l| l.starts_with("PASS")).count() >= 14);
    let second = invoke(&["verify", "--workers", "1"]);
    assert_eq!(first, second);

    let (code, out, _) = invoke(&["--format", "json", "verify"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["passed"], true);
    let names: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for name in names {
        assert!(first.1.contains(&format!("PASS {name}:")), "{name}");
    }
}

#[test]
fn checkpointed_search_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("ckpt.json");
    let ckpt = ckpt.to_str().unwrap();
    let (code, first, _) = invoke(&["search", "3", "3", "--checkpoint", ckpt]);
    assert_eq!(code, EXIT_OK);
    let (code, again, _) = invoke(&["search", "3", "3", "--checkpoint", ckpt]);
    assert_eq!(code, EXIT_OK);
    let size = |s: &str| s.lines().find(|l| l.starts_with("best size")).unwrap().to_string();
    assert_eq!(size(&first), size(&again));
    assert_eq!(invoke(&["search", "3", "2", "--checkpoint", ckpt]).0, EXIT_IO);
}
