use starfree::families::{self, FamilyId, FamilyTag};
use starfree::langops;
use starfree::search::{self, SearchConfig};
use starfree::{classify, fixtures, Dfa, Semigroup, Transform, Transformation};

fn family(tag: FamilyTag, n: usize) -> Dfa {
    families::build(FamilyId::new(tag, n).unwrap()).unwrap().into_dfa()
}

fn t(s: &str) -> Transformation {
    s.parse().unwrap()
}

fn words(max: usize, letters: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| (0..letters).map(move |x| [w.clone(), vec![x]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn union_of_disjoint_languages() {
    let (l1, l2) = (fixtures::ends_after_a(), fixtures::b_to_b());
    let u = langops::union(&l1, &l2).unwrap();
    assert!(langops::equivalent(&u, &fixtures::union_example()).unwrap());
    assert!(u.is_isomorphic(&fixtures::union_example()));
    assert!(langops::equivalent(&langops::union(&l1, &l1).unwrap(), &l1).unwrap());
    assert!(langops::is_empty(&langops::intersection(&l1, &l2).unwrap()));
    let c = classify(&u).unwrap();
    assert!(c.star_free && !c.nearly_monotonic);
}

#[test]
fn concatenation_examples() {
    let prod = langops::concat(&fixtures::concat_left(), &fixtures::concat_right()).unwrap();
    assert_eq!(prod.n(), 6);
    assert!(prod.is_isomorphic(&fixtures::concat_product()));
    let c = classify(&prod).unwrap();
    assert!(c.star_free && !c.nearly_monotonic);

    let empty = Dfa::from_table(&[("a", &[1]), ("b", &[1])], 1, &[]).unwrap();
    assert!(langops::is_empty(&langops::concat(&empty, &fixtures::ends_after_a()).unwrap()));
}

#[test]
fn star_of_aa_is_not_star_free() {
    let aa = Dfa::from_table(&[("a", &[2, 3, 4, 4])], 1, &[3]).unwrap();
    let s = langops::star(&aa);
    assert!(!s.is_star_free().unwrap());
    assert!(aa.is_star_free().unwrap());
    assert!(s.accepts(&[]) && s.accepts(&[0, 0, 0, 0]) && !s.accepts(&[0, 0, 0]));
}

#[test]
fn quotients_of_monotonic_language() {
    let a3 = family(FamilyTag::A, 3);
    assert!(langops::equivalent(&langops::left_quotient(&a3, &[]).unwrap(), &a3).unwrap());
    assert!(langops::left_quotient(&a3, &["a"]).unwrap().accepts(&[]));
    let names: Vec<&str> = a3.alphabet().iter().map(String::as_str).collect();
    for w in words(3, names.len()) {
        let letters: Vec<&str> = w.iter().map(|&x| names[x]).collect();
        let q = langops::left_quotient(&a3, &letters).unwrap();
        assert!(classify(&q).unwrap().monotonic, "{letters:?}");
    }
    assert!(!langops::equivalent(&a3, &langops::complement(&a3)).unwrap());
}

fn assert_quotients_in_class(d: &Dfa, pick: fn(&starfree::Classification) -> bool) {
    assert!(pick(&classify(d).unwrap()));
    let names: Vec<&str> = d.alphabet().iter().map(String::as_str).collect();
    for w in words(2, names.len()) {
        let letters: Vec<&str> = w.iter().map(|&x| names[x]).collect();
        assert!(pick(&classify(&langops::left_quotient(d, &letters).unwrap()).unwrap()), "{letters:?}");
    }
}

#[test]
fn quotients_stay_in_class() {
    assert_quotients_in_class(&fixtures::four_state(), |c| c.monotonic);
    assert_quotients_in_class(&family(FamilyTag::A, 4), |c| c.monotonic);
    assert_quotients_in_class(&fixtures::partially_monotonic(), |c| c.partially_monotonic);
    assert_quotients_in_class(&family(FamilyTag::BPrime, 4), |c| c.partially_monotonic);
    assert_quotients_in_class(&family(FamilyTag::C, 4), |c| c.nearly_monotonic);
    assert_quotients_in_class(&fixtures::nearly_monotonic(), |c| c.nearly_monotonic);
}

#[test]
fn complement_keeps_monotonicity() {
    for d in [fixtures::four_state(), family(FamilyTag::A, 3), family(FamilyTag::A, 4)] {
        assert!(classify(&langops::complement(&d)).unwrap().monotonic);
    }
}

#[test]
fn complement_can_leave_partial_classes() {
    // Complementing turns the empty state into a universal one, so the
    // quotient IDFA of the complement keeps every state and the completed
    // maps must be monotonic as full maps.
    for d in [fixtures::partially_monotonic(), family(FamilyTag::BPrime, 4)] {
        let c = classify(&langops::complement(&d)).unwrap();
        assert!(c.star_free && !c.partially_monotonic);
    }
    for d in [fixtures::nearly_monotonic(), family(FamilyTag::C, 4)] {
        let c = classify(&langops::complement(&d)).unwrap();
        assert!(c.star_free && !c.nearly_monotonic);
    }
}

/// The published closure of the partial and nearly monotonic classes under
/// complement, asserted as stated; it fails on these fixtures.
#[test]
#[ignore = "closure under complement fails for the partial classes"]
fn published_complement_closure() {
    assert!(classify(&langops::complement(&fixtures::partially_monotonic())).unwrap().partially_monotonic);
    assert!(classify(&langops::complement(&family(FamilyTag::C, 4))).unwrap().nearly_monotonic);
}

#[test]
fn search_examples() {
    let cfg = SearchConfig::default();
    for (n, k, expected) in [(3, 2, 7), (3, 4, 10), (4, 2, 19), (2, 3, 3)] {
        assert_eq!(search::max_aperiodic(n, k, &cfg).unwrap().best_size, expected);
    }
}

#[test]
fn search_invariants() {
    let cfg = SearchConfig::default();
    for n in 1..=3 {
        let mut previous = 0;
        for k in 1..=5 {
            let r = search::max_aperiodic(n, k, &cfg).unwrap();
            assert!(r.best_size >= previous);
            previous = r.best_size;
            let s = Semigroup::generate(&r.best_generators).unwrap();
            assert!(s.is_aperiodic() && s.len() == r.best_size && r.best_generators.len() <= k);
        }
    }
    for n in 2..=3 {
        let r = search::max_aperiodic(n, 2 * n - 1, &cfg).unwrap();
        assert!(r.best_size as u64 >= families::h(n).unwrap());
    }
    let r = search::max_aperiodic(3, 4, &cfg).unwrap();
    assert_eq!(r.best_size as u64, families::f(3).unwrap());
    assert_eq!(r.best_size as u64, families::h(3).unwrap());
}

#[test]
fn conflict_graph_examples() {
    let g = search::conflict_graph(3).unwrap();
    assert_eq!(g.nodes.len(), 12);
    assert!(!g.nodes.iter().any(|x| x.is_identity() || x.is_constant()));
    for a in 0..g.nodes.len() {
        for b in 0..g.nodes.len() {
            if a != b {
                assert_eq!(
                    search::conflicting(&g.nodes[a], &g.nodes[b]),
                    search::conflicting(&g.nodes[b], &g.nodes[a])
                );
            }
        }
    }
    let mis = search::max_conflict_free(&g).unwrap();
    assert_eq!(mis.len(), 6);
    assert_eq!(g.derived_bound(mis.len()), 10);

    // the example set from the analysis is conflict-free
    let example = ["[1,1,2]", "[2,2,3]", "[1,3,3]", "[1,1,3]", "[1,2,2]", "[2,3,3]"].map(t);
    for x in &example {
        for y in &example {
            assert!(!search::conflicting(x, y));
        }
    }

    // each triple is pairwise conflict-free yet allows at most two members
    // in an aperiodic semigroup
    for triple in [["[1,1,3]", "[1,2,2]", "[3,2,3]"], ["[1,2,1]", "[1,3,3]", "[2,2,3]"]] {
        let ts = triple.map(t);
        for x in &ts {
            for y in &ts {
                assert!(!search::conflicting(x, y));
            }
        }
        assert!(!starfree::semigroup::closure_is_aperiodic(&ts).unwrap());
        let index: Vec<usize> = ts.iter().map(|x| g.nodes.iter().position(|n| n == x).unwrap()).collect();
        assert!(index.iter().filter(|i| mis.contains(i)).count() <= 2);
    }

    let empty = search::ConflictGraph { n: 0, nodes: vec![Transformation::identity(1); 5], edges: vec![] };
    assert_eq!(search::max_conflict_free(&empty).unwrap().len(), 5);
}

#[test]
fn search_worker_independence_and_checkpoint() {
    let dir = std::env::temp_dir().join(format!("starfree-ckpt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("search.json");
    let _ = std::fs::remove_file(&path);
    let plain = search::max_aperiodic(4, 2, &SearchConfig { workers: 1, ..SearchConfig::default() }).unwrap();
    let cfg = SearchConfig { workers: 3, checkpoint: Some(path.clone()), ..SearchConfig::default() };
    let first = search::max_aperiodic(4, 2, &cfg).unwrap();
    assert_eq!(first, plain);
    // a finished checkpoint resumes to the same result without new work
    let resumed = search::max_aperiodic(4, 2, &cfg).unwrap();
    assert_eq!(resumed, plain);
    let wrong = SearchConfig { checkpoint: Some(path.clone()), ..SearchConfig::default() };
    assert!(matches!(search::max_aperiodic(3, 2, &wrong), Err(starfree::Error::Checkpoint(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn automata_examples() {
    let a3 = family(FamilyTag::A, 3);
    assert!(a3.minimize().is_isomorphic(&a3));
    assert_eq!(family(FamilyTag::C, 4).minimize().n(), 4);
    let twin = Dfa::from_table(&[("a", &[2, 1])], 1, &[1, 2]).unwrap();
    assert_eq!(twin.minimize().n(), 1);

    let four_state = fixtures::four_state();
    assert_eq!(four_state.empty_state().unwrap().map(|s| s.get()), Some(1));
    assert_eq!(fixtures::partially_monotonic().empty_state().unwrap().map(|s| s.get()), Some(3));
    assert_eq!(twin.minimize().empty_state().unwrap(), None);
    assert_eq!(fixtures::partially_monotonic().to_idfa().unwrap(), fixtures::partially_monotonic_idfa());
    let restricted = four_state.to_idfa().unwrap();
    let rendered: Vec<String> = restricted.letters().iter().map(|x| x.to_string()).collect();
    assert_eq!(rendered, ["[2,2,2]", "[_,3,3]"]);
    assert_eq!(four_state.transition_semigroup().unwrap().len(), 4);
    assert_eq!(family(FamilyTag::C, 3).transition_semigroup().unwrap().len(), 10);

    let c3 = family(FamilyTag::C, 3).complexity_report().unwrap();
    assert_eq!((c3.kappa, c3.sigma), (3, 10));
    let empty = Dfa::from_table(&[("a", &[1])], 1, &[]).unwrap().complexity_report().unwrap();
    assert_eq!((empty.kappa, empty.sigma), (1, 1));

    assert!(fixtures::union_example().is_star_free().unwrap());
    assert!(!fixtures::parity().is_star_free().unwrap());
    for n in 2..=5 {
        for tag in [FamilyTag::A, FamilyTag::BPrime, FamilyTag::C] {
            assert!(family(tag, n).is_star_free().unwrap());
        }
    }
}

#[test]
fn monotonicity_examples() {
    let partial_idfa = fixtures::partially_monotonic_idfa();
    let order = starfree::find_monotonic_order(2, partial_idfa.letters()).unwrap();
    assert!(starfree::check_order(partial_idfa.letters(), &order).unwrap());
    assert!(starfree::find_monotonic_order(3, &[t("[2,3,3]"), t("[3,1,3]"), t("[2,2,3]")]).is_none());
    assert!(starfree::find_monotonic_order(3, &[Transformation::identity(3)]).is_some());

    let table: Vec<Transformation> = Semigroup::generate(&[t("[1,1,2]"), t("[2,2,3]"), t("[1,3,3]")]).unwrap().elements().to_vec();
    assert!(starfree::check_order(&table, &starfree::OrderWitness::natural(3)).unwrap());
    for labels in [[1, 2], [2, 1]] {
        let o = starfree::OrderWitness::from_labels(&labels).unwrap();
        assert!(!starfree::check_order(&[t("[2,1]")], &o).unwrap());
    }
    assert!(starfree::OrderWitness::from_labels(&[1, 1]).is_err());

    let four_state = fixtures::four_state();
    let o = starfree::find_monotonic_order(4, four_state.letters()).unwrap();
    assert!(starfree::check_order(four_state.letters(), &o).unwrap());
    assert!(starfree::check_order(four_state.transition_semigroup().unwrap().elements(), &o).unwrap());

    let c = classify(&fixtures::partially_monotonic()).unwrap();
    assert_eq!(c.summary(), "partially monotonic; not monotonic");
}
