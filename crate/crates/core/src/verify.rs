//! The full verification sweep behind `starfree verify`.
//!
//! Each [`Check`] compares a computed quantity with its expected value or
//! with an oracle that shares no code with the routine under test.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::automata::Dfa;
use crate::error::Result;
use crate::families::{self, FamilyId, FamilyTag};
use crate::monotonicity::{check_order, classify, find_monotonic_order, OrderWitness};
use crate::search::{self, SearchConfig};
use crate::semigroup::Semigroup;
use crate::transform::{enumerate_aperiodic, enumerate_all, PartialTransformation, Transform, Transformation};
use crate::{fixtures, langops};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Check {
        match r {
            Ok((passed, detail)) => Check::new(name, passed, detail),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }
}

fn seq<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn compare<T: PartialEq + std::fmt::Debug>(got: T, expected: T) -> (bool, String) {
    let ok = got == expected;
    let detail = if ok { format!("{got:?}") } else { format!("got {got:?}, expected {expected:?}") };
    (ok, detail)
}

/// Forests on `{0, ..., n-1}` decoded from every Prüfer sequence of a tree on
/// `{0, ..., n}` rooted at `n`; roots of the forest are the children of `n`.
pub fn forests_by_pruefer(n: usize) -> Vec<Vec<Option<usize>>> {
    let v = n + 1;
    if n == 1 {
        return vec![vec![None]];
    }
    let len = v - 2;
    let total = v.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut seq = vec![0; len];
        for s in seq.iter_mut().rev() {
            *s = code % v;
            code /= v;
        }
        let mut degree = vec![1usize; v];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(v - 1);
        for &s in &seq {
            let leaf = (0..v).find(|&x| degree[x] == 1).expect("leaf exists");
            edges.push((leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..v).filter(|&x| degree[x] == 1).collect();
        edges.push((rest[0], rest[1]));
        // orient towards the root n
        let mut parent = vec![None; n];
        let mut frontier = vec![n];
        let mut seen = vec![false; v];
        seen[n] = true;
        while let Some(x) = frontier.pop() {
            for &(p, q) in &edges {
                for (a, b) in [(p, q), (q, p)] {
                    if a == x && !seen[b] {
                        seen[b] = true;
                        parent[b] = if x == n { None } else { Some(x) };
                        frontier.push(b);
                    }
                }
            }
        }
        out.push(parent);
    }
    out
}

/// Brute-force monotonicity: some permutation of the states is preserved by
/// every map, undefined images being unconstrained.
pub fn brute_force_monotonic<T: Transform>(n: usize, ts: &[T]) -> bool {
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        let mut rank = vec![0; n];
        for (r, &q) in order.iter().enumerate() {
            rank[q] = r;
        }
        let ok = ts.iter().all(|t| {
            (0..n).all(|p| {
                (0..n).all(|q| match (t.image(p), t.image(q)) {
                    (Some(x), Some(y)) => rank[p] > rank[q] || rank[x] <= rank[y],
                    _ => true,
                })
            })
        });
        if ok {
            return true;
        }
        if !next_permutation(&mut order) {
            return false;
        }
    }
}

fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = (1..xs.len()).rev().find(|&i| xs[i - 1] < xs[i]) else {
        return false;
    };
    let j = (i..xs.len()).rev().find(|&j| xs[j] > xs[i - 1]).expect("successor");
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

fn counting() -> Result<(bool, String)> {
    let f: Vec<u64> = (1..=6).map(families::f).collect::<Result<_>>()?;
    let g: Vec<u64> = (3..=6).map(|n| families::g(n - 1)).collect::<Result<_>>()?;
    let h: Vec<u64> = (2..=6).map(families::h).collect::<Result<_>>()?;
    let c: Vec<u64> = (1..=6).map(families::aperiodic_count).collect::<Result<_>>()?;
    Ok(compare(
        (f, g, h, c),
        (vec![1, 3, 10, 35, 126, 462], vec![8, 38, 192, 1002], vec![3, 10, 41, 196, 1007], vec![1, 3, 16, 125, 1296, 16807]),
    ))
}

fn family_closures() -> Result<(bool, String)> {
    let ranges = [(FamilyTag::A, 1..=6), (FamilyTag::B, 1..=5), (FamilyTag::BPrime, 2..=6), (FamilyTag::C, 2..=6)];
    let mut failures = Vec::new();
    let mut count = 0;
    for (tag, range) in ranges {
        for n in range {
            let report = families::verify_family(FamilyId::new(tag, n)?)?;
            failures.extend(report.failures());
            count += 1;
        }
    }
    Ok((failures.is_empty(), if failures.is_empty() { format!("{count} families") } else { failures.join("; ") }))
}

fn table_one() -> Result<(bool, String)> {
    let letters: Vec<Transformation> = families::monotonic_letters(3)?.into_iter().map(|(_, t)| t).collect();
    let got: BTreeSet<String> = Semigroup::generate(&letters)?.elements().iter().map(|t| t.to_string()).collect();
    let expected: BTreeSet<String> = [
        "[1,1,2]", "[2,2,3]", "[1,3,3]", "[1,2,3]", "[1,1,1]", "[2,2,2]", "[1,1,3]", "[1,2,2]", "[2,3,3]", "[3,3,3]",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    Ok(compare(got, expected))
}

fn aperiodic_enumeration() -> Result<(bool, String)> {
    let mut counts = Vec::new();
    for n in 1..=5 {
        let listed: BTreeSet<Transformation> = enumerate_aperiodic(n)?.into_iter().collect();
        let forests: BTreeSet<Transformation> = forests_by_pruefer(n)
            .iter()
            .map(|p| crate::transform::Forest::new(&p.iter().map(|x| x.map(|i| i + 1)).collect::<Vec<_>>()).map(|f| f.to_transformation()))
            .collect::<Result<_>>()?;
        if listed != forests || listed.len() as u64 != families::aperiodic_count(n)? {
            return Ok((false, format!("n={n}: {} listed, {} forests", listed.len(), forests.len())));
        }
        counts.push(listed.len());
    }
    Ok((true, seq(&counts)))
}

/// The search cells that finish quickly.
pub const QUICK_SEARCH_CELLS: [(usize, usize); 10] =
    [(1, 1), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (3, 4), (4, 1), (4, 2)];

fn search_cells(workers: usize) -> Result<(bool, String)> {
    let config = SearchConfig { workers, ..SearchConfig::default() };
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, k) in QUICK_SEARCH_CELLS {
        let r = search::max_aperiodic(n, k, &config)?;
        let good = r.matches_reference() == Some(true);
        ok &= good;
        parts.push(format!("({n},{k})={}{}", r.best_size, if good { "" } else { "!" }));
    }
    Ok((ok, parts.join(" ")))
}

fn conflicts(workers: usize) -> Result<(bool, String)> {
    let g = search::conflict_graph(3)?;
    let mis = search::max_conflict_free(&g)?;
    let bound = g.derived_bound(mis.len());
    let best = search::max_aperiodic(3, 4, &SearchConfig { workers, ..SearchConfig::default() })?;
    let degree_one: BTreeSet<String> =
        (0..g.nodes.len()).filter(|&i| g.degree(i) == 1).map(|i| g.nodes[i].to_string()).collect();
    let expected_one: BTreeSet<String> =
        ["[1,1,3]", "[1,2,1]", "[1,2,2]", "[1,3,3]", "[2,2,3]", "[3,2,3]"].iter().map(|s| s.to_string()).collect();
    Ok(compare(
        (g.nodes.len(), g.edges.len(), mis.len(), bound, degree_one),
        (12, 12, 6, best.best_size, expected_one),
    ))
}

fn classifications() -> Result<(bool, String)> {
    let flags = |d: &Dfa| -> Result<(bool, bool, bool, bool)> {
        let c = classify(d)?;
        Ok((c.monotonic, c.partially_monotonic, c.nearly_monotonic, c.star_free))
    };
    let concat = langops::concat(&fixtures::concat_left(), &fixtures::concat_right())?;
    let cases = [
        ("partially-monotonic", flags(&fixtures::partially_monotonic())?, (false, true, true, true)),
        ("nearly-monotonic", flags(&fixtures::nearly_monotonic())?, (false, false, true, true)),
        ("four-state", flags(&fixtures::four_state())?, (true, true, true, true)),
        ("union-example", flags(&fixtures::union_example())?, (false, false, false, true)),
        ("concat-product", flags(&fixtures::concat_product())?, (false, false, false, true)),
        ("concat", flags(&concat)?, (false, false, false, true)),
    ];
    let bad: Vec<&str> = cases.iter().filter(|(_, got, want)| got != want).map(|(name, _, _)| *name).collect();
    let iso = concat.is_isomorphic(&fixtures::concat_product());
    let witness = classify(&fixtures::four_state())?
        .monotonic_order
        .map(|o| check_order(fixtures::four_state().minimize().letters(), &o))
        .transpose()?
        == Some(true);
    let ok = bad.is_empty() && iso && witness;
    Ok((ok, format!("mismatched: [{}], concat isomorphic: {iso}, witness checks: {witness}", bad.join(","))))
}

fn local_maximality() -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [3, 4] {
        let letters: Vec<Transformation> = families::nearly_monotonic_letters(n)?.into_iter().map(|(_, t)| t).collect();
        let ext = Semigroup::generate(&letters)?.aperiodic_extension()?;
        ok &= ext.is_none();
        parts.push(match ext {
            None => format!("C_{n} locally maximal"),
            Some(t) => format!("C_{n} extends by {t}"),
        });
    }
    Ok((ok, parts.join(", ")))
}

fn small_sigma() -> Result<(bool, String)> {
    let sigma = |d: Dfa| d.complexity_report().map(|r| r.sigma);
    Ok(compare(
        (sigma(fixtures::contains_a())?, sigma(fixtures::ends_with_a())?, sigma(fixtures::ends_with_a_neutral())?),
        (2, 2, 3),
    ))
}

fn associativity() -> (bool, String) {
    let mut triples = 0;
    for n in 1..=3 {
        let all = enumerate_all(n).expect("small degree");
        for a in &all {
            for b in &all {
                let ab = a.product(b);
                for c in &all {
                    if ab.product(c) != a.product(&b.product(c)) {
                        return (false, format!("{a} {b} {c}"));
                    }
                    triples += 1;
                }
            }
        }
    }
    (true, format!("{triples} triples"))
}

fn fixture_dfas() -> Vec<(String, Dfa)> {
    let mut out: Vec<(String, Dfa)> = fixtures::all().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    for tag in [FamilyTag::A, FamilyTag::BPrime, FamilyTag::C] {
        for n in tag.min_n()..=4 {
            let id = FamilyId::new(tag, n).expect("family size");
            out.push((id.to_string(), families::build(id).expect("family").into_dfa()));
        }
    }
    out
}

fn closure_idempotence() -> Result<(bool, String)> {
    for (name, d) in fixture_dfas() {
        let s = d.transition_semigroup()?;
        let again = Semigroup::generate(s.elements())?;
        if again.element_set() != s.element_set() {
            return Ok((false, name));
        }
    }
    Ok((true, "all fixtures".into()))
}

fn order_oracle() -> Result<(bool, String)> {
    let mut cases = 0;
    for n in 1..=4 {
        let all = enumerate_all(n)?;
        let step = if n == 4 { 7 } else { 1 };
        for (i, a) in all.iter().enumerate() {
            for b in all.iter().skip(i % step).step_by(step) {
                let ts = [a.clone(), b.clone()];
                let found = find_monotonic_order(n, &ts);
                if found.is_some() != brute_force_monotonic(n, &ts) {
                    return Ok((false, format!("{a} {b}")));
                }
                if let Some(o) = found {
                    if !check_order(&ts, &o)? {
                        return Ok((false, format!("witness {o} rejected for {a} {b}")));
                    }
                }
                cases += 1;
            }
        }
    }
    // partial maps of degree 2 and 3
    for n in 2..=3 {
        let options: Vec<Option<usize>> = std::iter::once(None).chain((0..n).map(Some)).collect();
        let mut partials = vec![Vec::new()];
        for _ in 0..n {
            partials = partials
                .into_iter()
                .flat_map(|p: Vec<Option<usize>>| options.iter().map(move |&x| [p.clone(), vec![x]].concat()))
                .collect();
        }
        let partials: Vec<PartialTransformation> = partials.iter().map(|p| PartialTransformation::from_indices(p)).collect();
        for a in &partials {
            for b in &partials {
                let ts = [a.clone(), b.clone()];
                if find_monotonic_order(n, &ts).is_some() != brute_force_monotonic(n, &ts) {
                    return Ok((false, format!("{a} {b}")));
                }
                cases += 1;
            }
        }
    }
    let natural = check_order(&[Transformation::identity(3)], &OrderWitness::natural(3))?;
    Ok((natural, format!("{cases} sets")))
}

fn chains_and_bounds() -> Result<(bool, String)> {
    for (name, d) in fixture_dfas() {
        let c = classify(&d)?;
        if !c.chain_holds() {
            return Ok((false, format!("{name}: chain broken")));
        }
        let r = d.complexity_report()?;
        if !(r.mu - 1 <= r.sigma && r.sigma <= r.mu) {
            return Ok((false, format!("{name}: sigma={} mu={}", r.sigma, r.mu)));
        }
    }
    Ok((true, "all fixtures".into()))
}

fn cm_pm() -> Result<(bool, String)> {
    for n in 2..=5 {
        if !families::completion_isomorphism(n)? {
            return Ok((false, format!("n={n}")));
        }
    }
    Ok((true, "n=2..5".into()))
}

/// Runs every check; `workers` is passed to the search.
pub fn sweep(workers: usize) -> Vec<Check> {
    vec![
        Check::from_result("counting formulas", counting()),
        Check::from_result("family closures", family_closures()),
        Check::from_result("monotonic maps of degree 3", table_one()),
        Check::from_result("aperiodic enumeration", aperiodic_enumeration()),
        Check::from_result("search reference cells", search_cells(workers)),
        Check::from_result("conflict analysis", conflicts(workers)),
        Check::from_result("classification fixtures", classifications()),
        Check::from_result("local maximality", local_maximality()),
        Check::from_result("small syntactic complexities", small_sigma()),
        {
            let (ok, detail) = associativity();
            Check::new("associativity", ok, detail)
        },
        Check::from_result("closure idempotence", closure_idempotence()),
        Check::from_result("order search against brute force", order_oracle()),
        Check::from_result("classification chain and monoid bounds", chains_and_bounds()),
        Check::from_result("completion isomorphism", cm_pm()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pruefer_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| forests_by_pruefer(n).len()).collect();
        assert_eq!(counts, [1, 3, 16, 125, 1296]);
        let distinct: BTreeSet<_> = forests_by_pruefer(4).into_iter().collect();
        assert_eq!(distinct.len(), 125);
    }

    #[test]
    fn brute_force_orders() {
        let swap: Transformation = "[2,1]".parse().unwrap();
        assert!(!brute_force_monotonic(2, &[swap]));
        let t: Transformation = "[1,2,1]".parse().unwrap();
        assert!(brute_force_monotonic(3, &[t]));
    }

    #[test]
    fn permutations_step() {
        let mut xs = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut xs) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
