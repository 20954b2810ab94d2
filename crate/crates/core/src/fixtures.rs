//! Small named automata used by the examples, the CLI and the test suites.

use crate::automata::{Dfa, Idfa};
use crate::transform::{PartialTransformation, StateId};

fn table(letters: &[(&str, &[usize])], initial: usize, finals: &[usize]) -> Dfa {
    Dfa::from_table(letters, initial, finals).expect("fixture is well formed")
}

/// Partially monotonic but not monotonic; state 3 is the empty state.
pub fn partially_monotonic() -> Dfa {
    table(&[("a", &[3, 1, 3]), ("b", &[2, 3, 3]), ("c", &[2, 2, 3])], 1, &[1])
}

/// The IDFA of [`partially_monotonic`], with the empty state removed.
pub fn partially_monotonic_idfa() -> Idfa {
    let letters: Vec<PartialTransformation> =
        ["[_,1]", "[2,_]", "[2,2]"].iter().map(|s| s.parse().expect("fixture")).collect();
    Idfa::new(
        vec!["a".into(), "b".into(), "c".into()],
        letters,
        StateId::from_index(0),
        [StateId::from_index(0)],
    )
    .expect("fixture is well formed")
}

/// Nearly monotonic but not partially monotonic: [`partially_monotonic`]
/// with the constant letter `d`.
pub fn nearly_monotonic() -> Dfa {
    table(&[("a", &[3, 1, 3]), ("b", &[2, 3, 3]), ("c", &[2, 2, 3]), ("d", &[1, 1, 1])], 1, &[1])
}

/// A four-state automaton of `a(e + S*a)` with an empty state 1 and
/// initial state 2; its transition semigroup has four elements.
pub fn four_state() -> Dfa {
    table(&[("a", &[1, 3, 3, 3]), ("b", &[1, 1, 4, 4])], 2, &[3])
}

/// `a(e + S*b)` over `{a, b}`.
pub fn ends_after_a() -> Dfa {
    table(&[("a", &[2, 3, 3, 3, 5]), ("b", &[5, 4, 4, 4, 5])], 1, &[2, 4])
}

/// `bS*b` over `{a, b}`.
pub fn b_to_b() -> Dfa {
    table(&[("a", &[4, 2, 2, 4]), ("b", &[2, 3, 3, 4])], 1, &[3])
}

/// Minimal DFA of the union of [`ends_after_a`] and [`b_to_b`]; star-free
/// and not nearly monotonic.
pub fn union_example() -> Dfa {
    table(&[("a", &[3, 2, 2]), ("b", &[2, 3, 3])], 1, &[3])
}

/// Left factor of the concatenation example.
pub fn concat_left() -> Dfa {
    table(&[("a", &[1, 1, 1]), ("b", &[2, 3, 3])], 1, &[2])
}

/// Right concatenation factor.
pub fn concat_right() -> Dfa {
    table(&[("a", &[1, 1, 3]), ("b", &[2, 3, 3])], 1, &[2])
}

/// Expected minimal DFA of `concat_left() . concat_right()`.
pub fn concat_product() -> Dfa {
    table(&[("a", &[1, 5, 5, 1, 5, 5]), ("b", &[2, 3, 4, 4, 6, 3])], 1, &[3, 6])
}

/// `S*aS*` over `{a, b}`: syntactic complexity 2.
pub fn contains_a() -> Dfa {
    table(&[("a", &[2, 2]), ("b", &[1, 2])], 1, &[2])
}

/// `S*a` over `{a, b}`: syntactic complexity 2.
pub fn ends_with_a() -> Dfa {
    table(&[("a", &[2, 2]), ("b", &[1, 1])], 1, &[2])
}

/// `S*a` with an identity letter `c`: syntactic complexity 3.
pub fn ends_with_a_neutral() -> Dfa {
    table(&[("a", &[2, 2]), ("b", &[1, 1]), ("c", &[1, 2])], 1, &[2])
}

/// A two-state automaton swapped by `a`: not star-free.
pub fn parity() -> Dfa {
    table(&[("a", &[2, 1])], 1, &[1])
}

/// All fixtures by name.
pub fn all() -> Vec<(&'static str, Dfa)> {
    vec![
        ("partially-monotonic", partially_monotonic()),
        ("nearly-monotonic", nearly_monotonic()),
        ("four-state", four_state()),
        ("ends-after-a", ends_after_a()),
        ("b-to-b", b_to_b()),
        ("union-example", union_example()),
        ("concat-left", concat_left()),
        ("concat-right", concat_right()),
        ("concat-product", concat_product()),
        ("contains-a", contains_a()),
        ("ends-with-a", ends_with_a()),
        ("ends-with-a-neutral", ends_with_a_neutral()),
        ("parity", parity()),
    ]
}

pub fn by_name(name: &str) -> Option<Dfa> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, d)| d)
}
