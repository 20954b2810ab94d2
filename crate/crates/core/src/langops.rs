//! Regular operations on languages given by complete DFAs.
//!
//! Every result is returned minimized. Binary operations need both operands
//! over the same set of letter names; the right operand is re-indexed into
//! the left operand's letter order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::Serialize;

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::transform::Transformation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
    SymmetricDifference,
}

impl BoolOp {
    pub fn apply(self, x: bool, y: bool) -> bool {
        match self {
            BoolOp::Union => x || y,
            BoolOp::Intersection => x && y,
            BoolOp::Difference => x && !y,
            BoolOp::SymmetricDifference => x != y,
        }
    }
}

impl fmt::Display for BoolOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoolOp::Union => "union",
            BoolOp::Intersection => "intersection",
            BoolOp::Difference => "difference",
            BoolOp::SymmetricDifference => "symmetric-difference",
        })
    }
}

impl FromStr for BoolOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "union" => Ok(BoolOp::Union),
            "intersection" | "intersect" => Ok(BoolOp::Intersection),
            "difference" => Ok(BoolOp::Difference),
            "symmetric-difference" | "xor" => Ok(BoolOp::SymmetricDifference),
            _ => Err(Error::Malformed(format!("unknown operation `{s}`"))),
        }
    }
}

/// Explores the deterministic automaton whose states are the keys reachable
/// from `start`, then minimizes it.
fn explore<K, S, A>(alphabet: &[String], start: K, step: S, accept: A) -> Dfa
where
    K: Clone + Eq + Hash,
    S: Fn(&K, usize) -> K,
    A: Fn(&K) -> bool,
{
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut keys = vec![start.clone()];
    index.insert(start, 0);
    let mut table: Vec<Vec<usize>> = vec![Vec::new(); alphabet.len()];
    let mut i = 0;
    while i < keys.len() {
        for (a, row) in table.iter_mut().enumerate() {
            let next = step(&keys[i], a);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = keys.len();
                    index.insert(next.clone(), id);
                    keys.push(next);
                    id
                }
            };
            row.push(id);
        }
        i += 1;
    }
    let delta = table.iter().map(|row| Transformation::from_indices(row)).collect();
    let finals = keys.iter().map(accept).collect();
    Dfa::from_parts(alphabet.to_vec(), delta, 0, finals).minimize()
}

/// Letter map from `a`'s letter indices to `b`'s.
fn align(a: &Dfa, b: &Dfa) -> Result<Vec<usize>> {
    let left: BTreeSet<&String> = a.alphabet().iter().collect();
    let right: BTreeSet<&String> = b.alphabet().iter().collect();
    if left != right {
        return Err(Error::AlphabetMismatch);
    }
    Ok(a.alphabet().iter().map(|x| b.letter_index(x).expect("same letters")).collect())
}

pub fn complement(a: &Dfa) -> Dfa {
    a.with_complemented_finals().minimize()
}

/// Product construction for a Boolean combination of two languages.
pub fn boolean_op(a: &Dfa, b: &Dfa, op: BoolOp) -> Result<Dfa> {
    let map = align(a, b)?;
    let (fa, fb) = (a.final_flags(), b.final_flags());
    Ok(explore(
        a.alphabet(),
        (a.initial_index(), b.initial_index()),
        |&(p, q), x| (a.step(p, x), b.step(q, map[x])),
        |&(p, q)| op.apply(fa[p], fb[q]),
    ))
}

pub fn union(a: &Dfa, b: &Dfa) -> Result<Dfa> {
    boolean_op(a, b, BoolOp::Union)
}

pub fn intersection(a: &Dfa, b: &Dfa) -> Result<Dfa> {
    boolean_op(a, b, BoolOp::Intersection)
}

pub fn difference(a: &Dfa, b: &Dfa) -> Result<Dfa> {
    boolean_op(a, b, BoolOp::Difference)
}

/// A nondeterministic automaton without empty transitions; states are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Vec<String>,
    // letter -> state -> successors
    delta: Vec<Vec<BTreeSet<usize>>>,
    initials: BTreeSet<usize>,
    finals: Vec<bool>,
}

impl Nfa {
    pub fn new(
        alphabet: Vec<String>,
        delta: Vec<Vec<BTreeSet<usize>>>,
        initials: BTreeSet<usize>,
        finals: Vec<bool>,
    ) -> Result<Self> {
        let n = finals.len();
        if alphabet.is_empty() || alphabet.len() != delta.len() {
            return Err(Error::InvalidAutomaton("one transition table per letter required".into()));
        }
        let in_range = |set: &BTreeSet<usize>| set.iter().all(|&q| q < n);
        if delta.iter().any(|row| row.len() != n || !row.iter().all(in_range)) || !in_range(&initials) {
            return Err(Error::InvalidAutomaton("state out of range".into()));
        }
        Ok(Nfa { alphabet, delta, initials, finals })
    }

    pub fn from_dfa(a: &Dfa) -> Self {
        let delta = (0..a.alphabet().len())
            .map(|x| (0..a.n()).map(|q| BTreeSet::from([a.step(q, x)])).collect())
            .collect();
        Nfa {
            alphabet: a.alphabet().to_vec(),
            delta,
            initials: BTreeSet::from([a.initial_index()]),
            finals: a.final_flags().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.finals.len()
    }

    fn step(&self, set: &BTreeSet<usize>, x: usize) -> BTreeSet<usize> {
        set.iter().flat_map(|&q| self.delta[x][q].iter().copied()).collect()
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let set = word.iter().fold(self.initials.clone(), |set, &x| self.step(&set, x));
        set.iter().any(|&q| self.finals[q])
    }

    /// Subset construction followed by minimization.
    pub fn determinize(&self) -> Dfa {
        explore(&self.alphabet, self.initials.clone(), |set, x| self.step(set, x), |set| {
            set.iter().any(|&q| self.finals[q])
        })
    }
}

/// Concatenation `L(a) L(b)`: the states of `b` follow those of `a`, and
/// every transition of `a` into a final state may also enter `b`'s initial state.
pub fn concat(a: &Dfa, b: &Dfa) -> Result<Dfa> {
    let map = align(a, b)?;
    let (na, nb) = (a.n(), b.n());
    let (fa, fb) = (a.final_flags(), b.final_flags());
    let ib = na + b.initial_index();
    let delta = (0..a.alphabet().len())
        .map(|x| {
            let mut row: Vec<BTreeSet<usize>> = (0..na)
                .map(|p| {
                    let r = a.step(p, x);
                    if fa[r] {
                        BTreeSet::from([r, ib])
                    } else {
                        BTreeSet::from([r])
                    }
                })
                .collect();
            row.extend((0..nb).map(|q| BTreeSet::from([na + b.step(q, map[x])])));
            row
        })
        .collect();
    let mut initials = BTreeSet::from([a.initial_index()]);
    if fa[a.initial_index()] {
        initials.insert(ib);
    }
    let finals = std::iter::repeat_n(false, na).chain(fb.iter().copied()).collect();
    Ok(Nfa::new(a.alphabet().to_vec(), delta, initials, finals)?.determinize())
}

/// Kleene star: a fresh initial and final state behaving like the old
/// initial state, and every transition into a final state may restart.
pub fn star(a: &Dfa) -> Dfa {
    let n = a.n();
    let fa = a.final_flags();
    let ia = a.initial_index();
    let fresh = n;
    let delta = (0..a.alphabet().len())
        .map(|x| {
            (0..=n)
                .map(|p| {
                    let r = a.step(if p == fresh { ia } else { p }, x);
                    if fa[r] {
                        BTreeSet::from([r, ia])
                    } else {
                        BTreeSet::from([r])
                    }
                })
                .collect()
        })
        .collect();
    let finals = fa.iter().copied().chain([true]).collect();
    Nfa::new(a.alphabet().to_vec(), delta, BTreeSet::from([fresh]), finals)
        .expect("star construction is well formed")
        .determinize()
}

/// Left quotient `w^{-1} L = { u : wu in L }`.
pub fn left_quotient(a: &Dfa, word: &[&str]) -> Result<Dfa> {
    let letters = a.word(word)?;
    let q = letters.iter().fold(a.initial_index(), |q, &x| a.step(q, x));
    Ok(a.with_initial(crate::transform::StateId::from_index(q))?.minimize())
}

/// True iff the language is empty.
pub fn is_empty(a: &Dfa) -> bool {
    let m = a.minimize();
    m.n() == 1 && !m.final_flags()[0]
}

/// Language equality over the same alphabet.
pub fn equivalent(a: &Dfa, b: &Dfa) -> Result<bool> {
    Ok(is_empty(&boolean_op(a, b, BoolOp::SymmetricDifference)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dfa(a: &[usize], b: &[usize], initial: usize, finals: &[usize]) -> Dfa {
        Dfa::from_table(&[("a", a), ("b", b)], initial, finals).unwrap()
    }

    fn words(max: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..max {
            layer = layer
                .iter()
                .flat_map(|w: &Vec<usize>| (0..2).map(move |x| [w.clone(), vec![x]].concat()))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    // a(e + S*b), bS*b
    fn l1() -> Dfa {
        dfa(&[2, 3, 3, 3, 5], &[5, 4, 4, 4, 5], 1, &[2, 4])
    }

    fn l2() -> Dfa {
        dfa(&[4, 2, 2, 4], &[2, 3, 3, 4], 1, &[3])
    }

    #[test]
    fn union_of_examples() {
        let u = union(&l1(), &l2()).unwrap();
        let expected = dfa(&[3, 2, 2], &[2, 3, 3], 1, &[3]);
        assert!(u.is_isomorphic(&expected));
        for w in words(6) {
            assert_eq!(u.accepts(&w), l1().accepts(&w) || l2().accepts(&w));
        }
    }

    #[test]
    fn complement_and_difference() {
        let a = l1();
        let c = complement(&a);
        for w in words(5) {
            assert_ne!(c.accepts(&w), a.accepts(&w));
        }
        assert!(is_empty(&difference(&a, &a).unwrap()));
        assert!(equivalent(&complement(&c), &a).unwrap());
    }

    #[test]
    fn concat_and_star_membership() {
        let x = l1();
        let y = l2();
        let xy = concat(&x, &y).unwrap();
        let s = star(&y);
        for w in words(6) {
            let split = (0..=w.len()).any(|i| x.accepts(&w[..i]) && y.accepts(&w[i..]));
            assert_eq!(xy.accepts(&w), split, "{w:?}");
        }
        assert!(s.accepts(&[]));
        assert!(s.accepts(&[1, 1, 1, 1]));
        assert!(!s.accepts(&[0]));
    }

    #[test]
    fn quotients() {
        let a = l1();
        let q = left_quotient(&a, &["a"]).unwrap();
        assert!(q.accepts(&[]));
        assert!(q.accepts(&[0, 1]));
        assert!(!q.accepts(&[0]));
        assert!(matches!(left_quotient(&a, &["z"]), Err(Error::UnknownLetter(_))));
    }

    #[test]
    fn alphabet_mismatch() {
        let a = dfa(&[1], &[1], 1, &[1]);
        let c = Dfa::from_table(&[("a", &[1]), ("c", &[1])], 1, &[1]).unwrap();
        assert_eq!(union(&a, &c).unwrap_err(), Error::AlphabetMismatch);
        let swapped = Dfa::from_table(&[("b", &[2, 2]), ("a", &[1, 2])], 1, &[2]).unwrap();
        let same = dfa(&[1, 2], &[2, 2], 1, &[2]);
        assert!(equivalent(&swapped, &same).unwrap());
    }

    #[test]
    fn op_names() {
        for op in [BoolOp::Union, BoolOp::Intersection, BoolOp::Difference, BoolOp::SymmetricDifference] {
            assert_eq!(op.to_string().parse::<BoolOp>().unwrap(), op);
        }
    }
}
