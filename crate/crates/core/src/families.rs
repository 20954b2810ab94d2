//! The extremal generator families and the counting formulas they meet.
//!
//! * `A_n`: generators of all monotonic full transformations, `f(n)` elements.
//! * `B_n`: generators of all monotonic partial transformations, `g(n)` elements.
//! * `B'_n`: the completed form of `B_{n-1}` on `n` states, `g(n-1)` elements.
//! * `C_n`: `B'_n` plus the constant map onto state 1, `h(n)` elements.
//!
//! Each automaton has initial state 1 and final states `{1}`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::automata::{Automaton, Dfa, Idfa};
use crate::error::{Error, Result};
use crate::semigroup::{is_minimal_generating_set, Semigroup};
use crate::transform::{PartialTransformation, StateId, Transform, Transformation};

/// Largest `n` accepted by the counting formulas.
pub const MAX_COUNT_N: usize = 16;

/// Largest `n` for which [`verify_family`] runs.
pub const MAX_VERIFY_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyTag {
    A,
    B,
    BPrime,
    C,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 4] = [FamilyTag::A, FamilyTag::B, FamilyTag::BPrime, FamilyTag::C];

    pub fn min_n(self) -> usize {
        match self {
            FamilyTag::A | FamilyTag::B => 1,
            FamilyTag::BPrime | FamilyTag::C => 2,
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::A => "A",
            FamilyTag::B => "B",
            FamilyTag::BPrime => "Bprime",
            FamilyTag::C => "C",
        })
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(FamilyTag::A),
            "B" | "b" => Ok(FamilyTag::B),
            "Bprime" | "bprime" | "B'" | "Bp" => Ok(FamilyTag::BPrime),
            "C" | "c" => Ok(FamilyTag::C),
            _ => Err(Error::Malformed(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyId {
    pub tag: FamilyTag,
    pub n: usize,
}

impl FamilyId {
    pub fn new(tag: FamilyTag, n: usize) -> Result<Self> {
        if n < tag.min_n() || n > crate::transform::MAX_DEGREE {
            return Err(Error::OutOfRange { what: "family size", value: n });
        }
        Ok(FamilyId { tag, n })
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.tag, self.n)
    }
}

type Letters<T> = Vec<(String, T)>;

// 0-based helpers: `fixing_except(n, &[(from, to)])` is the identity except
// at the listed points.
fn full(n: usize, changes: &[(usize, usize)]) -> Transformation {
    let mut images: Vec<usize> = (0..n).collect();
    for &(from, to) in changes {
        images[from] = to;
    }
    Transformation::from_indices(&images)
}

fn partial(n: usize, changes: &[(usize, Option<usize>)]) -> PartialTransformation {
    let mut images: Vec<Option<usize>> = (0..n).map(Some).collect();
    for &(from, to) in changes {
        images[from] = to;
    }
    PartialTransformation::from_indices(&images)
}

/// Letters of `A_n`: `a, b1, ..., b(n-1), c`.
pub fn monotonic_letters(n: usize) -> Result<Letters<Transformation>> {
    FamilyId::new(FamilyTag::A, n)?;
    let mut letters = Vec::with_capacity(n + 1);
    // 1a = 1, ia = i - 1
    let shift: Vec<usize> = (0..n).map(|i| i.saturating_sub(1)).collect();
    letters.push(("a".to_string(), Transformation::from_indices(&shift)));
    for i in 0..n - 1 {
        letters.push((format!("b{}", i + 1), full(n, &[(i, i + 1)])));
    }
    letters.push(("c".to_string(), Transformation::identity(n)));
    Ok(letters)
}

/// Letters of `B_n`: `a, b1, ..., b(n-1), c1, ..., c(n-1), d`.
pub fn partial_monotonic_letters(n: usize) -> Result<Letters<PartialTransformation>> {
    FamilyId::new(FamilyTag::B, n)?;
    let mut letters = Vec::with_capacity(2 * n);
    // 1a undefined, ja = j - 1
    let shift: Vec<Option<usize>> = (0..n).map(|j| j.checked_sub(1)).collect();
    letters.push(("a".to_string(), PartialTransformation::from_indices(&shift)));
    for i in 0..n - 1 {
        letters.push((format!("b{}", i + 1), partial(n, &[(i, Some(i + 1)), (i + 1, None)])));
    }
    for i in 0..n - 1 {
        letters.push((format!("c{}", i + 1), partial(n, &[(i, Some(i + 1))])));
    }
    letters.push(("d".to_string(), PartialTransformation::identity(n)));
    Ok(letters)
}

/// Letters of `B'_n`: `a, b1, ..., b(n-2), c1, ..., c(n-2), d` on `n` states,
/// state `n` acting as the sink.
pub fn completed_monotonic_letters(n: usize) -> Result<Letters<Transformation>> {
    FamilyId::new(FamilyTag::BPrime, n)?;
    let sink = n - 1;
    let mut letters = Vec::with_capacity(2 * n - 2);
    // 1a = na = n, ja = j - 1 otherwise
    let shift: Vec<usize> = (0..n).map(|j| if j == 0 || j == sink { sink } else { j - 1 }).collect();
    letters.push(("a".to_string(), Transformation::from_indices(&shift)));
    for i in 0..n - 2 {
        letters.push((format!("b{}", i + 1), full(n, &[(i, i + 1), (i + 1, sink)])));
    }
    for i in 0..n - 2 {
        letters.push((format!("c{}", i + 1), full(n, &[(i, i + 1)])));
    }
    letters.push(("d".to_string(), Transformation::identity(n)));
    Ok(letters)
}

/// Letters of `C_n`: those of `B'_n` followed by the constant `e` onto state 1.
pub fn nearly_monotonic_letters(n: usize) -> Result<Letters<Transformation>> {
    FamilyId::new(FamilyTag::C, n)?;
    let mut letters = completed_monotonic_letters(n)?;
    letters.push(("e".to_string(), Transformation::constant(n, 1)?));
    Ok(letters)
}

/// Generators of the family as partial transformations, in letter order.
pub fn generators(id: FamilyId) -> Result<Vec<PartialTransformation>> {
    let full_letters = |letters: Letters<Transformation>| letters.into_iter().map(|(_, t)| t.into()).collect();
    Ok(match id.tag {
        FamilyTag::A => full_letters(monotonic_letters(id.n)?),
        FamilyTag::B => partial_monotonic_letters(id.n)?.into_iter().map(|(_, t)| t).collect(),
        FamilyTag::BPrime => full_letters(completed_monotonic_letters(id.n)?),
        FamilyTag::C => full_letters(nearly_monotonic_letters(id.n)?),
    })
}

fn dfa_from(letters: Letters<Transformation>) -> Dfa {
    let (alphabet, delta): (Vec<_>, Vec<_>) = letters.into_iter().unzip();
    Dfa::new(alphabet, delta, StateId::from_index(0), [StateId::from_index(0)]).expect("family automaton is valid")
}

/// The family automaton: an IDFA for `B_n`, a DFA otherwise.
pub fn build(id: FamilyId) -> Result<Automaton> {
    let id = FamilyId::new(id.tag, id.n)?;
    Ok(match id.tag {
        FamilyTag::A => Automaton::Dfa(dfa_from(monotonic_letters(id.n)?)),
        FamilyTag::B => {
            let (alphabet, delta): (Vec<_>, Vec<_>) = partial_monotonic_letters(id.n)?.into_iter().unzip();
            Automaton::Idfa(
                Idfa::new(alphabet, delta, StateId::from_index(0), [StateId::from_index(0)])
                    .expect("family automaton is valid"),
            )
        }
        FamilyTag::BPrime => Automaton::Dfa(dfa_from(completed_monotonic_letters(id.n)?)),
        FamilyTag::C => Automaton::Dfa(dfa_from(nearly_monotonic_letters(id.n)?)),
    })
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn check_count_range(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_COUNT_N {
        return Err(Error::OutOfRange { what: "counting argument", value: n });
    }
    Ok(())
}

fn narrow(value: u128) -> Result<u64> {
    u64::try_from(value).map_err(|_| Error::OutOfRange { what: "count", value: usize::MAX })
}

/// Number of monotonic full transformations, `sum_k C(n-1,k-1) C(n,k)`,
/// checked against the closed form `C(2n-1, n)`.
pub fn f(n: usize) -> Result<u64> {
    check_count_range(n, 1)?;
    let n = n as u64;
    let sum: u128 = (1..=n).map(|k| binomial(n - 1, k - 1) * binomial(n, k)).sum();
    assert_eq!(sum, binomial(2 * n - 1, n), "Vandermonde identity");
    narrow(sum)
}

/// Number of monotonic partial transformations, `sum_k C(n,k) C(n+k-1,k)`.
pub fn g(n: usize) -> Result<u64> {
    check_count_range(n, 1)?;
    let n = n as u64;
    narrow((0..=n).map(|k| binomial(n, k) * binomial(n + k - 1, k)).sum())
}

/// Number of nearly monotonic transformations,
/// `sum_k C(n-1,k) C(n+k-2,k) + n - 1`.
pub fn h(n: usize) -> Result<u64> {
    check_count_range(n, 2)?;
    let n = n as u64;
    let sum: u128 = (0..n).map(|k| binomial(n - 1, k) * binomial(n + k - 2, k)).sum();
    narrow(sum + n as u128 - 1)
}

/// Number of aperiodic transformations, `(n+1)^(n-1)`.
pub fn aperiodic_count(n: usize) -> Result<u64> {
    check_count_range(n, 1)?;
    narrow((n as u128 + 1).pow(n as u32 - 1))
}

/// Expected closure size of the family.
pub fn expected_size(id: FamilyId) -> Result<u64> {
    match id.tag {
        FamilyTag::A => f(id.n),
        FamilyTag::B => g(id.n),
        FamilyTag::BPrime => g(id.n - 1),
        FamilyTag::C => h(id.n),
    }
}

/// Alphabet size the family needs: `n+1`, `2n`, `2n-2`, `2n-1`.
pub fn expected_alphabet_size(id: FamilyId) -> usize {
    match id.tag {
        FamilyTag::A => id.n + 1,
        FamilyTag::B => 2 * id.n,
        FamilyTag::BPrime => 2 * id.n - 2,
        FamilyTag::C => 2 * id.n - 1,
    }
}

/// Outcome of [`verify_family`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub states: usize,
    pub minimal: bool,
    pub semigroup_size: usize,
    pub expected_size: u64,
    pub aperiodic: bool,
    /// First element with a non-trivial cycle, if any.
    pub periodic_witness: Option<String>,
    pub generators_minimal: bool,
    pub alphabet_size: usize,
    pub expected_alphabet_size: usize,
}

impl FamilyReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.minimal {
            out.push(format!("{}: automaton is not minimal", self.family));
        }
        if self.semigroup_size as u64 != self.expected_size {
            out.push(format!("{}: semigroup has {} elements, expected {}", self.family, self.semigroup_size, self.expected_size));
        }
        if let Some(w) = &self.periodic_witness {
            out.push(format!("{}: element {w} has a non-trivial cycle", self.family));
        }
        if !self.generators_minimal {
            out.push(format!("{}: generating set is redundant", self.family));
        }
        if self.alphabet_size != self.expected_alphabet_size {
            out.push(format!(
                "{}: {} letters, expected {}",
                self.family, self.alphabet_size, self.expected_alphabet_size
            ));
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

fn report_for<T: Transform>(
    id: FamilyId,
    states: usize,
    minimal: bool,
    letters: &[T],
) -> Result<FamilyReport> {
    let s = Semigroup::generate(letters)?;
    Ok(FamilyReport {
        family: id.to_string(),
        states,
        minimal,
        semigroup_size: s.len(),
        expected_size: expected_size(id)?,
        aperiodic: s.is_aperiodic(),
        periodic_witness: s.first_periodic().map(|t| t.to_string()),
        generators_minimal: is_minimal_generating_set(letters)?,
        alphabet_size: letters.len(),
        expected_alphabet_size: expected_alphabet_size(id),
    })
}

/// Builds the family and checks minimality of the automaton, the closure
/// size, aperiodicity, irredundancy of the generators and the alphabet size.
pub fn verify_family(id: FamilyId) -> Result<FamilyReport> {
    if id.n > MAX_VERIFY_N {
        return Err(Error::OutOfRange { what: "family verification size", value: id.n });
    }
    match build(id)? {
        Automaton::Dfa(d) => report_for(id, d.n(), d.is_minimal(), d.letters()),
        Automaton::Idfa(i) => report_for(id, i.n(), i.to_dfa().is_minimal(), i.letters()),
    }
}

/// Checks that completion (undefined images routed to a new fixed sink) maps
/// the semigroup of `B_{n-1}` isomorphically onto that of `B'_n`.
pub fn completion_isomorphism(n: usize) -> Result<bool> {
    let partial: Vec<PartialTransformation> = partial_monotonic_letters(n - 1)?.into_iter().map(|(_, t)| t).collect();
    let full: Vec<Transformation> = completed_monotonic_letters(n)?.into_iter().map(|(_, t)| t).collect();
    let pm = Semigroup::generate(&partial)?;
    let cm = Semigroup::generate(&full)?;
    let image: Vec<Transformation> = pm.elements().iter().map(|x| x.complete()).collect();
    let onto = image.iter().cloned().collect::<std::collections::BTreeSet<_>>() == cm.element_set();
    let injective = onto && image.len() == cm.len();
    let homomorphic = pm.elements().iter().zip(&image).all(|(x, cx)| {
        pm.elements().iter().zip(&image).all(|(y, cy)| x.product(y).complete() == cx.product(cy))
    });
    Ok(injective && homomorphic)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings<T: fmt::Display>(letters: &[(String, T)]) -> Vec<String> {
        letters.iter().map(|(a, t)| format!("{a}={t}")).collect()
    }

    #[test]
    fn a3_letters() {
        assert_eq!(
            strings(&monotonic_letters(3).unwrap()),
            ["a=[1,1,2]", "b1=[2,2,3]", "b2=[1,3,3]", "c=[1,2,3]"]
        );
        assert_eq!(strings(&monotonic_letters(1).unwrap()), ["a=[1]", "c=[1]"]);
        assert_eq!(strings(&monotonic_letters(2).unwrap()), ["a=[1,1]", "b1=[2,2]", "c=[1,2]"]);
    }

    #[test]
    fn b_letters() {
        assert_eq!(
            strings(&partial_monotonic_letters(2).unwrap()),
            ["a=[_,1]", "b1=[2,_]", "c1=[2,2]", "d=[1,2]"]
        );
        assert_eq!(
            strings(&partial_monotonic_letters(3).unwrap()),
            ["a=[_,1,2]", "b1=[2,_,3]", "b2=[1,3,_]", "c1=[2,2,3]", "c2=[1,3,3]", "d=[1,2,3]"]
        );
        assert_eq!(strings(&partial_monotonic_letters(1).unwrap()), ["a=[_]", "d=[1]"]);
    }

    #[test]
    fn b_prime_and_c_letters() {
        assert_eq!(
            strings(&completed_monotonic_letters(3).unwrap()),
            ["a=[3,1,3]", "b1=[2,3,3]", "c1=[2,2,3]", "d=[1,2,3]"]
        );
        assert_eq!(strings(&completed_monotonic_letters(2).unwrap()), ["a=[2,2]", "d=[1,2]"]);
        assert_eq!(
            strings(&nearly_monotonic_letters(3).unwrap()),
            ["a=[3,1,3]", "b1=[2,3,3]", "c1=[2,2,3]", "d=[1,2,3]", "e=[1,1,1]"]
        );
    }

    #[test]
    fn family_bounds() {
        assert!(FamilyId::new(FamilyTag::A, 0).is_err());
        assert!(FamilyId::new(FamilyTag::BPrime, 1).is_err());
        assert!(FamilyId::new(FamilyTag::C, 1).is_err());
        assert!(monotonic_letters(0).is_err());
        assert!(verify_family(FamilyId::new(FamilyTag::A, 7).unwrap()).is_err());
    }

    #[test]
    fn counting_values() {
        let fs: Vec<u64> = (1..=6).map(|n| f(n).unwrap()).collect();
        assert_eq!(fs, [1, 3, 10, 35, 126, 462]);
        let gs: Vec<u64> = (1..=5).map(|n| g(n).unwrap()).collect();
        assert_eq!(gs, [2, 8, 38, 192, 1002]);
        let hs: Vec<u64> = (2..=6).map(|n| h(n).unwrap()).collect();
        assert_eq!(hs, [3, 10, 41, 196, 1007]);
        let cs: Vec<u64> = (1..=6).map(|n| aperiodic_count(n).unwrap()).collect();
        assert_eq!(cs, [1, 3, 16, 125, 1296, 16807]);
        assert!(f(0).is_err() && h(1).is_err() && g(MAX_COUNT_N + 1).is_err());
        for n in 1..=MAX_COUNT_N {
            f(n).unwrap();
            aperiodic_count(n).unwrap();
        }
    }

    #[test]
    fn small_families_verify() {
        for tag in FamilyTag::ALL {
            for n in tag.min_n()..=4 {
                let report = verify_family(FamilyId::new(tag, n).unwrap()).unwrap();
                assert!(report.passed(), "{:?}", report.failures());
            }
        }
        let c2 = verify_family(FamilyId::new(FamilyTag::C, 2).unwrap()).unwrap();
        assert_eq!(c2.semigroup_size, 3);
        let bp3 = verify_family(FamilyId::new(FamilyTag::BPrime, 3).unwrap()).unwrap();
        assert_eq!(bp3.semigroup_size, 8);
    }

    #[test]
    fn completion_is_isomorphism() {
        for n in 2..=4 {
            assert!(completion_isomorphism(n).unwrap());
        }
    }

    #[test]
    fn tag_parsing() {
        assert_eq!("Bprime".parse::<FamilyTag>().unwrap(), FamilyTag::BPrime);
        assert_eq!("C".parse::<FamilyTag>().unwrap(), FamilyTag::C);
        assert!("D".parse::<FamilyTag>().is_err());
    }
}
