//! Complete and incomplete deterministic automata.
//!
//! States are 0-based internally and 1-based ([`StateId`]) at the API
//! surface and in the file format. Every letter performs one transformation
//! of the state set; a word performs the left-to-right product of its
//! letters.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::Semigroup;
use crate::transform::{PartialTransformation, StateId, Transform, Transformation};

/// A complete DFA `(Q, alphabet, delta, initial, finals)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<String>,
    delta: Vec<Transformation>,
    initial: usize,
    finals: Vec<bool>,
}

/// A DFA whose letters may be undefined on some states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Idfa {
    alphabet: Vec<String>,
    delta: Vec<PartialTransformation>,
    initial: usize,
    finals: Vec<bool>,
}

/// Quotient complexity `kappa`, syntactic complexity `sigma` and monoid
/// complexity `mu` of a language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub kappa: usize,
    pub sigma: usize,
    pub mu: usize,
}

fn validate_common<T: Transform>(alphabet: &[String], delta: &[T], initial: usize, n: usize) -> Result<()> {
    if alphabet.is_empty() {
        return Err(Error::InvalidAutomaton("empty alphabet".into()));
    }
    if alphabet.len() != delta.len() {
        return Err(Error::InvalidAutomaton("one transformation per letter required".into()));
    }
    let mut names: Vec<&String> = alphabet.iter().collect();
    names.sort();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidAutomaton("duplicate letter".into()));
    }
    if let Some(t) = delta.iter().find(|t| t.degree() != n) {
        return Err(Error::SizeMismatch { left: n, right: t.degree() });
    }
    if initial >= n {
        return Err(Error::InvalidAutomaton(format!("initial state {} out of range", initial + 1)));
    }
    Ok(())
}

fn final_flags(n: usize, finals: impl IntoIterator<Item = StateId>) -> Result<Vec<bool>> {
    let mut flags = vec![false; n];
    for f in finals {
        if f.get() > n {
            return Err(Error::InvalidAutomaton(format!("final state {f} out of range")));
        }
        flags[f.index()] = true;
    }
    Ok(flags)
}

impl Dfa {
    pub fn new(
        alphabet: Vec<String>,
        delta: Vec<Transformation>,
        initial: StateId,
        finals: impl IntoIterator<Item = StateId>,
    ) -> Result<Self> {
        let n = delta.first().map(|t| t.degree()).unwrap_or(0);
        validate_common(&alphabet, &delta, initial.index(), n)?;
        let finals = final_flags(n, finals)?;
        Ok(Dfa { alphabet, delta, initial: initial.index(), finals })
    }

    /// Convenience constructor from `(letter, 1-based images)` rows.
    pub fn from_table(letters: &[(&str, &[usize])], initial: usize, finals: &[usize]) -> Result<Self> {
        let alphabet = letters.iter().map(|(name, _)| name.to_string()).collect();
        let delta = letters.iter().map(|(_, images)| Transformation::new(images)).collect::<Result<Vec<_>>>()?;
        let finals = finals.iter().map(|&f| StateId::new(f)).collect::<Result<Vec<_>>>()?;
        Dfa::new(alphabet, delta, StateId::new(initial)?, finals)
    }

    pub(crate) fn from_parts(alphabet: Vec<String>, delta: Vec<Transformation>, initial: usize, finals: Vec<bool>) -> Self {
        debug_assert!(validate_common(&alphabet, &delta, initial, finals.len()).is_ok());
        Dfa { alphabet, delta, initial, finals }
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.finals.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// Transformations performed by the letters, in alphabet order.
    pub fn letters(&self) -> &[Transformation] {
        &self.delta
    }

    pub fn letter(&self, name: &str) -> Option<&Transformation> {
        self.letter_index(name).map(|i| &self.delta[i])
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }

    pub fn initial(&self) -> StateId {
        StateId::from_index(self.initial)
    }

    pub fn finals(&self) -> Vec<StateId> {
        (0..self.n()).filter(|&q| self.finals[q]).map(StateId::from_index).collect()
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.get(q.index()).copied().unwrap_or(false)
    }

    pub(crate) fn initial_index(&self) -> usize {
        self.initial
    }

    pub(crate) fn final_flags(&self) -> &[bool] {
        &self.finals
    }

    /// 0-based successor of 0-based state `q` under letter index `letter`.
    pub fn step(&self, q: usize, letter: usize) -> usize {
        self.delta[letter].apply(q)
    }

    /// Resolves letter names to indices.
    pub fn word(&self, letters: &[&str]) -> Result<Vec<usize>> {
        letters
            .iter()
            .map(|l| self.letter_index(l).ok_or_else(|| Error::UnknownLetter(l.to_string())))
            .collect()
    }

    /// Acceptance of a word given as letter indices.
    pub fn accepts(&self, word: &[usize]) -> bool {
        let q = word.iter().fold(self.initial, |q, &a| self.step(q, a));
        self.finals[q]
    }

    /// Same automaton with a different initial state.
    pub fn with_initial(&self, initial: StateId) -> Result<Dfa> {
        if initial.get() > self.n() {
            return Err(Error::InvalidAutomaton(format!("initial state {initial} out of range")));
        }
        Ok(Dfa { initial: initial.index(), ..self.clone() })
    }

    /// Same automaton with final and non-final states exchanged.
    pub fn with_complemented_finals(&self) -> Dfa {
        Dfa { finals: self.finals.iter().map(|f| !f).collect(), ..self.clone() }
    }

    /// Restriction of the alphabet to the letters whose index passes `keep`.
    /// Returns `None` if no letter remains.
    pub fn restrict_alphabet(&self, keep: impl Fn(usize) -> bool) -> Option<Dfa> {
        let kept: Vec<usize> = (0..self.alphabet.len()).filter(|&i| keep(i)).collect();
        if kept.is_empty() {
            return None;
        }
        Some(Dfa {
            alphabet: kept.iter().map(|&i| self.alphabet[i].clone()).collect(),
            delta: kept.iter().map(|&i| self.delta[i].clone()).collect(),
            initial: self.initial,
            finals: self.finals.clone(),
        })
    }

    fn reachable_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for t in &self.delta {
                let r = t.apply(q);
                if !seen[r] {
                    seen[r] = true;
                    order.push(r);
                }
            }
            i += 1;
        }
        order
    }

    /// The quotient DFA: reachable states only, pairwise distinguishable,
    /// numbered in breadth-first discovery order (letters in alphabet order)
    /// from the initial state, which becomes state 1.
    pub fn minimize(&self) -> Dfa {
        let reachable = self.reachable_order();
        // Moore refinement on the reachable states
        let mut class = vec![usize::MAX; self.n()];
        for &q in &reachable {
            class[q] = self.finals[q] as usize;
        }
        let mut classes = reachable.iter().map(|&q| class[q]).collect::<std::collections::BTreeSet<_>>().len();
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![usize::MAX; self.n()];
            for &q in &reachable {
                let mut signature = Vec::with_capacity(self.delta.len() + 1);
                signature.push(class[q]);
                signature.extend(self.delta.iter().map(|t| class[t.apply(q)]));
                let fresh = ids.len();
                next[q] = *ids.entry(signature).or_insert(fresh);
            }
            let refined = ids.len();
            class = next;
            if refined == classes {
                break;
            }
            classes = refined;
        }
        // canonical BFS numbering of the classes
        let mut number: HashMap<usize, usize> = HashMap::new();
        let mut representative = vec![self.initial];
        number.insert(class[self.initial], 0);
        let mut i = 0;
        while i < representative.len() {
            let q = representative[i];
            for t in &self.delta {
                let r = t.apply(q);
                if let std::collections::hash_map::Entry::Vacant(e) = number.entry(class[r]) {
                    e.insert(representative.len());
                    representative.push(r);
                }
            }
            i += 1;
        }
        let delta = self
            .delta
            .iter()
            .map(|t| {
                let images: Vec<usize> = representative.iter().map(|&q| number[&class[t.apply(q)]]).collect();
                Transformation::from_indices(&images)
            })
            .collect();
        let finals = representative.iter().map(|&q| self.finals[q]).collect();
        Dfa { alphabet: self.alphabet.clone(), delta, initial: 0, finals }
    }

    /// All states reachable and pairwise distinguishable.
    pub fn is_minimal(&self) -> bool {
        self.minimize().n() == self.n()
    }

    /// 0-based states from which some final state is reachable.
    pub(crate) fn coreachable(&self) -> Vec<bool> {
        let n = self.n();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for t in &self.delta {
            for q in 0..n {
                preds[t.apply(q)].push(q);
            }
        }
        let mut live = self.finals.clone();
        let mut queue: VecDeque<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if !live[p] {
                    live[p] = true;
                    queue.push_back(p);
                }
            }
        }
        live
    }

    /// The state whose language is empty, if any. Requires a minimal DFA,
    /// where such a state is unique.
    pub fn empty_state(&self) -> Result<Option<StateId>> {
        if !self.is_minimal() {
            return Err(Error::NotMinimal);
        }
        Ok(self.coreachable().iter().position(|&live| !live).map(StateId::from_index))
    }

    /// Quotient IDFA: the empty state and its incident transitions removed,
    /// remaining states renumbered in their original order.
    pub fn to_idfa(&self) -> Result<Idfa> {
        let empty = self.empty_state()?;
        let Some(empty) = empty else {
            return Ok(Idfa {
                alphabet: self.alphabet.clone(),
                delta: self.delta.iter().cloned().map(PartialTransformation::from).collect(),
                initial: self.initial,
                finals: self.finals.clone(),
            });
        };
        if self.n() == 1 {
            return Err(Error::EmptyLanguage);
        }
        let e = empty.index();
        let relabel = |q: usize| if q < e { q } else { q - 1 };
        let delta = self
            .delta
            .iter()
            .map(|t| {
                let images: Vec<Option<usize>> = (0..self.n())
                    .filter(|&q| q != e)
                    .map(|q| {
                        let r = t.apply(q);
                        (r != e).then(|| relabel(r))
                    })
                    .collect();
                PartialTransformation::from_indices(&images)
            })
            .collect();
        let finals = (0..self.n()).filter(|&q| q != e).map(|q| self.finals[q]).collect();
        Ok(Idfa { alphabet: self.alphabet.clone(), delta, initial: relabel(self.initial), finals })
    }

    /// Isomorphism of the two automata as labeled transition systems with
    /// distinguished initial and final states (all states reachable).
    pub fn is_isomorphic(&self, other: &Dfa) -> bool {
        if self.alphabet != other.alphabet || self.n() != other.n() {
            return false;
        }
        let n = self.n();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[self.initial] = other.initial;
        used[other.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        let mut mapped = 1;
        while let Some(q) = queue.pop_front() {
            if self.finals[q] != other.finals[map[q]] {
                return false;
            }
            for a in 0..self.delta.len() {
                let (r, s) = (self.step(q, a), other.step(map[q], a));
                if map[r] == usize::MAX {
                    if used[s] {
                        return false;
                    }
                    map[r] = s;
                    used[s] = true;
                    mapped += 1;
                    queue.push_back(r);
                } else if map[r] != s {
                    return false;
                }
            }
        }
        mapped == n
    }

    /// Transition semigroup of this automaton as given (not minimized).
    pub fn transition_semigroup(&self) -> Result<Semigroup<Transformation>> {
        Semigroup::generate(&self.delta)
    }

    /// Transition semigroup of the quotient DFA, isomorphic to the syntactic
    /// semigroup of the language.
    pub fn syntactic_semigroup(&self) -> Result<Semigroup<Transformation>> {
        self.minimize().transition_semigroup()
    }

    pub fn complexity_report(&self) -> Result<ComplexityReport> {
        let minimal = self.minimize();
        let semigroup = minimal.transition_semigroup()?;
        let sigma = semigroup.len();
        let mu = if semigroup.contains_identity() { sigma } else { sigma + 1 };
        Ok(ComplexityReport { kappa: minimal.n(), sigma, mu })
    }

    /// Star-freeness of the language: the syntactic semigroup is aperiodic.
    pub fn is_star_free(&self) -> Result<bool> {
        Ok(self.syntactic_semigroup()?.is_aperiodic())
    }
}

impl Idfa {
    pub fn new(
        alphabet: Vec<String>,
        delta: Vec<PartialTransformation>,
        initial: StateId,
        finals: impl IntoIterator<Item = StateId>,
    ) -> Result<Self> {
        let n = delta.first().map(|t| t.degree()).unwrap_or(0);
        validate_common(&alphabet, &delta, initial.index(), n)?;
        let finals = final_flags(n, finals)?;
        Ok(Idfa { alphabet, delta, initial: initial.index(), finals })
    }

    pub fn n(&self) -> usize {
        self.finals.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letters(&self) -> &[PartialTransformation] {
        &self.delta
    }

    pub fn letter(&self, name: &str) -> Option<&PartialTransformation> {
        self.alphabet.iter().position(|a| a == name).map(|i| &self.delta[i])
    }

    pub fn initial(&self) -> StateId {
        StateId::from_index(self.initial)
    }

    pub fn finals(&self) -> Vec<StateId> {
        (0..self.n()).filter(|&q| self.finals[q]).map(StateId::from_index).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(PartialTransformation::is_total)
    }

    /// Completes undefined transitions into a new sink state `n + 1`; a
    /// complete IDFA is returned unchanged as a DFA.
    pub fn to_dfa(&self) -> Dfa {
        let delta: Vec<Transformation> = if self.is_complete() {
            self.delta.iter().map(|t| t.to_total().expect("complete")).collect()
        } else {
            self.delta.iter().map(PartialTransformation::complete).collect()
        };
        let mut finals = self.finals.clone();
        finals.resize(delta[0].degree(), false);
        Dfa { alphabet: self.alphabet.clone(), delta, initial: self.initial, finals }
    }

    /// Acceptance of a word given as letter indices.
    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut q = self.initial;
        for &a in word {
            match self.delta[a].apply(q) {
                Some(r) => q = r,
                None => return false,
            }
        }
        self.finals[q]
    }

    pub fn transition_semigroup(&self) -> Result<Semigroup<PartialTransformation>> {
        Semigroup::generate(&self.delta)
    }
}

/// An automaton read from or written to a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automaton {
    Dfa(Dfa),
    Idfa(Idfa),
}

impl Automaton {
    /// The complete automaton; an incomplete one is completed with a sink.
    pub fn into_dfa(self) -> Dfa {
        match self {
            Automaton::Dfa(d) => d,
            Automaton::Idfa(i) => i.to_dfa(),
        }
    }

    pub fn to_file(&self) -> AutomatonFile {
        match self {
            Automaton::Dfa(d) => AutomatonFile::from(d),
            Automaton::Idfa(i) => AutomatonFile::from(i),
        }
    }

    pub fn from_json(text: &str) -> Result<Automaton> {
        let file: AutomatonFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidAutomaton(e.to_string()))?;
        file.to_automaton()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("automaton file serializes")
    }
}

/// One entry of a transition row: a 1-based state or `"_"` for undefined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ImageRepr", into = "ImageRepr")]
pub enum Image {
    State(usize),
    Undefined,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ImageRepr {
    State(usize),
    Marker(String),
}

impl TryFrom<ImageRepr> for Image {
    type Error = String;

    fn try_from(repr: ImageRepr) -> std::result::Result<Self, String> {
        match repr {
            ImageRepr::State(q) => Ok(Image::State(q)),
            ImageRepr::Marker(m) if m == "_" => Ok(Image::Undefined),
            ImageRepr::Marker(m) => Err(format!("expected a state or \"_\", got {m:?}")),
        }
    }
}

impl From<Image> for ImageRepr {
    fn from(image: Image) -> Self {
        match image {
            Image::State(q) => ImageRepr::State(q),
            Image::Undefined => ImageRepr::Marker("_".into()),
        }
    }
}

/// The JSON automaton document: `states`, `alphabet`, `delta` (letter to
/// image list), `initial`, `finals`, all 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub states: usize,
    pub alphabet: Vec<String>,
    pub delta: BTreeMap<String, Vec<Image>>,
    pub initial: usize,
    pub finals: Vec<usize>,
}

impl AutomatonFile {
    /// Validates the document; any `"_"` entry makes the result an IDFA.
    pub fn to_automaton(&self) -> Result<Automaton> {
        let n = self.states;
        if n == 0 {
            return Err(Error::InvalidAutomaton("at least one state required".into()));
        }
        if self.delta.len() != self.alphabet.len() {
            return Err(Error::InvalidAutomaton("delta must have exactly one row per letter".into()));
        }
        let mut rows = Vec::with_capacity(self.alphabet.len());
        for letter in &self.alphabet {
            let row = self
                .delta
                .get(letter)
                .ok_or_else(|| Error::InvalidAutomaton(format!("no transitions for letter `{letter}`")))?;
            if row.len() != n {
                return Err(Error::InvalidAutomaton(format!("row `{letter}` has {} entries, expected {n}", row.len())));
            }
            let images = row
                .iter()
                .map(|image| match *image {
                    Image::State(q) => Some(q),
                    Image::Undefined => None,
                })
                .collect::<Vec<_>>();
            rows.push(PartialTransformation::new(&images)?);
        }
        let initial = StateId::new(self.initial)
            .map_err(|_| Error::InvalidAutomaton("initial state must be at least 1".into()))?;
        let finals = self
            .finals
            .iter()
            .map(|&f| StateId::new(f).map_err(|_| Error::InvalidAutomaton("final states must be at least 1".into())))
            .collect::<Result<Vec<_>>>()?;
        if rows.iter().all(PartialTransformation::is_total) {
            let delta = rows.into_iter().map(|t| t.to_total().expect("total")).collect();
            Ok(Automaton::Dfa(Dfa::new(self.alphabet.clone(), delta, initial, finals)?))
        } else {
            Ok(Automaton::Idfa(Idfa::new(self.alphabet.clone(), rows, initial, finals)?))
        }
    }
}

impl From<&Dfa> for AutomatonFile {
    fn from(d: &Dfa) -> Self {
        AutomatonFile {
            states: d.n(),
            alphabet: d.alphabet.clone(),
            delta: d
                .alphabet
                .iter()
                .zip(&d.delta)
                .map(|(a, t)| (a.clone(), t.to_vec().into_iter().map(Image::State).collect()))
                .collect(),
            initial: d.initial().get(),
            finals: d.finals().into_iter().map(StateId::get).collect(),
        }
    }
}

impl From<&Idfa> for AutomatonFile {
    fn from(i: &Idfa) -> Self {
        AutomatonFile {
            states: i.n(),
            alphabet: i.alphabet.clone(),
            delta: i
                .alphabet
                .iter()
                .zip(&i.delta)
                .map(|(a, t)| {
                    let row = t.to_vec().into_iter().map(|x| x.map_or(Image::Undefined, Image::State)).collect();
                    (a.clone(), row)
                })
                .collect(),
            initial: i.initial().get(),
            finals: i.finals().into_iter().map(StateId::get).collect(),
        }
    }
}
