//! Transformation semigroups generated by a list of (partial) transformations.
//!
//! Closure is breadth-first by word length: the frontier of elements first
//! reached by words of length `l` is multiplied on the right by every
//! generator, in generator order. Each element keeps the length-lexicographic
//! least word over generator indices that produces it.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::transform::{enumerate_aperiodic, Transform, Transformation};

/// Default ceiling on the number of elements a closure may reach.
pub const DEFAULT_ELEMENT_LIMIT: usize = 200_000;

#[derive(Clone, Debug)]
pub struct Semigroup<T> {
    degree: usize,
    generators: Vec<T>,
    elements: Vec<T>,
    index: HashMap<T, usize>,
    // witness of element i = witness(prefix[i]) followed by last[i]
    prefix: Vec<Option<usize>>,
    last: Vec<usize>,
}

impl<T: Transform> Semigroup<T> {
    /// Closure of `generators` with the default element ceiling.
    pub fn generate(generators: &[T]) -> Result<Self> {
        Self::generate_with_limit(generators, DEFAULT_ELEMENT_LIMIT)
    }

    pub fn generate_with_limit(generators: &[T], limit: usize) -> Result<Self> {
        let degree = check_generators(generators)?;
        let mut s = Semigroup {
            degree,
            generators: generators.to_vec(),
            elements: Vec::new(),
            index: HashMap::new(),
            prefix: Vec::new(),
            last: Vec::new(),
        };
        for (g, gen) in generators.iter().enumerate() {
            s.insert(gen.clone(), None, g, limit)?;
        }
        let mut frontier = 0..s.elements.len();
        while !frontier.is_empty() {
            let end = s.elements.len();
            for i in frontier {
                for g in 0..s.generators.len() {
                    let x = s.elements[i].product(&s.generators[g]);
                    s.insert(x, Some(i), g, limit)?;
                }
            }
            frontier = end..s.elements.len();
        }
        Ok(s)
    }

    fn insert(&mut self, x: T, prefix: Option<usize>, last: usize, limit: usize) -> Result<()> {
        if self.index.contains_key(&x) {
            return Ok(());
        }
        if self.elements.len() >= limit {
            return Err(Error::ClosureTooLarge { limit });
        }
        self.index.insert(x.clone(), self.elements.len());
        self.elements.push(x);
        self.prefix.push(prefix);
        self.last.push(last);
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn generators(&self) -> &[T] {
        &self.generators
    }

    /// Elements in order of discovery (length-lexicographic order of witnesses).
    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn element_set(&self) -> BTreeSet<T> {
        self.elements.iter().cloned().collect()
    }

    pub fn contains(&self, t: &T) -> bool {
        self.index.contains_key(t)
    }

    pub fn position(&self, t: &T) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Shortest, then lexicographically least, word of generator indices
    /// evaluating to element `i`.
    pub fn witness(&self, i: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = Some(i);
        while let Some(j) = cur {
            word.push(self.last[j]);
            cur = self.prefix[j];
        }
        word.reverse();
        word
    }

    /// Evaluates a word over generator indices.
    pub fn evaluate(&self, word: &[usize]) -> Option<T> {
        let (&first, rest) = word.split_first()?;
        let mut acc = self.generators.get(first)?.clone();
        for &g in rest {
            acc = acc.product(self.generators.get(g)?);
        }
        Some(acc)
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&T::identity(self.degree))
    }

    pub fn is_aperiodic(&self) -> bool {
        self.elements.iter().all(Transform::is_aperiodic)
    }

    /// First element (in discovery order) with a non-trivial cycle.
    pub fn first_periodic(&self) -> Option<&T> {
        self.elements.iter().find(|t| !t.is_aperiodic())
    }

    /// True iff every product of two elements is an element.
    pub fn is_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| self.contains(&a.product(b))))
    }
}

impl Semigroup<Transformation> {
    /// Checks that no aperiodic full transformation outside the semigroup can
    /// be added without the closure acquiring a non-trivial cycle.
    ///
    /// Returns `None` when the semigroup is locally maximal, otherwise the
    /// least transformation that extends it aperiodically.
    pub fn aperiodic_extension(&self) -> Result<Option<Transformation>> {
        if let Some(t) = self.first_periodic() {
            return Err(Error::NotAperiodic(t.to_string()));
        }
        for candidate in enumerate_aperiodic(self.degree)? {
            if self.contains(&candidate) {
                continue;
            }
            let mut gens = self.generators.clone();
            gens.push(candidate.clone());
            if closure_is_aperiodic(&gens)? {
                return Ok(Some(candidate));
            }
        }
        Ok(None)
    }

    pub fn is_locally_maximal_aperiodic(&self) -> Result<bool> {
        Ok(self.aperiodic_extension()?.is_none())
    }
}

fn check_generators<T: Transform>(generators: &[T]) -> Result<usize> {
    let first = generators.first().ok_or(Error::EmptyGenerators)?;
    let degree = first.degree();
    if let Some(bad) = generators.iter().find(|g| g.degree() != degree) {
        return Err(Error::SizeMismatch { left: degree, right: bad.degree() });
    }
    Ok(degree)
}

/// Closure test that stops at the first element with a non-trivial cycle.
pub fn closure_is_aperiodic<T: Transform>(generators: &[T]) -> Result<bool> {
    check_generators(generators)?;
    if generators.iter().any(|g| !g.is_aperiodic()) {
        return Ok(false);
    }
    let mut seen: std::collections::HashSet<T> = generators.iter().cloned().collect();
    let mut elements: Vec<T> = seen.iter().cloned().collect();
    let mut i = 0;
    while i < elements.len() {
        for g in generators {
            let x = elements[i].product(g);
            if !seen.contains(&x) {
                if !x.is_aperiodic() {
                    return Ok(false);
                }
                if elements.len() >= DEFAULT_ELEMENT_LIMIT {
                    return Err(Error::ClosureTooLarge { limit: DEFAULT_ELEMENT_LIMIT });
                }
                seen.insert(x.clone());
                elements.push(x);
            }
        }
        i += 1;
    }
    Ok(true)
}

/// True iff the distinct transformations in `generators` form an
/// irredundant generating set: dropping any one of them shrinks the closure.
///
/// Repeated entries count once, so `[a, a]` is judged as the set `{a}`.
pub fn is_minimal_generating_set<T: Transform>(generators: &[T]) -> Result<bool> {
    check_generators(generators)?;
    let distinct: Vec<T> = generators.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if distinct.len() == 1 {
        return Ok(true);
    }
    for skip in 0..distinct.len() {
        let rest: Vec<T> = distinct
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, g)| g.clone())
            .collect();
        // the closure of the rest shrinks exactly when it misses the removed generator
        if Semigroup::generate(&rest)?.contains(&distinct[skip]) {
            return Ok(false);
        }
    }
    Ok(true)
}
