//! Monotonicity of transformation sets under a common total order, and the
//! classification of languages into monotonic, partially monotonic, nearly
//! monotonic and star-free.

use serde::Serialize;

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::transform::{PartialTransformation, StateId, Transform};

/// A total order on states, listed from least to greatest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderWitness {
    pub order: Vec<StateId>,
}

impl OrderWitness {
    /// Natural order `1 < 2 < ... < n`.
    pub fn natural(n: usize) -> Self {
        OrderWitness { order: (0..n).map(StateId::from_index).collect() }
    }

    /// Builds a witness from 1-based labels, least first.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let order = labels.iter().map(|&l| StateId::new(l)).collect::<Result<Vec<_>>>()?;
        let witness = OrderWitness { order };
        witness.ranks(labels.len())?;
        Ok(witness)
    }

    /// Rank of every 0-based state; errors unless the order is a permutation
    /// of `1..=n`.
    fn ranks(&self, n: usize) -> Result<Vec<usize>> {
        if self.order.len() != n {
            return Err(Error::InvalidOrder(format!("{} states listed, expected {n}", self.order.len())));
        }
        let mut rank = vec![usize::MAX; n];
        for (r, q) in self.order.iter().enumerate() {
            if q.get() > n {
                return Err(Error::InvalidOrder(format!("state {q} out of range")));
            }
            if rank[q.index()] != usize::MAX {
                return Err(Error::InvalidOrder(format!("state {q} listed twice")));
            }
            rank[q.index()] = r;
        }
        Ok(rank)
    }

    /// Relabels the states of the witness through `map` (0-based to 0-based).
    fn mapped(&self, map: &[usize]) -> OrderWitness {
        OrderWitness { order: self.order.iter().map(|q| StateId::from_index(map[q.index()])).collect() }
    }
}

impl std::fmt::Display for OrderWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels: Vec<String> = self.order.iter().map(|q| q.to_string()).collect();
        f.write_str(&labels.join(" < "))
    }
}

/// True iff every transformation is order-preserving on its domain under
/// `order`, i.e. `p < q` implies `pt <= qt` for all `p, q` in `dom t`.
pub fn check_order<T: Transform>(ts: &[T], order: &OrderWitness) -> Result<bool> {
    let n = order.order.len();
    if let Some(t) = ts.iter().find(|t| t.degree() != n) {
        return Err(Error::InvalidOrder(format!("order on {n} states, transformation of degree {}", t.degree())));
    }
    let rank = order.ranks(n)?;
    for t in ts {
        for p in 0..n {
            for q in 0..n {
                if rank[p] < rank[q] {
                    if let (Some(pt), Some(qt)) = (t.image(p), t.image(q)) {
                        if rank[pt] > rank[qt] {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Searches for one total order on `{1, ..., n}` under which every
/// transformation in `ts` is monotonic.
///
/// The search places states from least to greatest and backtracks as soon
/// as a placed pair is forced out of order; its answer agrees with trying
/// all `n!` orders. Returns the first order found, trying smaller labels
/// first, so the natural order wins whenever it is valid.
pub fn find_monotonic_order<T: Transform>(n: usize, ts: &[T]) -> Option<OrderWitness> {
    if ts.iter().any(|t| t.degree() != n) {
        return None;
    }
    let mut search = OrderSearch { n, ts, rank: vec![None; n], placed: Vec::with_capacity(n) };
    search.run().then(|| OrderWitness { order: search.placed.iter().map(|&q| StateId::from_index(q)).collect() })
}

struct OrderSearch<'a, T> {
    n: usize,
    ts: &'a [T],
    rank: Vec<Option<usize>>,
    placed: Vec<usize>,
}

impl<T: Transform> OrderSearch<'_, T> {
    fn run(&mut self) -> bool {
        if self.placed.len() == self.n {
            return true;
        }
        for q in 0..self.n {
            if self.rank[q].is_some() {
                continue;
            }
            self.rank[q] = Some(self.placed.len());
            self.placed.push(q);
            if self.consistent() && self.run() {
                return true;
            }
            self.placed.pop();
            self.rank[q] = None;
        }
        false
    }

    // Every state not yet placed will rank above every placed one, so a pair
    // (p placed, q after p) is already violated when qt is placed and pt is
    // either unplaced or ranked above qt.
    fn consistent(&self) -> bool {
        for &p in &self.placed {
            let rp = self.rank[p].expect("placed");
            for q in 0..self.n {
                if q == p || self.rank[q].is_some_and(|rq| rq < rp) {
                    continue;
                }
                for t in self.ts {
                    let (Some(pt), Some(qt)) = (t.image(p), t.image(q)) else { continue };
                    if pt == qt {
                        continue;
                    }
                    if let Some(rqt) = self.rank[qt] {
                        match self.rank[pt] {
                            None => return false,
                            Some(rpt) if rpt > rqt => return false,
                            _ => {}
                        }
                    }
                }
            }
        }
        true
    }
}

/// Position of a language in the hierarchy, computed on its quotient DFA.
///
/// Witness orders are stated in the state numbering of the minimized DFA.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub monotonic: bool,
    pub monotonic_order: Option<OrderWitness>,
    pub partially_monotonic: bool,
    /// Order on the non-empty states.
    pub partial_order: Option<OrderWitness>,
    pub nearly_monotonic: bool,
    /// Letters deleted as constant before the partial-monotonicity test.
    pub constant_letters: Vec<String>,
    /// Order on the states that stay non-empty once constants are deleted.
    pub nearly_order: Option<OrderWitness>,
    pub star_free: bool,
}

impl Classification {
    /// Most specific class name.
    pub fn summary(&self) -> &'static str {
        if self.monotonic {
            "monotonic"
        } else if self.partially_monotonic {
            "partially monotonic; not monotonic"
        } else if self.nearly_monotonic {
            "nearly monotonic; not partially monotonic"
        } else if self.star_free {
            "star-free; not nearly monotonic"
        } else {
            "not star-free"
        }
    }

    /// monotonic => partially => nearly => star-free.
    pub fn chain_holds(&self) -> bool {
        (!self.monotonic || self.partially_monotonic)
            && (!self.partially_monotonic || self.nearly_monotonic)
            && (!self.nearly_monotonic || self.star_free)
    }
}

/// Restriction of the letters to the states from which a final state is
/// reachable, with those states relabeled in increasing order. Returns the
/// kept states and the restricted maps.
fn live_restriction(dfa: &Dfa) -> (Vec<usize>, Vec<PartialTransformation>) {
    let live = dfa.coreachable();
    let kept: Vec<usize> = (0..dfa.n()).filter(|&q| live[q]).collect();
    if kept.is_empty() {
        return (kept, Vec::new());
    }
    let mut relabel = vec![usize::MAX; dfa.n()];
    for (i, &q) in kept.iter().enumerate() {
        relabel[q] = i;
    }
    let maps = dfa
        .letters()
        .iter()
        .map(|t| {
            let images: Vec<Option<usize>> = kept
                .iter()
                .map(|&q| {
                    let r = t.apply(q);
                    live[r].then(|| relabel[r])
                })
                .collect();
            PartialTransformation::from_indices(&images)
        })
        .collect();
    (kept, maps)
}

fn partial_order_of(dfa: &Dfa) -> Option<OrderWitness> {
    let (kept, maps) = live_restriction(dfa);
    if kept.is_empty() {
        return Some(OrderWitness { order: Vec::new() });
    }
    find_monotonic_order(kept.len(), &maps).map(|w| w.mapped(&kept))
}

/// Classifies the language of `a` (minimizing first).
pub fn classify(a: &Dfa) -> Result<Classification> {
    let m = a.minimize();
    let monotonic_order = find_monotonic_order(m.n(), m.letters());
    // On a minimal DFA the only non-coreachable state is the empty state, so
    // this is the order search on the quotient IDFA.
    let partial_order = partial_order_of(&m);

    let constant: Vec<bool> = m.letters().iter().map(|t| t.is_constant()).collect();
    let constant_letters: Vec<String> =
        m.alphabet().iter().zip(&constant).filter(|(_, &c)| c).map(|(a, _)| a.clone()).collect();
    let nearly_order = match m.restrict_alphabet(|i| !constant[i]) {
        None => Some(OrderWitness::natural(m.n())),
        Some(reduced) => partial_order_of(&reduced),
    };
    let star_free = m.transition_semigroup()?.is_aperiodic();

    Ok(Classification {
        monotonic: monotonic_order.is_some(),
        monotonic_order,
        partially_monotonic: partial_order.is_some(),
        partial_order,
        nearly_monotonic: nearly_order.is_some(),
        constant_letters,
        nearly_order,
        star_free,
    })
}
