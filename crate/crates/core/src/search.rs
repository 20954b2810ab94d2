//! Exhaustive search for the largest aperiodic semigroup of full
//! transformations of `{1, ..., n}` generated by at most `k` maps.
//!
//! Transformations are encoded densely as `code = sum_i img_i * n^(n-1-i)`
//! (0-based images), so code order is lexicographic order. Candidate
//! generators are the aperiodic maps in code order; a generating set is a
//! strictly increasing list of candidate indices.
//!
//! The depth-first search adds one generator at a time and extends the
//! closure incrementally, rolling back as soon as a periodic element
//! appears. Pruning is lossless for the tie-broken optimum (largest closure,
//! then fewest generators, then lexicographically least set):
//!
//! * a candidate already in the closure is skipped,
//! * pairs whose joint closure is periodic are skipped,
//! * a candidate that fails at a node is not offered to its descendants,
//! * the least generator must be the least map of its conjugacy class.
//!
//! Work is split into tasks by the first one or two generators and run on a
//! rayon pool; results merge by the same total order, so the outcome is
//! independent of the number of workers.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{Transform, Transformation, MAX_ENUMERATION_DEGREE};

/// Largest degree the search accepts even with the budget overridden.
pub const MAX_SEARCH_DEGREE: usize = MAX_ENUMERATION_DEGREE;

// matrix of pairwise conflicts is only built below this many candidates
const CONFLICT_MATRIX_LIMIT: usize = 2000;

const CHECKPOINT_INTERVAL: Duration = Duration::from_secs(1);

#[derive(Clone, Debug, Default)]
pub struct SearchConfig {
    /// Worker threads; 0 picks the rayon default.
    pub workers: usize,
    pub override_budget: bool,
    pub checkpoint: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub k: usize,
    pub best_size: usize,
    pub best_generators: Vec<Transformation>,
    /// Generating sets whose closure was computed and found aperiodic.
    pub explored: u64,
    pub reference: Option<usize>,
}

impl SearchResult {
    pub fn matches_reference(&self) -> Option<bool> {
        self.reference.map(|r| r == self.best_size)
    }
}

/// Published reference values of the maximum.
pub fn reference_value(n: usize, k: usize) -> Option<usize> {
    match (n, k) {
        (_, 0) => None,
        (1, _) => Some(1),
        (2, 1) => Some(1),
        (2, 2) => Some(2),
        (2, _) => Some(3),
        (3, 1) => Some(2),
        (3, 2) => Some(7),
        (3, 3) => Some(9),
        (3, _) => Some(10),
        (4, 1) => Some(3),
        (4, 2) => Some(19),
        (4, 3) => Some(31),
        (4, 4) => Some(34),
        (5, 1) => Some(5),
        (5, 2) => Some(62),
        (6, 1) => Some(6),
        _ => None,
    }
}

/// Cells the search runs without an override.
pub fn within_budget(n: usize, k: usize) -> bool {
    match n {
        1..=3 => true,
        4 => k <= 4,
        5 => k <= 2,
        6 | 7 => k == 1,
        _ => false,
    }
}

/// The n-element table of all maps of degree `n` with aperiodicity flags.
struct Space {
    n: usize,
    pow: Vec<u32>,
    images: Vec<u8>,
    aperiodic: Vec<bool>,
    candidates: Vec<u32>,
    /// True for candidates that are least in their conjugacy class.
    least_in_class: Vec<bool>,
}

impl Space {
    fn new(n: usize) -> Space {
        let total = n.pow(n as u32);
        let pow: Vec<u32> = (0..n).map(|i| n.pow((n - 1 - i) as u32) as u32).collect();
        let mut images = vec![0u8; total * n];
        for code in 0..total {
            let mut c = code;
            for i in (0..n).rev() {
                images[code * n + i] = (c % n) as u8;
                c /= n;
            }
        }
        let mut space = Space { n, pow, images, aperiodic: vec![false; total], candidates: Vec::new(), least_in_class: Vec::new() };
        for code in 0..total {
            space.aperiodic[code] = space.to_transformation(code as u32).is_aperiodic();
        }
        space.candidates = (0..total as u32).filter(|&c| space.aperiodic[c as usize]).collect();
        space.least_in_class = space.class_leaders();
        space
    }

    fn img(&self, code: u32, i: usize) -> usize {
        self.images[code as usize * self.n + i] as usize
    }

    /// `x` then `y`.
    fn compose(&self, x: u32, y: u32) -> u32 {
        (0..self.n).map(|i| self.img(y, self.img(x, i)) as u32 * self.pow[i]).sum()
    }

    fn to_transformation(&self, code: u32) -> Transformation {
        let images: Vec<usize> = (0..self.n).map(|i| self.img(code, i)).collect();
        Transformation::from_indices(&images)
    }

    fn encode(&self, t: &Transformation) -> u32 {
        t.indices().zip(&self.pow).map(|(x, p)| x as u32 * p).sum()
    }

    fn class_leaders(&self) -> Vec<bool> {
        let perms = permutations(self.n);
        let mut seen = vec![false; self.aperiodic.len()];
        let mut leaders = vec![false; self.candidates.len()];
        for (idx, &code) in self.candidates.iter().enumerate() {
            if seen[code as usize] {
                continue;
            }
            leaders[idx] = true;
            let t = self.to_transformation(code);
            for p in &perms {
                seen[self.encode(&t.conjugate(p)) as usize] = true;
            }
        }
        leaders
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Incrementally maintained closure with rollback.
struct Closure<'a> {
    space: &'a Space,
    member: Vec<bool>,
    elements: Vec<u32>,
    gens: Vec<u32>,
    starts: Vec<usize>,
}

impl<'a> Closure<'a> {
    fn new(space: &'a Space) -> Self {
        Closure { space, member: vec![false; space.aperiodic.len()], elements: Vec::new(), gens: Vec::new(), starts: Vec::new() }
    }

    fn contains(&self, code: u32) -> bool {
        self.member[code as usize]
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    fn insert(&mut self, code: u32) -> bool {
        if self.member[code as usize] {
            return true;
        }
        if !self.space.aperiodic[code as usize] {
            return false;
        }
        self.member[code as usize] = true;
        self.elements.push(code);
        true
    }

    /// Adds generator `g`; on a periodic element the closure is left
    /// unchanged and `false` is returned.
    fn push(&mut self, g: u32) -> bool {
        let start = self.elements.len();
        self.starts.push(start);
        self.gens.push(g);
        let ok = self.extend(g, start);
        if !ok {
            self.pop();
        }
        ok
    }

    fn extend(&mut self, g: u32, start: usize) -> bool {
        if !self.insert(g) {
            return false;
        }
        for i in 0..start {
            let x = self.space.compose(self.elements[i], g);
            if !self.insert(x) {
                return false;
            }
        }
        let mut i = start;
        while i < self.elements.len() {
            let y = self.elements[i];
            for j in 0..self.gens.len() {
                let z = self.space.compose(y, self.gens[j]);
                if !self.insert(z) {
                    return false;
                }
            }
            i += 1;
        }
        true
    }

    fn pop(&mut self) {
        let start = self.starts.pop().expect("generator to remove");
        self.gens.pop();
        for &e in &self.elements[start..] {
            self.member[e as usize] = false;
        }
        self.elements.truncate(start);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Best {
    size: usize,
    gens: Vec<usize>,
}

impl Best {
    fn better_than(&self, other: &Best) -> bool {
        (other.size, self.gens.len(), &self.gens) < (self.size, other.gens.len(), &other.gens)
    }

    fn merge(slot: &mut Option<Best>, cand: Best) {
        match slot {
            Some(cur) if !cand.better_than(cur) => {}
            _ => *slot = Some(cand),
        }
    }
}

struct Problem {
    space: Space,
    k: usize,
    conflict: Option<Vec<bool>>,
}

impl Problem {
    fn conflicts(&self, a: usize, b: usize) -> bool {
        match &self.conflict {
            Some(m) => m[a * self.space.candidates.len() + b],
            None => false,
        }
    }

    fn conflict_free(&self, chosen: &[usize], c: usize) -> bool {
        chosen.iter().all(|&a| !self.conflicts(a, c))
    }
}

#[derive(Clone, Debug)]
enum Task {
    /// The single generator `root`.
    Root(usize),
    /// Every set whose two least generators are `roots[root]` and
    /// `viable[root][pos]`.
    Pair(usize, usize),
}

struct Worker<'a> {
    problem: &'a Problem,
    closure: Closure<'a>,
    chosen: Vec<usize>,
    best: Option<Best>,
    explored: u64,
}

impl<'a> Worker<'a> {
    fn new(problem: &'a Problem) -> Self {
        Worker { problem, closure: Closure::new(&problem.space), chosen: Vec::new(), best: None, explored: 0 }
    }

    fn push(&mut self, c: usize) -> bool {
        if self.closure.push(self.problem.space.candidates[c]) {
            self.chosen.push(c);
            true
        } else {
            false
        }
    }

    fn pop(&mut self) {
        self.closure.pop();
        self.chosen.pop();
    }

    fn record(&mut self) {
        self.explored += 1;
        Best::merge(&mut self.best, Best { size: self.closure.len(), gens: self.chosen.clone() });
    }

    /// Candidates that extend the current node aperiodically, from `offered`.
    fn viable(&mut self, offered: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for &c in offered {
            let code = self.problem.space.candidates[c];
            if self.closure.contains(code) || !self.problem.conflict_free(&self.chosen, c) {
                continue;
            }
            if self.push(c) {
                self.pop();
                out.push(c);
            }
        }
        out
    }

    /// Explores every extension of the current node by candidates from
    /// `offered`, all larger than the current generators.
    fn dfs(&mut self, offered: &[usize]) {
        if self.chosen.len() >= self.problem.k {
            return;
        }
        if self.chosen.len() + 1 == self.problem.k {
            // leaves: no need to remember which candidates failed
            for &c in offered {
                let code = self.problem.space.candidates[c];
                if !self.closure.contains(code) && self.problem.conflict_free(&self.chosen, c) && self.push(c) {
                    self.record();
                    self.pop();
                }
            }
            return;
        }
        let viable = self.viable(offered);
        for (pos, &c) in viable.iter().enumerate() {
            assert!(self.push(c));
            self.record();
            self.dfs(&viable[pos + 1..]);
            self.pop();
        }
    }
}

fn conflict_matrix(space: &Space) -> Vec<bool> {
    let m = space.candidates.len();
    let rows: Vec<Vec<bool>> = (0..m)
        .into_par_iter()
        .map(|a| {
            let mut closure = Closure::new(space);
            assert!(closure.push(space.candidates[a]));
            (0..m)
                .map(|b| {
                    if b == a {
                        return false;
                    }
                    let ok = closure.push(space.candidates[b]);
                    if ok {
                        closure.pop();
                    }
                    !ok
                })
                .collect()
        })
        .collect();
    rows.concat()
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct BestFile {
    size: usize,
    generators: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct CheckpointFile {
    n: usize,
    k: usize,
    completed: BTreeSet<usize>,
    best: Option<BestFile>,
    explored: u64,
}

struct Progress {
    completed: BTreeSet<usize>,
    best: Option<Best>,
    explored: u64,
    last_save: Instant,
}

fn load_checkpoint(path: &PathBuf, n: usize, k: usize, space: &Space) -> Result<Option<Progress>> {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::Checkpoint(e.to_string())),
    };
    let file: CheckpointFile = serde_json::from_str(&text).map_err(|e| Error::Checkpoint(e.to_string()))?;
    if file.n != n || file.k != k {
        return Err(Error::Checkpoint(format!("checkpoint is for n={}, k={}", file.n, file.k)));
    }
    let best = match file.best {
        None => None,
        Some(b) => {
            let mut gens = Vec::new();
            for g in &b.generators {
                let t: Transformation = g.parse().map_err(|e: Error| Error::Checkpoint(e.to_string()))?;
                if t.degree() != n {
                    return Err(Error::Checkpoint(format!("generator {g} has the wrong degree")));
                }
                let code = space.encode(&t);
                let idx = space
                    .candidates
                    .binary_search(&code)
                    .map_err(|_| Error::Checkpoint(format!("generator {g} is not aperiodic")))?;
                gens.push(idx);
            }
            Some(Best { size: b.size, gens })
        }
    };
    Ok(Some(Progress { completed: file.completed, best, explored: file.explored, last_save: Instant::now() }))
}

fn save_checkpoint(path: &PathBuf, n: usize, k: usize, space: &Space, p: &Progress) -> Result<()> {
    let file = CheckpointFile {
        n,
        k,
        completed: p.completed.clone(),
        best: p.best.as_ref().map(|b| BestFile {
            size: b.size,
            generators: b.gens.iter().map(|&g| space.to_transformation(space.candidates[g]).to_string()).collect(),
        }),
        explored: p.explored,
    };
    let text = serde_json::to_string(&file).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text).and_then(|_| std::fs::rename(&tmp, path)).map_err(|e| Error::Checkpoint(e.to_string()))
}

/// Largest aperiodic semigroup of degree `n` generated by at most `k` maps.
pub fn max_aperiodic(n: usize, k: usize, config: &SearchConfig) -> Result<SearchResult> {
    if n == 0 || n > MAX_SEARCH_DEGREE {
        return Err(Error::OutOfRange { what: "search degree", value: n });
    }
    if k == 0 {
        return Err(Error::OutOfRange { what: "generator count", value: k });
    }
    if !config.override_budget && !within_budget(n, k) {
        return Err(Error::BudgetExceeded { n, k });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Malformed(e.to_string()))?;
    pool.install(|| run(n, k, config))
}

fn run(n: usize, k: usize, config: &SearchConfig) -> Result<SearchResult> {
    let space = Space::new(n);
    let m = space.candidates.len();
    let conflict = (k >= 3 && m <= CONFLICT_MATRIX_LIMIT).then(|| conflict_matrix(&space));
    let problem = Problem { space, k, conflict };

    let roots: Vec<usize> = (0..m).filter(|&i| problem.space.least_in_class[i]).collect();
    let viable: Vec<Vec<usize>> = if k >= 2 {
        roots
            .par_iter()
            .map(|&r| {
                let mut w = Worker::new(&problem);
                assert!(w.push(r));
                let offered: Vec<usize> = (r + 1..m).collect();
                w.viable(&offered)
            })
            .collect()
    } else {
        vec![Vec::new(); roots.len()]
    };
    let mut tasks = Vec::new();
    for (ri, v) in viable.iter().enumerate() {
        tasks.push(Task::Root(ri));
        tasks.extend((0..v.len()).map(|p| Task::Pair(ri, p)));
    }

    let restored = match &config.checkpoint {
        Some(path) => load_checkpoint(path, n, k, &problem.space)?,
        None => None,
    };
    let progress = Mutex::new(restored.unwrap_or(Progress {
        completed: BTreeSet::new(),
        best: None,
        explored: 0,
        last_save: Instant::now(),
    }));
    let done: BTreeSet<usize> = progress.lock().expect("progress lock").completed.clone();

    let outcome: Result<()> = tasks
        .par_iter()
        .enumerate()
        .filter(|(id, _)| !done.contains(id))
        .try_for_each(|(id, task)| {
            let mut w = Worker::new(&problem);
            match *task {
                Task::Root(ri) => {
                    assert!(w.push(roots[ri]));
                    w.record();
                }
                Task::Pair(ri, pos) => {
                    assert!(w.push(roots[ri]));
                    assert!(w.push(viable[ri][pos]));
                    w.record();
                    w.dfs(&viable[ri][pos + 1..]);
                }
            }
            let mut p = progress.lock().expect("progress lock");
            p.completed.insert(id);
            p.explored += w.explored;
            if let Some(b) = w.best {
                Best::merge(&mut p.best, b);
            }
            if let Some(path) = &config.checkpoint {
                if p.last_save.elapsed() >= CHECKPOINT_INTERVAL {
                    save_checkpoint(path, n, k, &problem.space, &p)?;
                    p.last_save = Instant::now();
                }
            }
            Ok(())
        });
    outcome?;

    let p = progress.into_inner().expect("progress lock");
    if let Some(path) = &config.checkpoint {
        save_checkpoint(path, n, k, &problem.space, &p)?;
    }
    let best = p.best.expect("at least one generator is aperiodic");
    Ok(SearchResult {
        n,
        k,
        best_size: best.size,
        best_generators: best.gens.iter().map(|&g| problem.space.to_transformation(problem.space.candidates[g])).collect(),
        explored: p.explored,
        reference: reference_value(n, k),
    })
}

/// Conflicts among the aperiodic maps that are neither constant nor the
/// identity: an edge joins `a` and `b` when `ab` or `ba` has a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictGraph {
    pub n: usize,
    pub nodes: Vec<Transformation>,
    pub edges: Vec<(usize, usize)>,
}

/// Largest degree for which [`conflict_graph`] runs.
pub const MAX_CONFLICT_DEGREE: usize = 4;

/// Largest graph [`max_conflict_free`] accepts.
pub const MAX_INDEPENDENT_NODES: usize = 40;

pub fn conflicting(a: &Transformation, b: &Transformation) -> bool {
    !a.product(b).is_aperiodic() || !b.product(a).is_aperiodic()
}

pub fn conflict_graph(n: usize) -> Result<ConflictGraph> {
    if n == 0 || n > MAX_CONFLICT_DEGREE {
        return Err(Error::OutOfRange { what: "conflict graph degree", value: n });
    }
    let nodes: Vec<Transformation> = crate::transform::enumerate_aperiodic(n)?
        .into_iter()
        .filter(|t| !t.is_constant() && !t.is_identity())
        .collect();
    let mut edges = Vec::new();
    for (a, x) in nodes.iter().enumerate() {
        for (b, y) in nodes.iter().enumerate().skip(a + 1) {
            if conflicting(x, y) {
                edges.push((a, b));
            }
        }
    }
    Ok(ConflictGraph { n, nodes, edges })
}

impl ConflictGraph {
    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == node || b == node).count()
    }

    /// Size of a largest conflict-free node set plus the identity and the
    /// `n` constants: an upper bound on any aperiodic semigroup whose
    /// non-trivial elements are pairwise conflict-free.
    pub fn derived_bound(&self, independent: usize) -> usize {
        independent + 1 + self.n
    }
}

/// A largest set of pairwise non-adjacent nodes, lexicographically least
/// among those of maximum size.
pub fn max_conflict_free(graph: &ConflictGraph) -> Result<Vec<usize>> {
    let v = graph.nodes.len();
    if v > MAX_INDEPENDENT_NODES {
        return Err(Error::OutOfRange { what: "conflict graph nodes", value: v });
    }
    let mut adj = vec![0u64; v];
    for &(a, b) in &graph.edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }

    fn go(adj: &[u64], candidates: u64, current: &mut Vec<usize>, best: &mut Vec<usize>) {
        if candidates == 0 {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        }
        if current.len() + (candidates.count_ones() as usize) <= best.len() {
            return;
        }
        let i = candidates.trailing_zeros() as usize;
        let rest = candidates & !(1u64 << i);
        current.push(i);
        go(adj, rest & !adj[i], current, best);
        current.pop();
        go(adj, rest, current, best);
    }

    let all = (1u64 << v) - 1;
    let mut best = Vec::new();
    go(&adj, all, &mut Vec::new(), &mut best);
    Ok(best)
}
