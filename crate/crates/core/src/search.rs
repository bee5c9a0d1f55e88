//! Exhaustive backtracking search for distance magic labelings of small
//! graphs by a given group. Used as an independent oracle for the
//! constructions and the obstructions.
//!
//! Vertices are assigned in order of descending degree, then id. Once the
//! last neighbor of a vertex is assigned its weight is known: the first such
//! weight fixes the magic constant and every later one must match it. The
//! constant is shared by all components.
//!
//! With symmetry breaking on, only one of each pair `{f, -f}` is visited:
//! along the assignment order, the first label that is not its own inverse
//! must be the smaller of `{e, -e}` in element order.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::abelian::{Element, GroupSpec};
use crate::graphs::Graph;
use crate::labeling::{GraphSource, Labeling, LabelingError};

pub const DEFAULT_MAX_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("graph has {vertices} vertices but the group has order {order}")]
    OrderMismatch { vertices: usize, order: u64 },
    #[error("graph has {vertices} vertices, above the exhaustive-search cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
    pub symmetry_breaking: bool,
    pub max_vertices: usize,
    /// Worker threads; the branches at the first vertex are split among them.
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_nodes: None,
            timeout: None,
            symmetry_breaking: true,
            max_vertices: DEFAULT_MAX_VERTICES,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    ExhaustedNone,
    /// The budget ran out. Never reported as `ExhaustedNone`, even when no
    /// labeling was seen.
    Timeout,
}

/// A magic labeling as a label per vertex of the searched graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Solution {
    pub labels: Vec<Element>,
    pub magic: Element,
}

impl Solution {
    /// Reads the labels as a labeling of `base x C_k`, where the searched
    /// graph was that product.
    pub fn to_labeling(
        &self,
        base: GraphSource,
        cycle_len: usize,
        group: &GroupSpec,
    ) -> Result<Labeling, LabelingError> {
        Labeling::new(base, cycle_len, group.clone(), self.labels.clone())
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// One solution in existence mode; every solution visited in
    /// find-all mode (one per `{f, -f}` pair under symmetry breaking).
    pub solutions: Vec<Solution>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// Decides whether `h` has a magic labeling by `group`. With `find_all`
/// the whole tree is walked and every solution is collected.
pub fn exists_labeling(
    h: &Graph,
    group: &GroupSpec,
    config: &SearchConfig,
    find_all: bool,
) -> Result<SearchOutcome, SearchError> {
    let instance = Instance::new(h, group, config)?;
    let collected = Mutex::new(Vec::new());
    let run = instance.run(config, None, |labels, mu| {
        collected.lock().unwrap().push((labels.to_vec(), mu));
        if find_all {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    });
    let mut raw = collected.into_inner().unwrap();
    raw.sort_unstable();
    if !find_all {
        raw.truncate(1);
    }
    let solutions: Vec<Solution> = raw
        .into_iter()
        .map(|(labels, mu)| Solution {
            labels: labels.into_iter().map(|e| instance.elements[e].clone()).collect(),
            magic: instance.elements[mu].clone(),
        })
        .collect();
    let status = if run.timed_out && (find_all || solutions.is_empty()) {
        SearchStatus::Timeout
    } else if solutions.is_empty() {
        SearchStatus::ExhaustedNone
    } else {
        SearchStatus::Found
    };
    Ok(SearchOutcome {
        status,
        solutions,
        nodes_explored: run.nodes,
        elapsed: run.elapsed,
    })
}

/// The set of magic constants over all labelings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagicConstants {
    pub constants: BTreeSet<Element>,
    /// False when the budget ran out before the tree was exhausted.
    pub complete: bool,
    pub nodes_explored: u64,
}

pub fn all_magic_constants(
    h: &Graph,
    group: &GroupSpec,
    config: &SearchConfig,
) -> Result<MagicConstants, SearchError> {
    let instance = Instance::new(h, group, config)?;
    let seen: Vec<AtomicBool> = (0..instance.size()).map(|_| AtomicBool::new(false)).collect();
    let run = instance.run(config, Some(&seen), |_, mu| {
        seen[mu].store(true, Ordering::Relaxed);
        ControlFlow::Continue(())
    });
    let mut constants = BTreeSet::new();
    for mu in (0..instance.size()).filter(|&mu| seen[mu].load(Ordering::Relaxed)) {
        constants.insert(instance.elements[mu].clone());
        if config.symmetry_breaking {
            constants.insert(instance.elements[instance.neg[mu]].clone());
        }
    }
    Ok(MagicConstants {
        constants,
        complete: !run.timed_out,
        nodes_explored: run.nodes,
    })
}

const UNASSIGNED: usize = usize::MAX;

/// Greedy vertex order that closes neighborhoods as early as possible: the
/// next vertex is one lying in the neighborhood with the fewest unplaced
/// vertices, ties broken by larger degree and then smaller index.
fn neighborhood_order(h: &Graph) -> Vec<usize> {
    let n = h.n();
    let mut remaining: Vec<usize> = (0..n).map(|c| h.degree(c)).collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let tightest = h.neighbors(v).iter().map(|&c| remaining[c]).min().unwrap_or(usize::MAX);
                (tightest, std::cmp::Reverse(h.degree(v)), v)
            })
            .expect("an unplaced vertex remains");
        placed[v] = true;
        for &c in h.neighbors(v) {
            remaining[c] -= 1;
        }
        order.push(v);
    }
    order
}

struct Instance<'g> {
    graph: &'g Graph,
    elements: Vec<Element>,
    /// `add[x * size + y]` is the index of `x + y`.
    add: Vec<usize>,
    neg: Vec<usize>,
    /// Vertex assigned at each depth.
    order: Vec<usize>,
    /// Vertices whose neighborhood is complete once `order[d]` is assigned.
    completes: Vec<Vec<usize>>,
    /// A vertex whose neighborhood closes at depth `d`: once the constant is
    /// known it determines the label placed there.
    forcing: Vec<Option<usize>>,
    /// An isolated vertex has weight zero, which pins the constant.
    zero_pinned: bool,
}

struct RunStats {
    nodes: u64,
    timed_out: bool,
    elapsed: Duration,
}

struct Shared {
    start: Instant,
    nodes: AtomicU64,
    stop: AtomicBool,
    timed_out: AtomicBool,
}

impl<'g> Instance<'g> {
    fn new(h: &'g Graph, group: &GroupSpec, config: &SearchConfig) -> Result<Self, SearchError> {
        let n = h.n();
        if n as u64 != group.order() {
            return Err(SearchError::OrderMismatch {
                vertices: n,
                order: group.order(),
            });
        }
        if n > config.max_vertices {
            return Err(SearchError::TooLarge {
                vertices: n,
                cap: config.max_vertices,
            });
        }
        let elements: Vec<Element> = group.elements().collect();
        let index = |x: &Element| group.index_of(x).expect("sum stays in the group");
        let mut add = Vec::with_capacity(n * n);
        for x in &elements {
            for y in &elements {
                add.push(index(&group.add_unchecked(x, y)));
            }
        }
        let neg = elements.iter().map(|x| index(&group.neg_unchecked(x))).collect();

        let order = neighborhood_order(h);
        let mut depth_of = vec![0; n];
        for (d, &v) in order.iter().enumerate() {
            depth_of[v] = d;
        }
        let mut completes = vec![Vec::new(); n];
        let mut zero_pinned = false;
        for v in 0..n {
            match h.neighbors(v).iter().map(|&u| depth_of[u]).max() {
                Some(d) => completes[d].push(v),
                None => zero_pinned = true,
            }
        }
        let forcing = completes.iter().map(|c| c.first().copied()).collect();
        Ok(Instance {
            graph: h,
            elements,
            add,
            neg,
            order,
            completes,
            forcing,
            zero_pinned,
        })
    }

    fn size(&self) -> usize {
        self.elements.len()
    }

    /// Walks the tree, calling `visit` on every solution. Subtrees whose
    /// constant is already flagged in `known` are skipped.
    fn run<F>(&self, config: &SearchConfig, known: Option<&[AtomicBool]>, visit: F) -> RunStats
    where
        F: Fn(&[usize], usize) -> ControlFlow<()> + Sync,
    {
        let shared = Shared {
            start: Instant::now(),
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            timed_out: AtomicBool::new(false),
        };
        let jobs = config.jobs.max(1).min(self.size().max(1));
        if jobs == 1 {
            Worker::new(self, config, &shared, &visit, known, None).descend(0, false);
        } else {
            std::thread::scope(|scope| {
                for worker in 0..jobs {
                    let (shared, visit) = (&shared, &visit);
                    scope.spawn(move || {
                        Worker::new(self, config, shared, visit, known, Some((worker, jobs))).descend(0, false)
                    });
                }
            });
        }
        RunStats {
            nodes: shared.nodes.load(Ordering::Relaxed),
            timed_out: shared.timed_out.load(Ordering::Relaxed),
            elapsed: shared.start.elapsed(),
        }
    }
}

struct Worker<'a, 'g, F> {
    inst: &'a Instance<'g>,
    config: &'a SearchConfig,
    shared: &'a Shared,
    visit: &'a F,
    known: Option<&'a [AtomicBool]>,
    /// `(worker, jobs)`: this worker takes root branches `worker, worker + jobs, ...`.
    slice: Option<(usize, usize)>,
    assign: Vec<usize>,
    used: Vec<bool>,
    mu: Option<usize>,
}

impl<'a, 'g, F> Worker<'a, 'g, F>
where
    F: Fn(&[usize], usize) -> ControlFlow<()> + Sync,
{
    fn new(
        inst: &'a Instance<'g>,
        config: &'a SearchConfig,
        shared: &'a Shared,
        visit: &'a F,
        known: Option<&'a [AtomicBool]>,
        slice: Option<(usize, usize)>,
    ) -> Self {
        let n = inst.size();
        Worker {
            inst,
            config,
            shared,
            visit,
            known,
            slice,
            assign: vec![UNASSIGNED; n],
            used: vec![false; n],
            mu: inst.zero_pinned.then_some(0),
        }
    }

    fn over_budget(&self) -> bool {
        let nodes = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let out_of_nodes = self.config.max_nodes.is_some_and(|cap| nodes > cap);
        let out_of_time = nodes % 1024 == 0
            && self
                .config
                .timeout
                .is_some_and(|t| self.shared.start.elapsed() >= t);
        if out_of_nodes || out_of_time {
            self.shared.timed_out.store(true, Ordering::Relaxed);
            self.shared.stop.store(true, Ordering::Relaxed);
        }
        out_of_nodes || out_of_time
    }

    fn weight(&self, v: usize) -> usize {
        let size = self.inst.size();
        self.inst
            .graph
            .neighbors(v)
            .iter()
            .fold(0, |acc, &u| self.inst.add[acc * size + self.assign[u]])
    }

    /// Returns false when the search should unwind completely.
    fn descend(&mut self, depth: usize, broken: bool) -> bool {
        if self.shared.stop.load(Ordering::Relaxed) {
            return false;
        }
        if let (Some(mu), Some(known)) = (self.mu, self.known) {
            if known[mu].load(Ordering::Relaxed) {
                return true;
            }
        }
        if depth == self.inst.order.len() {
            let mu = self.mu.expect("some weight was checked");
            if (self.visit)(&self.assign, mu).is_break() {
                self.shared.stop.store(true, Ordering::Relaxed);
                return false;
            }
            return true;
        }
        let vertex = self.inst.order[depth];
        let size = self.inst.size();
        let candidates = match (self.inst.forcing[depth], self.mu) {
            (Some(c), Some(mu)) => {
                let rest = self
                    .inst
                    .graph
                    .neighbors(c)
                    .iter()
                    .filter(|&&u| u != vertex)
                    .fold(0, |acc, &u| self.inst.add[acc * size + self.assign[u]]);
                let e = self.inst.add[mu * size + self.inst.neg[rest]];
                e..e + 1
            }
            _ => 0..size,
        };
        for e in candidates {
            if self.used[e] {
                continue;
            }
            if depth == 0 {
                if let Some((worker, jobs)) = self.slice {
                    if e % jobs != worker {
                        continue;
                    }
                }
            }
            let inverse = self.inst.neg[e];
            if self.config.symmetry_breaking && !broken && inverse < e {
                continue;
            }
            if self.over_budget() {
                return false;
            }
            self.assign[vertex] = e;
            self.used[e] = true;
            let saved_mu = self.mu;
            let consistent = self.inst.completes[depth].iter().all(|&c| {
                let w = self.weight(c);
                match self.mu {
                    None => {
                        self.mu = Some(w);
                        true
                    }
                    Some(mu) => mu == w,
                }
            });
            let keep_going = !consistent || self.descend(depth + 1, broken || inverse != e);
            self.mu = saved_mu;
            self.used[e] = false;
            self.assign[vertex] = UNASSIGNED;
            if !keep_going {
                return false;
            }
        }
        true
    }
}
