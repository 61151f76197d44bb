//! Include/exclude branch and bound over a conflict model.
//!
//! Vertices are searched in model order: the model is built with vertices
//! already relabeled so that branching always takes the lowest candidate.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use crate::bitset::BitSet;

pub(crate) trait Model: Sync {
    fn n(&self) -> usize;

    /// Drops from `cand` every vertex that cannot join `chosen ∪ {v}`.
    /// `v` is already absent from both sets.
    fn restrict(&self, chosen: &BitSet, v: usize, cand: &mut BitSet);

    /// Upper bound on the number of vertices of `cand` that can still be
    /// added to `chosen`.
    fn bound(&self, chosen: &BitSet, cand: &BitSet) -> usize;
}

struct Shared {
    best: AtomicUsize,
    incumbent: Mutex<Vec<usize>>,
    stop: AtomicBool,
    timed_out: AtomicBool,
    deadline: Option<Instant>,
    /// Stop as soon as a set of this size is found.
    stop_at: Option<usize>,
    nodes: AtomicU64,
}

impl Shared {
    fn new(initial: Vec<usize>, deadline: Option<Instant>, stop_at: Option<usize>) -> Self {
        Shared {
            best: AtomicUsize::new(initial.len()),
            incumbent: Mutex::new(initial),
            stop: AtomicBool::new(false),
            timed_out: AtomicBool::new(false),
            deadline,
            stop_at,
            nodes: AtomicU64::new(0),
        }
    }

    fn record(&self, chosen: &BitSet) {
        let size = chosen.len();
        let mut inc = self.incumbent.lock().unwrap();
        if size > self.best.load(Ordering::SeqCst) {
            *inc = chosen.to_vec();
            self.best.store(size, Ordering::SeqCst);
            if self.stop_at.is_some_and(|t| size >= t) {
                self.stop.store(true, Ordering::SeqCst);
            }
        }
    }
}

struct Worker<'a, M: Model> {
    model: &'a M,
    shared: &'a Shared,
    nodes: u64,
}

impl<M: Model> Worker<'_, M> {
    fn stopped(&mut self) -> bool {
        if self.shared.stop.load(Ordering::Relaxed) {
            return true;
        }
        if self.nodes.is_multiple_of(256) {
            if let Some(deadline) = self.shared.deadline {
                if Instant::now() >= deadline {
                    self.shared.timed_out.store(true, Ordering::SeqCst);
                    self.shared.stop.store(true, Ordering::SeqCst);
                    return true;
                }
            }
        }
        false
    }

    fn expand(&mut self, chosen: &mut BitSet, mut cand: BitSet) {
        let size = chosen.len();
        loop {
            if self.stopped() || cand.is_empty() {
                return;
            }
            let best = self.shared.best.load(Ordering::Relaxed);
            if size + cand.len() <= best || size + self.model.bound(chosen, &cand) <= best {
                return;
            }
            let v = cand.first().unwrap();
            cand.remove(v);
            let mut next = cand.clone();
            self.model.restrict(chosen, v, &mut next);
            chosen.insert(v);
            self.nodes += 1;
            if size + 1 > self.shared.best.load(Ordering::Relaxed) {
                self.shared.record(chosen);
            }
            self.expand(chosen, next);
            chosen.remove(v);
        }
    }

    fn finish(self) {
        self.shared.nodes.fetch_add(self.nodes, Ordering::Relaxed);
    }
}

pub(crate) struct Outcome {
    /// Best set found, in model labels.
    pub best: Vec<usize>,
    pub nodes: u64,
    /// False when the deadline interrupted the search.
    pub complete: bool,
}

fn outcome(shared: Shared) -> Outcome {
    let complete = !shared.timed_out.load(Ordering::SeqCst);
    Outcome { best: shared.incumbent.into_inner().unwrap(), nodes: shared.nodes.into_inner(), complete }
}

/// Maximum conflict-free set. `initial` seeds the incumbent and must itself
/// be conflict-free.
pub(crate) fn maximize<M: Model>(model: &M, initial: Vec<usize>, deadline: Option<Instant>, threads: usize) -> Outcome {
    let n = model.n();
    let shared = Shared::new(initial, deadline, None);
    if threads <= 1 {
        let mut w = Worker { model, shared: &shared, nodes: 0 };
        w.expand(&mut BitSet::new(n), BitSet::full(n));
        w.finish();
    } else {
        // Subproblem i: take vertex i, exclude 0..i. Together they partition
        // the include/exclude tree below the root.
        let run = || {
            (0..n).into_par_iter().for_each(|i| {
                let mut w = Worker { model, shared: &shared, nodes: 1 };
                let mut chosen = BitSet::new(n);
                let mut cand = BitSet::full(n);
                for j in 0..=i {
                    cand.remove(j);
                }
                model.restrict(&chosen, i, &mut cand);
                chosen.insert(i);
                if 1 > shared.best.load(Ordering::Relaxed) {
                    shared.record(&chosen);
                }
                if !w.stopped() {
                    w.expand(&mut chosen, cand);
                }
                w.finish();
            })
        };
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    }
    outcome(shared)
}

/// Looks for a conflict-free superset of `chosen` drawn from `cand` with at
/// least `target` vertices. `Ok(None)` means no such set exists;
/// `Err(())` means the deadline hit first.
pub(crate) fn extend_to(
    model: &impl Model,
    chosen: &BitSet,
    cand: &BitSet,
    target: usize,
    deadline: Option<Instant>,
) -> (Result<Option<Vec<usize>>, ()>, u64) {
    let size = chosen.len();
    if size >= target {
        return (Ok(Some(chosen.to_vec())), 0);
    }
    let shared = Shared::new(chosen.to_vec(), deadline, Some(target));
    shared.best.store(target - 1, Ordering::SeqCst);
    let mut w = Worker { model, shared: &shared, nodes: 0 };
    let mut c = chosen.clone();
    w.expand(&mut c, cand.clone());
    w.finish();
    let found = shared.best.load(Ordering::SeqCst) >= target;
    let o = outcome(shared);
    if found {
        (Ok(Some(o.best)), o.nodes)
    } else if !o.complete {
        (Err(()), o.nodes)
    } else {
        (Ok(None), o.nodes)
    }
}

/// Lexicographically smallest optimum set with respect to the original
/// labels. `label[m]` is the original label of model vertex `m`.
pub(crate) fn lex_smallest(
    model: &impl Model,
    label: &[usize],
    size: usize,
    deadline: Option<Instant>,
) -> (Option<Vec<usize>>, u64) {
    let n = model.n();
    let mut by_label: Vec<usize> = (0..n).collect();
    by_label.sort_by_key(|&m| label[m]);
    let mut chosen = BitSet::new(n);
    let mut cand = BitSet::full(n);
    let mut nodes = 0;
    for _ in 0..size {
        let mut picked = false;
        for (rank, &m) in by_label.iter().enumerate() {
            if !cand.contains(m) {
                continue;
            }
            let mut next = cand.clone();
            for &earlier in &by_label[..=rank] {
                next.remove(earlier);
            }
            model.restrict(&chosen, m, &mut next);
            chosen.insert(m);
            let (res, k) = extend_to(model, &chosen, &next, size, deadline);
            nodes += k;
            match res {
                Ok(Some(_)) => {
                    cand = next;
                    picked = true;
                    break;
                }
                Ok(None) => {
                    chosen.remove(m);
                }
                Err(()) => return (None, nodes),
            }
        }
        if !picked {
            return (None, nodes);
        }
    }
    let mut out: Vec<usize> = chosen.iter().map(|m| label[m]).collect();
    out.sort_unstable();
    (Some(out), nodes)
}
