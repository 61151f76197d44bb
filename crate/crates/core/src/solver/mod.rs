//! Exact and heuristic computation of the general position number, plus the
//! independence number needed to check the hardness reduction.

mod search;

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::geodesic::{verify_general_position, GeneralPositionSet, TripleSet};
use crate::graph::{all_pairs_distances, simplicial_vertices, Graph};
use search::Model;

/// Largest order accepted by the subset-enumeration oracles.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Above this order the pairwise conflict masks are not materialized and
/// conflicts are recomputed from distances instead.
const PAIR_MASK_LIMIT: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    /// Worker count for the parallel search; ignored in deterministic mode.
    pub threads: usize,
    /// Sequential search followed by a pass that replaces the witness with
    /// the lexicographically smallest optimum set.
    pub deterministic: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { time_limit: None, threads: 1, deterministic: false }
    }
}

impl SolveOptions {
    pub fn with_time_limit(limit: Duration) -> Self {
        SolveOptions { time_limit: Some(limit), ..Self::default() }
    }

    pub fn deterministic() -> Self {
        SolveOptions { deterministic: true, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveStatus {
    Exact,
    /// Budget exhausted; `best` is the size of the certified witness found.
    TimedOut {
        best: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult<W = GeneralPositionSet> {
    pub optimum: usize,
    pub witness: W,
    pub nodes_explored: u64,
    pub status: SolveStatus,
}

impl<W> SolveResult<W> {
    pub fn is_exact(&self) -> bool {
        self.status == SolveStatus::Exact
    }
}

/// Relabeling used by a search: `label[m]` is the original vertex searched
/// at position `m`, `pos` its inverse.
struct Order {
    label: Vec<usize>,
    pos: Vec<usize>,
}

impl Order {
    fn by_descending(keys: &[usize]) -> Self {
        let mut label: Vec<usize> = (0..keys.len()).collect();
        label.sort_by(|&a, &b| keys[b].cmp(&keys[a]).then(a.cmp(&b)));
        let mut pos = vec![0; keys.len()];
        for (m, &v) in label.iter().enumerate() {
            pos[v] = m;
        }
        Order { label, pos }
    }

    fn to_model(&self, vs: &[usize]) -> Vec<usize> {
        vs.iter().map(|&v| self.pos[v]).collect()
    }

    fn to_original(&self, ms: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = ms.iter().map(|&m| self.label[m]).collect();
        out.sort_unstable();
        out
    }
}

/// General position as a 3-uniform hypergraph independence problem.
struct GpModel {
    n: usize,
    words: usize,
    dist: Vec<u32>,
    /// `pair[(a * n + b) * words..]`: vertices completing a collinear triple
    /// with `a` and `b`.
    pair: Option<Vec<u64>>,
}

impl GpModel {
    fn new(t: &TripleSet, dist_of: impl Fn(usize, usize) -> u32, order: &Order) -> Self {
        let n = t.n();
        let words = n.div_ceil(64);
        let mut dist = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                dist[a * n + b] = dist_of(order.label[a], order.label[b]);
            }
        }
        let pair = (n <= PAIR_MASK_LIMIT).then(|| {
            let mut masks = vec![0u64; n * n * words];
            let mut set = |a: usize, b: usize, c: usize| {
                masks[(a * n + b) * words + c / 64] |= 1 << (c % 64);
            };
            for (x, y, z) in t.iter() {
                let (x, y, z) = (order.pos[x], order.pos[y], order.pos[z]);
                for (a, b, c) in [(x, y, z), (x, z, y), (y, z, x)] {
                    set(a, b, c);
                    set(b, a, c);
                }
            }
            masks
        });
        GpModel { n, words, dist, pair }
    }

    #[inline]
    fn d(&self, a: usize, b: usize) -> u32 {
        self.dist[a * self.n + b]
    }

    #[inline]
    fn collinear(&self, a: usize, b: usize, c: usize) -> bool {
        let (ab, bc, ac) = (self.d(a, b), self.d(b, c), self.d(a, c));
        ac == ab + bc || ab == ac + bc || bc == ab + ac
    }

    fn compatible(&self, set: &BitSet, v: usize) -> bool {
        let members = set.to_vec();
        match &self.pair {
            Some(p) => members.iter().all(|&a| {
                let m = &p[(a * self.n + v) * self.words..][..self.words];
                !BitSet::words_intersect(m, set)
            }),
            None => {
                members.iter().enumerate().all(|(i, &a)| members[i + 1..].iter().all(|&b| !self.collinear(a, b, v)))
            }
        }
    }

    /// Position at which `c` extends the geodesic chain `members`, if any.
    fn chain_slot(&self, members: &[usize], c: usize) -> Option<usize> {
        let first = members[0];
        let last = *members.last().unwrap();
        if members.len() == 1 {
            return Some(1);
        }
        let span = self.d(first, last);
        if self.d(c, last) == self.d(c, first) + span {
            return Some(0);
        }
        if self.d(first, c) == span + self.d(last, c) {
            return Some(members.len());
        }
        members.windows(2).position(|w| self.d(w[0], c) + self.d(c, w[1]) == self.d(w[0], w[1])).map(|i| i + 1)
    }
}

struct Chain {
    members: Vec<usize>,
    /// How many candidates the chain can still accept: 2 minus the chosen
    /// vertices on it.
    cap: usize,
    count: usize,
}

impl Model for GpModel {
    fn n(&self) -> usize {
        self.n
    }

    fn restrict(&self, chosen: &BitSet, v: usize, cand: &mut BitSet) {
        match &self.pair {
            Some(p) => {
                for s in chosen.iter() {
                    cand.difference_with_words(&p[(s * self.n + v) * self.words..][..self.words]);
                }
            }
            None => {
                let members = chosen.to_vec();
                for c in cand.to_vec() {
                    if members.iter().any(|&s| self.collinear(s, v, c)) {
                        cand.remove(c);
                    }
                }
            }
        }
    }

    /// Greedy partition of the candidates into sets that each lie on one
    /// geodesic. Any geodesic holds at most two vertices of a general
    /// position set, and at most one candidate once a chosen vertex is on it.
    fn bound(&self, chosen: &BitSet, cand: &BitSet) -> usize {
        let mut chains: Vec<Chain> = chosen.iter().map(|s| Chain { members: vec![s], cap: 1, count: 0 }).collect();
        for c in cand.iter() {
            let mut paid: Option<(usize, usize)> = None;
            let mut free = None;
            for (i, ch) in chains.iter().enumerate() {
                if let Some(slot) = self.chain_slot(&ch.members, c) {
                    if ch.count >= ch.cap {
                        free = Some((i, slot));
                        break;
                    }
                    if paid.is_none() {
                        paid = Some((i, slot));
                    }
                }
            }
            match free.or(paid) {
                Some((i, slot)) => {
                    chains[i].members.insert(slot, c);
                    chains[i].count += 1;
                }
                None => chains.push(Chain { members: vec![c], cap: 2, count: 1 }),
            }
        }
        chains.iter().map(|ch| ch.count.min(ch.cap)).sum()
    }
}

/// Independent sets of a graph given by adjacency bitsets.
pub(crate) struct MisModel {
    adj: Vec<BitSet>,
}

impl Model for MisModel {
    fn n(&self) -> usize {
        self.adj.len()
    }

    fn restrict(&self, _chosen: &BitSet, v: usize, cand: &mut BitSet) {
        cand.difference_with(&self.adj[v]);
    }

    /// Number of cliques in a greedy clique partition of the candidates.
    fn bound(&self, _chosen: &BitSet, cand: &BitSet) -> usize {
        let mut rest = cand.clone();
        let mut cliques = 0;
        while let Some(u) = rest.first() {
            rest.remove(u);
            let mut common = rest.clone();
            common.intersect_with(&self.adj[u]);
            while let Some(w) = common.first() {
                rest.remove(w);
                common.remove(w);
                common.intersect_with(&self.adj[w]);
            }
            cliques += 1;
        }
        cliques
    }
}

fn deadline_of(opts: &SolveOptions) -> Option<Instant> {
    opts.time_limit.map(|l| Instant::now() + l)
}

/// Exact gp(G) by branch and bound, seeded with the greedy and simplicial
/// general position sets.
pub fn gp_exact(g: &Graph, t: &TripleSet, opts: &SolveOptions) -> SolveResult {
    let deadline = deadline_of(opts);
    let n = g.n();
    let degrees: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let order = Order::by_descending(&degrees);
    let d = all_pairs_distances(g);
    let model = GpModel::new(t, |a, b| d.get(a, b), &order);

    let greedy = greedy_with(&model, &order, 0);
    let simplicial = simplicial_vertices(g);
    let seed = if simplicial.len() > greedy.len() { simplicial } else { greedy };

    let threads = if opts.deterministic { 1 } else { opts.threads.max(1) };
    let out = search::maximize(&model, order.to_model(&seed), deadline, threads);
    let mut nodes = out.nodes;
    let mut best = order.to_original(&out.best);
    let status = if out.complete { SolveStatus::Exact } else { SolveStatus::TimedOut { best: best.len() } };
    if opts.deterministic && out.complete {
        let (lex, k) = search::lex_smallest(&model, &order.label, best.len(), deadline);
        nodes += k;
        if let Some(lex) = lex {
            best = lex;
        }
    }
    let witness = verify_general_position(t, &best).expect("solver vertices are in range");
    debug_assert!(witness.certified);
    SolveResult { optimum: best.len(), witness, nodes_explored: nodes, status }
}

fn greedy_with(model: &GpModel, order: &Order, seed: u64) -> Vec<usize> {
    let n = model.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sequence: Vec<usize> = (0..n).collect();
    sequence.shuffle(&mut rng);

    let fill = |set: &mut BitSet| {
        for &v in &sequence {
            if !set.contains(v) && model.compatible(set, v) {
                set.insert(v);
            }
        }
    };
    let mut set = BitSet::new(n);
    fill(&mut set);

    // Single swaps: trade one member for an outsider whenever that lets the
    // refill step grow the set.
    'improve: loop {
        for &u in &sequence {
            if set.contains(u) {
                continue;
            }
            for w in set.to_vec() {
                let mut trial = set.clone();
                trial.remove(w);
                if !model.compatible(&trial, u) {
                    continue;
                }
                trial.insert(u);
                fill(&mut trial);
                if trial.len() > set.len() {
                    set = trial;
                    continue 'improve;
                }
            }
        }
        break;
    }
    order.to_original(&set.to_vec())
}

/// Randomized greedy general position set with single-swap local search.
/// Deterministic for a fixed seed.
pub fn gp_greedy(g: &Graph, t: &TripleSet, seed: u64) -> GeneralPositionSet {
    let identity = Order { label: (0..t.n()).collect(), pos: (0..t.n()).collect() };
    let d = all_pairs_distances(g);
    let model = GpModel::new(t, |a, b| d.get(a, b), &identity);
    let set = greedy_with(&model, &identity, seed);
    verify_general_position(t, &set).expect("in range")
}

/// Plain enumeration of all `2^n` subsets. Shares no code with
/// [`gp_exact`]; used as a test oracle.
pub fn gp_brute_force(g: &Graph, t: &TripleSet) -> Result<usize> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { what: "brute force", n, limit: BRUTE_FORCE_LIMIT });
    }
    // closing[h]: masks {a, b} with a, b < h forming a collinear triple with h.
    let mut closing: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (x, y, z) in t.iter() {
        let mut tri = [x, y, z];
        tri.sort_unstable();
        closing[tri[2]].push((1 << tri[0]) | (1 << tri[1]));
    }
    let mut ok = vec![false; 1 << n];
    ok[0] = true;
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let h = 31 - mask.leading_zeros() as usize;
        let rest = mask ^ (1 << h);
        let good = ok[rest as usize] && closing[h].iter().all(|&p| p & rest != p);
        ok[mask as usize] = good;
        if good {
            best = best.max(mask.count_ones() as usize);
        }
    }
    Ok(best)
}

pub(crate) fn max_independent_set(
    adj: &[BitSet],
    deadline: Option<Instant>,
    threads: usize,
) -> (Vec<usize>, u64, bool) {
    let degrees: Vec<usize> = adj.iter().map(BitSet::len).collect();
    let order = Order::by_descending(&degrees);
    let n = adj.len();
    let permuted = (0..n).map(|m| BitSet::from_iter(n, adj[order.label[m]].iter().map(|v| order.pos[v]))).collect();
    let model = MisModel { adj: permuted };
    let out = search::maximize(&model, Vec::new(), deadline, threads);
    (order.to_original(&out.best), out.nodes, out.complete)
}

/// Exact independence number with a witness set.
pub fn independence_number_exact(g: &Graph, opts: &SolveOptions) -> SolveResult<Vec<usize>> {
    let threads = if opts.deterministic { 1 } else { opts.threads.max(1) };
    let (set, nodes, complete) = max_independent_set(&g.adjacency_bitsets(), deadline_of(opts), threads);
    SolveResult {
        optimum: set.len(),
        status: if complete { SolveStatus::Exact } else { SolveStatus::TimedOut { best: set.len() } },
        witness: set,
        nodes_explored: nodes,
    }
}

/// Subset-enumeration oracle for the independence number.
pub fn independence_number_brute_force(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { what: "brute force", n, limit: BRUTE_FORCE_LIMIT });
    }
    let nb: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | (1 << w))).collect();
    Ok((0u32..(1 << n))
        .filter(|&mask| (0..n).all(|v| mask >> v & 1 == 0 || nb[v] & mask == 0))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0))
}

pub fn is_independent(g: &Graph, s: &[usize]) -> bool {
    s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| a != b && !g.has_edge(a, b)))
}
