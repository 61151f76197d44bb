//! Lower and upper bounds on the general position number: isometric covers,
//! geodesic covers from a vertex, BFS leaf counts, k-packings and sets of
//! mutually distant edges.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::geodesic::{collinear_triples, verify_general_position, GeneralPositionSet, TripleSet};
use crate::graph::{
    all_pairs_distances, bfs_leaf_count_with, bfs_tree_paths, simplicial_vertices, DistanceMatrix, Graph, ParentRule,
};
use crate::solver::{gp_exact, gp_greedy, max_independent_set, SolveOptions, SolveResult};

/// Largest order for which `ip(v, G)` is solved exactly.
pub const IP_EXACT_LIMIT: usize = 30;
/// Largest order for the exact packing and distant-edge searches.
pub const PACKING_EXACT_LIMIT: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartKind {
    Path,
    Cycle,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverPart {
    pub vertices: Vec<usize>,
    pub kind: PartKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometricCover {
    pub parts: Vec<CoverPart>,
}

impl IsometricCover {
    pub fn from_paths(paths: Vec<Vec<usize>>) -> Self {
        IsometricCover {
            parts: paths.into_iter().map(|vertices| CoverPart { vertices, kind: PartKind::Path }).collect(),
        }
    }
}

/// Whether the subgraph induced by `h` is connected with the same distances
/// as in `g`.
pub fn is_isometric_subgraph(g: &Graph, d: &DistanceMatrix, h: &[usize]) -> Result<bool> {
    if h.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut h = h.to_vec();
    h.sort_unstable();
    h.dedup();
    let sub = match g.induced_subgraph(&h) {
        Ok(sub) => sub,
        Err(Error::Disconnected { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    let ds = all_pairs_distances(&sub);
    Ok((0..h.len()).all(|i| (i + 1..h.len()).all(|j| ds.get(i, j) == d.get(h[i], h[j]))))
}

fn check_part_shape(g: &Graph, part: &CoverPart) -> std::result::Result<(), String> {
    let vs = &part.vertices;
    let k = vs.len();
    let degree = |v: usize| vs.iter().filter(|&&w| g.has_edge(v, w)).count();
    match part.kind {
        PartKind::Path => {
            let edges: usize = vs.iter().map(|&v| degree(v)).sum::<usize>() / 2;
            if edges + 1 != k || vs.iter().any(|&v| degree(v) > 2) {
                return Err(format!("part {vs:?} is tagged path but does not induce a path"));
            }
        }
        PartKind::Cycle => {
            if k < 3 || vs.iter().any(|&v| degree(v) != 2) {
                return Err(format!("part {vs:?} is tagged cycle but does not induce a cycle"));
            }
        }
        PartKind::General => {}
    }
    Ok(())
}

/// Checks that every part is isometric, matches its tag and that the parts
/// cover all vertices.
pub fn validate_cover(g: &Graph, d: &DistanceMatrix, cover: &IsometricCover) -> Result<()> {
    let mut seen = vec![false; g.n()];
    for part in &cover.parts {
        if part.vertices.is_empty() {
            return Err(Error::InvalidCover("empty part".into()));
        }
        for &v in &part.vertices {
            g.check_vertex(v)?;
            seen[v] = true;
        }
        let mut sorted = part.vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCover(format!("part {:?} repeats a vertex", part.vertices)));
        }
        if !is_isometric_subgraph(g, d, &part.vertices)? {
            return Err(Error::InvalidCover(format!("part {:?} is not isometric", part.vertices)));
        }
        check_part_shape(g, part).map_err(Error::InvalidCover)?;
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Error::InvalidCover(format!("vertex {v} is not covered")));
    }
    Ok(())
}

fn part_gp(g: &Graph, part: &CoverPart) -> Result<usize> {
    let k = part.vertices.len();
    Ok(match part.kind {
        PartKind::Path => k.min(2),
        PartKind::Cycle if k == 4 => 2,
        PartKind::Cycle => 3,
        PartKind::General => {
            let sub = g.induced_subgraph(&part.vertices)?;
            let t = collinear_triples(&all_pairs_distances(&sub))?;
            gp_exact(&sub, &t, &SolveOptions::default()).optimum
        }
    })
}

/// Sum of the general position numbers of the parts of a validated
/// isometric cover.
pub fn cover_lemma_bound(g: &Graph, _t: &TripleSet, cover: &IsometricCover) -> Result<usize> {
    let d = all_pairs_distances(g);
    validate_cover(g, &d, cover)?;
    cover.parts.iter().map(|p| part_gp(g, p)).sum()
}

/// A family of geodesics starting at a common vertex that covers the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicCover {
    pub root: usize,
    pub paths: Vec<Vec<usize>>,
    pub mode: Mode,
}

impl GeodesicCover {
    pub fn count(&self) -> usize {
        self.paths.len()
    }
}

/// Vertices one step farther from `root` than `u`, in index order.
fn successors<'a>(g: &'a Graph, d: &'a DistanceMatrix, root: usize, u: usize) -> impl Iterator<Item = usize> + 'a {
    let du = d.get(root, u);
    g.neighbors(u).iter().copied().filter(move |&w| d.get(root, w) == du + 1)
}

fn maximal_geodesics(g: &Graph, d: &DistanceMatrix, root: usize) -> Vec<(u64, Vec<usize>)> {
    let mut found: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    let mut path = vec![root];
    fn walk(g: &Graph, d: &DistanceMatrix, root: usize, path: &mut Vec<usize>, found: &mut BTreeMap<u64, Vec<usize>>) {
        let u = *path.last().unwrap();
        let next: Vec<usize> = successors(g, d, root, u).collect();
        if next.is_empty() {
            let mask = path.iter().fold(0u64, |m, &v| m | 1 << v);
            found.entry(mask).or_insert_with(|| path.clone());
            return;
        }
        for w in next {
            path.push(w);
            walk(g, d, root, path, found);
            path.pop();
        }
    }
    walk(g, d, root, &mut path, &mut found);
    let all: Vec<(u64, Vec<usize>)> = found.into_iter().collect();
    // Drop paths whose vertex set is contained in another one.
    all.iter().filter(|(m, _)| !all.iter().any(|(o, _)| o != m && m & o == *m)).cloned().collect()
}

fn min_set_cover(sets: &[u64], universe: u64, upper: usize) -> Option<Vec<usize>> {
    struct Search<'a> {
        sets: &'a [u64],
        best: usize,
        best_pick: Option<Vec<usize>>,
        pick: Vec<usize>,
    }
    impl Search<'_> {
        fn go(&mut self, uncovered: u64) {
            if uncovered == 0 {
                if self.pick.len() < self.best {
                    self.best = self.pick.len();
                    self.best_pick = Some(self.pick.clone());
                }
                return;
            }
            let widest = self.sets.iter().map(|s| (s & uncovered).count_ones()).max().unwrap_or(0);
            if widest == 0 {
                return;
            }
            let need = uncovered.count_ones().div_ceil(widest) as usize;
            if self.pick.len() + need >= self.best {
                return;
            }
            // Branch on the uncovered vertex with the fewest covering sets.
            let mut rest = uncovered;
            let mut pivot = 0;
            let mut fewest = usize::MAX;
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                let c = self.sets.iter().filter(|s| *s >> v & 1 == 1).count();
                if c < fewest {
                    fewest = c;
                    pivot = v;
                }
            }
            let mut options: Vec<usize> = (0..self.sets.len()).filter(|&i| self.sets[i] >> pivot & 1 == 1).collect();
            options.sort_by_key(|&i| std::cmp::Reverse((self.sets[i] & uncovered).count_ones()));
            for i in options {
                self.pick.push(i);
                self.go(uncovered & !self.sets[i]);
                self.pick.pop();
            }
        }
    }
    let mut s = Search { sets, best: upper + 1, best_pick: None, pick: Vec::new() };
    s.go(universe);
    s.best_pick
}

fn greedy_geodesic_cover(g: &Graph, d: &DistanceMatrix, root: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut by_distance: Vec<usize> = (0..n).collect();
    by_distance.sort_by_key(|&v| (d.get(root, v), v));
    let mut covered = vec![false; n];
    covered[root] = true;
    let mut paths = Vec::new();
    if n == 1 {
        return vec![vec![root]];
    }
    while covered.iter().any(|&c| !c) {
        // Heaviest root-to-vertex path in the BFS DAG, weight = newly covered.
        let mut gain = vec![0usize; n];
        let mut parent = vec![usize::MAX; n];
        for &u in &by_distance {
            if u != root {
                let (p, best) = g
                    .neighbors(u)
                    .iter()
                    .filter(|&&w| d.get(root, w) + 1 == d.get(root, u))
                    .map(|&w| (w, gain[w]))
                    .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                    .unwrap();
                parent[u] = p;
                gain[u] = best + usize::from(!covered[u]);
            }
        }
        let end = (0..n).max_by(|&a, &b| gain[a].cmp(&gain[b]).then(b.cmp(&a))).unwrap();
        let mut path = vec![end];
        let mut cur = end;
        while cur != root {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        // Extend to a maximal geodesic so the path is as useful as possible.
        let mut tail = *path.last().unwrap();
        while let Some(w) = successors(g, d, root, tail).next() {
            path.push(w);
            tail = w;
        }
        for &v in &path {
            covered[v] = true;
        }
        paths.push(path);
    }
    prune_redundant(n, paths)
}

fn prune_redundant(n: usize, mut paths: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut i = paths.len();
    while i > 0 {
        i -= 1;
        let mut count = vec![0usize; n];
        for p in &paths {
            for &v in p {
                count[v] += 1;
            }
        }
        if paths.len() > 1 && paths[i].iter().all(|&v| count[v] > 1) {
            paths.remove(i);
        }
    }
    paths
}

/// A cover of `V(G)` by geodesics that all start at `v`. `Exact` gives
/// `ip(v, G)`; `Greedy` gives a feasible cover no larger than any BFS-tree
/// cover from `v`.
pub fn ip_from_vertex(g: &Graph, d: &DistanceMatrix, v: usize, mode: Mode) -> Result<GeodesicCover> {
    g.check_vertex(v)?;
    let mut best = greedy_geodesic_cover(g, d, v);
    for rule in [ParentRule::Canonical, ParentRule::LeafMinimizing] {
        let tree = bfs_tree_paths(g, v, rule)?;
        if tree.len() < best.len() {
            best = tree;
        }
    }
    if mode == Mode::Greedy {
        return Ok(GeodesicCover { root: v, paths: best, mode });
    }
    let n = g.n();
    if n > IP_EXACT_LIMIT {
        return Err(Error::TooLarge { what: "exact ip(v, G)", n, limit: IP_EXACT_LIMIT });
    }
    let candidates = maximal_geodesics(g, d, v);
    let masks: Vec<u64> = candidates.iter().map(|(m, _)| *m).collect();
    let universe = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let paths = match min_set_cover(&masks, universe, best.len()) {
        Some(pick) => pick.into_iter().map(|i| candidates[i].1.clone()).collect(),
        // Nothing beats the feasible cover already in hand.
        None => best,
    };
    Ok(GeodesicCover { root: v, paths, mode })
}

/// Checks `|R| <= ip(v, G) + 1` for every `v` in the general position set `R`.
pub fn vertex_path_bound_check(g: &Graph, r: &GeneralPositionSet) -> Result<bool> {
    let d = all_pairs_distances(g);
    for &v in &r.vertices {
        let ip = ip_from_vertex(g, &d, v, Mode::Exact)?.count();
        if r.vertices.len() > ip + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smaller of the canonical and leaf-minimizing BFS leaf counts at `v`.
pub fn best_bfs_leaf_count(g: &Graph, v: usize) -> Result<usize> {
    Ok(bfs_leaf_count_with(g, v, ParentRule::Canonical)?.min(bfs_leaf_count_with(g, v, ParentRule::LeafMinimizing)?))
}

/// Checks `|R| <= 1 + min { ℓ(v) : v in R }` for an optimum set `R`.
pub fn bfs_leaf_bound_check(g: &Graph, r: &GeneralPositionSet) -> bool {
    r.vertices
        .iter()
        .map(|&v| best_bfs_leaf_count(g, v).expect("witness vertices are in range"))
        .min()
        .is_none_or(|l| r.vertices.len() <= l + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packing {
    pub k: u32,
    pub vertices: Vec<usize>,
    pub mode: Mode,
}

impl Packing {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

pub fn is_k_packing(d: &DistanceMatrix, k: u32, s: &[usize]) -> bool {
    s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| a != b && d.get(a, b) > k))
}

/// Largest (exact) or maximal (greedy) set with pairwise distance `> k`.
pub fn k_packing_number(d: &DistanceMatrix, k: u32, mode: Mode) -> Result<Packing> {
    if k < 1 {
        return Err(Error::ParameterOutOfRange("k-packing needs k >= 1".into()));
    }
    let n = d.n();
    let vertices = match mode {
        Mode::Exact => {
            if n > PACKING_EXACT_LIMIT {
                return Err(Error::TooLarge { what: "exact k-packing", n, limit: PACKING_EXACT_LIMIT });
            }
            let power: Vec<BitSet> =
                (0..n).map(|u| BitSet::from_iter(n, (0..n).filter(|&v| v != u && d.get(u, v) <= k))).collect();
            max_independent_set(&power, None, 1).0
        }
        Mode::Greedy => {
            let mut s: Vec<usize> = Vec::new();
            for v in 0..n {
                if s.iter().all(|&u| d.get(u, v) > k) {
                    s.push(v);
                }
            }
            s
        }
    };
    Ok(Packing { k, vertices, mode })
}

/// Least `k` with `diam(G) <= 2k + 1`; every `k`-packing is then in general
/// position.
pub fn packing_parameter(diameter: u32) -> u32 {
    diameter.saturating_sub(1).div_ceil(2).max(1)
}

/// `α_k(G)` for the least admissible `k`, exact when small enough and
/// greedy otherwise.
pub fn packing_lower_bound(_g: &Graph, d: &DistanceMatrix) -> Packing {
    let k = packing_parameter(d.diameter());
    k_packing_number(d, k, Mode::Exact).or_else(|_| k_packing_number(d, k, Mode::Greedy)).expect("k >= 1")
}

/// When `diam(G) >= 2k + 2`: a `k`-packing `{x, y, z}` with `y` the midpoint
/// of an `x,z`-geodesic of length `2k + 2`, hence not in general position.
pub fn packing_failure_triple(g: &Graph, d: &DistanceMatrix, k: u32) -> Option<(usize, usize, usize)> {
    let n = g.n();
    let span = 2 * k + 2;
    let (x, z) = (0..n).flat_map(|x| (x + 1..n).map(move |z| (x, z))).find(|&(x, z)| d.get(x, z) == span)?;
    let y = (0..n).find(|&y| d.get(x, y) == k + 1 && d.get(y, z) == k + 1)?;
    Some((x, y, z))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistantEdges {
    pub diameter: u32,
    pub edges: Vec<(usize, usize)>,
    pub mode: Mode,
}

impl DistantEdges {
    pub fn bound(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn endpoints(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        v.sort_unstable();
        v
    }
}

/// A set `F` of edges pairwise at distance exactly `diam(G)`; the endpoints
/// form a general position set of size `2|F|`.
pub fn distant_edge_bound(g: &Graph, d: &DistanceMatrix, mode: Mode) -> Result<DistantEdges> {
    let diameter = d.diameter();
    if diameter < 2 {
        return Err(Error::DiameterTooSmall(diameter as usize));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let far = |a: (usize, usize), b: (usize, usize)| d.edge_distance(a, b).expect("graph edges") == diameter;
    let chosen = match mode {
        Mode::Exact => {
            let n = g.n();
            if n > PACKING_EXACT_LIMIT {
                return Err(Error::TooLarge { what: "exact distant-edge search", n, limit: PACKING_EXACT_LIMIT });
            }
            let m = edges.len();
            // Maximum clique of the "far" relation = maximum independent set
            // of its complement.
            let conflict: Vec<BitSet> =
                (0..m).map(|i| BitSet::from_iter(m, (0..m).filter(|&j| j != i && !far(edges[i], edges[j])))).collect();
            max_independent_set(&conflict, None, 1).0
        }
        Mode::Greedy => {
            let mut s: Vec<usize> = Vec::new();
            for i in 0..edges.len() {
                if s.iter().all(|&j| far(edges[i], edges[j])) {
                    s.push(i);
                }
            }
            s
        }
    };
    Ok(DistantEdges { diameter, edges: chosen.into_iter().map(|i| edges[i]).collect(), mode })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// Upper bound `n`, or a lower bound that needs no witness.
    Trivial,
    GeneralPosition {
        vertices: Vec<usize>,
    },
    Packing(Packing),
    DistantEdges(DistantEdges),
    Cover {
        cover: IsometricCover,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    /// `None` when the bound was skipped.
    pub value: Option<usize>,
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundEntry {
    fn ok(value: usize, certificate: Certificate) -> Self {
        BoundEntry { value: Some(value), certificate: Some(certificate), note: None }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        BoundEntry { value: None, certificate: None, note: Some(reason.into()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub lower: BTreeMap<String, BoundEntry>,
    pub upper: BTreeMap<String, BoundEntry>,
    pub exact: Option<usize>,
    pub solve: Option<SolveResult>,
    /// Bound checks run against the optimum witness.
    pub checks: BTreeMap<String, bool>,
}

impl BoundsReport {
    pub fn best_lower(&self) -> usize {
        self.lower.values().filter_map(|e| e.value).max().unwrap_or(0)
    }

    pub fn best_upper(&self) -> usize {
        self.upper.values().filter_map(|e| e.value).min().unwrap_or(usize::MAX)
    }

    pub fn is_consistent(&self) -> bool {
        let (lo, hi) = (self.best_lower(), self.best_upper());
        lo <= hi && self.exact.is_none_or(|e| lo <= e && e <= hi)
    }

    /// Re-checks every certificate against `g` from scratch.
    pub fn verify(&self, g: &Graph) -> std::result::Result<(), String> {
        let d = all_pairs_distances(g);
        let t = collinear_triples(&d).map_err(|e| e.to_string())?;
        let gp_ok = |vs: &[usize]| verify_general_position(&t, vs).map(|r| r.certified).unwrap_or(false);
        for (name, e) in &self.lower {
            let (Some(value), Some(cert)) = (e.value, &e.certificate) else { continue };
            let ok = match cert {
                Certificate::Trivial => value <= g.n().min(2),
                Certificate::GeneralPosition { vertices } => value == vertices.len() && gp_ok(vertices),
                Certificate::Packing(p) => {
                    value == p.size()
                        && is_k_packing(&d, p.k, &p.vertices)
                        && d.diameter() <= 2 * p.k + 1
                        && gp_ok(&p.vertices)
                }
                Certificate::DistantEdges(f) => {
                    value == f.bound()
                        && f.diameter == d.diameter()
                        && f.edges
                            .iter()
                            .enumerate()
                            .all(|(i, &a)| f.edges[i + 1..].iter().all(|&b| d.edge_distance(a, b) == Ok(f.diameter)))
                        && f.edges.iter().all(|&(a, b)| g.has_edge(a, b))
                        && gp_ok(&f.endpoints())
                }
                Certificate::Cover { .. } => false,
            };
            if !ok {
                return Err(format!("lower bound '{name}' does not re-verify"));
            }
        }
        for (name, e) in &self.upper {
            let (Some(value), Some(cert)) = (e.value, &e.certificate) else { continue };
            let ok = match cert {
                Certificate::Trivial => value == g.n(),
                Certificate::Cover { cover } => cover_lemma_bound(g, &t, cover).is_ok_and(|b| b == value),
                _ => false,
            };
            if !ok {
                return Err(format!("upper bound '{name}' does not re-verify"));
            }
        }
        if let Some(s) = &self.solve {
            let w = &s.witness.vertices;
            if s.optimum != w.len() || !gp_ok(w) {
                return Err("solver witness does not re-verify".into());
            }
            if self.exact.is_some() && (!s.is_exact() || self.exact != Some(s.optimum)) {
                return Err("exact value disagrees with the solver result".into());
            }
        }
        if !self.is_consistent() {
            return Err("lower bounds exceed upper bounds".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct BoundsOptions {
    /// Budget for the exact solve.
    pub budget: Option<Duration>,
    pub covers: Vec<(String, IsometricCover)>,
    pub threads: usize,
    pub deterministic: bool,
}

/// Runs every bound and, within the budget, the exact solver.
pub fn bounds_report(g: &Graph, opts: &BoundsOptions) -> BoundsReport {
    let d = all_pairs_distances(g);
    let n = g.n();
    let mut lower = BTreeMap::new();
    let mut upper = BTreeMap::new();
    let t = match collinear_triples(&d) {
        Ok(t) => Some(t),
        Err(e) => {
            lower.insert("greedy".into(), BoundEntry::skipped(e.to_string()));
            None
        }
    };

    let pair: Vec<usize> = if n == 1 { vec![0] } else { vec![0, g.neighbors(0)[0]] };
    lower.insert("trivial".into(), BoundEntry::ok(pair.len(), Certificate::GeneralPosition { vertices: pair }));
    let simplicial = simplicial_vertices(g);
    lower.insert(
        "simplicial".into(),
        BoundEntry::ok(simplicial.len(), Certificate::GeneralPosition { vertices: simplicial }),
    );
    if let Some(t) = &t {
        let best = (0..8).map(|seed| gp_greedy(g, t, seed)).max_by_key(|s| s.vertices.len()).unwrap();
        lower.insert(
            "greedy".into(),
            BoundEntry::ok(best.vertices.len(), Certificate::GeneralPosition { vertices: best.vertices }),
        );
    }
    let packing = packing_lower_bound(g, &d);
    let mut entry = BoundEntry::ok(packing.size(), Certificate::Packing(packing.clone()));
    if packing.mode == Mode::Greedy {
        entry.note = Some("exact search skipped: graph too large; greedy packing".into());
    }
    lower.insert("packing".into(), entry);
    let distant = distant_edge_bound(g, &d, Mode::Exact).or_else(|e| match e {
        Error::TooLarge { .. } => distant_edge_bound(g, &d, Mode::Greedy),
        e => Err(e),
    });
    lower.insert(
        "distant_edges".into(),
        match distant {
            Ok(f) => BoundEntry::ok(f.bound(), Certificate::DistantEdges(f)),
            Err(e) => BoundEntry::skipped(e.to_string()),
        },
    );

    upper.insert("trivial".into(), BoundEntry::ok(n, Certificate::Trivial));
    let best_cover = (0..n)
        .map(|v| ip_from_vertex(g, &d, v, Mode::Greedy).expect("v in range"))
        .min_by_key(GeodesicCover::count)
        .unwrap();
    upper.insert(
        "geodesic_cover".into(),
        BoundEntry::ok(
            2 * best_cover.count(),
            Certificate::Cover { cover: IsometricCover::from_paths(best_cover.paths) },
        ),
    );
    for (name, cover) in &opts.covers {
        let entry = match t.as_ref().map(|t| cover_lemma_bound(g, t, cover)) {
            Some(Ok(b)) => BoundEntry::ok(b, Certificate::Cover { cover: cover.clone() }),
            Some(Err(e)) => BoundEntry::skipped(e.to_string()),
            None => BoundEntry::skipped("collinear triples not materialized"),
        };
        upper.insert(format!("cover:{name}"), entry);
    }

    let mut report = BoundsReport { lower, upper, exact: None, solve: None, checks: BTreeMap::new() };
    let Some(t) = t else { return report };
    let solve = gp_exact(
        g,
        &t,
        &SolveOptions { time_limit: opts.budget, threads: opts.threads.max(1), deterministic: opts.deterministic },
    );
    if solve.is_exact() {
        report.exact = Some(solve.optimum);
        report.checks.insert("bfs_leaf_bound".into(), bfs_leaf_bound_check(g, &solve.witness));
        if n <= IP_EXACT_LIMIT {
            if let Ok(ok) = vertex_path_bound_check(g, &solve.witness) {
                report.checks.insert("vertex_path_bound".into(), ok);
            }
        }
    }
    report.solve = Some(solve);
    report.checks.insert("sandwich".into(), report.is_consistent());
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use crate::graph::build_graph;

    fn cycle(n: usize) -> Graph {
        make_cycle(n).unwrap().graph
    }

    /// All geodesics starting at `v`, enumerated from adjacency and distances.
    fn geodesics_from(g: &Graph, d: &DistanceMatrix, v: usize) -> Vec<u64> {
        let mut out = Vec::new();
        let mut stack = vec![vec![v]];
        while let Some(p) = stack.pop() {
            out.push(p.iter().fold(0u64, |m, &x| m | 1 << x));
            let last = *p.last().unwrap();
            for &w in g.neighbors(last) {
                if d.get(v, w) as usize == p.len() {
                    let mut q = p.clone();
                    q.push(w);
                    stack.push(q);
                }
            }
        }
        out
    }

    /// Smallest number of sets whose union is everything, by trying all
    /// combinations in increasing size.
    fn brute_cover(sets: &[u64], n: usize) -> usize {
        let all = (1u64 << n) - 1;
        for k in 1..=n {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                if idx.iter().fold(0, |m, &i| m | sets[i]) == all {
                    return k;
                }
                let mut i = k;
                while i > 0 && idx[i - 1] == sets.len() - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn isometric_examples() {
        let p = make_petersen();
        let d = all_pairs_distances(&p.graph);
        assert_eq!(is_isometric_subgraph(&p.graph, &d, &[0, 1, 2, 3, 4]), Ok(true));
        assert_eq!(is_isometric_subgraph(&p.graph, &d, &[0, 1, 2]), Ok(true));
        assert_eq!(is_isometric_subgraph(&p.graph, &d, &[]), Err(Error::EmptySet));

        // C_6 with the chord 0-3.
        let mut e: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        e.push((0, 3));
        let g = build_graph(6, &e).unwrap();
        let d = all_pairs_distances(&g);
        assert_eq!(is_isometric_subgraph(&g, &d, &[0, 1, 2, 3]), Ok(true));
        assert_eq!(is_isometric_subgraph(&g, &d, &[4, 5, 0, 1, 2]), Ok(false));
        assert_eq!(is_isometric_subgraph(&g, &d, &[0, 2]), Ok(false));
    }

    #[test]
    fn cover_bounds() {
        let p = make_petersen();
        let t = collinear_triples(&all_pairs_distances(&p.graph)).unwrap();
        assert_eq!(cover_lemma_bound(&p.graph, &t, p.cover.as_ref().unwrap()), Ok(6));

        let p7 = make_path(7).unwrap().graph;
        let t7 = collinear_triples(&all_pairs_distances(&p7)).unwrap();
        let whole = IsometricCover::from_paths(vec![(0..7).collect()]);
        assert_eq!(cover_lemma_bound(&p7, &t7, &whole), Ok(2));
        let split = IsometricCover::from_paths(vec![vec![0, 1, 2], vec![3, 4, 5, 6]]);
        assert_eq!(cover_lemma_bound(&p7, &t7, &split), Ok(4));
        let missing = IsometricCover::from_paths(vec![vec![0, 1, 2]]);
        assert!(matches!(cover_lemma_bound(&p7, &t7, &missing), Err(Error::InvalidCover(_))));

        let c4 = cycle(4);
        let t4 = collinear_triples(&all_pairs_distances(&c4)).unwrap();
        let cov = IsometricCover { parts: vec![CoverPart { vertices: vec![0, 1, 2, 3], kind: PartKind::Cycle }] };
        assert_eq!(cover_lemma_bound(&c4, &t4, &cov), Ok(2));
        let general = IsometricCover { parts: vec![CoverPart { vertices: vec![0, 1, 2, 3], kind: PartKind::General }] };
        assert_eq!(cover_lemma_bound(&c4, &t4, &general), Ok(2));
        let mislabeled = IsometricCover::from_paths(vec![vec![0, 1, 2, 3]]);
        assert!(cover_lemma_bound(&c4, &t4, &mislabeled).is_err());
    }

    #[test]
    fn ip_examples() {
        let c6 = cycle(6);
        let d = all_pairs_distances(&c6);
        for v in 0..6 {
            let sets = geodesics_from(&c6, &d, v);
            let oracle = brute_cover(&sets, 6);
            assert_eq!(oracle, 2);
            assert_eq!(ip_from_vertex(&c6, &d, v, Mode::Exact).unwrap().count(), oracle);
        }
        let star = make_star(5).unwrap().graph;
        let d = all_pairs_distances(&star);
        assert_eq!(ip_from_vertex(&star, &d, 0, Mode::Exact).unwrap().count(), 5);
        for seed in 0..10 {
            let b = make_random_block_graph(seed, 5, 4).unwrap();
            let d = all_pairs_distances(&b.graph);
            let s = simplicial_vertices(&b.graph);
            for &v in &s {
                assert_eq!(ip_from_vertex(&b.graph, &d, v, Mode::Exact).unwrap().count(), s.len() - 1);
            }
        }
        let big = make_path(31).unwrap().graph;
        let d = all_pairs_distances(&big);
        assert!(matches!(ip_from_vertex(&big, &d, 0, Mode::Exact), Err(Error::TooLarge { .. })));
        assert_eq!(ip_from_vertex(&big, &d, 0, Mode::Greedy).unwrap().count(), 1);
    }

    #[test]
    fn ip_exact_matches_subset_oracle_on_random_graphs() {
        for seed in 0..40 {
            let g = random_connected_graph(seed, 8, 0.25).unwrap();
            let d = all_pairs_distances(&g);
            for v in 0..g.n() {
                let sets = geodesics_from(&g, &d, v);
                let exact = ip_from_vertex(&g, &d, v, Mode::Exact).unwrap();
                assert_eq!(exact.count(), brute_cover(&sets, g.n()));
                let greedy = ip_from_vertex(&g, &d, v, Mode::Greedy).unwrap();
                assert!(exact.count() <= greedy.count());
                assert!(greedy.count() <= best_bfs_leaf_count(&g, v).unwrap());
                for p in exact.paths.iter().chain(&greedy.paths) {
                    assert_eq!(p[0], v);
                    assert!(p.iter().enumerate().all(|(i, &x)| d.get(v, x) as usize == i));
                }
            }
        }
    }

    #[test]
    fn vertex_path_checks() {
        let c5 = cycle(5);
        let t = collinear_triples(&all_pairs_distances(&c5)).unwrap();
        let r = verify_general_position(&t, &[0, 1, 3]).unwrap();
        assert!(r.certified);
        assert_eq!(vertex_path_bound_check(&c5, &r), Ok(true));
        let d = all_pairs_distances(&c5);
        assert_eq!(ip_from_vertex(&c5, &d, 0, Mode::Exact).unwrap().count(), 2);

        let p = make_petersen();
        let t = collinear_triples(&all_pairs_distances(&p.graph)).unwrap();
        let best = gp_exact(&p.graph, &t, &SolveOptions::default());
        assert_eq!(vertex_path_bound_check(&p.graph, &best.witness), Ok(true));
    }

    #[test]
    fn bfs_leaf_checks() {
        for n in 3..12 {
            let c = make_cycle(n).unwrap();
            let t = collinear_triples(&all_pairs_distances(&c.graph)).unwrap();
            let r = gp_exact(&c.graph, &t, &SolveOptions::default());
            assert!(bfs_leaf_bound_check(&c.graph, &r.witness));
        }
        let gn = make_gn_counterexample(4).unwrap();
        let t = collinear_triples(&all_pairs_distances(&gn.graph)).unwrap();
        let r = gp_exact(&gn.graph, &t, &SolveOptions::default());
        assert!(r.optimum >= 8);
        assert_eq!(best_bfs_leaf_count(&gn.graph, 12), Ok(4));
        assert!(!r.witness.vertices.contains(&12));
        assert!(bfs_leaf_bound_check(&gn.graph, &r.witness));

        // Spider K_{1,3} with arms of length 2: from a leaf, ℓ = |L| - 1.
        let spider = build_graph(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        assert_eq!(best_bfs_leaf_count(&spider, 2), Ok(2));
        let t = collinear_triples(&all_pairs_distances(&spider)).unwrap();
        let leaves = verify_general_position(&t, &[2, 4, 6]).unwrap();
        assert!(leaves.certified);
        assert!(bfs_leaf_bound_check(&spider, &leaves));
    }

    fn brute_packing(d: &DistanceMatrix, k: u32) -> usize {
        let n = d.n();
        (0u32..1 << n)
            .filter(|&m| {
                let s: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
                is_k_packing(d, k, &s)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn packing_examples() {
        let c6 = all_pairs_distances(&cycle(6));
        assert_eq!(brute_packing(&c6, 2), 2);
        assert_eq!(k_packing_number(&c6, 2, Mode::Exact).unwrap().size(), 2);
        let k5 = all_pairs_distances(&make_complete(5).unwrap().graph);
        for k in 1..4 {
            assert_eq!(k_packing_number(&k5, k, Mode::Exact).unwrap().size(), 1);
        }
        let p9 = make_path(9).unwrap().graph;
        let alpha = crate::solver::independence_number_exact(&p9, &SolveOptions::default()).optimum;
        assert_eq!(k_packing_number(&all_pairs_distances(&p9), 1, Mode::Exact).unwrap().size(), alpha);
        assert!(k_packing_number(&c6, 0, Mode::Exact).is_err());

        let c5 = cycle(5);
        let d5 = all_pairs_distances(&c5);
        let pk = packing_lower_bound(&c5, &d5);
        assert_eq!((pk.k, pk.size()), (1, 2));

        let p10 = make_path(10).unwrap().graph;
        let d10 = all_pairs_distances(&p10);
        assert_eq!(brute_packing(&d10, 4), 2);
        let pk = packing_lower_bound(&p10, &d10);
        assert_eq!((pk.k, pk.size()), (4, 2));
        assert_eq!(packing_parameter(1), 1);
        assert_eq!(packing_parameter(3), 1);
        assert_eq!(packing_parameter(4), 2);
    }

    #[test]
    fn packing_failure_triple_on_long_path() {
        let p = make_path(8).unwrap().graph;
        let d = all_pairs_distances(&p);
        assert_eq!(packing_failure_triple(&p, &d, 2), Some((0, 3, 6)));
        assert_eq!(packing_failure_triple(&p, &d, 3), None);
    }

    #[test]
    fn distant_edges() {
        let p = make_petersen();
        let d = all_pairs_distances(&p.graph);
        let f = distant_edge_bound(&p.graph, &d, Mode::Exact).unwrap();
        assert_eq!(f.edges.len(), 3);
        assert_eq!(f.bound(), 6);
        for n in 3..10 {
            let g = make_path(n).unwrap().graph;
            let d = all_pairs_distances(&g);
            assert_eq!(distant_edge_bound(&g, &d, Mode::Exact).unwrap().bound(), 2);
        }
        for (n, s) in [(2, 1), (3, 1), (4, 2), (5, 1)] {
            let sp = make_spider_triangles(n, s).unwrap();
            let d = all_pairs_distances(&sp.graph);
            let f = distant_edge_bound(&sp.graph, &d, Mode::Exact).unwrap();
            assert_eq!(f.bound(), 2 * n);
            let g = distant_edge_bound(&sp.graph, &d, Mode::Greedy).unwrap();
            assert!(g.bound() <= f.bound());
        }
        let k4 = make_complete(4).unwrap().graph;
        assert_eq!(distant_edge_bound(&k4, &all_pairs_distances(&k4), Mode::Exact), Err(Error::DiameterTooSmall(1)));
    }

    #[test]
    fn reports() {
        let p = make_petersen();
        let r = bounds_report(
            &p.graph,
            &BoundsOptions { covers: vec![("cycles".into(), p.cover.clone().unwrap())], ..Default::default() },
        );
        assert_eq!(r.lower["distant_edges"].value, Some(6));
        assert_eq!(r.upper["cover:cycles"].value, Some(6));
        assert_eq!(r.exact, Some(6));
        assert_eq!(r.verify(&p.graph), Ok(()));
        assert!(r.checks.values().all(|&c| c));

        let tree = random_tree(5, 12).unwrap();
        let leaves = (0..12).filter(|&v| tree.degree(v) == 1).count();
        let r = bounds_report(&tree, &BoundsOptions::default());
        assert_eq!(r.lower["simplicial"].value, Some(leaves));
        assert_eq!(r.exact, Some(leaves));
        assert_eq!(r.verify(&tree), Ok(()));

        let k6 = make_complete(6).unwrap().graph;
        let r = bounds_report(&k6, &BoundsOptions::default());
        assert_eq!(r.lower["simplicial"].value, Some(6));
        assert_eq!(r.upper["trivial"].value, Some(6));
        assert_eq!(r.exact, Some(6));
        assert!(r.lower["distant_edges"].value.is_none());
        assert_eq!(r.verify(&k6), Ok(()));
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let p = make_petersen();
        let mut r = bounds_report(&p.graph, &BoundsOptions::default());
        r.lower.get_mut("greedy").unwrap().value = Some(7);
        assert!(r.verify(&p.graph).is_err());
    }
}
