//! Generators for the graph families with known general position numbers.
//!
//! Labelings are fixed so that witnesses, covers and edge certificates can
//! be stored as plain index sets:
//!
//! * path / cycle: `0..n` in order; star: center `0`, leaves `1..=m`.
//! * theta `Θ(k, ℓ)`: hubs `A = 0`, `B = 1`; path `i` has internal vertices
//!   `2 + i(ℓ-1) .. 2 + (i+1)(ℓ-1)`, the first adjacent to `A`.
//! * complete binary tree: heap order, root `0`, children `2i+1`, `2i+2`.
//! * glued binary tree: upper tree in heap order; the lower tree's internal
//!   vertex with heap index `h` is `2^(r+1) - 1 + h`; leaves are shared.
//! * Petersen: outer cycle `0..5`, inner pentagram `5..10`, spokes `i ~ i+5`.
//! * `G_n`: `X = 0..n`, `Y = n..2n`, `Z = 2n..3n`, `w = 3n`.
//! * spider with triangles: center `0`; arm `i` occupies
//!   `1 + i(s+3) ..`, its last path vertex carrying the triangle on the next
//!   two labels.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{CoverPart, IsometricCover, PartKind};
use crate::error::{Error, Result};
use crate::graph::{build_graph, simplicial_vertices, Graph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub graph: Graph,
    pub name: String,
    pub predicted_gp: Option<usize>,
    /// A general position set of size `predicted_gp`.
    pub predicted_witness: Option<Vec<usize>>,
    /// A general position set known from the construction when the exact
    /// value is not predicted.
    pub lower_witness: Option<Vec<usize>>,
    pub cover: Option<IsometricCover>,
    /// Edges pairwise at distance `diam(G)`.
    pub edge_certificate: Option<Vec<(usize, usize)>>,
}

impl FamilyInstance {
    fn new(graph: Graph, name: String) -> Self {
        FamilyInstance {
            graph,
            name,
            predicted_gp: None,
            predicted_witness: None,
            lower_witness: None,
            cover: None,
            edge_certificate: None,
        }
    }

    fn predict(mut self, witness: Vec<usize>) -> Self {
        self.predicted_gp = Some(witness.len());
        self.predicted_witness = Some(witness);
        self
    }
}

fn out_of_range(msg: String) -> Error {
    Error::ParameterOutOfRange(msg)
}

fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    build_graph(n, edges).expect("family generators produce connected simple graphs")
}

pub fn make_path(n: usize) -> Result<FamilyInstance> {
    if n < 1 {
        return Err(out_of_range("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    let witness = if n == 1 { vec![0] } else { vec![0, n - 1] };
    Ok(FamilyInstance::new(graph(n, &edges), format!("path({n})")).predict(witness))
}

pub fn make_cycle(n: usize) -> Result<FamilyInstance> {
    if n < 3 {
        return Err(out_of_range("cycle needs n >= 3".into()));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let witness = match n {
        3 => vec![0, 1, 2],
        4 => vec![0, 2],
        _ => {
            // Three vertices are in general position iff every gap is < n/2.
            let a = n / 3;
            let b = a + (n - a) / 2;
            vec![0, a, b]
        }
    };
    Ok(FamilyInstance::new(graph(n, &edges), format!("cycle({n})")).predict(witness))
}

pub fn make_complete(n: usize) -> Result<FamilyInstance> {
    if n < 1 {
        return Err(out_of_range("complete graph needs n >= 1".into()));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Ok(FamilyInstance::new(graph(n, &edges), format!("complete({n})")).predict((0..n).collect()))
}

pub fn make_star(m: usize) -> Result<FamilyInstance> {
    if m < 1 {
        return Err(out_of_range("star needs m >= 1".into()));
    }
    let edges: Vec<_> = (1..=m).map(|i| (0, i)).collect();
    let witness = if m == 1 { vec![0, 1] } else { (1..=m).collect() };
    Ok(FamilyInstance::new(graph(m + 1, &edges), format!("star({m})")).predict(witness))
}

/// `Θ(k, ℓ)`; the prediction `k + 1` holds for `ℓ >= 3` only.
pub fn make_theta(k: usize, ell: usize) -> Result<FamilyInstance> {
    if k < 2 || ell < 2 {
        return Err(out_of_range(format!("theta needs k >= 2 and ell >= 2, got ({k}, {ell})")));
    }
    let inner = ell - 1;
    let n = 2 + k * inner;
    let mut edges = Vec::with_capacity(k * ell);
    for i in 0..k {
        let first = 2 + i * inner;
        edges.push((0, first));
        for j in 1..inner {
            edges.push((first + j - 1, first + j));
        }
        edges.push((first + inner - 1, 1));
    }
    let inst = FamilyInstance::new(graph(n, &edges), format!("theta({k},{ell})"));
    if ell >= 3 {
        let mut witness = vec![0];
        witness.extend((0..k).map(|i| 2 + i * inner + inner - 1));
        Ok(inst.predict(witness))
    } else {
        Ok(inst)
    }
}

fn heap_tree_edges(r: u32) -> Vec<(usize, usize)> {
    let size = (1usize << (r + 1)) - 1;
    (1..size).map(|c| ((c - 1) / 2, c)).collect()
}

pub fn make_complete_binary_tree(r: u32) -> Result<FamilyInstance> {
    if !(1..=20).contains(&r) {
        return Err(out_of_range(format!("complete binary tree needs 1 <= r <= 20, got {r}")));
    }
    let size = (1usize << (r + 1)) - 1;
    let leaves: Vec<usize> = ((1usize << r) - 1..size).collect();
    Ok(FamilyInstance::new(graph(size, &heap_tree_edges(r)), format!("cbt({r})")).predict(leaves))
}

/// Glued binary tree `GT(r)`: `3 * 2^r - 2` vertices, the `2^r` shared
/// leaves (quasi-leaves) form the predicted gp-set.
pub fn make_glued_binary_tree(r: u32) -> Result<FamilyInstance> {
    if !(2..=20).contains(&r) {
        return Err(out_of_range(format!("glued binary tree needs 2 <= r <= 20, got {r}")));
    }
    let size = (1usize << (r + 1)) - 1;
    let first_leaf = (1usize << r) - 1;
    let lower = |h: usize| if h >= first_leaf { h } else { size + h };
    let mut edges = heap_tree_edges(r);
    edges.extend((1..size).map(|c| (lower((c - 1) / 2), lower(c))));
    let n = size + first_leaf;
    debug_assert_eq!(n, 3 * (1 << r) - 2);
    let quasi_leaves: Vec<usize> = (first_leaf..size).collect();
    Ok(FamilyInstance::new(graph(n, &edges), format!("gt({r})")).predict(quasi_leaves))
}

pub fn make_petersen() -> FamilyInstance {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    let mut inst = FamilyInstance::new(graph(10, &edges), "petersen".into());
    inst.predicted_gp = Some(6);
    // Endpoints of three edges pairwise at distance 2.
    inst.predicted_witness = Some(vec![0, 1, 3, 7, 8, 9]);
    inst.edge_certificate = Some(vec![(0, 1), (3, 8), (7, 9)]);
    inst.cover = Some(IsometricCover {
        parts: vec![
            CoverPart { vertices: vec![0, 1, 2, 3, 4], kind: PartKind::Cycle },
            CoverPart { vertices: vec![5, 7, 9, 6, 8], kind: PartKind::Cycle },
        ],
    });
    inst
}

/// The graph `G_n` on which the minimum BFS leaf count over all vertices is
/// far below gp: `ℓ(w) = n` while `Y ∪ Z` is in general position.
pub fn make_gn_counterexample(n: usize) -> Result<FamilyInstance> {
    if n < 2 {
        return Err(out_of_range(format!("G_n needs n >= 2, got {n}")));
    }
    let w = 3 * n;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
        edges.push((i, n + i));
        edges.push((i, 2 * n + i));
        edges.push((w, 2 * n + i));
    }
    let mut inst = FamilyInstance::new(graph(3 * n + 1, &edges), format!("gn({n})"));
    inst.lower_witness = Some((n..3 * n).collect());
    Ok(inst)
}

/// Star `K_{1,n}` with every edge subdivided `s` times and a private
/// triangle hung on each leaf. The far triangle edges are pairwise at
/// distance `diam(G)`.
pub fn make_spider_triangles(n: usize, s: usize) -> Result<FamilyInstance> {
    if n < 2 || s < 1 {
        return Err(out_of_range(format!("spider needs n >= 2 and s >= 1, got ({n}, {s})")));
    }
    let arm = s + 3;
    let mut edges = Vec::new();
    let mut far = Vec::new();
    for i in 0..n {
        let base = 1 + i * arm;
        edges.push((0, base));
        for j in 1..=s {
            edges.push((base + j - 1, base + j));
        }
        let tip = base + s;
        let (a, b) = (tip + 1, tip + 2);
        edges.extend([(tip, a), (tip, b), (a, b)]);
        far.push((a, b));
    }
    let mut inst = FamilyInstance::new(graph(1 + n * arm, &edges), format!("spider({n},{s})"));
    inst.lower_witness = Some(far.iter().flat_map(|&(a, b)| [a, b]).collect());
    inst.edge_certificate = Some(far);
    Ok(inst)
}

/// Random tree of cliques: each new block is a clique of 2..=max size glued
/// onto a uniformly chosen existing vertex.
pub fn make_random_block_graph(seed: u64, blocks: usize, max_block_size: usize) -> Result<FamilyInstance> {
    if blocks < 1 || max_block_size < 2 {
        return Err(out_of_range(format!(
            "block graph needs blocks >= 1 and max_block_size >= 2, got ({blocks}, {max_block_size})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = 0;
    let mut edges = Vec::new();
    for b in 0..blocks {
        let size = rng.gen_range(2..=max_block_size);
        let mut members = Vec::with_capacity(size);
        if b > 0 {
            members.push(rng.gen_range(0..n));
        }
        while members.len() < size {
            members.push(n);
            n += 1;
        }
        for i in 0..size {
            for j in i + 1..size {
                edges.push((members[i], members[j]));
            }
        }
    }
    let g = graph(n, &edges);
    let simplicial = simplicial_vertices(&g);
    Ok(FamilyInstance::new(g, format!("block-random({seed},{blocks},{max_block_size})")).predict(simplicial))
}

/// Random recursive tree on shuffled labels.
pub fn random_tree(seed: u64, n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(out_of_range("tree needs n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let edges: Vec<_> = (1..n).map(|i| (labels[rng.gen_range(0..i)], labels[i])).collect();
    build_graph(n, &edges)
}

/// Random spanning tree plus each remaining pair independently with
/// probability `p`.
pub fn random_connected_graph(seed: u64, n: usize, p: f64) -> Result<Graph> {
    if n < 1 || !(0.0..=1.0).contains(&p) {
        return Err(out_of_range(format!("random graph needs n >= 1 and p in [0, 1], got ({n}, {p})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build_graph(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::{collinear_triples, verify_general_position};
    use crate::graph::{all_pairs_distances, bfs_leaf_count, is_block_graph};

    fn certifies(inst: &FamilyInstance, set: &[usize]) -> bool {
        let t = collinear_triples(&all_pairs_distances(&inst.graph)).unwrap();
        verify_general_position(&t, set).unwrap().certified
    }

    #[test]
    fn basic_predictions() {
        assert_eq!(make_cycle(4).unwrap().predicted_gp, Some(2));
        assert_eq!(make_cycle(3).unwrap().predicted_gp, Some(3));
        assert_eq!(make_complete(9).unwrap().predicted_gp, Some(9));
        assert_eq!(make_path(2).unwrap().predicted_gp, Some(2));
        assert_eq!(make_path(1).unwrap().predicted_gp, Some(1));
        assert_eq!(make_star(4).unwrap().predicted_gp, Some(4));
        for n in 3..30 {
            let c = make_cycle(n).unwrap();
            assert!(certifies(&c, c.predicted_witness.as_ref().unwrap()), "C_{n}");
        }
        assert!(make_cycle(2).is_err());
        assert!(make_path(0).is_err());
    }

    #[test]
    fn theta_structure() {
        for k in 2..6 {
            for ell in 2..7 {
                let t = make_theta(k, ell).unwrap();
                assert_eq!(t.graph.n(), 2 + k * (ell - 1));
                assert_eq!(t.graph.edge_count(), k * ell);
                assert_eq!(t.predicted_gp, (ell >= 3).then_some(k + 1));
                if let Some(w) = &t.predicted_witness {
                    assert!(certifies(&t, w));
                    assert!(w[1..].iter().all(|&x| t.graph.has_edge(x, 1)));
                }
            }
        }
        let t = make_theta(4, 5).unwrap();
        assert_eq!(t.predicted_witness, Some(vec![0, 5, 9, 13, 17]));
        assert!(make_theta(1, 3).is_err());
    }

    #[test]
    fn glued_tree_structure() {
        for (r, n) in [(2, 10), (3, 22), (4, 46)] {
            let gt = make_glued_binary_tree(r).unwrap();
            assert_eq!(gt.graph.n(), n);
            assert_eq!(gt.graph.n(), 3 * (1 << r) - 2);
            assert_eq!(gt.graph.edge_count(), 2 * ((1 << (r + 1)) - 2));
            assert_eq!(gt.predicted_gp, Some(1 << r));
            assert!(certifies(&gt, gt.predicted_witness.as_ref().unwrap()));
        }
        assert!(make_glued_binary_tree(1).is_err());
    }

    #[test]
    fn complete_binary_tree_structure() {
        let t = make_complete_binary_tree(2).unwrap();
        assert_eq!(t.graph.n(), 7);
        assert_eq!(t.predicted_gp, Some(4));
        assert!(certifies(&t, t.predicted_witness.as_ref().unwrap()));
        let t = make_complete_binary_tree(1).unwrap();
        assert_eq!(t.graph, make_path(3).unwrap().graph.induced_subgraph(&[1, 0, 2]).unwrap());
        assert_eq!(t.predicted_gp, Some(2));
    }

    #[test]
    fn petersen_certificates() {
        let p = make_petersen();
        let d = all_pairs_distances(&p.graph);
        assert_eq!(p.graph.edge_count(), 15);
        assert!((0..10).all(|v| p.graph.degree(v) == 3));
        assert_eq!(d.diameter(), 2);
        let f = p.edge_certificate.as_ref().unwrap();
        for (i, &e) in f.iter().enumerate() {
            for &g in &f[i + 1..] {
                assert_eq!(d.edge_distance(e, g), Ok(2));
            }
        }
        assert!(certifies(&p, p.predicted_witness.as_ref().unwrap()));
    }

    #[test]
    fn gn_structure() {
        let g = make_gn_counterexample(3).unwrap();
        assert_eq!(g.graph.n(), 10);
        assert_eq!(bfs_leaf_count(&g.graph, 9), Ok(3));
        assert!(certifies(&g, g.lower_witness.as_ref().unwrap()));
        let d = all_pairs_distances(&g.graph);
        let w = g.lower_witness.unwrap();
        for &u in &w {
            for &v in &w {
                if u != v {
                    assert!((2..=3).contains(&d.get(u, v)));
                }
            }
        }
    }

    #[test]
    fn spider_structure() {
        let s = make_spider_triangles(3, 1).unwrap();
        assert_eq!(s.graph.n(), 13);
        let d = all_pairs_distances(&s.graph);
        let f = s.edge_certificate.as_ref().unwrap();
        assert_eq!(f.len(), 3);
        for &(a, b) in f {
            assert_eq!(s.graph.degree(a), 2);
            assert_eq!(s.graph.degree(b), 2);
        }
        for (i, &e) in f.iter().enumerate() {
            for &g in &f[i + 1..] {
                assert_eq!(d.edge_distance(e, g), Ok(d.diameter()));
            }
        }
    }

    #[test]
    fn block_graphs() {
        let single = make_random_block_graph(7, 1, 5).unwrap();
        let m = single.graph.n();
        assert_eq!(single.predicted_gp, Some(m));
        for seed in 0..20 {
            let b = make_random_block_graph(seed, 6, 4).unwrap();
            assert!(is_block_graph(&b.graph));
            assert_eq!(b, make_random_block_graph(seed, 6, 4).unwrap());
            let tree = make_random_block_graph(seed, 8, 2).unwrap();
            let leaves = (0..tree.graph.n()).filter(|&v| tree.graph.degree(v) == 1).count();
            assert_eq!(tree.predicted_gp, Some(leaves));
        }
    }

    #[test]
    fn random_generators_are_reproducible() {
        assert_eq!(random_tree(3, 12).unwrap(), random_tree(3, 12).unwrap());
        assert_eq!(random_tree(3, 12).unwrap().edge_count(), 11);
        assert_eq!(random_connected_graph(9, 10, 0.3).unwrap(), random_connected_graph(9, 10, 0.3).unwrap());
    }
}
