//! Simple connected undirected graphs, their distance tables and the
//! structural predicates the bounds rely on.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Simple connected undirected graph on vertices `0..n`.
///
/// Adjacency lists are sorted and deduplicated. Every constructor goes
/// through [`build_graph`], so a `Graph` value is always simple and
/// connected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EdgeList", into = "EdgeList")]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Plain `(n, edges)` form used for serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl TryFrom<EdgeList> for Graph {
    type Error = Error;

    fn try_from(e: EdgeList) -> Result<Graph> {
        build_graph(e.n, &e.edges)
    }
}

impl From<Graph> for EdgeList {
    fn from(g: Graph) -> EdgeList {
        EdgeList { n: g.n(), edges: g.edges().collect() }
    }
}

/// Builds a canonical graph from an edge list.
///
/// Duplicate and reversed pairs are merged. Self-loops, out-of-range
/// endpoints and disconnected inputs are rejected.
pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { vertex: u });
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
    let g = Graph { adj, edge_count };
    let levels = g.bfs_levels(0);
    if let Some(v) = levels.iter().position(Option::is_none) {
        return Err(Error::Disconnected { vertex: v });
    }
    Ok(g)
}

impl Graph {
    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    pub(crate) fn adjacency_bitsets(&self) -> Vec<BitSet> {
        self.adj.iter().map(|l| BitSet::from_iter(self.n(), l.iter().copied())).collect()
    }

    /// Subgraph induced by `vertices`, relabeled to `0..k` in the order given.
    ///
    /// Fails with `Disconnected` when the induced subgraph is not connected.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        build_graph(vertices.len(), &edges)
    }

    fn bfs_levels(&self, source: usize) -> Vec<Option<u32>> {
        let mut level = vec![None; self.n()];
        let mut queue = VecDeque::new();
        level[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = level[u].map(|l| l + 1);
            for &w in &self.adj[u] {
                if level[w].is_none() {
                    level[w] = next;
                    queue.push_back(w);
                }
            }
        }
        level
    }
}

/// All-pairs hop distances, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

/// One BFS per source vertex, run in parallel; the result does not depend on
/// scheduling.
pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|s| g.bfs_levels(s).into_iter().map(|l| l.expect("graph is connected")).collect())
        .collect();
    DistanceMatrix { n, dist: rows.concat() }
}

impl DistanceMatrix {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u32] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// `d(e, f)`: the least distance between an endpoint of `e` and an
    /// endpoint of `f`. Both arguments must be edges.
    pub fn edge_distance(&self, e: (usize, usize), f: (usize, usize)) -> Result<u32> {
        for (u, v) in [e, f] {
            self.check_vertex(u)?;
            self.check_vertex(v)?;
            if self.get(u, v) != 1 {
                return Err(Error::NotAnEdge(u, v));
            }
        }
        Ok([self.get(e.0, f.0), self.get(e.0, f.1), self.get(e.1, f.0), self.get(e.1, f.1)].into_iter().min().unwrap())
    }
}

pub fn diameter(d: &DistanceMatrix) -> u32 {
    d.diameter()
}

pub fn edge_distance(d: &DistanceMatrix, e: (usize, usize), f: (usize, usize)) -> Result<u32> {
    d.edge_distance(e, f)
}

/// Vertices whose open neighbourhood is a clique.
pub fn simplicial_vertices(g: &Graph) -> Vec<usize> {
    (0..g.n())
        .filter(|&v| {
            let nb = g.neighbors(v);
            nb.iter().enumerate().all(|(i, &a)| nb[i + 1..].iter().all(|&b| g.has_edge(a, b)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Vertex sets of the biconnected components, each sorted; the list is
    /// sorted as well.
    pub blocks: Vec<Vec<usize>>,
    pub cut_vertices: Vec<usize>,
}

/// Biconnected components and articulation points by the lowpoint method.
/// Iterative, so deep graphs do not overflow the stack.
pub fn block_decomposition(g: &Graph) -> BlockDecomposition {
    let n = g.n();
    if n == 1 {
        return BlockDecomposition { blocks: vec![vec![0]], cut_vertices: Vec::new() };
    }
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut is_cut = vec![false; n];
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks = Vec::new();
    let mut time = 0u32;

    // (vertex, parent, next neighbour index)
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    let mut root_children = 0;
    while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
        if *next < g.degree(u) {
            let w = g.neighbors(u)[*next];
            *next += 1;
            if disc[w] == u32::MAX {
                time += 1;
                disc[w] = time;
                low[w] = time;
                edge_stack.push((u, w));
                if u == 0 {
                    root_children += 1;
                }
                stack.push((w, u, 0));
            } else if w != parent && disc[w] < disc[u] {
                low[u] = low[u].min(disc[w]);
                edge_stack.push((u, w));
            }
        } else {
            stack.pop();
            if parent == usize::MAX {
                continue;
            }
            low[parent] = low[parent].min(low[u]);
            if low[u] >= disc[parent] {
                if parent != 0 {
                    is_cut[parent] = true;
                }
                let mut block = Vec::new();
                while let Some((a, b)) = edge_stack.pop() {
                    block.push(a);
                    block.push(b);
                    if (a, b) == (parent, u) {
                        break;
                    }
                }
                block.sort_unstable();
                block.dedup();
                blocks.push(block);
            }
        }
    }
    if root_children > 1 {
        is_cut[0] = true;
    }
    blocks.sort();
    BlockDecomposition { blocks, cut_vertices: (0..n).filter(|&v| is_cut[v]).collect() }
}

/// True iff every block induces a complete graph.
pub fn is_block_graph(g: &Graph) -> bool {
    block_decomposition(g)
        .blocks
        .iter()
        .all(|b| b.iter().enumerate().all(|(i, &x)| b[i + 1..].iter().all(|&y| g.has_edge(x, y))))
}

/// Parent selection for BFS trees, which the leaf count depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParentRule {
    /// Smallest-index neighbour on the previous level.
    Canonical,
    /// Prefer a previous-level neighbour that has no child yet, smallest
    /// index first; falls back to the canonical choice.
    LeafMinimizing,
}

/// Parent array of the BFS tree rooted at `root` (`None` for the root).
pub fn bfs_tree(g: &Graph, root: usize, rule: ParentRule) -> Result<Vec<Option<usize>>> {
    g.check_vertex(root)?;
    let level = g.bfs_levels(root);
    let level: Vec<u32> = level.into_iter().map(|l| l.unwrap()).collect();
    let depth = level.iter().copied().max().unwrap_or(0);
    let mut by_level = vec![Vec::new(); depth as usize + 1];
    for v in 0..g.n() {
        by_level[level[v] as usize].push(v);
    }
    let mut parent = vec![None; g.n()];
    let mut has_child = vec![false; g.n()];
    for layer in by_level.iter().skip(1) {
        for &v in layer {
            let mut candidates = g.neighbors(v).iter().copied().filter(|&u| level[u] + 1 == level[v]);
            let first = candidates.clone().next().expect("BFS layer has a parent");
            let p = match rule {
                ParentRule::Canonical => first,
                ParentRule::LeafMinimizing => candidates.find(|&u| !has_child[u]).unwrap_or(first),
            };
            parent[v] = Some(p);
            has_child[p] = true;
        }
    }
    Ok(parent)
}

fn tree_leaves(parent: &[Option<usize>]) -> Vec<usize> {
    let n = parent.len();
    if n == 1 {
        return vec![0];
    }
    let mut has_child = vec![false; n];
    for p in parent.iter().flatten() {
        has_child[*p] = true;
    }
    (0..n).filter(|&v| !has_child[v]).collect()
}

/// `ℓ(v)` for the canonical BFS tree.
pub fn bfs_leaf_count(g: &Graph, v: usize) -> Result<usize> {
    bfs_leaf_count_with(g, v, ParentRule::Canonical)
}

pub fn bfs_leaf_count_with(g: &Graph, v: usize, rule: ParentRule) -> Result<usize> {
    Ok(tree_leaves(&bfs_tree(g, v, rule)?).len())
}

/// Root-to-leaf paths of the BFS tree rooted at `v`. Each path is a geodesic
/// starting at `v`, and together they cover every vertex.
pub fn bfs_tree_paths(g: &Graph, v: usize, rule: ParentRule) -> Result<Vec<Vec<usize>>> {
    let parent = bfs_tree(g, v, rule)?;
    Ok(tree_leaves(&parent)
        .into_iter()
        .map(|leaf| {
            let mut path = vec![leaf];
            let mut cur = leaf;
            while let Some(p) = parent[cur] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            path
        })
        .collect())
}
