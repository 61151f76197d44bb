//! Metric betweenness and general position verification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;

/// Largest order for which [`collinear_triples`] materializes the triple set.
pub const MATERIALIZE_LIMIT: usize = 1500;

/// `y` lies on some `x,z`-geodesic: the three are pairwise distinct and
/// `d(x,z) = d(x,y) + d(y,z)`.
pub fn is_between(d: &DistanceMatrix, x: usize, y: usize, z: usize) -> Result<bool> {
    for v in [x, y, z] {
        d.check_vertex(v)?;
    }
    Ok(between_unchecked(d, x, y, z))
}

#[inline]
pub(crate) fn between_unchecked(d: &DistanceMatrix, x: usize, y: usize, z: usize) -> bool {
    x != y && y != z && x != z && d.get(x, z) == d.get(x, y) + d.get(y, z)
}

/// The collinearity hypergraph: every `(x, y, z)` with `x < z` and `y`
/// strictly between them, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSet {
    n: usize,
    triples: Vec<[u32; 3]>,
    per_vertex: Vec<Vec<u32>>,
}

pub fn collinear_triples(d: &DistanceMatrix) -> Result<TripleSet> {
    collinear_triples_with_limit(d, MATERIALIZE_LIMIT)
}

pub fn collinear_triples_with_limit(d: &DistanceMatrix, limit: usize) -> Result<TripleSet> {
    let n = d.n();
    if n > limit {
        return Err(Error::TooLarge { what: "triple materialization", n, limit });
    }
    let chunks: Vec<Vec<[u32; 3]>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let row = d.row(x);
            let mut out = Vec::new();
            for y in 0..n {
                if y == x {
                    continue;
                }
                let dy = d.row(y);
                for z in x + 1..n {
                    if z != y && row[z] == row[y] + dy[z] {
                        out.push([x as u32, y as u32, z as u32]);
                    }
                }
            }
            out
        })
        .collect();
    let triples = chunks.concat();
    let mut per_vertex = vec![Vec::new(); n];
    for (i, t) in triples.iter().enumerate() {
        for &v in t {
            per_vertex[v as usize].push(i as u32);
        }
    }
    Ok(TripleSet { n, triples, per_vertex })
}

impl TripleSet {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.triples.iter().map(|t| (t[0] as usize, t[1] as usize, t[2] as usize))
    }

    pub fn get(&self, i: usize) -> (usize, usize, usize) {
        let t = self.triples[i];
        (t[0] as usize, t[1] as usize, t[2] as usize)
    }

    /// Indices of the triples containing `v` in any role.
    pub fn incident(&self, v: usize) -> &[u32] {
        &self.per_vertex[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.per_vertex[v].len()
    }

    pub fn contains(&self, x: usize, y: usize, z: usize) -> bool {
        let (x, z) = if x < z { (x, z) } else { (z, x) };
        self.triples.binary_search(&[x as u32, y as u32, z as u32]).is_ok()
    }
}

/// A vertex set together with its general position verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralPositionSet {
    pub vertices: Vec<usize>,
    pub certified: bool,
    /// Lexicographically smallest `(x, y, z)` inside `vertices` with `y`
    /// between `x` and `z`.
    pub witness: Option<(usize, usize, usize)>,
}

fn normalize(n: usize, s: &[usize]) -> Result<Vec<usize>> {
    let mut v = s.to_vec();
    if let Some(&bad) = v.iter().find(|&&x| x >= n) {
        return Err(Error::VertexOutOfRange { vertex: bad, n });
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

pub fn verify_general_position(t: &TripleSet, s: &[usize]) -> Result<GeneralPositionSet> {
    let vertices = normalize(t.n, s)?;
    let witness = if vertices.len() < 3 {
        None
    } else {
        let set = BitSet::from_iter(t.n, vertices.iter().copied());
        t.iter().find(|&(x, y, z)| set.contains(x) && set.contains(y) && set.contains(z))
    };
    Ok(GeneralPositionSet { vertices, certified: witness.is_none(), witness })
}

/// Same verdict as [`verify_general_position`] computed straight from the
/// distance table, for graphs too large to materialize the triples.
pub fn verify_general_position_on_demand(d: &DistanceMatrix, s: &[usize]) -> Result<GeneralPositionSet> {
    let vertices = normalize(d.n(), s)?;
    let mut witness = None;
    'outer: for &x in &vertices {
        for &y in &vertices {
            for &z in vertices.iter().filter(|&&z| z > x) {
                if between_unchecked(d, x, y, z) {
                    witness = Some((x, y, z));
                    break 'outer;
                }
            }
        }
    }
    Ok(GeneralPositionSet { vertices, certified: witness.is_none(), witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs_distances, build_graph, Graph};

    fn cycle(n: usize) -> Graph {
        build_graph(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn path(n: usize) -> Graph {
        build_graph(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn betweenness_basics() {
        let d = all_pairs_distances(&path(3));
        assert_eq!(is_between(&d, 0, 1, 2), Ok(true));
        assert_eq!(is_between(&d, 0, 0, 2), Ok(false));
        assert_eq!(is_between(&d, 1, 0, 2), Ok(false));
        assert!(is_between(&d, 0, 1, 3).is_err());
    }

    #[test]
    fn four_cycle_by_hand() {
        // Hand enumeration: in C_4 a vertex lies between two others exactly
        // when those two are antipodal and it is adjacent to both.
        let d = all_pairs_distances(&cycle(4));
        let expected = [(0, 1, 2), (0, 3, 2), (1, 0, 3), (1, 2, 3)];
        for x in 0..4 {
            for y in 0..4 {
                for z in 0..4 {
                    let want = expected.contains(&(x, y, z)) || expected.contains(&(z, y, x));
                    assert_eq!(is_between(&d, x, y, z).unwrap(), want, "{x} {y} {z}");
                }
            }
        }
        let t = collinear_triples(&d).unwrap();
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![(0, 1, 2), (0, 3, 2), (1, 0, 3), (1, 2, 3)]);
    }

    #[test]
    fn triple_counts() {
        let mut e = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                e.push((i, j));
            }
        }
        let k6 = build_graph(6, &e).unwrap();
        assert!(collinear_triples(&all_pairs_distances(&k6)).unwrap().is_empty());
        let t = collinear_triples(&all_pairs_distances(&path(3))).unwrap();
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![(0, 1, 2)]);
        for n in 3..9 {
            let t = collinear_triples(&all_pairs_distances(&path(n))).unwrap();
            assert_eq!(t.len(), n * (n - 1) * (n - 2) / 6);
        }
    }

    #[test]
    fn verification_examples() {
        let d = all_pairs_distances(&cycle(5));
        let t = collinear_triples(&d).unwrap();
        assert!(verify_general_position(&t, &[0, 3]).unwrap().certified);
        let r = verify_general_position(&t, &[2, 1, 0]).unwrap();
        assert!(!r.certified);
        assert_eq!(r.witness, Some((0, 1, 2)));
        assert_eq!(r.vertices, vec![0, 1, 2]);
        assert!(verify_general_position(&t, &[0, 1, 3]).unwrap().certified);
        assert_eq!(verify_general_position_on_demand(&d, &[0, 1, 2]).unwrap(), r);
        assert!(verify_general_position(&t, &[5]).is_err());
    }

    #[test]
    fn limit_is_enforced() {
        let d = all_pairs_distances(&path(5));
        assert!(matches!(collinear_triples_with_limit(&d, 4), Err(Error::TooLarge { .. })));
    }
}
