//! The lift from maximum independent set to general position.
//!
//! For a base graph on `n` vertices the lifted graph has three layers: the
//! base vertices `i`, a clique layer `n + i` and a pendant layer `2n + i`,
//! with matchings `i ~ n + i` and `n + i ~ 2n + i`. A set `X` is independent
//! in the base exactly when `X` together with the pendant layer is in
//! general position in the lift.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesic::{collinear_triples, verify_general_position};
use crate::graph::{all_pairs_distances, build_graph, Graph};
use crate::solver::{gp_exact, independence_number_exact, is_independent, SolveOptions, SolveResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionInstance {
    pub base: Graph,
    pub lifted: Graph,
    /// `layer_map[v] = [v, v', v'']` as lifted vertex indices.
    pub layer_map: Vec<[usize; 3]>,
}

impl ReductionInstance {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// The pendant layer `V''`.
    pub fn pendant_layer(&self) -> Vec<usize> {
        self.layer_map.iter().map(|l| l[2]).collect()
    }

    /// Lifted image of `x` together with the pendant layer.
    pub fn lift_set(&self, x: &[usize]) -> Result<Vec<usize>> {
        let mut s = Vec::with_capacity(x.len() + self.n());
        for &v in x {
            self.base.check_vertex(v)?;
            s.push(self.layer_map[v][0]);
        }
        s.extend(self.pendant_layer());
        Ok(s)
    }
}

pub fn build_reduction(g: &Graph) -> Result<ReductionInstance> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((n + i, n + j));
        }
        edges.push((i, n + i));
        edges.push((n + i, 2 * n + i));
    }
    let lifted = build_graph(3 * n, &edges)?;
    let layer_map = (0..n).map(|i| [i, n + i, 2 * n + i]).collect();
    Ok(ReductionInstance { base: g.clone(), lifted, layer_map })
}

/// Whether "`x` is independent in the base" and "the lift of `x` is in
/// general position" agree.
pub fn verify_membership_claim(r: &ReductionInstance, x: &[usize]) -> Result<bool> {
    let lifted = r.lift_set(x)?;
    let independent = is_independent(&r.base, x);
    let t = collinear_triples(&all_pairs_distances(&r.lifted))?;
    let general = verify_general_position(&t, &lifted)?.certified;
    Ok(independent == general)
}

/// Both exact solves behind the value claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueClaim {
    pub alpha: SolveResult<Vec<usize>>,
    pub gp: SolveResult,
}

impl ValueClaim {
    /// `gp(lift) = α(base) + n`.
    pub fn holds(&self, n: usize) -> bool {
        self.gp.optimum == self.alpha.optimum + n
    }
}

/// Solves the independence number of the base and the general position
/// number of the lift, both to optimality within `budget`.
pub fn solve_value_claim(r: &ReductionInstance, budget: Option<Duration>, threads: usize) -> Result<ValueClaim> {
    let n = r.n();
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let start = Instant::now();
    let threads = threads.max(1);
    let alpha = independence_number_exact(&r.base, &SolveOptions { time_limit: budget, threads, deterministic: false });
    if !alpha.is_exact() {
        return Err(Error::TimedOut);
    }
    let remaining = budget.map(|b| b.saturating_sub(start.elapsed()));
    let t = collinear_triples(&all_pairs_distances(&r.lifted))?;
    let gp = gp_exact(&r.lifted, &t, &SolveOptions { time_limit: remaining, threads, deterministic: false });
    if !gp.is_exact() {
        return Err(Error::TimedOut);
    }
    Ok(ValueClaim { alpha, gp })
}

/// Solves both sides exactly and checks `gp(lift) = α(base) + n`.
pub fn verify_value_claim(r: &ReductionInstance, budget: Option<Duration>) -> Result<bool> {
    Ok(solve_value_claim(r, budget, 1)?.holds(r.n()))
}
