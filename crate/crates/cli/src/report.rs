//! The JSON run report and its re-verification.
//!
//! A report embeds the graph as an edge list, so every certificate in it can
//! be checked again from the report text alone.

use std::collections::BTreeMap;

use genpos::bounds::{cover_lemma_bound, BoundsReport, IsometricCover};
use genpos::graph::EdgeList;
use genpos::reduction::build_reduction;
use genpos::solver::is_independent;
use genpos::{all_pairs_distances, collinear_triples, verify_general_position, GeneralPositionSet, Graph, SolveResult};
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = concat!("genpos ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDescriptor {
    /// `None` for standard input or generated graphs.
    pub path: Option<String>,
    pub format: String,
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub name: String,
    pub predicted_gp: Option<usize>,
    pub predicted_witness: Option<Vec<usize>>,
    pub lower_witness: Option<Vec<usize>>,
    pub cover: Option<IsometricCover>,
    pub edge_certificate: Option<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSummary {
    pub base: EdgeList,
    pub layer_map: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<ReductionCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub alpha: usize,
    pub independent_set: Vec<usize>,
    pub gp_lifted: usize,
    pub gp_witness: Vec<usize>,
    /// `gp(lift) = α(base) + n`.
    pub equality: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Results {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<GeneralPositionSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub command: String,
    pub input: InputDescriptor,
    /// The graph the results refer to; for `reduce` this is the lift.
    pub graph: EdgeList,
    pub results: Results,
    /// Wall time per stage in microseconds; absent in deterministic mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<BTreeMap<String, u64>>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Re-checks every certificate in the report against its embedded graph.
    pub fn verify(&self) -> Result<(), String> {
        let g = Graph::try_from(self.graph.clone()).map_err(|e| format!("embedded graph: {e}"))?;
        if (self.input.n, self.input.m) != (g.n(), g.edge_count()) {
            return Err("input descriptor does not match the embedded graph".into());
        }
        let t = collinear_triples(&all_pairs_distances(&g)).map_err(|e| e.to_string())?;
        let certified = |vs: &[usize]| verify_general_position(&t, vs).map(|r| r.certified).unwrap_or(false);
        let r = &self.results;
        if let Some(s) = &r.solve {
            if s.optimum != s.witness.vertices.len() || !s.witness.certified || !certified(&s.witness.vertices) {
                return Err("solver witness does not re-verify".into());
            }
        }
        if let Some(b) = &r.bounds {
            b.verify(&g)?;
        }
        if let Some(v) = &r.verification {
            let again = verify_general_position(&t, &v.vertices).map_err(|e| e.to_string())?;
            if &again != v {
                return Err("verification verdict does not reproduce".into());
            }
        }
        if let Some(f) = &r.family {
            for w in [&f.predicted_witness, &f.lower_witness].into_iter().flatten() {
                if !certified(w) {
                    return Err(format!("{} witness does not re-verify", f.name));
                }
            }
            if f.predicted_witness.as_ref().map(Vec::len) != f.predicted_gp {
                return Err("predicted witness size differs from the prediction".into());
            }
            if let Some(cover) = &f.cover {
                cover_lemma_bound(&g, &t, cover).map_err(|e| e.to_string())?;
            }
            if let Some(edges) = &f.edge_certificate {
                let d = all_pairs_distances(&g);
                let diam = d.diameter();
                let far = edges
                    .iter()
                    .enumerate()
                    .all(|(i, &a)| edges[i + 1..].iter().all(|&b| d.edge_distance(a, b) == Ok(diam)));
                if !far || edges.iter().any(|&(a, b)| !g.has_edge(a, b)) {
                    return Err("edge certificate does not re-verify".into());
                }
            }
        }
        if let Some(red) = &r.reduction {
            let base = Graph::try_from(red.base.clone()).map_err(|e| format!("base graph: {e}"))?;
            let lift = build_reduction(&base).map_err(|e| e.to_string())?;
            if lift.lifted != g || lift.layer_map != red.layer_map {
                return Err("lifted graph does not match the base graph".into());
            }
            if let Some(c) = &red.check {
                let ok = c.alpha == c.independent_set.len()
                    && c.independent_set.iter().all(|&v| v < base.n())
                    && is_independent(&base, &c.independent_set)
                    && c.gp_lifted == c.gp_witness.len()
                    && certified(&c.gp_witness)
                    && c.equality == (c.gp_lifted == c.alpha + base.n());
                if !ok {
                    return Err("reduction certificates do not re-verify".into());
                }
            }
        }
        Ok(())
    }
}
