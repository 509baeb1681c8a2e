//! Clique counting: `k_r(G)`, per-edge counts and the joint size `js_r(G)`.
//!
//! Counting is pivot-free backtracking over bitset candidate sets: an
//! `r`-clique is counted once, from its smallest vertex, by repeatedly
//! restricting the candidates to higher-numbered common neighbours. No
//! cliques are ever listed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Largest number of `r`-cliques sharing one edge, with the edge attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointReport {
    pub size: u64,
    /// Lexicographically least maximizing edge; `None` iff `size == 0`.
    pub witness_edge: Option<Edge>,
}

/// Number of `k`-cliques inside `candidates`.
fn count_within(g: &Graph, candidates: &VertexSet, k: usize) -> Result<u64> {
    match k {
        0 => Ok(1),
        1 => Ok(candidates.len() as u64),
        _ => {
            if candidates.len() < k {
                return Ok(0);
            }
            let mut total: u64 = 0;
            for v in candidates.iter() {
                let mut next = candidates.intersection(g.neighbors(v));
                next.retain_above(v);
                if next.len() + 1 < k {
                    continue;
                }
                let sub = count_within(g, &next, k - 1)?;
                total = total.checked_add(sub).ok_or(Error::CountOverflow)?;
            }
            Ok(total)
        }
    }
}

/// `k_r(G)`, the number of `r`-vertex complete subgraphs.
pub fn count_cliques(g: &Graph, r: usize) -> Result<u64> {
    if r == 0 {
        return Err(Error::InvalidParameter("clique order must be >= 1".into()));
    }
    count_within(g, &VertexSet::full(g.order()), r)
}

/// Number of `r`-cliques containing both endpoints of `e`, i.e. the number of
/// `(r-2)`-cliques in their common neighbourhood.
pub fn cliques_on_edge(g: &Graph, e: Edge, r: usize) -> Result<u64> {
    if r < 2 {
        return Err(Error::InvalidParameter(
            "cliques on an edge need order >= 2".into(),
        ));
    }
    if !g.has_edge(e.u(), e.v()) {
        return Err(Error::NotAnEdge(e));
    }
    let common = g.neighbors(e.u()).intersection(g.neighbors(e.v()));
    count_within(g, &common, r - 2)
}

fn reduce_max(counts: impl IntoIterator<Item = (Edge, u64)>) -> JointReport {
    let mut best = JointReport {
        size: 0,
        witness_edge: None,
    };
    // Edges arrive in lexicographic order, so strict improvement keeps the
    // least maximizer.
    for (e, c) in counts {
        if c > best.size {
            best = JointReport {
                size: c,
                witness_edge: Some(e),
            };
        }
    }
    best
}

/// `js_r(G)`: the maximum of [`cliques_on_edge`] over all edges (0 on an
/// edgeless graph).
pub fn joint_size(g: &Graph, r: usize) -> Result<JointReport> {
    if r < 2 {
        return Err(Error::InvalidParameter("joint order must be >= 2".into()));
    }
    let counts = g
        .edges()
        .map(|e| cliques_on_edge(g, e, r).map(|c| (e, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce_max(counts))
}

/// Same as [`joint_size`], with per-edge counts evaluated on the rayon pool.
/// The reduction is the sequential one, so the result is schedule-independent.
pub fn joint_size_parallel(g: &Graph, r: usize) -> Result<JointReport> {
    if r < 2 {
        return Err(Error::InvalidParameter("joint order must be >= 2".into()));
    }
    let edges: Vec<Edge> = g.edges().collect();
    let counts = edges
        .par_iter()
        .map(|&e| cliques_on_edge(g, e, r).map(|c| (e, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce_max(counts))
}
