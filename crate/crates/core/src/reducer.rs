//! The joint-reduction loop: while some edge lies in more than `threshold`
//! cliques of order `r + 1`, delete the edge lying in the most of them.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cliques::joint_size_parallel;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::precision::{self, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalStep {
    pub edge: Edge,
    /// `(r+1)`-cliques through `edge` in the graph just before its removal.
    pub cliques_at_removal: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalTrace {
    pub steps: Vec<RemovalStep>,
    pub threshold_used: BigRational,
}

impl RemovalTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Total number of cliques destroyed; each is counted at the one removal
    /// that destroys it.
    pub fn clique_sum(&self) -> Result<u64> {
        self.steps.iter().try_fold(0u64, |acc, s| {
            acc.checked_add(s.cliques_at_removal)
                .ok_or(Error::CountOverflow)
        })
    }

    pub fn removed_edges(&self) -> Vec<Edge> {
        self.steps.iter().map(|s| s.edge).collect()
    }

    /// Audit log: one `u v count` line per removal, in order.
    pub fn to_log(&self) -> String {
        self.steps
            .iter()
            .map(|s| format!("{} {} {}\n", s.edge.u(), s.edge.v(), s.cliques_at_removal))
            .collect()
    }

    pub fn parse_log(text: &str) -> Result<Vec<RemovalStep>> {
        let mut steps = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: i + 1, msg };
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| bad(format!("bad token {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let [u, v, count] = nums[..] else {
                return Err(bad("expected `u v count`".into()));
            };
            let edge = Edge::new(u as usize, v as usize).map_err(|e| bad(e.to_string()))?;
            steps.push(RemovalStep {
                edge,
                cliques_at_removal: count,
            });
        }
        Ok(steps)
    }
}

/// `n^(r-1) / r^(r+6)`, exactly.
pub fn paper_threshold(n: usize, r: usize) -> Result<BigRational> {
    if r < 2 {
        return Err(Error::InvalidParameter("part count must be >= 2".into()));
    }
    let num = num_traits::pow(BigInt::from(n), r - 1);
    let den = num_traits::pow(BigInt::from(r), r + 6);
    Ok(BigRational::new(num, den))
}

/// `θ = c^(1/(r+1)) · r^(r+6)`.
pub fn theta(c: f64, r: usize) -> Result<Real> {
    if r < 2 {
        return Err(Error::InvalidParameter("part count must be >= 2".into()));
    }
    if c.is_nan() || c < 0.0 {
        return Err(Error::InvalidParameter(format!("c must be >= 0, got {c}")));
    }
    let root = precision::pow_ratio(&precision::real_f64(c)?, 1, r as u64 + 1);
    Ok(root * precision::powi(r as u64, r as i64 + 6))
}

/// Runs the reduction on a copy of `g`. At every step the removed edge is the
/// current joint witness: maximum `(r+1)`-clique count, lexicographically
/// least on ties. Stops once the joint size is at most `threshold`.
pub fn run_procedure(
    g: &Graph,
    r: usize,
    threshold: &BigRational,
) -> Result<(Graph, RemovalTrace)> {
    if r < 2 {
        return Err(Error::InvalidParameter("part count must be >= 2".into()));
    }
    if *threshold < BigRational::from_integer(0.into()) {
        return Err(Error::InvalidParameter("threshold must be >= 0".into()));
    }
    let mut current = g.clone();
    let mut steps = Vec::new();
    loop {
        let js = joint_size_parallel(&current, r + 1)?;
        if BigRational::from_integer(js.size.into()) <= *threshold {
            break;
        }
        let edge = js.witness_edge.expect("positive joint size has a witness");
        current.remove_edge(edge);
        steps.push(RemovalStep {
            edge,
            cliques_at_removal: js.size,
        });
    }
    Ok((
        current,
        RemovalTrace {
            steps,
            threshold_used: threshold.clone(),
        },
    ))
}
