//! Certificate JSON layout.
//!
//! Top-level fields, in this order: `version`, `params`, `hypothesis`,
//! `outcome`, `payload`, `trace_summary`. Vertex ids are 0-based, edges are
//! `[u, v]` pairs with `u < v`, rationals are `"p/q"` strings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::params::{format_rational, HypothesisReport, Mode, Params};
use crate::graph::Edge;

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub version: u32,
    pub params: ParamsRecord,
    /// Absent when the parameters were rejected before any graph work.
    pub hypothesis: Option<HypothesisReport>,
    pub outcome: OutcomeKind,
    pub payload: Payload,
    /// Absent when the pipeline stopped before the reduction loop.
    pub trace_summary: Option<TraceSummary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    Multipartite,
    TuranEdit,
    Inconclusive,
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeKind::Multipartite => "multipartite",
            OutcomeKind::TuranEdit => "turan_edit",
            OutcomeKind::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsRecord {
    pub n: usize,
    pub r: usize,
    pub eps: f64,
    pub c: f64,
    pub mode: Mode,
    pub overrides: OverridesRecord,
    pub search_budget: u64,
    /// Readings and defaults applied by the pipeline.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverridesRecord {
    pub threshold: Option<String>,
    pub profile: Option<String>,
    pub bound_multiplier: Option<f64>,
    pub trim_target: Option<usize>,
}

impl ParamsRecord {
    pub fn new(params: &Params, n: usize) -> ParamsRecord {
        let o = &params.overrides;
        ParamsRecord {
            n,
            r: params.r,
            eps: params.eps,
            c: params.c,
            mode: params.mode,
            overrides: OverridesRecord {
                threshold: o.threshold.as_ref().map(format_rational),
                profile: o.profile.as_ref().map(|p| p.to_string()),
                bound_multiplier: o.bound_multiplier,
                trim_target: o.trim_target,
            },
            search_budget: params.search_budget,
            notes: vec!["the slack in the edge-count hypothesis is read as eps".into()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Finder {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InconclusiveReason {
    ParametersRejected,
    HypothesisViolated,
    ProfileUnavailable,
    NoWitness,
    SearchBudgetExhausted,
    CoreTooSmall,
    BoundNotMet,
    SelfCheckFailed,
    ArithmeticOverflow,
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

/// Shape depends on `outcome`; the three variants have disjoint required
/// field sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Multipartite {
        /// `s,..,s,t`
        profile: String,
        parts: Vec<Vec<usize>>,
        finder: Finder,
    },
    TuranEdit {
        partition: Vec<Vec<usize>>,
        adds: Vec<Edge>,
        removes: Vec<Edge>,
        count: usize,
        /// Multiplier times `(ε^(1/3) + c^(1/(3r+3))) n²`; `count < bound`.
        bound: f64,
    },
    Inconclusive {
        reason: InconclusiveReason,
        stage: String,
        diagnostics: BTreeMap<String, String>,
    },
}

impl Payload {
    pub fn kind(&self) -> OutcomeKind {
        match self {
            Payload::Multipartite { .. } => OutcomeKind::Multipartite,
            Payload::TuranEdit { .. } => OutcomeKind::TuranEdit,
            Payload::Inconclusive { .. } => OutcomeKind::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSummary {
    pub steps: usize,
    pub clique_sum: u64,
    /// Joint-size threshold actually used, `"p/q"`.
    pub threshold: String,
    /// `removed_edges >= ceil(theta n^2)` or `clique_sum >= ceil(c^(1/(r+1)) n^(r+1))`.
    pub split_rule: String,
    /// The right-hand side of `split_rule`, saturated at `u64::MAX`.
    pub split_target: u64,
    /// `"a"` (multipartite search) or `"b"` (Turán edit).
    pub branch: String,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Certificate> {
        serde_json::from_str(text)
    }

    pub fn reason(&self) -> Option<InconclusiveReason> {
        match &self.payload {
            Payload::Inconclusive { reason, .. } => Some(*reason),
            _ => None,
        }
    }
}
