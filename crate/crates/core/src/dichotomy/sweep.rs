use rayon::prelude::*;
use serde::Serialize;

use super::analyze::analyze;
use super::certificate::Payload;
use super::params::Params;
use crate::error::{Error, Result};
use crate::graph::random_graph;

/// One cell of the empirical dichotomy map. Edit columns are empty unless
/// the outcome is `turan_edit`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub trace_len: Option<usize>,
    pub trace_sum: Option<u64>,
    pub outcome: String,
    pub edit_count: Option<usize>,
    pub bound: Option<f64>,
}

/// Analyzes `random_graph(n, round(d · C(n,2)), seed)` for every `n` and
/// density `d`, rows ordered by `n` then density as given. Cells run in
/// parallel; the row order does not depend on scheduling.
pub fn sweep(
    params: &Params,
    n_list: &[usize],
    densities: &[f64],
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if let Some(d) = densities.iter().find(|d| !(0.0..=1.0).contains(*d)) {
        return Err(Error::InvalidParameter(format!(
            "density {d} outside [0, 1]"
        )));
    }
    let cells: Vec<(usize, usize)> = n_list
        .iter()
        .flat_map(|&n| {
            let pairs = n * n.saturating_sub(1) / 2;
            densities
                .iter()
                .map(move |&d| (n, ((d * pairs as f64).round() as usize).min(pairs)))
        })
        .collect();
    cells
        .into_par_iter()
        .map(|(n, m)| {
            let g = random_graph(n, m, seed)?;
            let cert = analyze(&g, params);
            let (edit_count, bound) = match &cert.payload {
                Payload::TuranEdit { count, bound, .. } => (Some(*count), Some(*bound)),
                _ => (None, None),
            };
            let outcome = match cert.reason() {
                Some(reason) => format!("{}:{reason}", cert.outcome),
                None => cert.outcome.to_string(),
            };
            Ok(SweepRow {
                n,
                m,
                trace_len: cert.trace_summary.as_ref().map(|t| t.steps),
                trace_sum: cert.trace_summary.as_ref().map(|t| t.clique_sum),
                outcome,
                edit_count,
                bound,
            })
        })
        .collect()
}
