use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::certificate::{
    Certificate, Finder, InconclusiveReason, OutcomeKind, ParamsRecord, Payload, TraceSummary,
    CERTIFICATE_VERSION,
};
use super::params::{check_hypothesis, format_rational, HypothesisReport, Mode, Params};
use super::verify::check_certificate;
use crate::error::Error;
use crate::graph::Graph;
use crate::multipartite::{
    find_multipartite_exact, find_multipartite_greedy, theorem1_profile, SearchOutcome, SizeProfile,
};
use crate::precision::{self, real};
use crate::reducer::{paper_threshold, run_procedure, theta, RemovalTrace};
use crate::turan::{
    canonical_partition, edits_from_partition, extend_to_turan, extract_partite_core, labels_of,
    polish_labels, theorem_bound_real, trim_target, trim_to_size,
};

struct Stop {
    reason: InconclusiveReason,
    stage: &'static str,
    diagnostics: BTreeMap<String, String>,
}

impl Stop {
    fn new(reason: InconclusiveReason, stage: &'static str) -> Stop {
        Stop {
            reason,
            stage,
            diagnostics: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: impl ToString) -> Stop {
        self.diagnostics.insert(key.to_string(), value.to_string());
        self
    }

    fn from_error(stage: &'static str, e: Error) -> Stop {
        let reason = match e {
            Error::CountOverflow => InconclusiveReason::ArithmeticOverflow,
            Error::PartTooSmall { .. } => InconclusiveReason::CoreTooSmall,
            _ => InconclusiveReason::SelfCheckFailed,
        };
        Stop::new(reason, stage).with("error", e)
    }
}

struct Run<'a> {
    g: &'a Graph,
    params: &'a Params,
    record: ParamsRecord,
    hypothesis: Option<HypothesisReport>,
    trace: Option<TraceSummary>,
    removals: Option<RemovalTrace>,
}

/// Runs the whole pipeline. Never fails: every failure becomes an
/// inconclusive certificate naming the stage, and every claim is re-checked
/// by [`check_certificate`] before it is returned.
pub fn analyze(g: &Graph, params: &Params) -> Certificate {
    analyze_with_trace(g, params).0
}

/// [`analyze`], also returning the full removal trace when the reduction
/// loop ran.
pub fn analyze_with_trace(g: &Graph, params: &Params) -> (Certificate, Option<RemovalTrace>) {
    let mut run = Run {
        g,
        params,
        record: ParamsRecord::new(params, g.order()),
        hypothesis: None,
        trace: None,
        removals: None,
    };
    let payload = match run.pipeline() {
        Ok(p) => p,
        Err(stop) => inconclusive(stop),
    };
    let mut cert = run.finish(payload);
    if cert.outcome != OutcomeKind::Inconclusive {
        if let Err(e) = check_certificate(g, &cert) {
            cert = run.finish(inconclusive(
                Stop::new(InconclusiveReason::SelfCheckFailed, "self_check").with("error", e),
            ));
        }
    }
    (cert, run.removals)
}

fn inconclusive(stop: Stop) -> Payload {
    Payload::Inconclusive {
        reason: stop.reason,
        stage: stop.stage.to_string(),
        diagnostics: stop.diagnostics,
    }
}

fn saturate(x: &BigInt) -> u64 {
    x.to_u64()
        .unwrap_or(if x.sign() == num_bigint::Sign::Minus {
            0
        } else {
            u64::MAX
        })
}

impl Run<'_> {
    fn finish(&self, payload: Payload) -> Certificate {
        Certificate {
            version: CERTIFICATE_VERSION,
            params: self.record.clone(),
            hypothesis: self.hypothesis.clone(),
            outcome: payload.kind(),
            payload,
            trace_summary: self.trace.clone(),
        }
    }

    fn note(&mut self, text: impl Into<String>) {
        self.record.notes.push(text.into());
    }

    fn pipeline(&mut self) -> Result<Payload, Stop> {
        let (g, p) = (self.g, self.params);
        let n = g.order();
        if let Err(v) = p.validate(n) {
            return Err(
                Stop::new(InconclusiveReason::ParametersRejected, "validate")
                    .with("inequality", v.inequality)
                    .with("detail", v.detail),
            );
        }
        if p.mode == Mode::Relaxed {
            self.note("relaxed mode: theorem parameter ranges not enforced");
        }
        let hyp = check_hypothesis(g, p.r, p.eps).map_err(|e| Stop::from_error("hypothesis", e))?;
        self.hypothesis = Some(hyp.clone());
        if !hyp.holds {
            return Err(
                Stop::new(InconclusiveReason::HypothesisViolated, "hypothesis")
                    .with("edges", hyp.edges)
                    .with("required", hyp.required),
            );
        }

        let threshold = match &p.overrides.threshold {
            Some(t) => t.clone(),
            None => {
                if p.mode == Mode::Relaxed {
                    self.note("threshold defaulted to n^(r-1)/r^(r+6)");
                }
                paper_threshold(n, p.r).map_err(|e| Stop::from_error("reduce", e))?
            }
        };
        let (reduced, trace) =
            run_procedure(g, p.r, &threshold).map_err(|e| Stop::from_error("reduce", e))?;
        let (take_a, rule, target) = self.split(&trace, n)?;
        let clique_sum = trace
            .clique_sum()
            .map_err(|e| Stop::from_error("reduce", e))?;
        self.trace = Some(TraceSummary {
            steps: trace.len(),
            clique_sum,
            threshold: format_rational(&threshold),
            split_rule: rule.to_string(),
            split_target: saturate(&target),
            branch: if take_a { "a" } else { "b" }.to_string(),
        });
        self.removals = Some(trace);
        if take_a {
            self.branch_a(n)
        } else {
            self.branch_b(&reduced)
        }
    }

    /// Paper mode: `|trace| >= ⌈θ n²⌉`. Relaxed mode: the trace destroyed at
    /// least `⌈c^(1/(r+1)) n^(r+1)⌉` cliques, which is what `⌈θ n²⌉` removals
    /// at threshold `n^(r-1)/r^(r+6)` would guarantee.
    fn split(&self, trace: &RemovalTrace, n: usize) -> Result<(bool, &'static str, BigInt), Stop> {
        let p = self.params;
        let nn = real(n as u64);
        match p.mode {
            Mode::Paper => {
                let th = theta(p.c, p.r).map_err(|e| Stop::from_error("split", e))?;
                let target = precision::ceil_int(&(th * nn.clone() * nn));
                Ok((
                    BigInt::from(trace.len()) >= target,
                    "removed_edges >= ceil(theta n^2)",
                    target,
                ))
            }
            Mode::Relaxed => {
                let c = precision::real_f64(p.c).map_err(|e| Stop::from_error("split", e))?;
                let root = precision::pow_ratio(&c, 1, p.r as u64 + 1);
                let power = precision::powi(n as u64, p.r as i64 + 1);
                let target = precision::ceil_int(&(root * power));
                let sum = trace
                    .clique_sum()
                    .map_err(|e| Stop::from_error("split", e))?;
                Ok((
                    BigInt::from(sum) >= target,
                    "clique_sum >= ceil(c^(1/(r+1)) n^(r+1))",
                    target,
                ))
            }
        }
    }

    fn branch_a(&mut self, n: usize) -> Result<Payload, Stop> {
        let p = self.params;
        let profile: SizeProfile = match &p.overrides.profile {
            Some(pr) => *pr,
            None => theorem1_profile(n, p.r, p.c).map_err(|e| {
                Stop::new(InconclusiveReason::ProfileUnavailable, "profile").with("error", e)
            })?,
        };
        let (witness, finder) = match find_multipartite_exact(self.g, &profile, p.search_budget) {
            SearchOutcome::Found(w) => (w, Finder::Exact),
            SearchOutcome::NoneExists => {
                return Err(
                    Stop::new(InconclusiveReason::NoWitness, "multipartite_search")
                        .with("profile", profile),
                )
            }
            SearchOutcome::BudgetExhausted => match find_multipartite_greedy(self.g, &profile) {
                Some(w) => (w, Finder::Greedy),
                None => {
                    return Err(Stop::new(
                        InconclusiveReason::SearchBudgetExhausted,
                        "multipartite_search",
                    )
                    .with("budget", p.search_budget)
                    .with("profile", profile))
                }
            },
        };
        Ok(Payload::Multipartite {
            profile: profile.to_string(),
            parts: witness.parts,
            finder,
        })
    }

    fn branch_b(&mut self, reduced: &Graph) -> Result<Payload, Stop> {
        let (g, p) = (self.g, self.params);
        let n = g.order();
        let core = extract_partite_core(reduced, p.r).map_err(|e| Stop::from_error("core", e))?;
        let target = match (p.overrides.trim_target, p.mode) {
            (Some(t), _) => t,
            (None, Mode::Paper) => {
                let t = trim_target(n, p.r, p.eps, p.c).map_err(|e| Stop::from_error("trim", e))?;
                (t.max(0) as usize).min(n / p.r)
            }
            (None, Mode::Relaxed) => {
                self.note("trim target defaulted to the smallest core part, at most floor(n/r)");
                core.parts
                    .iter()
                    .map(Vec::len)
                    .min()
                    .unwrap_or(0)
                    .min(n / p.r)
            }
        };
        let trimmed = trim_to_size(&core, reduced, target).map_err(|e| {
            Stop::from_error("trim", e)
                .with("core_order", core.order)
                .with("target", target)
        })?;
        let extended =
            extend_to_turan(g, &trimmed.parts).map_err(|e| Stop::from_error("extend", e))?;
        let labels = labels_of(n, &extended).map_err(|e| Stop::from_error("extend", e))?;
        let polished = canonical_partition(&polish_labels(g, p.r, labels), p.r);
        let edit = edits_from_partition(g, &polished).map_err(|e| Stop::from_error("edit", e))?;

        let bound_real = theorem_bound_real(n, p.r, p.eps, p.c)
            .map_err(|e| Stop::from_error("bound", e))?
            * precision::real_f64(p.bound_multiplier())
                .map_err(|e| Stop::from_error("bound", e))?;
        let bound = precision::to_f64(&bound_real);
        let count_q = BigRational::from_integer(edit.count.into());
        if count_q >= precision::to_rational(&bound_real) || edit.count as f64 >= bound {
            return Err(Stop::new(InconclusiveReason::BoundNotMet, "bound")
                .with("count", edit.count)
                .with("bound", bound));
        }
        Ok(Payload::TuranEdit {
            partition: edit.partition,
            adds: edit.adds,
            removes: edit.removes,
            count: edit.count,
            bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dichotomy::Overrides;
    use crate::graph::{planted_turan, turan_graph};

    #[test]
    fn hypothesis_failure_is_inconclusive() {
        let cert = analyze(&Graph::empty(10), &Params::relaxed(2, 0.01, 0.01));
        assert_eq!(cert.reason(), Some(InconclusiveReason::HypothesisViolated));
        assert!(cert.trace_summary.is_none());
    }

    #[test]
    fn paper_mode_rejects_before_graph_work() {
        let cert = analyze(
            &turan_graph(12, 3).unwrap(),
            &Params::new(3, 1e-13, 1e-3, Mode::Paper),
        );
        assert_eq!(cert.reason(), Some(InconclusiveReason::ParametersRejected));
        assert!(cert.hypothesis.is_none());
        match cert.payload {
            Payload::Inconclusive { diagnostics, .. } => {
                assert_eq!(diagnostics["inequality"], crate::dichotomy::INEQ_C_UPPER)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn turan_graph_is_its_own_edit_target() {
        let cert = analyze(
            &turan_graph(12, 3).unwrap(),
            &Params::relaxed(3, 0.05, 0.01),
        );
        assert_eq!(cert.outcome, OutcomeKind::TuranEdit, "{}", cert.to_json());
        match cert.payload {
            Payload::TuranEdit { count, .. } => assert_eq!(count, 0),
            _ => unreachable!(),
        }
        assert_eq!(cert.trace_summary.unwrap().steps, 0);
    }

    #[test]
    fn planted_flips_are_undone() {
        let g = planted_turan(30, 3, 5, 7).unwrap();
        let cert = analyze(&g, &Params::relaxed(3, 0.05, 0.01));
        match &cert.payload {
            Payload::TuranEdit { count, .. } => assert!(*count <= 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tight_bound_degrades_to_inconclusive() {
        let g = planted_turan(12, 3, 3, 1).unwrap();
        let params = Params::relaxed(3, 0.05, 0.01).with_overrides(Overrides {
            bound_multiplier: Some(1e-9),
            ..Overrides::default()
        });
        let cert = analyze(&g, &params);
        assert_eq!(cert.reason(), Some(InconclusiveReason::BoundNotMet));
    }

    #[test]
    fn multipartite_branch_with_profile_override() {
        let g = crate::graph::complete_multipartite(&[3, 3, 3]).unwrap();
        let params = Params::relaxed(2, 0.2, 0.0).with_overrides(Overrides {
            profile: Some(SizeProfile::new(2, 2, 2).unwrap()),
            ..Overrides::default()
        });
        let cert = analyze(&g, &params);
        assert_eq!(
            cert.outcome,
            OutcomeKind::Multipartite,
            "{}",
            cert.to_json()
        );
        assert_eq!(cert.trace_summary.unwrap().branch, "a");
    }
}
