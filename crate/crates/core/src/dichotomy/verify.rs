//! Independent re-check of a certificate against a graph. Uses only the
//! graph accessors and the bound formula; none of the search code.

use std::collections::BTreeSet;
use std::fmt;

use super::certificate::{Certificate, OutcomeKind, Payload, CERTIFICATE_VERSION};
use crate::graph::{turan_part_sizes, Edge, Graph};
use crate::multipartite::SizeProfile;
use crate::precision;
use crate::turan::theorem_bound_real;

/// Relative slack allowed between the stored bound and the recomputed one,
/// covering a float round trip through JSON.
const BOUND_RTOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyError(pub String);

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for VerifyError {}

fn fail<T>(msg: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError(msg.into()))
}

pub fn verify_certificate(g: &Graph, cert: &Certificate) -> bool {
    check_certificate(g, cert).is_ok()
}

/// Checks the claim made by `cert` against `g` from scratch. Inconclusive
/// certificates make no claim and pass once their header is consistent.
pub fn check_certificate(g: &Graph, cert: &Certificate) -> Result<(), VerifyError> {
    if cert.version != CERTIFICATE_VERSION {
        return fail(format!("unsupported version {}", cert.version));
    }
    if cert.outcome != cert.payload.kind() {
        return fail(format!(
            "outcome {} does not match the payload",
            cert.outcome
        ));
    }
    if cert.outcome == OutcomeKind::Inconclusive {
        return Ok(());
    }
    let n = g.order();
    if cert.params.n != n {
        return fail(format!(
            "certificate is for n = {}, graph has n = {n}",
            cert.params.n
        ));
    }
    match &cert.hypothesis {
        Some(h) if h.edges == g.edge_count() as u64 => {}
        Some(h) => {
            return fail(format!(
                "certificate records {} edges, graph has {}",
                h.edges,
                g.edge_count()
            ))
        }
        None => return fail("claim without a hypothesis record"),
    }
    match &cert.payload {
        Payload::Multipartite { profile, parts, .. } => {
            check_witness(g, cert.params.r, profile, parts)
        }
        Payload::TuranEdit {
            partition,
            adds,
            removes,
            count,
            bound,
        } => {
            check_edit(g, cert.params.r, partition, adds, removes, *count)?;
            check_bound(cert, *count, *bound)
        }
        Payload::Inconclusive { .. } => unreachable!("handled above"),
    }
}

fn check_witness(
    g: &Graph,
    r: usize,
    profile: &str,
    parts: &[Vec<usize>],
) -> Result<(), VerifyError> {
    let profile = SizeProfile::parse(profile).map_err(|e| VerifyError(e.to_string()))?;
    let sizes = profile.sizes();
    if sizes.len() != r + 1 {
        return fail(format!(
            "profile {profile} does not have r + 1 = {} classes",
            r + 1
        ));
    }
    if parts.len() != sizes.len() {
        return fail(format!(
            "{} classes, profile needs {}",
            parts.len(),
            sizes.len()
        ));
    }
    let mut seen = BTreeSet::new();
    for (i, (part, &want)) in parts.iter().zip(&sizes).enumerate() {
        if part.len() != want {
            return fail(format!(
                "class {i} has {} vertices, profile needs {want}",
                part.len()
            ));
        }
        for &v in part {
            if v >= g.order() {
                return fail(format!("vertex {v} out of range"));
            }
            if !seen.insert(v) {
                return fail(format!("vertex {v} appears twice"));
            }
        }
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            for &a in &parts[i] {
                for &b in &parts[j] {
                    if !g.has_edge(a, b) {
                        return fail(format!("cross pair ({a}, {b}) is not an edge"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_edit(
    g: &Graph,
    r: usize,
    partition: &[Vec<usize>],
    adds: &[Edge],
    removes: &[Edge],
    count: usize,
) -> Result<(), VerifyError> {
    let n = g.order();
    if partition.len() != r {
        return fail(format!("{} parts, expected {r}", partition.len()));
    }
    let mut label = vec![None; n];
    for (i, part) in partition.iter().enumerate() {
        for &v in part {
            match label.get_mut(v) {
                None => return fail(format!("vertex {v} out of range")),
                Some(Some(_)) => return fail(format!("vertex {v} in two parts")),
                Some(slot) => *slot = Some(i),
            }
        }
    }
    if let Some(v) = label.iter().position(Option::is_none) {
        return fail(format!("vertex {v} is in no part"));
    }
    let mut sizes: Vec<usize> = partition.iter().map(Vec::len).collect();
    let mut want = turan_part_sizes(n, r);
    sizes.sort_unstable();
    want.sort_unstable();
    if sizes != want {
        return fail(format!("part sizes {sizes:?} are not {want:?}"));
    }

    let add_set: BTreeSet<Edge> = adds.iter().copied().collect();
    let remove_set: BTreeSet<Edge> = removes.iter().copied().collect();
    if add_set.len() != adds.len() || remove_set.len() != removes.len() {
        return fail("repeated edit");
    }
    if count != adds.len() + removes.len() {
        return fail(format!(
            "count {count} != {} adds + {} removes",
            adds.len(),
            removes.len()
        ));
    }
    for e in &add_set {
        if e.v() >= n || g.has_edge(e.u(), e.v()) {
            return fail(format!("add {e} is not a non-edge of the graph"));
        }
    }
    for e in &remove_set {
        if e.v() >= n || !g.has_edge(e.u(), e.v()) {
            return fail(format!("remove {e} is not an edge of the graph"));
        }
    }
    // The edited graph must be exactly complete multipartite on the partition.
    for u in 0..n {
        for v in u + 1..n {
            let e = Edge::new(u, v).expect("u < v");
            let present = (g.has_edge(u, v) || add_set.contains(&e)) && !remove_set.contains(&e);
            let cross = label[u] != label[v];
            if present != cross {
                return fail(format!(
                    "after editing, ({u}, {v}) is {} but lies {} parts",
                    if present { "an edge" } else { "a non-edge" },
                    if cross { "across" } else { "inside" }
                ));
            }
        }
    }
    Ok(())
}

fn check_bound(cert: &Certificate, count: usize, bound: f64) -> Result<(), VerifyError> {
    let p = &cert.params;
    if (count as f64) >= bound || bound.is_nan() {
        return fail(format!("count {count} is not below the bound {bound}"));
    }
    let multiplier = p.overrides.bound_multiplier.unwrap_or(1.0);
    let base = theorem_bound_real(p.n, p.r, p.eps, p.c).map_err(|e| VerifyError(e.to_string()))?;
    let m = precision::real_f64(multiplier).map_err(|e| VerifyError(e.to_string()))?;
    let recomputed = precision::to_f64(&(base * m));
    if bound > recomputed * (1.0 + BOUND_RTOL) {
        return fail(format!(
            "stored bound {bound} exceeds the recomputed {recomputed}"
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dichotomy::{analyze, Overrides, Params};
    use crate::graph::{complete_multipartite, planted_turan};

    #[test]
    fn dropping_an_add_breaks_the_edit() {
        let g = planted_turan(30, 3, 6, 3).unwrap();
        let mut cert = analyze(&g, &Params::relaxed(3, 0.05, 0.01));
        assert!(verify_certificate(&g, &cert));
        let Payload::TuranEdit { adds, count, .. } = &mut cert.payload else {
            panic!("expected an edit");
        };
        assert!(!adds.is_empty(), "fixture should need an add");
        adds.pop();
        *count -= 1;
        assert!(!verify_certificate(&g, &cert));
    }

    #[test]
    fn witness_replayed_on_a_thinner_graph_fails() {
        let g = complete_multipartite(&[3, 3, 3]).unwrap();
        let params = Params::relaxed(2, 0.2, 0.0).with_overrides(Overrides {
            profile: Some(SizeProfile::new(2, 2, 2).unwrap()),
            ..Overrides::default()
        });
        let cert = analyze(&g, &params);
        assert!(verify_certificate(&g, &cert));
        let Payload::Multipartite { parts, .. } = &cert.payload else {
            panic!("expected a witness");
        };
        let cut = Edge::new(parts[0][0].min(parts[1][0]), parts[0][0].max(parts[1][0])).unwrap();
        let thinner = g.apply_edits(&[], &[cut]).unwrap();
        let mut replay = cert.clone();
        replay.hypothesis.as_mut().unwrap().edges -= 1;
        assert!(!verify_certificate(&thinner, &replay));
        // The header alone already catches the unpatched replay.
        assert!(!verify_certificate(&thinner, &cert));
    }

    #[test]
    fn inflated_bound_is_rejected() {
        let g = planted_turan(12, 3, 2, 5).unwrap();
        let mut cert = analyze(&g, &Params::relaxed(3, 0.05, 0.01));
        let Payload::TuranEdit { bound, .. } = &mut cert.payload else {
            panic!("expected an edit");
        };
        *bound *= 2.0;
        assert!(!verify_certificate(&g, &cert));
    }

    #[test]
    fn json_round_trip_still_verifies() {
        let g = planted_turan(18, 3, 4, 9).unwrap();
        let cert = analyze(&g, &Params::relaxed(3, 0.05, 0.01));
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(&g, &back));
    }
}
