//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//!
//! Every expected value here comes from a brute-force oracle in
//! `stability_core::oracle` or from hand arithmetic noted next to it.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stability_core::cliques::{cliques_on_edge, count_cliques, joint_size};
use stability_core::dichotomy::{
    analyze, verify_certificate, Certificate, Overrides, Params, Payload,
};
use stability_core::graph::{planted_turan, random_graph, turan_graph, Edge, Graph};
use stability_core::multipartite::{
    fact2_parameters, find_multipartite_exact, find_multipartite_greedy, verify_witness,
    SearchOutcome, SizeProfile, DEFAULT_SEARCH_BUDGET,
};
use stability_core::oracle;
use stability_core::precision::{self, powi, real};
use stability_core::reducer::{run_procedure, theta};
use stability_core::turan::{
    edit_distance_exact, edit_distance_heuristic, theorem_bound, ProofArithmetic,
};

use num_rational::BigRational;

/// Absolute tolerance for the float spot checks of criterion 7.
const SPOT_TOL: f64 = 1e-9;
const CLIQUE_CORPUS: usize = 200;
const REDUCER_CORPUS: usize = 100;
const FINDER_CORPUS: usize = 50;
const EDIT_CORPUS: usize = 50;
const ARITH_SAMPLES: usize = 1000;
const CLIQUE_TIME_LIMIT: Duration = Duration::from_secs(10);
const END_TO_END_TIME_LIMIT: Duration = Duration::from_secs(60);

/// Dense fixture for the witness branch; the seed was picked by running
/// `oracle::find_multipartite` over candidates (the check below re-runs it).
const DENSE_N: usize = 24;
const DENSE_M: usize = 262;
const DENSE_SEED: u64 = 5;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn below(rng: &mut ChaCha8Rng, k: u64) -> u64 {
    rng.next_u64() % k
}

fn corpus_graph(rng: &mut ChaCha8Rng, max_n: u64) -> Graph {
    let n = 1 + below(rng, max_n) as usize;
    let pairs = n * (n - 1) / 2;
    let m = below(rng, pairs as u64 + 1) as usize;
    random_graph(n, m, rng.next_u64()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn clique_corpus() -> Vec<(Graph, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    (0..CLIQUE_CORPUS)
        .map(|i| (corpus_graph(&mut rng, 10), 2 + i % 3))
        .collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let corpus = clique_corpus();
    let mut edge_checks = 0;
    for (i, (g, r)) in corpus.iter().enumerate() {
        let r = *r;
        let got = count_cliques(g, r).unwrap();
        let want = oracle::count_cliques(g, r);
        ensure(got == want, || {
            format!("graph {i}: k_{r} = {got}, oracle {want}")
        })?;
        for e in g.edges() {
            let got = cliques_on_edge(g, e, r).unwrap();
            let want = oracle::cliques_on_edge(g, e, r);
            ensure(got == want, || {
                format!("graph {i}, edge {e}: {got} vs oracle {want}")
            })?;
            edge_checks += 1;
        }
        let js = joint_size(g, r).unwrap();
        let want = oracle::joint_size(g, r);
        ensure((js.size, js.witness_edge) == want, || {
            format!("graph {i}: js_{r} = {js:?}, oracle {want:?}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < CLIQUE_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} graphs, {edge_checks} edge counts, {elapsed:.2?}",
        corpus.len()
    ))
}

fn criterion_2() -> Check {
    let corpus = clique_corpus();
    for (i, (g, r)) in corpus.iter().enumerate() {
        let r = *r as u64;
        let total: u64 = g
            .edges()
            .map(|e| cliques_on_edge(g, e, r as usize).unwrap())
            .sum();
        let k = count_cliques(g, r as usize).unwrap();
        ensure(total == r * (r - 1) / 2 * k, || {
            format!("graph {i}: edge sum {total} != C({r},2) * {k}")
        })?;
    }
    Ok(format!("{} graphs, exact", corpus.len()))
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for i in 0..REDUCER_CORPUS {
        let g = corpus_graph(&mut rng, 25);
        let r = 2 + i % 2;
        let t = (i / 2 % 3) as i64;
        let threshold = BigRational::from_integer(t.into());
        let (out, trace) = run_procedure(&g, r, &threshold).unwrap();
        let js = joint_size(&out, r + 1).unwrap().size;
        ensure(js as i64 <= t, || {
            format!("graph {i}: output js {js} > {t}")
        })?;
        let sum = trace.clique_sum().unwrap();
        let k = count_cliques(&g, r + 1).unwrap();
        ensure(sum <= k, || {
            format!("graph {i}: trace sum {sum} > k_(r+1) {k}")
        })?;
        let replay = g.apply_edits(&[], &trace.removed_edges()).unwrap();
        ensure(replay == out, || format!("graph {i}: replay differs"))?;
    }
    let k4 = turan_graph(4, 4).unwrap();
    let (_, trace) = run_procedure(&k4, 2, &BigRational::from_integer(0.into())).unwrap();
    let sum = trace.clique_sum().unwrap();
    // K4 has four triangles; every one is destroyed.
    ensure(sum == 4, || format!("K4 trace sum {sum}, expected 4"))?;
    Ok(format!("{REDUCER_CORPUS} graphs x (i)-(iii), K4 sum = 4"))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut found, mut refuted, mut greedy_hits) = (0, 0, 0);
    for i in 0..FINDER_CORPUS {
        let n = 4 + below(&mut rng, 9) as usize;
        let pairs = n * (n - 1) / 2;
        // Bias toward dense graphs so both answers occur.
        let m = pairs / 2 + below(&mut rng, (pairs - pairs / 2) as u64 + 1) as usize;
        let g = random_graph(n, m, rng.next_u64()).unwrap();
        let r_small = 1 + below(&mut rng, 3) as usize;
        let s = 1 + below(&mut rng, (7 / r_small).min(3) as u64) as usize;
        let t = 1 + below(&mut rng, (8 - r_small * s) as u64) as usize;
        let profile = SizeProfile::new(r_small, s, t).unwrap();
        assert!(profile.total() <= 8);
        let want = oracle::find_multipartite(&g, &profile.sizes());
        match find_multipartite_exact(&g, &profile, DEFAULT_SEARCH_BUDGET) {
            SearchOutcome::Found(w) => {
                ensure(want.is_some(), || {
                    format!("instance {i}: found {w:?}, oracle says none")
                })?;
                ensure(verify_witness(&g, &w, &profile).is_ok(), || {
                    format!("instance {i}: exact witness fails verification")
                })?;
                found += 1;
            }
            SearchOutcome::NoneExists => {
                ensure(want.is_none(), || {
                    format!("instance {i}: refuted, oracle found {want:?}")
                })?;
                refuted += 1;
            }
            SearchOutcome::BudgetExhausted => {
                return Err(format!("instance {i}: budget exhausted"))
            }
        }
        if let Some(w) = find_multipartite_greedy(&g, &profile) {
            ensure(verify_witness(&g, &w, &profile).is_ok(), || {
                format!("instance {i}: greedy witness fails verification")
            })?;
            greedy_hits += 1;
        }
    }
    let c5 = Graph::from_edges(5, (0..5).map(|i| Edge::new(i, (i + 1) % 5).unwrap())).unwrap();
    let triangle = SizeProfile::new(2, 1, 1).unwrap();
    ensure(
        find_multipartite_exact(&c5, &triangle, DEFAULT_SEARCH_BUDGET) == SearchOutcome::NoneExists,
        || "C5 with (1,1,1) not refuted".into(),
    )?;
    Ok(format!(
        "{FINDER_CORPUS} instances ({found} found, {refuted} refuted, {greedy_hits} greedy hits verified), C5 refuted"
    ))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for i in 0..EDIT_CORPUS {
        let g = corpus_graph(&mut rng, 8);
        let r = 2 + i % 2;
        let exact = edit_distance_exact(&g, r).unwrap();
        let want = oracle::edit_distance(&g, r).unwrap();
        ensure(exact.count as u64 == want, || {
            format!("instance {i}: exact {} vs oracle {want}", exact.count)
        })?;
        let heur = edit_distance_heuristic(&g, r).unwrap();
        ensure(heur.count >= exact.count, || {
            format!(
                "instance {i}: heuristic {} below exact {}",
                heur.count, exact.count
            )
        })?;
    }
    for n in 1..=10 {
        for r in 2..=4 {
            let d = edit_distance_exact(&turan_graph(n, r).unwrap(), r)
                .unwrap()
                .count;
            ensure(d == 0, || format!("T_{r}({n}) at distance {d}"))?;
        }
    }
    let k4 = edit_distance_exact(&turan_graph(4, 4).unwrap(), 2)
        .unwrap()
        .count;
    ensure(k4 == 2, || format!("K4 at r = 2: {k4}, expected 2"))?;
    Ok(format!(
        "{EDIT_CORPUS} instances vs oracle, Turán graphs at 0, K4 = 2"
    ))
}

struct Fixture {
    name: String,
    graph: Graph,
    params: Params,
}

fn planted_params() -> Params {
    Params::relaxed(3, 0.05, 0.01)
}

/// Small planted fixtures need more slack: each flip can cost an edge out
/// of a graph with only ~n²/3 of them.
fn small_planted_params() -> Params {
    Params::relaxed(3, 0.1, 0.01)
}

fn dense_params() -> Params {
    Params::relaxed(2, 0.1, 1e-4).with_overrides(Overrides {
        profile: Some(SizeProfile::new(2, 2, 2).unwrap()),
        ..Overrides::default()
    })
}

fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for k in 1..=10 {
        out.push(Fixture {
            name: format!("planted T_3(30), {k} flips"),
            graph: planted_turan(30, 3, k, 600 + k as u64).unwrap(),
            params: planted_params(),
        });
    }
    for n in 9..=12 {
        for k in 1..=3 {
            out.push(Fixture {
                name: format!("planted T_3({n}), {k} flips"),
                graph: planted_turan(n, 3, k, 700 + (n * 10 + k) as u64).unwrap(),
                params: small_planted_params(),
            });
        }
    }
    out.push(Fixture {
        name: format!("random_graph({DENSE_N}, {DENSE_M}, {DENSE_SEED})"),
        graph: random_graph(DENSE_N, DENSE_M, DENSE_SEED).unwrap(),
        params: dense_params(),
    });
    out
}

fn edit_count(cert: &Certificate) -> Option<usize> {
    match &cert.payload {
        Payload::TuranEdit { count, .. } => Some(*count),
        _ => None,
    }
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let all = fixtures();
    let mut counts = Vec::new();
    for (k, fx) in (1..=10).zip(&all[..10]) {
        let cert = analyze(&fx.graph, &fx.params);
        let count = edit_count(&cert).ok_or_else(|| format!("{}: {}", fx.name, cert.to_json()))?;
        ensure(count <= 2 * k, || {
            format!("{}: {count} edits > {}", fx.name, 2 * k)
        })?;
        ensure(verify_certificate(&fx.graph, &cert), || {
            format!("{}: does not verify", fx.name)
        })?;
        counts.push(count);
    }
    for fx in &all[10..all.len() - 1] {
        let cert = analyze(&fx.graph, &fx.params);
        let count = edit_count(&cert).ok_or_else(|| format!("{}: {}", fx.name, cert.to_json()))?;
        let want = oracle::edit_distance(&fx.graph, 3).expect("n <= 12 fits the oracle");
        ensure(count as u64 == want, || {
            format!("{}: {count} edits, oracle {want}", fx.name)
        })?;
        ensure(verify_certificate(&fx.graph, &cert), || {
            format!("{}: does not verify", fx.name)
        })?;
    }
    let dense = all.last().unwrap();
    ensure(
        oracle::find_multipartite(&dense.graph, &[2, 2, 2]).is_some(),
        || {
            format!(
                "{}: oracle finds no K_3(2,2,2); re-pin the seed",
                dense.name
            )
        },
    )?;
    let cert = analyze(&dense.graph, &dense.params);
    ensure(matches!(cert.payload, Payload::Multipartite { .. }), || {
        format!("{}: {}", dense.name, cert.to_json())
    })?;
    ensure(verify_certificate(&dense.graph, &cert), || {
        format!("{}: does not verify", dense.name)
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < END_TO_END_TIME_LIMIT, || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "T_3(30) edit counts {counts:?} for k = 1..10; {} small fixtures exact; dense fixture gives a witness; {elapsed:.2?}",
        all.len() - 11
    ))
}

/// `log2` of a sample strictly inside `(0, 2^hi)`, spread over `span` octaves.
fn sample_below(rng: &mut ChaCha8Rng, hi: f64, span: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    hi - f64::EPSILON.max(u) * span
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut min_margin: Option<f64> = None;
    for i in 0..ARITH_SAMPLES {
        let r: usize = 2 + i % 2;
        let log_r = (r as f64).log2();
        // 0 < eps < r^-24, 0 < c < r^-3(r+14)(r+1); the lower bound on c
        // only constrains n, which does not enter this chain.
        let eps = sample_below(&mut rng, -24.0 * log_r, 200.0).exp2();
        let c_hi = -3.0 * ((r + 14) * (r + 1)) as f64 * log_r;
        let c = sample_below(&mut rng, c_hi, 600.0).exp2();
        let e = precision::real_f64(eps).unwrap();
        let cc = precision::real_f64(c).unwrap();
        ensure(
            e < powi(r as u64, -24) && cc < powi(r as u64, -3 * ((r as i64 + 14) * (r as i64 + 1))),
            || format!("sample {i}: ({r}, {eps:e}, {c:e}) not admissible"),
        )?;
        let chain = ProofArithmetic::evaluate(r, &e, &cc);
        ensure(chain.slack < chain.slack_limit, || {
            format!("sample {i}: eps + theta >= r^-8/8 at ({r}, {eps:e}, {c:e})")
        })?;
        ensure(chain.edit_factor < chain.final_factor, || {
            format!("sample {i}: edit factor not below eps^(1/3) + c^(1/(3r+3)) at ({r}, {eps:e}, {c:e})")
        })?;
        ensure(chain.holds(), || {
            format!("sample {i}: intermediate link fails")
        })?;
        let margin = precision::to_f64(&(chain.final_factor.clone() / chain.edit_factor.clone()));
        min_margin = Some(min_margin.map_or(margin, |m| m.min(margin)));
    }
    let th = precision::to_f64(&theta(1.0, 2).unwrap());
    // 1^(1/3) * 2^8
    ensure((th - 256.0).abs() < SPOT_TOL, || {
        format!("theta(1, 2) = {th}")
    })?;
    let b = theorem_bound(10, 3, 1e-6, 1e-12).unwrap();
    // (10^-2 + 10^-1) * 100
    ensure((b - 11.0).abs() < SPOT_TOL, || {
        format!("theorem_bound = {b}")
    })?;
    let f2 = fact2_parameters(21, 2, 1.0).unwrap();
    // s = floor(ln 21) = 3, t = ceil(21^0) = 1
    ensure((f2.s, f2.t) == (3, 1), || {
        format!("fact2_parameters(21, 2, 1) = {f2}")
    })?;
    ensure(precision::ln(&real(21)) > real(3), || "ln 21 <= 3".into())?;
    Ok(format!(
        "{ARITH_SAMPLES} samples, min ratio final/edit factor {:.3e}; spot checks pinned",
        min_margin.unwrap_or(f64::NAN)
    ))
}

fn criterion_8() -> Check {
    let all = fixtures();
    for fx in &all {
        let a = analyze(&fx.graph, &fx.params).to_json();
        let b = analyze(&fx.graph, &fx.params).to_json();
        ensure(a == b, || {
            format!("{}: certificates differ between runs", fx.name)
        })?;
    }
    Ok(format!("{} fixtures byte-identical across runs", all.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 clique oracle equivalence", criterion_1),
        ("2 handshake identity", criterion_2),
        ("3 reduction loop contract", criterion_3),
        ("4 multipartite finder", criterion_4),
        ("5 edit distance", criterion_5),
        ("6 end-to-end dichotomy", criterion_6),
        ("7 proof arithmetic", criterion_7),
        ("8 determinism", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
