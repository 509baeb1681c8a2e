//! Complete multipartite subgraphs `K(s, .., s, t)`: size parameters, an
//! exact pruned search, a greedy fast path and a witness checker.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::precision::{self, real};

/// Class sizes `(s, .., s, t)` with `r_small` classes of size `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeProfile {
    pub r_small: usize,
    pub s: usize,
    pub t: usize,
}

impl SizeProfile {
    pub fn new(r_small: usize, s: usize, t: usize) -> Result<SizeProfile> {
        if r_small == 0 || s == 0 || t == 0 {
            return Err(Error::InvalidParameter(format!(
                "profile needs r_small, s, t >= 1, got ({r_small}, {s}, {t})"
            )));
        }
        Ok(SizeProfile { r_small, s, t })
    }

    /// Parses `s,s,..,s,t`: every entry but the last must be equal.
    pub fn parse(text: &str) -> Result<SizeProfile> {
        let sizes = text
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad profile entry {x:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let Some((&t, small)) = sizes.split_last() else {
            return Err(Error::InvalidParameter("empty profile".into()));
        };
        let Some(&s) = small.first() else {
            return Err(Error::InvalidParameter(
                "profile needs at least two classes".into(),
            ));
        };
        if small.iter().any(|&x| x != s) {
            return Err(Error::InvalidParameter(format!(
                "all classes but the last must share one size: {text}"
            )));
        }
        SizeProfile::new(small.len(), s, t)
    }

    pub fn class_count(&self) -> usize {
        self.r_small + 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut v = vec![self.s; self.r_small];
        v.push(self.t);
        v
    }

    pub fn total(&self) -> usize {
        self.r_small * self.s + self.t
    }
}

impl fmt::Display for SizeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes().iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Size parameters of the counting lemma: an `n`-vertex graph with at least
/// `c·n^r` cliques of order `r` contains `K_r(s, .., s, t)` with
/// `s = ⌊c^r ln n⌋` and `t = ⌈n^(1 - c^(r-1))⌉`. Requires `c^r ln n >= 1`.
pub fn fact2_parameters(n: usize, r: usize, c: f64) -> Result<SizeProfile> {
    if r < 2 {
        return Err(Error::InvalidParameter("clique order must be >= 2".into()));
    }
    if c.is_nan() || c <= 0.0 || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need c > 0 and n >= 2, got c = {c}, n = {n}"
        )));
    }
    let c_hp = precision::real_f64(c)?;
    let ln_n = precision::ln(&real(n as u64));
    let c_r = c_hp.powi((r as i64).into());
    let s_real = c_r * ln_n.clone();
    if s_real < real(1) {
        return Err(Error::InvalidParameter(format!(
            "c^r ln n >= 1 fails for n = {n}, r = {r}, c = {c}"
        )));
    }
    let exponent = real(1) - c_hp.powi((r as i64 - 1).into());
    let t_real = (exponent * ln_n).exp();
    profile_from_reals(r - 1, &s_real, &t_real)
}

/// Class sizes of the target subgraph `K_{r+1}(⌊c ln n⌋, .., ⌊c ln n⌋, ⌈n^(1-√c)⌉)`.
pub fn theorem1_profile(n: usize, r: usize, c: f64) -> Result<SizeProfile> {
    if r < 1 {
        return Err(Error::InvalidParameter("part count must be >= 1".into()));
    }
    if c.is_nan() || c <= 0.0 || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need c > 0 and n >= 2, got c = {c}, n = {n}"
        )));
    }
    let c_hp = precision::real_f64(c)?;
    let ln_n = precision::ln(&real(n as u64));
    let s_real = c_hp.clone() * ln_n.clone();
    if s_real < real(1) {
        return Err(Error::InvalidParameter(format!(
            "⌊c ln n⌋ = 0 for n = {n}, c = {c}: no meaningful witness"
        )));
    }
    let exponent = real(1) - precision::sqrt(&c_hp);
    let t_real = (exponent * ln_n).exp();
    profile_from_reals(r, &s_real, &t_real)
}

fn profile_from_reals(
    r_small: usize,
    s_real: &precision::Real,
    t_real: &precision::Real,
) -> Result<SizeProfile> {
    let too_big = || Error::InvalidParameter("class size exceeds usize".into());
    let s: usize = precision::floor_int(s_real)
        .try_into()
        .map_err(|_| too_big())?;
    let t: usize = precision::ceil_int(t_real)
        .try_into()
        .map_err(|_| too_big())?;
    SizeProfile::new(r_small, s, t.max(1))
}

/// Disjoint vertex classes with every cross-class pair an edge of the host.
/// Intra-class pairs are unconstrained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipartiteWitness {
    pub parts: Vec<Vec<usize>>,
}

impl MultipartiteWitness {
    /// One line per class, space-separated vertex ids.
    pub fn to_text(&self) -> String {
        self.parts
            .iter()
            .map(|p| {
                let ids: Vec<String> = p.iter().map(usize::to_string).collect();
                ids.join(" ") + "\n"
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "defect", rename_all = "snake_case")]
pub enum WitnessDefect {
    WrongClassCount {
        expected: usize,
        found: usize,
    },
    SizeMismatch {
        class: usize,
        expected: usize,
        found: usize,
    },
    VertexOutOfRange {
        vertex: usize,
    },
    NotDisjoint {
        vertex: usize,
    },
    MissingCrossEdge {
        u: usize,
        v: usize,
    },
}

impl fmt::Display for WitnessDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessDefect::WrongClassCount { expected, found } => {
                write!(f, "expected {expected} classes, found {found}")
            }
            WitnessDefect::SizeMismatch {
                class,
                expected,
                found,
            } => {
                write!(f, "class {class} has {found} vertices, expected {expected}")
            }
            WitnessDefect::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            WitnessDefect::NotDisjoint { vertex } => {
                write!(f, "not disjoint: vertex {vertex} repeats")
            }
            WitnessDefect::MissingCrossEdge { u, v } => write!(f, "missing cross edge ({u}, {v})"),
        }
    }
}

/// Checks class count and sizes, disjointness and cross-completeness.
pub fn verify_witness(
    g: &Graph,
    w: &MultipartiteWitness,
    profile: &SizeProfile,
) -> std::result::Result<(), WitnessDefect> {
    let sizes = profile.sizes();
    if w.parts.len() != sizes.len() {
        return Err(WitnessDefect::WrongClassCount {
            expected: sizes.len(),
            found: w.parts.len(),
        });
    }
    for (class, (part, &want)) in w.parts.iter().zip(&sizes).enumerate() {
        if part.len() != want {
            return Err(WitnessDefect::SizeMismatch {
                class,
                expected: want,
                found: part.len(),
            });
        }
    }
    let mut seen = VertexSet::new(g.order());
    for &v in w.parts.iter().flatten() {
        if v >= g.order() {
            return Err(WitnessDefect::VertexOutOfRange { vertex: v });
        }
        if seen.contains(v) {
            return Err(WitnessDefect::NotDisjoint { vertex: v });
        }
        seen.insert(v);
    }
    for (i, a) in w.parts.iter().enumerate() {
        for b in &w.parts[i + 1..] {
            for &x in a {
                for &y in b {
                    if !g.has_edge(x, y) {
                        return Err(WitnessDefect::MissingCrossEdge {
                            u: x.min(y),
                            v: x.max(y),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(MultipartiteWitness),
    NoneExists,
    /// The node budget ran out before the search space was exhausted.
    BudgetExhausted,
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 5_000_000;

struct ExactSearch<'a> {
    g: &'a Graph,
    profile: SizeProfile,
    budget: u64,
    nodes: u64,
    classes: Vec<Vec<usize>>,
}

enum Step {
    Found,
    Exhausted,
    Budget,
}

impl ExactSearch<'_> {
    /// Vertices still needed after class `class` is complete.
    fn demand_after(&self, class: usize) -> usize {
        (self.profile.r_small - class - 1) * self.profile.s + self.profile.t
    }

    /// `allowed`: unused vertices adjacent to every vertex of the finished
    /// classes. `common`: the part of `allowed` also adjacent to the partial
    /// current class.
    fn extend(&mut self, class: usize, allowed: &VertexSet, common: &VertexSet) -> Step {
        let s = self.profile.s;
        let current = &self.classes[class];
        if current.len() == s {
            if class + 1 == self.profile.r_small {
                let big: Vec<usize> = common.iter().take(self.profile.t).collect();
                if big.len() == self.profile.t {
                    self.classes.push(big);
                    return Step::Found;
                }
                return Step::Exhausted;
            }
            self.classes.push(Vec::new());
            match self.extend(class + 1, common, common) {
                Step::Exhausted => {
                    self.classes.pop();
                    return Step::Exhausted;
                }
                other => return other,
            }
        }

        // Ascending ids within a class; equal-size classes ordered by their
        // first vertex.
        let floor = match (current.last(), class) {
            (Some(&last), _) => Some(last),
            (None, 0) => None,
            (None, _) => Some(self.classes[class - 1][0]),
        };
        let mut candidates = allowed.clone();
        if let Some(f) = floor {
            candidates.retain_above(f);
        }
        let need_here = s - current.len();
        let demand = self.demand_after(class);
        if candidates.len() < need_here || common.len() < demand {
            return Step::Exhausted;
        }
        for v in candidates.iter() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::Budget;
            }
            let mut rest = candidates.clone();
            rest.retain_above(v);
            if rest.len() + 1 < need_here {
                break;
            }
            let next_common = common.intersection(self.g.neighbors(v));
            if next_common.len() < demand {
                continue;
            }
            self.classes[class].push(v);
            match self.extend(class, allowed, &next_common) {
                Step::Exhausted => {
                    self.classes[class].pop();
                }
                other => return other,
            }
        }
        Step::Exhausted
    }
}

/// Complete search for `K(s, .., s, t)` as a subgraph of `g`.
///
/// Classes are filled in profile order with ascending vertex ids; a branch is
/// cut as soon as the common neighbourhood of the partial assignment is
/// smaller than the remaining demand. The large class is taken last as the
/// `t` smallest ids of the final common neighbourhood. Worst case is
/// exponential; `budget` caps the number of vertex trials.
pub fn find_multipartite_exact(g: &Graph, profile: &SizeProfile, budget: u64) -> SearchOutcome {
    if profile.total() > g.order() {
        return SearchOutcome::NoneExists;
    }
    let all = VertexSet::full(g.order());
    let mut search = ExactSearch {
        g,
        profile: *profile,
        budget,
        nodes: 0,
        classes: vec![Vec::new()],
    };
    match search.extend(0, &all, &all) {
        Step::Found => {
            let w = MultipartiteWitness {
                parts: search.classes,
            };
            debug_assert!(verify_witness(g, &w, profile).is_ok());
            SearchOutcome::Found(w)
        }
        Step::Exhausted => SearchOutcome::NoneExists,
        Step::Budget => SearchOutcome::BudgetExhausted,
    }
}

/// One-sided fast path: each small class is grown one vertex at a time,
/// taking the candidate that keeps the common neighbourhood largest (ties:
/// smallest id). Returns only verified witnesses; `None` refutes nothing.
pub fn find_multipartite_greedy(g: &Graph, profile: &SizeProfile) -> Option<MultipartiteWitness> {
    if profile.total() > g.order() {
        return None;
    }
    let mut allowed = VertexSet::full(g.order());
    let mut parts = Vec::with_capacity(profile.class_count());
    for _ in 0..profile.r_small {
        let mut common = allowed.clone();
        let mut pool = allowed.clone();
        let mut class = Vec::with_capacity(profile.s);
        for _ in 0..profile.s {
            let best = pool
                .iter()
                .map(|v| (common.intersection_len(g.neighbors(v)), v))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))?;
            let v = best.1;
            class.push(v);
            pool.remove(v);
            common.intersect_with(g.neighbors(v));
        }
        class.sort_unstable();
        parts.push(class);
        allowed = common;
    }
    let big: Vec<usize> = allowed.iter().take(profile.t).collect();
    if big.len() < profile.t {
        return None;
    }
    parts.push(big);
    let w = MultipartiteWitness { parts };
    verify_witness(g, &w, profile).ok().map(|_| w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_multipartite, random_graph, turan_graph, Edge};
    use crate::oracle;
    use proptest::prelude::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| Edge::new(i, (i + 1) % n).unwrap())).unwrap()
    }

    #[test]
    fn witness_text_is_one_line_per_class() {
        let w = MultipartiteWitness {
            parts: vec![vec![0, 4], vec![1], vec![2, 3]],
        };
        assert_eq!(w.to_text(), "0 4\n1\n2 3\n");
    }

    #[test]
    fn fact2_examples() {
        assert_eq!(
            fact2_parameters(21, 2, 1.0).unwrap(),
            SizeProfile::new(1, 3, 1).unwrap()
        );
        assert_eq!(
            fact2_parameters(55, 2, 1.0).unwrap(),
            SizeProfile::new(1, 4, 1).unwrap()
        );
        assert!(fact2_parameters(21, 2, 0.5).is_err());
    }

    #[test]
    fn theorem1_examples() {
        assert_eq!(
            theorem1_profile(22027, 2, 0.25).unwrap(),
            SizeProfile::new(2, 2, 149).unwrap()
        );
        assert_eq!(
            theorem1_profile(100, 2, 1.0).unwrap(),
            SizeProfile::new(2, 4, 1).unwrap()
        );
        assert!(theorem1_profile(100, 2, 0.2).is_err());
    }

    #[test]
    fn profile_parsing() {
        assert_eq!(
            SizeProfile::parse("2,2,5").unwrap(),
            SizeProfile::new(2, 2, 5).unwrap()
        );
        assert_eq!(SizeProfile::parse("2,2,2").unwrap().to_string(), "2,2,2");
        assert!(SizeProfile::parse("2,3,5").is_err());
        assert!(SizeProfile::parse("4").is_err());
        assert!(SizeProfile::parse("0,1").is_err());
    }

    #[test]
    fn octahedron_is_its_own_witness() {
        let oct = complete_multipartite(&[2, 2, 2]).unwrap();
        let p = SizeProfile::new(2, 2, 2).unwrap();
        let SearchOutcome::Found(w) = find_multipartite_exact(&oct, &p, DEFAULT_SEARCH_BUDGET)
        else {
            panic!("octahedron must contain K(2,2,2)");
        };
        assert_eq!(w.parts, vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert_eq!(verify_witness(&oct, &w, &p), Ok(()));

        let mut moved = w.clone();
        let v = moved.parts[0].pop().unwrap();
        moved.parts[1].push(v);
        assert!(verify_witness(&oct, &moved, &p).is_err());

        let overlap = MultipartiteWitness {
            parts: vec![vec![0, 2], vec![2, 3], vec![4, 5]],
        };
        assert_eq!(
            verify_witness(&oct, &overlap, &p),
            Err(WitnessDefect::NotDisjoint { vertex: 2 })
        );
    }

    #[test]
    fn five_cycle_has_no_triangle() {
        let p = SizeProfile::new(2, 1, 1).unwrap();
        assert_eq!(
            find_multipartite_exact(&cycle(5), &p, DEFAULT_SEARCH_BUDGET),
            SearchOutcome::NoneExists
        );
        assert_eq!(find_multipartite_greedy(&cycle(5), &p), None);
    }

    #[test]
    fn exact_matches_oracle_on_dense_random() {
        let g = random_graph(20, 170, 11).unwrap();
        let p = SizeProfile::new(2, 2, 2).unwrap();
        let exact = find_multipartite_exact(&g, &p, DEFAULT_SEARCH_BUDGET);
        let brute = oracle::find_multipartite(&g, &p.sizes());
        assert_eq!(matches!(exact, SearchOutcome::Found(_)), brute.is_some());
    }

    #[test]
    fn budget_is_reported() {
        let g = turan_graph(40, 4).unwrap();
        let p = SizeProfile::new(4, 3, 3).unwrap();
        assert_eq!(
            find_multipartite_exact(&g, &p, 10),
            SearchOutcome::BudgetExhausted
        );
    }

    #[test]
    fn greedy_examples() {
        let k10 = turan_graph(10, 10).unwrap();
        let p = SizeProfile::new(2, 2, 2).unwrap();
        let w = find_multipartite_greedy(&k10, &p).unwrap();
        assert_eq!(verify_witness(&k10, &w, &p), Ok(()));
        assert_eq!(find_multipartite_greedy(&Graph::empty(10), &p), None);

        let t = turan_graph(30, 3).unwrap();
        let p3 = SizeProfile::new(2, 3, 3).unwrap();
        let w = find_multipartite_greedy(&t, &p3).unwrap();
        assert_eq!(verify_witness(&t, &w, &p3), Ok(()));
        for part in &w.parts {
            assert!(part.iter().all(|v| v % 3 == part[0] % 3));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn exact_agrees_with_oracle(n in 2usize..11, frac in 0.4f64..=1.0, seed: u64,
                                    r_small in 1usize..4, s in 1usize..3, t in 1usize..4) {
            prop_assume!(r_small * s + t <= 8);
            let total = n * (n - 1) / 2;
            let g = random_graph(n, (frac * total as f64) as usize, seed).unwrap();
            let p = SizeProfile::new(r_small, s, t).unwrap();
            let exact = find_multipartite_exact(&g, &p, u64::MAX);
            let brute = oracle::find_multipartite(&g, &p.sizes());
            match &exact {
                SearchOutcome::Found(w) => {
                    prop_assert!(verify_witness(&g, w, &p).is_ok());
                    prop_assert!(brute.is_some());
                }
                SearchOutcome::NoneExists => prop_assert!(brute.is_none()),
                SearchOutcome::BudgetExhausted => prop_assert!(false),
            }
            if let Some(w) = find_multipartite_greedy(&g, &p) {
                prop_assert!(verify_witness(&g, &w, &p).is_ok());
                prop_assert!(matches!(exact, SearchOutcome::Found(_)));
            }
        }

        #[test]
        fn adding_edges_keeps_witnesses(n in 4usize..11, seed: u64, extra in 1usize..10) {
            let total = n * (n - 1) / 2;
            let g = random_graph(n, total * 3 / 4, seed).unwrap();
            let p = SizeProfile::new(2, 1, 2).unwrap();
            let missing: Vec<Edge> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|&(a, b)| !g.has_edge(a, b))
                .take(extra)
                .map(|(a, b)| Edge::new(a, b).unwrap())
                .collect();
            let h = g.apply_edits(&missing, &[]).unwrap();
            if matches!(find_multipartite_exact(&g, &p, u64::MAX), SearchOutcome::Found(_)) {
                prop_assert!(matches!(find_multipartite_exact(&h, &p, u64::MAX), SearchOutcome::Found(_)));
            }
        }
    }
}
