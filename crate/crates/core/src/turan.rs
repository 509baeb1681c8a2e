//! Closeness to the Turán graph: induced `r`-partite cores, edit sets to a
//! complete `r`-partite graph with Turán part sizes, and the bound formulas.
//!
//! "Differs from `T_r(n)` in `k` edges" is read as the minimum, over vertex
//! partitions with the Turán size profile, of intra-part edges plus
//! cross-part non-edges. For a fixed size profile this is
//! `crosspairs - e(G) + 2 * intra`, so every search below minimizes
//! intra-part edges.

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::dichotomy::Mode;
use crate::error::{Error, Result};
use crate::graph::{turan_part_sizes, Edge, Graph};
use crate::local_search::{
    canonical_labels, random_labels, random_turan_labels, Labelling, RESTART_SEEDS,
};
use crate::precision::{self, powi, ratio, real, Real};
use crate::reducer::theta;

/// Largest order accepted by [`edit_distance_exact`].
pub const EXACT_EDIT_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct Fact1Bounds {
    /// `(1 - √(2α)) n`
    pub order_bound: f64,
    /// `(1 - 1/r - 2√(2α)) n`
    pub degree_bound: f64,
    /// Hypotheses that failed; only possible in relaxed mode.
    pub warnings: Vec<String>,
}

/// Guarantees of the induced-core lemma: a graph with more than
/// `(1 - 1/r - α) n²` edges and no large `(r+1)`-joint has an induced
/// `r`-partite subgraph of order at least `order_bound` and minimum degree
/// above `degree_bound`. The lemma needs `0 < α < r^-8 / 8` and `n > r^8`;
/// paper mode rejects violations, relaxed mode reports them.
pub fn fact1_bounds(n: usize, r: usize, alpha: f64, mode: Mode) -> Result<Fact1Bounds> {
    if r < 2 {
        return Err(Error::InvalidParameter("part count must be >= 2".into()));
    }
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha must be >= 0, got {alpha}"
        )));
    }
    let a = precision::real_f64(alpha)?;
    let limit = powi(r as u64, -8) / real(8);
    let mut warnings = Vec::new();
    if !(a > real(0) && a < limit) {
        warnings.push(format!(
            "0 < alpha < r^-8/8 fails for alpha = {alpha}, r = {r}"
        ));
    }
    let r8 = precision::powi(r as u64, 8);
    if real(n as u64) <= r8 {
        warnings.push(format!("n > r^8 fails for n = {n}, r = {r}"));
    }
    if mode == Mode::Paper && !warnings.is_empty() {
        return Err(Error::InvalidParameter(warnings.join("; ")));
    }
    let root = precision::sqrt(&(real(2) * a));
    let nn = real(n as u64);
    let order = (real(1) - root.clone()) * nn.clone();
    let degree = (real(1) - ratio(1, r as u64) - real(2) * root) * nn;
    Ok(Fact1Bounds {
        order_bound: precision::to_f64(&order),
        degree_bound: precision::to_f64(&degree),
        warnings,
    })
}

/// An induced `r`-partite subgraph: every part is independent in `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartiteCore {
    /// Ascending.
    pub host_vertices: Vec<usize>,
    /// Each part ascending; parts may be empty.
    pub parts: Vec<Vec<usize>>,
    pub order: usize,
    /// Minimum degree of the subgraph induced on `host_vertices`.
    pub min_degree: usize,
}

impl PartiteCore {
    fn from_parts(g: &Graph, mut parts: Vec<Vec<usize>>) -> PartiteCore {
        for p in parts.iter_mut() {
            p.sort_unstable();
        }
        let mut host: Vec<usize> = parts.iter().flatten().copied().collect();
        host.sort_unstable();
        let members = VertexSet::from_iter(g.order(), host.iter().copied());
        let min_degree = host
            .iter()
            .map(|&v| g.neighbors(v).intersection_len(&members))
            .min()
            .unwrap_or(0);
        PartiteCore {
            order: host.len(),
            host_vertices: host,
            parts,
            min_degree,
        }
    }

    /// Whether every part is an independent set of `g`.
    pub fn is_valid(&self, g: &Graph) -> bool {
        self.parts.iter().all(|p| {
            p.iter()
                .enumerate()
                .all(|(i, &a)| p[i + 1..].iter().all(|&b| !g.has_edge(a, b)))
        })
    }
}

fn peel(g: &Graph, r: usize, labels: Vec<usize>) -> PartiteCore {
    let mut lab = Labelling::new(g, r, labels);
    loop {
        lab.free_sweeps();
        if lab.intra_edges() == 0 {
            break;
        }
        let victim = lab
            .alive
            .iter()
            .max_by(|&a, &b| {
                lab.intra_degree(a)
                    .cmp(&lab.intra_degree(b))
                    .then(b.cmp(&a))
            })
            .expect("intra edges imply live vertices");
        lab.kill(victim);
    }
    let mut parts = vec![Vec::new(); r];
    for v in lab.alive.iter() {
        parts[lab.labels[v]].push(v);
    }
    PartiteCore::from_parts(g, parts)
}

/// Heuristic induced `r`-partite core.
///
/// Per restart: free single-vertex local search to a fixed point, then
/// repeatedly delete the vertex with the most neighbours in its own part
/// (ties: smallest id) and re-run the sweeps, until no intra-part edge is
/// left. Restarts are the canonical labelling `v mod r` and the seeds in
/// [`RESTART_SEEDS`]; the largest core wins, then the larger minimum degree,
/// then the earlier restart. The output is always a valid core.
pub fn extract_partite_core(g: &Graph, r: usize) -> Result<PartiteCore> {
    if r < 2 {
        return Err(Error::InvalidParameter("part count must be >= 2".into()));
    }
    let n = g.order();
    let starts = std::iter::once(canonical_labels(n, r))
        .chain(RESTART_SEEDS.iter().map(|&s| random_labels(n, r, s)));
    let mut best: Option<PartiteCore> = None;
    for labels in starts {
        let core = peel(g, r, labels);
        debug_assert!(core.is_valid(g));
        let better = match &best {
            None => true,
            Some(b) => (core.order, core.min_degree) > (b.order, b.min_degree),
        };
        if better {
            best = Some(core);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Cuts every part down to `target` vertices, keeping those of highest
/// degree inside the core (ties: smallest id).
pub fn trim_to_size(core: &PartiteCore, g: &Graph, target: usize) -> Result<PartiteCore> {
    if let Some((part, p)) = core
        .parts
        .iter()
        .enumerate()
        .find(|(_, p)| p.len() < target)
    {
        return Err(Error::PartTooSmall {
            part,
            size: p.len(),
            target,
        });
    }
    let members = VertexSet::from_iter(g.order(), core.host_vertices.iter().copied());
    let parts = core
        .parts
        .iter()
        .map(|p| {
            let mut ranked: Vec<(usize, usize)> = p
                .iter()
                .map(|&v| (g.neighbors(v).intersection_len(&members), v))
                .collect();
            ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            ranked.into_iter().take(target).map(|(_, v)| v).collect()
        })
        .collect();
    Ok(PartiteCore::from_parts(g, parts))
}

/// Edit set turning `G` into the complete `r`-partite graph on `partition`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuranEdit {
    pub partition: Vec<Vec<usize>>,
    /// Cross-part non-edges, lexicographic.
    pub adds: Vec<Edge>,
    /// Intra-part edges, lexicographic.
    pub removes: Vec<Edge>,
    pub count: usize,
}

/// Label vector of a partition covering `0..n` whose part sizes form the
/// Turán profile (in any order).
pub(crate) fn labels_of(n: usize, partition: &[Vec<usize>]) -> Result<Vec<usize>> {
    let r = partition.len();
    if r == 0 {
        return Err(Error::MalformedPartition("no parts".into()));
    }
    let mut labels = vec![usize::MAX; n];
    for (i, part) in partition.iter().enumerate() {
        for &v in part {
            if v >= n {
                return Err(Error::MalformedPartition(format!(
                    "vertex {v} out of range"
                )));
            }
            if labels[v] != usize::MAX {
                return Err(Error::MalformedPartition(format!(
                    "vertex {v} in two parts"
                )));
            }
            labels[v] = i;
        }
    }
    if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
        return Err(Error::MalformedPartition(format!("vertex {v} unassigned")));
    }
    let mut sizes: Vec<usize> = partition.iter().map(Vec::len).collect();
    let mut want = turan_part_sizes(n, r);
    sizes.sort_unstable();
    want.sort_unstable();
    if sizes != want {
        return Err(Error::MalformedPartition(format!(
            "part sizes {sizes:?} are not the Turán profile {want:?}"
        )));
    }
    Ok(labels)
}

/// Canonical part order: larger parts first, then by smallest member.
pub(crate) fn canonical_partition(labels: &[usize], r: usize) -> Vec<Vec<usize>> {
    let mut parts = vec![Vec::new(); r];
    for (v, &l) in labels.iter().enumerate() {
        parts[l].push(v);
    }
    parts.sort_by(|a, b| {
        b.len().cmp(&a.len()).then(
            a.first()
                .unwrap_or(&usize::MAX)
                .cmp(b.first().unwrap_or(&usize::MAX)),
        )
    });
    parts
}

fn relabel_canonical(labels: &[usize], r: usize) -> Vec<usize> {
    let mut out = vec![0; labels.len()];
    for (i, part) in canonical_partition(labels, r).iter().enumerate() {
        for &v in part {
            out[v] = i;
        }
    }
    out
}

/// The edit set for a partition with the Turán size profile. The partition
/// is stored in canonical order.
pub fn edits_from_partition(g: &Graph, partition: &[Vec<usize>]) -> Result<TuranEdit> {
    let n = g.order();
    let labels = labels_of(n, partition)?;
    let mut adds = Vec::new();
    let mut removes = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let same = labels[u] == labels[v];
            let adj = g.has_edge(u, v);
            if same && adj {
                removes.push(Edge::new(u, v)?);
            } else if !same && !adj {
                adds.push(Edge::new(u, v)?);
            }
        }
    }
    Ok(TuranEdit {
        partition: canonical_partition(&labels, partition.len()),
        count: adds.len() + removes.len(),
        adds,
        removes,
    })
}

struct ExactEdit<'a> {
    g: &'a Graph,
    /// Capacity per label; labels `0..big` have the larger size.
    caps: Vec<usize>,
    big: usize,
    labels: Vec<usize>,
    fill: Vec<usize>,
    best: usize,
    best_labels: Option<Vec<usize>>,
}

impl ExactEdit<'_> {
    fn dfs(&mut self, v: usize, cost: usize) {
        if cost >= self.best {
            return;
        }
        let n = self.g.order();
        if v == n {
            self.best = cost;
            self.best_labels = Some(self.labels.clone());
            return;
        }
        let r = self.caps.len();
        let mut opened_big = false;
        let mut opened_small = false;
        for p in 0..r {
            if self.fill[p] == self.caps[p] {
                continue;
            }
            // Parts of one size class are interchangeable: open only the
            // first empty one.
            if self.fill[p] == 0 {
                let flag = if p < self.big {
                    &mut opened_big
                } else {
                    &mut opened_small
                };
                if *flag {
                    continue;
                }
                *flag = true;
            }
            let mut delta = 0;
            for w in 0..v {
                let same = self.labels[w] == p;
                if same == self.g.has_edge(v, w) {
                    delta += 1;
                }
            }
            self.labels[v] = p;
            self.fill[p] += 1;
            self.dfs(v + 1, cost + delta);
            self.fill[p] -= 1;
        }
        self.labels[v] = usize::MAX;
    }
}

/// Minimum edit set over all Turán-size partitions, ties broken by the
/// lexicographically least canonical label vector. Exhaustive with
/// branch-and-bound; refuses `n > EXACT_EDIT_LIMIT`.
pub fn edit_distance_exact(g: &Graph, r: usize) -> Result<TuranEdit> {
    if r == 0 {
        return Err(Error::InvalidParameter("part count must be >= 1".into()));
    }
    let n = g.order();
    if n > EXACT_EDIT_LIMIT {
        return Err(Error::SizeGuard(format!(
            "exact edit distance limited to n <= {EXACT_EDIT_LIMIT}, got n = {n}"
        )));
    }
    let caps = turan_part_sizes(n, r);
    let big = if n.is_multiple_of(r) { r } else { n % r };
    let mut search = ExactEdit {
        g,
        caps,
        big,
        labels: vec![usize::MAX; n],
        fill: vec![0; r],
        best: usize::MAX,
        best_labels: None,
    };
    search.dfs(0, 0);
    let labels = search.best_labels.expect("some partition exists");
    edits_from_partition(g, &canonical_partition(&labels, r))
}

/// Improves a Turán-size labelling with size-preserving swaps and shifts.
pub(crate) fn polish_labels(g: &Graph, r: usize, labels: Vec<usize>) -> Vec<usize> {
    let mut lab = Labelling::new(g, r, labels);
    lab.balanced_sweeps();
    lab.labels
}

/// Best partition found by size-preserving local search from the canonical
/// labelling and the seeded random Turán labellings; an upper bound on the
/// exact distance. Ties: lower count, then lexicographically least canonical
/// label vector.
pub fn edit_distance_heuristic(g: &Graph, r: usize) -> Result<TuranEdit> {
    if r == 0 {
        return Err(Error::InvalidParameter("part count must be >= 1".into()));
    }
    let n = g.order();
    let starts = std::iter::once(canonical_labels(n, r))
        .chain(RESTART_SEEDS.iter().map(|&s| random_turan_labels(n, r, s)));
    let mut best: Option<(usize, Vec<usize>)> = None;
    for start in starts {
        let labels = relabel_canonical(&polish_labels(g, r, start), r);
        let lab = Labelling::new(g, r, labels.clone());
        let intra = lab.intra_edges();
        if best
            .as_ref()
            .is_none_or(|(c, l)| (intra, &labels) < (*c, l))
        {
            best = Some((intra, labels));
        }
    }
    let (_, labels) = best.expect("at least one restart");
    edits_from_partition(g, &canonical_partition(&labels, r))
}

/// Places every vertex outside `seed_parts` greedily (ascending id) into the
/// part where it adds the fewest edits against the vertices placed so far,
/// ties by part index, subject to reaching the Turán size profile.
pub fn extend_to_turan(g: &Graph, seed_parts: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let n = g.order();
    let r = seed_parts.len();
    if r == 0 {
        return Err(Error::MalformedPartition("no parts".into()));
    }
    let floor = n / r;
    let mut big_slots = n % r;
    let mut parts: Vec<Vec<usize>> = seed_parts.to_vec();
    let mut placed = VertexSet::new(n);
    for &v in parts.iter().flatten() {
        if v >= n || placed.contains(v) {
            return Err(Error::MalformedPartition(format!("bad seed vertex {v}")));
        }
        placed.insert(v);
    }
    for p in &parts {
        if p.len() > floor + usize::from(big_slots > 0) {
            return Err(Error::MalformedPartition(format!(
                "seed part of size {} exceeds the Turán profile",
                p.len()
            )));
        }
    }
    big_slots -= parts
        .iter()
        .filter(|p| p.len() > floor)
        .count()
        .min(big_slots);
    let total_placed = |parts: &Vec<Vec<usize>>| parts.iter().map(Vec::len).sum::<usize>();
    for v in 0..n {
        if placed.contains(v) {
            continue;
        }
        let already = total_placed(&parts);
        let best = (0..r)
            .filter(|&p| parts[p].len() < floor || (parts[p].len() == floor && big_slots > 0))
            .map(|p| {
                let inside = parts[p].iter().filter(|&&w| g.has_edge(v, w)).count();
                let cross_adj = parts
                    .iter()
                    .enumerate()
                    .filter(|&(q, _)| q != p)
                    .flat_map(|(_, q)| q.iter())
                    .filter(|&&w| g.has_edge(v, w))
                    .count();
                let cross = already - parts[p].len();
                (inside + (cross - cross_adj), p)
            })
            .min()
            .ok_or_else(|| Error::MalformedPartition("no part has room".into()))?;
        let p = best.1;
        if parts[p].len() == floor {
            big_slots -= 1;
        }
        parts[p].push(v);
        placed.insert(v);
    }
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    Ok(parts)
}

/// `(ε^(1/3) + c^(1/(3r+3))) n²`
pub fn theorem_bound_real(n: usize, r: usize, eps: f64, c: f64) -> Result<Real> {
    if eps.is_nan() || eps < 0.0 || c.is_nan() || c < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need eps >= 0 and c >= 0, got eps = {eps}, c = {c}"
        )));
    }
    let e = precision::pow_ratio(&precision::real_f64(eps)?, 1, 3);
    let cr = precision::pow_ratio(&precision::real_f64(c)?, 1, 3 * r as u64 + 3);
    let nn = real(n as u64);
    Ok((e + cr) * nn.clone() * nn)
}

pub fn theorem_bound(n: usize, r: usize, eps: f64, c: f64) -> Result<f64> {
    theorem_bound_real(n, r, eps, c).map(|b| precision::to_f64(&b))
}

/// Class size of the trimmed core: `⌈(1/r - 2(r-1)√(2(ε+θ))) n⌉`, which may
/// be zero or negative outside the admissible range.
pub fn trim_target(n: usize, r: usize, eps: f64, c: f64) -> Result<i64> {
    let th = theta(c, r)?;
    let slack = precision::sqrt(&(real(2) * (precision::real_f64(eps)? + th)));
    let x = (ratio(1, r as u64) - real(2 * (r as u64 - 1)) * slack) * real(n as u64);
    i64::try_from(precision::ceil_int(&x))
        .map_err(|_| Error::InvalidParameter("trim target out of range".into()))
}

/// The inequalities that turn the core bounds into the final edit bound,
/// evaluated at one parameter triple.
#[derive(Clone, Debug)]
pub struct ProofArithmetic {
    pub theta: Real,
    /// `ε + θ`
    pub slack: Real,
    /// `r^-8 / 8`
    pub slack_limit: Real,
    /// `θ + (2r² - r)√(2(ε+θ))`, the edit bound divided by `n²`.
    pub edit_factor: Real,
    /// `θ + 2(2r² - r)ε^(1/2) + 2(2r² - r)θ^(1/2)`
    pub split_roots: Real,
    /// `4r²ε^(1/2) + 4r^(r/2+5)c^(1/(2r+2))`
    pub coarse: Real,
    /// `ε^(1/3) + c^(1/(3r+3))`
    pub final_factor: Real,
}

impl ProofArithmetic {
    pub fn evaluate(r: usize, eps: &Real, c: &Real) -> ProofArithmetic {
        let rr = r as u64;
        let th = precision::pow_ratio(c, 1, rr + 1) * powi(rr, r as i64 + 6);
        let slack = eps.clone() + th.clone();
        let slack_limit = powi(rr, -8) / real(8);
        let k = real(2 * rr * rr - rr);
        let edit_factor = th.clone() + k.clone() * precision::sqrt(&(real(2) * slack.clone()));
        let split_roots = th.clone()
            + real(2) * k.clone() * precision::sqrt(eps)
            + real(2) * k * precision::sqrt(&th);
        // 4 r^(r/2 + 5) = 4 r^5 sqrt(r)^r
        let r_half_pow = precision::pow_ratio(&real(rr), r as i64 + 10, 2);
        let coarse = real(4 * rr * rr) * precision::sqrt(eps)
            + real(4) * r_half_pow * precision::pow_ratio(c, 1, 2 * rr + 2);
        let final_factor = precision::pow_ratio(eps, 1, 3) + precision::pow_ratio(c, 1, 3 * rr + 3);
        ProofArithmetic {
            theta: th,
            slack,
            slack_limit,
            edit_factor,
            split_roots,
            coarse,
            final_factor,
        }
    }

    /// Every link of the chain holds strictly.
    pub fn holds(&self) -> bool {
        self.slack < self.slack_limit
            && self.edit_factor < self.split_roots
            && self.split_roots < self.coarse
            && self.coarse < self.final_factor
    }
}
