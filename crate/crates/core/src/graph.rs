//! Simple undirected graphs on dense vertex ids, generators and the edge-list
//! text format.
//!
//! Adjacency is stored as one bitset row per vertex, so edge probes are O(1)
//! and common neighbourhoods are word-wise intersections.

use std::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// An undirected edge in canonical form `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Canonicalizes the endpoint order. Rejects self-loops.
    pub fn new(a: usize, b: usize) -> Result<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }

    #[inline]
    pub fn u(&self) -> usize {
        self.u
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.v
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.u, e.v]
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = Error;

    fn try_from(p: [usize; 2]) -> Result<Edge> {
        Edge::new(p[0], p[1])
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// A simple undirected graph on vertices `0..n`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<VertexSet>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph {
            rows: (0..n).map(|_| VertexSet::new(n)).collect(),
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Result<Graph> {
        let mut g = Graph::empty(n);
        for e in edges {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if g.has_edge(e.u, e.v) {
                return Err(Error::DuplicateEdge(e));
            }
            g.link(e.u, e.v);
        }
        Ok(g)
    }

    fn link(&mut self, a: usize, b: usize) {
        self.rows[a].insert(b);
        self.rows[b].insert(a);
        self.edge_count += 1;
    }

    fn unlink(&mut self, a: usize, b: usize) {
        self.rows[a].remove(b);
        self.rows[b].remove(a);
        self.edge_count -= 1;
    }

    /// `|G|`
    #[inline]
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    /// `e(G)`
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.rows.get(a).is_some_and(|row| row.contains(b))
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    /// `δ(G)`; zero for the empty graph.
    pub fn min_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.rows.iter().enumerate().flat_map(|(u, row)| {
            let mut above = row.clone();
            above.retain_above(u);
            above.iter().map(move |v| Edge { u, v }).collect::<Vec<_>>()
        })
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.order(),
            })
        }
    }

    /// The subgraph induced by `vertices`, relabelled `0..k` in the given
    /// order. The returned map sends new ids back to ids of `self`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut seen = VertexSet::new(self.order());
        for &v in vertices {
            self.check_vertex(v)?;
            if seen.contains(v) {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} listed twice in an induced subgraph"
                )));
            }
            seen.insert(v);
        }
        let mut sub = Graph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    sub.link(i, j);
                }
            }
        }
        Ok((sub, vertices.to_vec()))
    }

    /// Returns `(E(G) \ removes) ∪ adds`. Every add must be a non-edge, every
    /// remove an edge, and the two sets must be disjoint.
    pub fn apply_edits(&self, adds: &[Edge], removes: &[Edge]) -> Result<Graph> {
        let mut out = self.clone();
        for &e in adds {
            self.check_vertex(e.v)?;
            if removes.contains(&e) {
                return Err(Error::ConflictingEdit(e));
            }
            if out.has_edge(e.u, e.v) {
                return Err(if self.has_edge(e.u, e.v) {
                    Error::AlreadyAnEdge(e)
                } else {
                    Error::DuplicateEdge(e)
                });
            }
            out.link(e.u, e.v);
        }
        for &e in removes {
            self.check_vertex(e.v)?;
            if !self.has_edge(e.u, e.v) {
                return Err(Error::NotAnEdge(e));
            }
            if !out.has_edge(e.u, e.v) {
                return Err(Error::DuplicateEdge(e));
            }
            out.unlink(e.u, e.v);
        }
        Ok(out)
    }

    /// Removes one edge. Used by the reduction loop.
    pub(crate) fn remove_edge(&mut self, e: Edge) {
        debug_assert!(self.has_edge(e.u, e.v));
        self.unlink(e.u, e.v);
    }

    /// Parses the edge-list format: a header line `n m` followed by `m`
    /// lines `u v` with `0 <= u < v < n`.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let [n, m] = parse_pair(hline, header)?;
        let mut g = Graph::empty(n);
        let mut read = 0usize;
        for (line, l) in lines {
            if read == m {
                return Err(Error::Parse {
                    line,
                    msg: format!("more than the declared {m} edges"),
                });
            }
            let [u, v] = parse_pair(line, l)?;
            let bad = |msg: String| Error::Parse { line, msg };
            if u >= v {
                return Err(bad(if u == v {
                    format!("self-loop at {u}")
                } else {
                    format!("edge {u} {v} not in canonical order u < v")
                }));
            }
            if v >= n {
                return Err(bad(format!("vertex {v} out of range for n = {n}")));
            }
            if g.has_edge(u, v) {
                return Err(bad(format!("duplicate edge {u} {v}")));
            }
            g.link(u, v);
            read += 1;
        }
        if read != m {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                msg: format!("declared {m} edges, found {read}"),
            });
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.order(), self.edge_count());
        for e in self.edges() {
            s.push_str(&format!("{} {}\n", e.u, e.v));
        }
        s
    }
}

fn parse_pair(line: usize, l: &str) -> Result<[usize; 2]> {
    let mut it = l.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("not a nonnegative integer: {tok:?}"),
        })
    };
    let pair = [next()?, next()?];
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok(pair)
}

/// Part sizes of `T_r(n)`: the first `n mod r` parts have `⌈n/r⌉` vertices,
/// the rest `⌊n/r⌋`.
pub fn turan_part_sizes(n: usize, r: usize) -> Vec<usize> {
    (0..r).map(|i| n / r + usize::from(i < n % r)).collect()
}

/// The Turán graph `T_r(n)`. Vertex `v` lies in part `v mod r`.
pub fn turan_graph(n: usize, r: usize) -> Result<Graph> {
    if r == 0 {
        return Err(Error::InvalidParameter("Turán graph needs r >= 1".into()));
    }
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if a % r != b % r {
                g.link(a, b);
            }
        }
    }
    Ok(g)
}

/// Complete multipartite graph; parts are consecutive id ranges in the
/// given order.
pub fn complete_multipartite(sizes: &[usize]) -> Result<Graph> {
    if let Some(i) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::InvalidParameter(format!("part {i} has size 0")));
    }
    let n = sizes.iter().sum();
    let part: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
        .collect();
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if part[a] != part[b] {
                g.link(a, b);
            }
        }
    }
    Ok(g)
}

/// Unbiased integer in `0..bound` by rejection on raw 64-bit outputs.
fn uniform_below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = bound.wrapping_neg() % bound;
    loop {
        let x = rng.next_u64();
        if x >= zone {
            return x % bound;
        }
    }
}

/// Uniform `k`-subset of the vertex pairs of `K_n`.
///
/// Scheme: `ChaCha8Rng::seed_from_u64(seed)`; the `C(n,2)` pairs are listed
/// in lexicographic order and the first `k` slots of a partial Fisher–Yates
/// shuffle are kept, each swap index drawn by [`uniform_below`] on
/// `next_u64`. Returned in sampling order.
pub fn sample_pairs(n: usize, k: usize, seed: u64) -> Result<Vec<Edge>> {
    let total = n * n.saturating_sub(1) / 2;
    if k > total {
        return Err(Error::InvalidParameter(format!(
            "cannot choose {k} of the {total} vertex pairs"
        )));
    }
    let mut pairs: Vec<Edge> = Vec::with_capacity(total);
    for u in 0..n {
        for v in u + 1..n {
            pairs.push(Edge { u, v });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..k {
        let j = i + uniform_below(&mut rng, (total - i) as u64) as usize;
        pairs.swap(i, j);
    }
    pairs.truncate(k);
    Ok(pairs)
}

/// Uniform `m`-edge graph on `n` vertices (see [`sample_pairs`] for the
/// pinned pseudorandom scheme).
pub fn random_graph(n: usize, m: usize, seed: u64) -> Result<Graph> {
    Graph::from_edges(n, sample_pairs(n, m, seed)?)
}

/// `T_r(n)` with `flips` distinct vertex pairs toggled (pairs drawn as in
/// [`sample_pairs`]).
pub fn planted_turan(n: usize, r: usize, flips: usize, seed: u64) -> Result<Graph> {
    let mut g = turan_graph(n, r)?;
    for e in sample_pairs(n, flips, seed)? {
        if g.has_edge(e.u, e.v) {
            g.unlink(e.u, e.v);
        } else {
            g.link(e.u, e.v);
        }
    }
    Ok(g)
}
