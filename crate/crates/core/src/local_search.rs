//! Local search over vertex labellings, minimizing intra-part edges.
//!
//! Two move sets share one bookkeeping structure: free single-vertex moves
//! (used for core extraction) and size-preserving swaps/shifts (used for
//! Turán-size partitions, where minimizing intra-part edges is the same as
//! minimizing the edit count).

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::VertexSet;
use crate::graph::{turan_part_sizes, Graph};

/// Seeds of the random restarts; the canonical labelling `v mod r` is always
/// tried first.
pub const RESTART_SEEDS: [u64; 4] = [1, 2, 3, 4];

pub(crate) struct Labelling<'g> {
    g: &'g Graph,
    r: usize,
    pub labels: Vec<usize>,
    pub alive: VertexSet,
    /// `within[v * r + p]`: alive neighbours of `v` labelled `p`.
    within: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl<'g> Labelling<'g> {
    pub fn new(g: &'g Graph, r: usize, labels: Vec<usize>) -> Self {
        let n = g.order();
        let mut sizes = vec![0; r];
        for &l in &labels {
            sizes[l] += 1;
        }
        let mut within = vec![0; n * r];
        for v in 0..n {
            for w in g.neighbors(v).iter() {
                within[v * r + labels[w]] += 1;
            }
        }
        Labelling {
            g,
            r,
            labels,
            alive: VertexSet::full(n),
            within,
            sizes,
        }
    }

    #[inline]
    pub fn within(&self, v: usize, p: usize) -> usize {
        self.within[v * self.r + p]
    }

    /// Neighbours of `v` inside its own part.
    #[inline]
    pub fn intra_degree(&self, v: usize) -> usize {
        self.within(v, self.labels[v])
    }

    pub fn intra_edges(&self) -> usize {
        self.alive
            .iter()
            .map(|v| self.intra_degree(v))
            .sum::<usize>()
            / 2
    }

    fn relabel(&mut self, v: usize, to: usize) {
        let from = self.labels[v];
        if from == to {
            return;
        }
        for w in self.g.neighbors(v).iter() {
            self.within[w * self.r + from] -= 1;
            self.within[w * self.r + to] += 1;
        }
        self.labels[v] = to;
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
    }

    pub fn kill(&mut self, v: usize) {
        let l = self.labels[v];
        for w in self.g.neighbors(v).iter() {
            self.within[w * self.r + l] -= 1;
        }
        self.alive.remove(v);
        self.sizes[l] -= 1;
    }

    /// Ascending sweeps of single-vertex moves to the part with the fewest
    /// neighbours (ties: lowest index), taken only on strict improvement,
    /// until a sweep changes nothing.
    pub fn free_sweeps(&mut self) {
        loop {
            let mut moved = false;
            for v in self.alive.clone().iter() {
                let cur = self.labels[v];
                let best = (0..self.r)
                    .min_by_key(|&p| (self.within(v, p), p))
                    .expect("r >= 1");
                if self.within(v, best) < self.within(v, cur) {
                    self.relabel(v, best);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }

    /// Ascending sweeps over `u`: apply the best strictly improving
    /// size-profile-preserving change involving `u` (a swap with a vertex in
    /// another part, or a shift from a large part to a part one smaller);
    /// ties go to the smaller partner, shifts before swaps.
    pub fn balanced_sweeps(&mut self) {
        let n = self.g.order();
        loop {
            let mut changed = false;
            for u in 0..n {
                let a = self.labels[u];
                let mut best: Option<(usize, Change)> = None;
                for b in 0..self.r {
                    if b != a && self.sizes[a] == self.sizes[b] + 1 {
                        let gain = self.within(u, a) as i64 - self.within(u, b) as i64;
                        if gain > 0 && best.as_ref().is_none_or(|(g, _)| (gain as usize) > *g) {
                            best = Some((gain as usize, Change::Shift(b)));
                        }
                    }
                }
                for v in 0..n {
                    let b = self.labels[v];
                    if b == a {
                        continue;
                    }
                    let adj = usize::from(self.g.has_edge(u, v));
                    let before = self.within(u, a) + self.within(v, b);
                    let after = self.within(u, b) + self.within(v, a) - 2 * adj;
                    if after < before {
                        let gain = before - after;
                        if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                            best = Some((gain, Change::Swap(v)));
                        }
                    }
                }
                match best {
                    Some((_, Change::Shift(b))) => {
                        self.relabel(u, b);
                        changed = true;
                    }
                    Some((_, Change::Swap(v))) => {
                        let b = self.labels[v];
                        self.relabel(u, b);
                        self.relabel(v, a);
                        changed = true;
                    }
                    None => {}
                }
            }
            if !changed {
                break;
            }
        }
    }
}

enum Change {
    Shift(usize),
    Swap(usize),
}

pub(crate) fn canonical_labels(n: usize, r: usize) -> Vec<usize> {
    (0..n).map(|v| v % r).collect()
}

/// Independent uniform labels.
pub(crate) fn random_labels(n: usize, r: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.next_u64() % r as u64) as usize)
        .collect()
}

/// A uniformly shuffled labelling with Turán part sizes.
pub(crate) fn random_turan_labels(n: usize, r: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    let mut labels = vec![0; n];
    for (slot, &v) in order.iter().enumerate() {
        labels[v] = slot % r;
    }
    debug_assert_eq!(
        {
            let mut s = vec![0; r];
            labels.iter().for_each(|&l| s[l] += 1);
            s
        },
        turan_part_sizes(n, r)
    );
    labels
}
