//! Brute-force reference implementations.
//!
//! Each routine enumerates the raw search space directly (subsets, class
//! assignments, label vectors) and shares no code with the engines it is
//! used to check. Exponential; for small graphs only.

use crate::graph::{turan_part_sizes, Edge, Graph};

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

fn is_clique(g: &Graph, vs: &[usize]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
}

/// `k_r(G)` by testing every `r`-subset.
pub fn count_cliques(g: &Graph, r: usize) -> u64 {
    let mut count = 0;
    for_each_subset(g.order(), r, &mut |s| {
        if is_clique(g, s) {
            count += 1;
        }
    });
    count
}

/// Number of `r`-subsets containing both endpoints that are cliques.
pub fn cliques_on_edge(g: &Graph, e: Edge, r: usize) -> u64 {
    let mut count = 0;
    for_each_subset(g.order(), r, &mut |s| {
        if s.contains(&e.u()) && s.contains(&e.v()) && is_clique(g, s) {
            count += 1;
        }
    });
    count
}

/// `(js_r(G), least maximizing edge)`, scanning every vertex pair.
pub fn joint_size(g: &Graph, r: usize) -> (u64, Option<Edge>) {
    let mut best = (0, None);
    for u in 0..g.order() {
        for v in u + 1..g.order() {
            if !g.has_edge(u, v) {
                continue;
            }
            let e = Edge::new(u, v).expect("u < v");
            let c = cliques_on_edge(g, e, r);
            if c > best.0 {
                best = (c, Some(e));
            }
        }
    }
    best
}

/// Some assignment of disjoint vertex classes with the given sizes such that
/// every cross-class pair is an edge, if one exists.
///
/// Enumerates every vertex subset of the total size, then every way of
/// splitting it into classes in order.
pub fn find_multipartite(g: &Graph, sizes: &[usize]) -> Option<Vec<Vec<usize>>> {
    let total: usize = sizes.iter().sum();
    if total > g.order() {
        return None;
    }
    let mut found = None;
    for_each_subset(g.order(), total, &mut |subset| {
        if found.is_some() {
            return;
        }
        let mut label = vec![usize::MAX; total];
        if split(g, subset, sizes, &mut label, 0, &mut vec![0; sizes.len()]) {
            let mut classes = vec![Vec::new(); sizes.len()];
            for (i, &v) in subset.iter().enumerate() {
                classes[label[i]].push(v);
            }
            found = Some(classes);
        }
    });
    found
}

fn split(
    g: &Graph,
    subset: &[usize],
    sizes: &[usize],
    label: &mut [usize],
    i: usize,
    filled: &mut [usize],
) -> bool {
    if i == subset.len() {
        return (0..subset.len()).all(|a| {
            (a + 1..subset.len()).all(|b| label[a] == label[b] || g.has_edge(subset[a], subset[b]))
        });
    }
    for c in 0..sizes.len() {
        if filled[c] < sizes[c] {
            filled[c] += 1;
            label[i] = c;
            if split(g, subset, sizes, label, i + 1, filled) {
                return true;
            }
            filled[c] -= 1;
        }
    }
    false
}

/// Minimum, over all label vectors in `{0..r-1}^n` whose part sizes form the
/// Turán profile, of intra-part edges plus cross-part non-edges.
///
/// Returns `None` when `r^n` exceeds `2^26`.
pub fn edit_distance(g: &Graph, r: usize) -> Option<u64> {
    let n = g.order();
    let space = (r as u128).checked_pow(n as u32)?;
    if r == 0 || space > 1 << 26 {
        return None;
    }
    let mut want = turan_part_sizes(n, r);
    want.sort_unstable();
    let mut best = u64::MAX;
    let mut label = vec![0usize; n];
    for code in 0..space as u64 {
        let mut x = code;
        for l in label.iter_mut() {
            *l = (x % r as u64) as usize;
            x /= r as u64;
        }
        let mut sizes = vec![0usize; r];
        for &l in &label {
            sizes[l] += 1;
        }
        sizes.sort_unstable();
        if sizes != want {
            continue;
        }
        let mut cost = 0;
        for a in 0..n {
            for b in a + 1..n {
                if (label[a] == label[b]) == g.has_edge(a, b) {
                    cost += 1;
                }
            }
        }
        best = best.min(cost);
    }
    Some(best)
}
