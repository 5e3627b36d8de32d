//! Brute-force reference implementations, written against plain adjacency
//! matrices so they share no code with the library under test.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use dirminor::Digraph;
use proptest::prelude::*;

pub type Matrix = Vec<Vec<bool>>;

pub fn matrix(d: &Digraph) -> Matrix {
    let mut m = vec![vec![false; d.n()]; d.n()];
    for (u, v) in d.arcs() {
        m[u][v] = true;
    }
    m
}

pub fn from_matrix(m: &Matrix) -> Digraph {
    let n = m.len();
    let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| m[u][v]).map(move |v| (u, v)));
    Digraph::from_arcs(n, arcs).unwrap()
}

/// Reachability by repeated squaring-free transitive closure.
pub fn reach(m: &Matrix) -> Matrix {
    let n = m.len();
    let mut r = m.clone();
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// Strong components as sorted vertex lists, ordered by minimum vertex.
pub fn components(m: &Matrix) -> Vec<Vec<usize>> {
    let r = reach(m);
    let n = m.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if !seen[v] {
            let comp: Vec<usize> = (0..n).filter(|&w| r[v][w] && r[w][v]).collect();
            for &w in &comp {
                seen[w] = true;
            }
            out.push(comp);
        }
    }
    out
}

/// Whether the sub-digraph induced by `set` contains a directed cycle.
pub fn has_cycle(m: &Matrix, set: &[usize]) -> bool {
    let sub: Matrix = set.iter().map(|&u| set.iter().map(|&v| m[u][v]).collect()).collect();
    let r = reach(&sub);
    (0..set.len()).any(|i| (0..set.len()).any(|j| sub[i][j] && r[j][i]))
}

pub fn is_strong(m: &Matrix, set: &[usize]) -> bool {
    if set.is_empty() {
        return false;
    }
    let sub: Matrix = set.iter().map(|&u| set.iter().map(|&v| m[u][v]).collect()).collect();
    let r = reach(&sub);
    (0..set.len()).all(|j| r[0][j] && r[j][0])
}

/// Calls `f` with every set partition of `0..n` as a block-label vector.
pub fn for_each_partition(n: usize, f: &mut dyn FnMut(&[usize], usize)) {
    fn go(labels: &mut Vec<usize>, n: usize, blocks: usize, f: &mut dyn FnMut(&[usize], usize)) {
        if labels.len() == n {
            f(labels, blocks);
            return;
        }
        for b in 0..=blocks {
            labels.push(b);
            go(labels, n, blocks.max(b + 1), f);
            labels.pop();
        }
    }
    go(&mut Vec::new(), n, 0, f);
}

fn blocks(labels: &[usize], count: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); count];
    for (v, &b) in labels.iter().enumerate() {
        out[b].push(v);
    }
    out
}

/// Least number of blocks in a partition into acyclic sets.
pub fn dichromatic_oracle(d: &Digraph) -> usize {
    let m = matrix(d);
    let mut best = d.n();
    for_each_partition(d.n(), &mut |labels, count| {
        if count < best && blocks(labels, count).iter().all(|b| !has_cycle(&m, b)) {
            best = count;
        }
    });
    best
}

/// Least number of blocks in a partition into independent sets.
pub fn chromatic_oracle(g: &dirminor::Graph) -> usize {
    let mut best = g.n();
    for_each_partition(g.n(), &mut |labels, count| {
        if count < best
            && g.edges().all(|(u, v)| labels[u] != labels[v])
        {
            best = count;
        }
    });
    best
}

/// Exhaustive strong-model existence: every map of host vertices to
/// `{unused} ∪ pattern vertices`.
pub fn strong_model_oracle(host: &Digraph, pattern: &Digraph) -> bool {
    let m = matrix(host);
    let (n, p) = (host.n(), pattern.n());
    let mut labels = vec![0usize; n];
    loop {
        let mut sets = vec![Vec::new(); p];
        for (v, &l) in labels.iter().enumerate() {
            if l > 0 {
                sets[l - 1].push(v);
            }
        }
        if sets.iter().all(|s| is_strong(&m, s))
            && pattern
                .arcs()
                .all(|(a, b)| sets[a].iter().any(|&x| sets[b].iter().any(|&y| m[x][y])))
        {
            return true;
        }
        // Next label vector in base p + 1.
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            labels[i] += 1;
            if labels[i] <= p {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Whether `h` embeds in `m` as a (not necessarily induced) subgraph.
fn contains_subgraph(m: &Matrix, h: &Matrix) -> bool {
    let (n, k) = (m.len(), h.len());
    if k > n {
        return false;
    }
    permutations(n).iter().any(|perm| {
        (0..k).all(|a| (0..k).all(|b| !h[a][b] || m[perm[a]][perm[b]]))
    })
}

fn delete_vertex(m: &Matrix, v: usize) -> Matrix {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != v)
        .map(|(_, row)| row.iter().enumerate().filter(|&(j, _)| j != v).map(|(_, &b)| b).collect())
        .collect()
}

/// Merge `v` into `u` (both adjacencies united, loop dropped), then delete `v`.
fn merge(m: &Matrix, u: usize, v: usize) -> Matrix {
    let n = m.len();
    let mut r = m.clone();
    for w in 0..n {
        r[u][w] |= m[v][w];
        r[w][u] |= m[w][v];
    }
    r[u][u] = false;
    delete_vertex(&r, v)
}

/// Labelled breadth-first search over all deletion and contraction sequences.
/// Only practical for hosts on at most four vertices.
pub fn butterfly_minor_oracle(d: &Digraph, h: &Digraph) -> bool {
    let target = matrix(h);
    let start = matrix(d);
    let mut seen: HashSet<Matrix> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        if contains_subgraph(&m, &target) {
            return true;
        }
        let n = m.len();
        let mut next = Vec::new();
        for v in 0..n {
            next.push(delete_vertex(&m, v));
        }
        for u in 0..n {
            for v in 0..n {
                if m[u][v] {
                    let mut r = m.clone();
                    r[u][v] = false;
                    next.push(r);
                    let out_u = (0..n).filter(|&w| m[u][w]).count();
                    let in_v = (0..n).filter(|&w| m[w][v]).count();
                    if out_u == 1 || in_v == 1 {
                        next.push(merge(&m, u, v));
                    }
                }
            }
        }
        for r in next {
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    false
}

pub fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.35), n * n).prop_map(move |bits| {
            let arcs = (0..n * n)
                .filter(|&i| bits[i] && i / n != i % n)
                .map(|i| (i / n, i % n));
            Digraph::from_arcs(n, arcs).unwrap()
        })
    })
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = dirminor::Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.4), n * n).prop_map(move |bits| {
            let edges = (0..n * n)
                .filter(|&i| bits[i] && i / n < i % n)
                .map(|i| (i / n, i % n));
            dirminor::Graph::from_edges(n, edges).unwrap()
        })
    })
}
