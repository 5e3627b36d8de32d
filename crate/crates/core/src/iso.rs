//! Small-digraph isomorphism: a backtracking matcher with degree pre-filtering,
//! and a canonical code used to deduplicate digraphs up to isomorphism.

use std::collections::{BTreeSet, HashMap};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Largest order for which [`canonical_code`] is defined (n(n-1) bits fit in a `u128`).
pub const CANONICAL_LIMIT: usize = 11;

/// Per-vertex invariant: out-degree, in-degree, number of digons.
fn local_invariant(d: &Digraph, v: usize) -> (usize, usize, usize) {
    let digons = d
        .out_neighbors(v)
        .iter()
        .filter(|&&w| d.has_arc(w, v))
        .count();
    (d.out_degree(v), d.in_degree(v), digons)
}

type Refined = ((usize, usize, usize), Vec<(usize, usize, usize)>, Vec<(usize, usize, usize)>);

/// One round of refinement: the local invariant plus the sorted invariants of
/// out- and in-neighbours.
fn refined_invariants(d: &Digraph) -> Vec<Refined> {
    let local: Vec<_> = d.vertices().map(|v| local_invariant(d, v)).collect();
    d.vertices()
        .map(|v| {
            let mut outs: Vec<_> = d.out_neighbors(v).iter().map(|&w| local[w]).collect();
            let mut ins: Vec<_> = d.in_neighbors(v).iter().map(|&w| local[w]).collect();
            outs.sort_unstable();
            ins.sort_unstable();
            (local[v], outs, ins)
        })
        .collect()
}

/// Returns a bijection `map` with `(u, v)` an arc of `d1` iff `(map[u], map[v])`
/// is an arc of `d2`, or `None` when the digraphs are not isomorphic.
pub fn are_isomorphic(d1: &Digraph, d2: &Digraph) -> Option<Vec<usize>> {
    if d1.n() != d2.n() || d1.arc_count() != d2.arc_count() {
        return None;
    }
    let inv1 = refined_invariants(d1);
    let inv2 = refined_invariants(d2);
    let mut sorted1 = inv1.clone();
    let mut sorted2 = inv2.clone();
    sorted1.sort();
    sorted2.sort();
    if sorted1 != sorted2 {
        return None;
    }

    // Map the most constrained vertices first: rarest invariant, then highest degree.
    let mut freq: HashMap<&Refined, usize> = HashMap::new();
    for inv in &inv1 {
        *freq.entry(inv).or_default() += 1;
    }
    let mut order: Vec<usize> = d1.vertices().collect();
    order.sort_by_key(|&v| {
        (
            freq[&inv1[v]],
            std::cmp::Reverse(d1.out_degree(v) + d1.in_degree(v)),
            v,
        )
    });

    let n = d1.n();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(d1, d2, &inv1, &inv2, &order, 0, &mut map, &mut used) {
        debug_assert!(d1.arcs().all(|(u, v)| d2.has_arc(map[u], map[v])));
        if d1.arcs().all(|(u, v)| d2.has_arc(map[u], map[v])) {
            return Some(map);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn extend(
    d1: &Digraph,
    d2: &Digraph,
    inv1: &[Refined],
    inv2: &[Refined],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    for w in d2.vertices() {
        if used[w] || inv1[v] != inv2[w] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let mu = map[u];
            d1.has_arc(u, v) == d2.has_arc(mu, w) && d1.has_arc(v, u) == d2.has_arc(w, mu)
        });
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(d1, d2, inv1, inv2, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

/// An injective map `m` with `(m[u], m[v])` an arc of `host` for every arc
/// `(u, v)` of `pattern` (a not necessarily induced copy of `pattern`).
pub fn find_subgraph(pattern: &Digraph, host: &Digraph) -> Option<Vec<usize>> {
    if pattern.n() > host.n() || pattern.arc_count() > host.arc_count() {
        return None;
    }
    let mut order: Vec<usize> = pattern.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(pattern.out_degree(v) + pattern.in_degree(v)), v));
    let mut map = vec![usize::MAX; pattern.n()];
    let mut used = vec![false; host.n()];
    fn go(
        pattern: &Digraph,
        host: &Digraph,
        order: &[usize],
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&v) = order.get(depth) else {
            return true;
        };
        for w in host.vertices() {
            if used[w]
                || host.out_degree(w) < pattern.out_degree(v)
                || host.in_degree(w) < pattern.in_degree(v)
            {
                continue;
            }
            let fits = order[..depth].iter().all(|&u| {
                (!pattern.has_arc(u, v) || host.has_arc(map[u], w))
                    && (!pattern.has_arc(v, u) || host.has_arc(w, map[u]))
            });
            if fits {
                map[v] = w;
                used[w] = true;
                if go(pattern, host, order, depth + 1, map, used) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    go(pattern, host, &order, 0, &mut map, &mut used).then_some(map)
}

/// Isomorphism-invariant code: equal codes iff the digraphs are isomorphic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    pub n: usize,
    pub bits: u128,
}

impl CanonicalCode {
    /// The canonical representative this code encodes.
    pub fn to_digraph(self) -> Digraph {
        let n = self.n;
        let mut arcs = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if p != q && self.bits & (1u128 << pair_index(n, p, q)) != 0 {
                    arcs.push((p, q));
                }
            }
        }
        Digraph::from_arcs(n, arcs).expect("canonical codes decode to simple digraphs")
    }
}

fn pair_index(n: usize, p: usize, q: usize) -> usize {
    // Row-major over off-diagonal entries; the most significant bits belong to row 0.
    let idx = p * (n - 1) + if q > p { q - 1 } else { q };
    n * (n - 1) - 1 - idx
}

fn encode(d: &Digraph, position: &[usize]) -> u128 {
    let n = d.n();
    d.arcs()
        .fold(0u128, |acc, (u, v)| acc | 1u128 << pair_index(n, position[u], position[v]))
}

/// Canonical code: the maximum adjacency encoding over all vertex orders that
/// sort vertices by refined invariant. Exhaustive within invariant cells.
pub fn canonical_code(d: &Digraph) -> Result<CanonicalCode> {
    let n = d.n();
    if n > CANONICAL_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: CANONICAL_LIMIT,
        });
    }
    let inv = refined_invariants(d);
    let mut vertices: Vec<usize> = d.vertices().collect();
    vertices.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &vertices {
        match cells.last_mut() {
            Some(cell) if inv[cell[0]] == inv[v] => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }

    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut position = vec![0usize; n];
    let mut best = 0u128;
    let mut first = true;
    permute_cells(&cells, 0, &mut order, &mut |order| {
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let code = encode(d, &position);
        if first || code > best {
            best = code;
            first = false;
        }
    });
    Ok(CanonicalCode { n, bits: best })
}

fn permute_cells(
    cells: &[Vec<usize>],
    idx: usize,
    order: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    let Some(cell) = cells.get(idx) else {
        visit(order);
        return;
    };
    let base = order.len();
    let mut remaining = cell.clone();
    permute_within(&mut remaining, order, base + cell.len(), &mut |order| {
        permute_cells(cells, idx + 1, order, visit)
    });
}

fn permute_within(
    remaining: &mut Vec<usize>,
    order: &mut Vec<usize>,
    target: usize,
    next: &mut dyn FnMut(&mut Vec<usize>),
) {
    if order.len() == target {
        next(order);
        return;
    }
    for i in 0..remaining.len() {
        let v = remaining.remove(i);
        order.push(v);
        permute_within(remaining, order, target, next);
        order.pop();
        remaining.insert(i, v);
    }
}

/// All digraphs on `n` vertices up to isomorphism, as canonical representatives
/// sorted by code. Enumerates every labelled digraph, so `n <= 5`.
pub fn nonisomorphic_digraphs(n: usize) -> Result<Vec<Digraph>> {
    if n > 5 {
        return Err(Error::TooLarge { n, limit: 5 });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let mut codes = BTreeSet::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let arcs = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &a)| a);
        let d = Digraph::from_arcs(n, arcs)?;
        codes.insert(canonical_code(&d)?);
    }
    Ok(codes.into_iter().map(CanonicalCode::to_digraph).collect())
}
