//! Exact dichromatic and chromatic number solvers with witness colourings.
//!
//! `dichromatic_number` is a memoised branch-and-bound over maximal acyclic
//! subsets: the state is the set of uncoloured vertices, and each step peels
//! off one maximal acyclic subset containing the highest-priority remaining
//! vertex. Taking only maximal subsets loses nothing because the dichromatic
//! number is monotone under taking induced subdigraphs.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bits::{bit, full, members, Adjacency, Mask};
use crate::digraph::{Digraph, VertexSet};
use crate::error::{invalid, Result};
use crate::graph::Graph;

/// A colouring of a digraph whose colour classes are meant to be acyclic.
/// Use [`AcyclicColoring::is_valid_for`] to check it against a host.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcyclicColoring {
    pub k: usize,
    pub colors: Vec<usize>,
}

impl AcyclicColoring {
    pub fn classes(&self) -> Vec<VertexSet> {
        let mut classes = vec![VertexSet::new(); self.k];
        for (v, &c) in self.colors.iter().enumerate() {
            if c < self.k {
                classes[c].insert(v);
            }
        }
        classes
    }

    pub fn colors_used(&self) -> usize {
        self.classes().iter().filter(|c| !c.is_empty()).count()
    }

    pub fn is_valid_for(&self, d: &Digraph) -> bool {
        self.colors.len() == d.n()
            && self.colors.iter().all(|&c| c < self.k)
            && find_monochromatic_cycle(d, &self.colors)
                .map(|c| c.is_none())
                .unwrap_or(false)
    }
}

/// A colouring of an undirected graph meant to be proper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperColoring {
    pub k: usize,
    pub colors: Vec<usize>,
}

impl ProperColoring {
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.colors.len() == g.n()
            && self.colors.iter().all(|&c| c < self.k)
            && g.edges().all(|(u, v)| self.colors[u] != self.colors[v])
    }
}

/// Highest total degree first, ties to the lower index.
fn degree_order(adj: &Adjacency) -> Vec<usize> {
    let mut order: Vec<usize> = (0..adj.n()).collect();
    order.sort_by_key(|&v| {
        (
            std::cmp::Reverse(adj.out[v].count_ones() + adj.inn[v].count_ones()),
            v,
        )
    });
    order
}

/// Exact `k`-dicolourability. `k = 1` is plain acyclicity and works for any
/// order; `k >= 2` runs a backtracking search over 64-bit vertex masks.
pub fn is_k_dicolorable(d: &Digraph, k: usize) -> Result<Option<AcyclicColoring>> {
    if k == 0 {
        return invalid("k must be positive");
    }
    if k == 1 {
        return Ok(d.is_acyclic().then(|| AcyclicColoring {
            k: 1,
            colors: vec![0; d.n()],
        }));
    }
    let adj = Adjacency::of(d)?;
    let order = degree_order(&adj);
    Ok(dicolor_set(&adj, &order, k).map(|classes| {
        let mut colors = vec![0; d.n()];
        for (c, &class) in classes.iter().enumerate() {
            for v in members(class) {
                colors[v] = c;
            }
        }
        AcyclicColoring { k, colors }
    }))
}

/// Backtracking acyclic `k`-colouring of the vertices listed in `order`.
/// Colours are opened in order, so colour `c` is only tried once `c - 1` is in use.
pub(crate) fn dicolor_set(adj: &Adjacency, order: &[usize], k: usize) -> Option<Vec<Mask>> {
    fn go(adj: &Adjacency, order: &[usize], classes: &mut Vec<Mask>, opened: usize) -> bool {
        let Some((&v, rest)) = order.split_first() else {
            return true;
        };
        let limit = (opened + 1).min(classes.len());
        for c in 0..limit {
            if adj.extends_acyclic(classes[c], v) {
                classes[c] |= bit(v);
                if go(adj, rest, classes, opened.max(c + 1)) {
                    return true;
                }
                classes[c] &= !bit(v);
            }
        }
        false
    }
    let mut classes = vec![0; k];
    go(adj, order, &mut classes, 0).then_some(classes)
}

/// Acyclic 2-colouring of `set`, if one exists.
pub(crate) fn two_dicolor(adj: &Adjacency, set: Mask) -> Option<[Mask; 2]> {
    let mut order: Vec<usize> = members(set).collect();
    order.sort_by_key(|&v| {
        (
            std::cmp::Reverse((adj.out[v] & set).count_ones() + (adj.inn[v] & set).count_ones()),
            v,
        )
    });
    dicolor_set(adj, &order, 2).map(|c| [c[0], c[1]])
}

/// An acyclic 2-colouring maintained under vertex additions. New vertices are
/// first placed greedily; only when that fails is the whole set re-solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoDicoloring {
    pub classes: [Mask; 2],
}

impl TwoDicoloring {
    pub fn singleton(v: usize) -> Self {
        TwoDicoloring {
            classes: [bit(v), 0],
        }
    }

    pub fn set(&self) -> Mask {
        self.classes[0] | self.classes[1]
    }

    pub fn color_of(&self, v: usize) -> Option<usize> {
        (0..2).find(|&c| self.classes[c] & bit(v) != 0)
    }

    pub fn is_valid(&self, adj: &Adjacency) -> bool {
        self.classes[0] & self.classes[1] == 0
            && adj.is_acyclic(self.classes[0])
            && adj.is_acyclic(self.classes[1])
    }

    /// The colouring extended by `added`, or `None` if the enlarged set has
    /// dichromatic number above 2.
    pub fn extended(&self, adj: &Adjacency, added: &[usize]) -> Option<TwoDicoloring> {
        let mut classes = self.classes;
        let greedy = added.iter().all(|&v| {
            for class in classes.iter_mut() {
                if adj.extends_acyclic(*class, v) {
                    *class |= bit(v);
                    return true;
                }
            }
            false
        });
        if greedy {
            return Some(TwoDicoloring { classes });
        }
        let set = self.set() | crate::bits::from_iter(added.iter().copied());
        two_dicolor(adj, set).map(|classes| TwoDicoloring { classes })
    }
}

/// Exact dichromatic number with a witness using exactly that many colours.
/// The empty digraph has dichromatic number 0.
pub fn dichromatic_number(d: &Digraph) -> Result<(usize, AcyclicColoring)> {
    let adj = Adjacency::of(d)?;
    let order = degree_order(&adj);
    let mut rank = vec![0; d.n()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut solver = DichromaticSolver {
        adj: &adj,
        order: &order,
        memo: HashMap::new(),
    };
    let all = full(d.n());
    let k = solver.solve(all);

    let mut colors = vec![0; d.n()];
    let mut rest = all;
    let mut c = 0;
    while rest != 0 {
        let chosen = solver.memo[&rest].1;
        for v in members(chosen) {
            colors[v] = c;
        }
        rest &= !chosen;
        c += 1;
    }
    debug_assert_eq!(c, k);
    Ok((k, AcyclicColoring { k, colors }))
}

struct DichromaticSolver<'a> {
    adj: &'a Adjacency,
    order: &'a [usize],
    /// remaining set -> (colours needed, first class of an optimal colouring)
    memo: HashMap<Mask, (usize, Mask)>,
}

impl DichromaticSolver<'_> {
    fn solve(&mut self, set: Mask) -> usize {
        if set == 0 {
            return 0;
        }
        if let Some(&(k, _)) = self.memo.get(&set) {
            return k;
        }
        if self.adj.is_acyclic(set) {
            self.memo.insert(set, (1, set));
            return 1;
        }
        let lower = self.digon_clique_bound(set).max(2);
        let pivot = *self.order.iter().find(|&&v| set & bit(v) != 0).unwrap();
        let candidates: Vec<usize> = self
            .order
            .iter()
            .copied()
            .filter(|&v| v != pivot && set & bit(v) != 0)
            .collect();
        let mut subsets = Vec::new();
        maximal_acyclic_subsets(self.adj, set, bit(pivot), &candidates, &mut subsets);

        let mut best = (usize::MAX, 0);
        for class in subsets {
            let k = 1 + self.solve(set & !class);
            if k < best.0 {
                best = (k, class);
                if k <= lower {
                    break;
                }
            }
        }
        self.memo.insert(set, best);
        best.0
    }

    /// Size of a greedily grown clique of digons: a lower bound on the colours needed.
    fn digon_clique_bound(&self, set: Mask) -> usize {
        let mut clique: Mask = 0;
        for &v in self.order {
            if set & bit(v) == 0 {
                continue;
            }
            let digon_nbrs = self.adj.out[v] & self.adj.inn[v];
            if clique & !digon_nbrs == 0 {
                clique |= bit(v);
            }
        }
        clique.count_ones() as usize
    }
}

/// Pushes every maximal acyclic subset of `set` containing `chosen`, in the
/// include-first order of `candidates`.
fn maximal_acyclic_subsets(
    adj: &Adjacency,
    set: Mask,
    chosen: Mask,
    candidates: &[usize],
    out: &mut Vec<Mask>,
) {
    let Some((&w, rest)) = candidates.split_first() else {
        // Maximal iff every outsider closes a cycle.
        if members(set & !chosen).all(|x| !adj.extends_acyclic(chosen, x)) {
            out.push(chosen);
        }
        return;
    };
    if adj.extends_acyclic(chosen, w) {
        maximal_acyclic_subsets(adj, set, chosen | bit(w), rest, out);
    }
    // Leaving `w` out only pays off if `w` can still end up on a cycle.
    let reachable = chosen | crate::bits::from_iter(rest.iter().copied());
    if !adj.extends_acyclic(reachable, w) {
        maximal_acyclic_subsets(adj, set, chosen, rest, out);
    }
}

/// Exact chromatic number with a proper witness colouring.
pub fn chromatic_number(g: &Graph) -> Result<(usize, ProperColoring)> {
    let adj = Adjacency::of_graph(g)?;
    let n = g.n();
    if n == 0 {
        return Ok((0, ProperColoring { k: 0, colors: vec![] }));
    }
    let order = degree_order(&adj);
    let lower = {
        let mut clique: Mask = 0;
        for &v in &order {
            if clique & !adj.out[v] == 0 {
                clique |= bit(v);
            }
        }
        clique.count_ones() as usize
    };
    for k in lower.max(1)..=n {
        let mut colors = vec![usize::MAX; n];
        if color_graph(&adj, &order, k, 0, &mut colors) {
            return Ok((k, ProperColoring { k, colors }));
        }
    }
    unreachable!("n colours always suffice")
}

fn color_graph(adj: &Adjacency, order: &[usize], k: usize, opened: usize, colors: &mut [usize]) -> bool {
    let Some((&v, rest)) = order.split_first() else {
        return true;
    };
    for c in 0..(opened + 1).min(k) {
        if members(adj.out[v]).all(|w| colors[w] != c) {
            colors[v] = c;
            if color_graph(adj, rest, k, opened.max(c + 1), colors) {
                return true;
            }
            colors[v] = usize::MAX;
        }
    }
    false
}

/// A shortest directed cycle all of whose vertices share a colour, as a vertex
/// sequence starting at its lowest possible start vertex; `None` iff the
/// colouring is acyclic. Works for digraphs of any order.
pub fn find_monochromatic_cycle(d: &Digraph, colors: &[usize]) -> Result<Option<Vec<usize>>> {
    if colors.len() != d.n() {
        return invalid(format!(
            "colouring has {} entries for {} vertices",
            colors.len(),
            d.n()
        ));
    }
    let mut best: Option<Vec<usize>> = None;
    let mut parent = vec![usize::MAX; d.n()];
    for s in d.vertices() {
        let c = colors[s];
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        parent[s] = s;
        let mut depth = vec![0usize; d.n()];
        let mut queue = VecDeque::from([s]);
        let mut closing = None;
        'bfs: while let Some(v) = queue.pop_front() {
            if let Some(b) = &best {
                if depth[v] + 1 >= b.len() {
                    break;
                }
            }
            for &w in d.out_neighbors(v) {
                if colors[w] != c {
                    continue;
                }
                if w == s {
                    closing = Some(v);
                    break 'bfs;
                }
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if let Some(last) = closing {
            let mut cycle = vec![last];
            let mut cur = last;
            while cur != s {
                cur = parent[cur];
                cycle.push(cur);
            }
            cycle.reverse();
            if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
    }
    Ok(best)
}
