//! Simple loopless digraphs on dense vertex indices `0..n`.
//!
//! A pair of opposite arcs `(u, v)`, `(v, u)` is a *digon*; it is stored as
//! two ordinary arcs. Conventions for the empty digraph: it is strongly
//! connected, acyclic, and has dichromatic number 0.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::Graph;

/// A set of vertices of some host graph, kept sorted and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn range(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_vertex(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        !self.iter().any(|v| other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => invalid(format!("vertex {v} out of range for {n} vertices")),
            _ => Ok(()),
        }
    }

    pub fn to_mask(&self) -> u64 {
        crate::bits::from_iter(self.iter())
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSet(crate::bits::members(mask).collect())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut vs: Vec<usize> = iter.into_iter().collect();
        vs.sort_unstable();
        vs.dedup();
        VertexSet(vs)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(vs: Vec<usize>) -> Self {
        vs.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// A simple loopless digraph. Neighbour lists are kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "ArcList", try_from = "ArcList")]
pub struct Digraph {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    arc_count: usize,
}

/// Wire shape of a digraph: vertex count plus arc list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcList {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl From<Digraph> for ArcList {
    fn from(d: Digraph) -> Self {
        ArcList {
            n: d.n(),
            arcs: d.arcs().collect(),
        }
    }
}

impl TryFrom<ArcList> for Digraph {
    type Error = crate::error::Error;

    fn try_from(list: ArcList) -> Result<Self> {
        Digraph::from_arcs(list.n, list.arcs)
    }
}

/// An induced sub-digraph together with its vertex correspondence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induced {
    pub digraph: Digraph,
    /// `original[i]` is the host vertex that became vertex `i`.
    pub original: Vec<usize>,
}

impl Induced {
    /// Host vertex -> sub-digraph vertex.
    pub fn local(&self, host_vertex: usize) -> Option<usize> {
        self.original.binary_search(&host_vertex).ok()
    }
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
            arc_count: 0,
        }
    }

    /// Builds a digraph, rejecting loops, duplicate arcs and out-of-range endpoints.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut d = Digraph::new(n);
        for (u, v) in arcs {
            if !d.add_arc(u, v)? {
                return invalid(format!("duplicate arc ({u}, {v})"));
            }
        }
        Ok(d)
    }

    /// Like [`Digraph::from_arcs`] but silently skips duplicates.
    pub fn from_arcs_dedup(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut d = Digraph::new(n);
        for (u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    /// Adds an arc; returns `false` if it was already present.
    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        if u >= n || v >= n {
            return invalid(format!("arc ({u}, {v}) out of range for {n} vertices"));
        }
        if u == v {
            return invalid(format!("loop at vertex {u}"));
        }
        match self.out[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.out[u].insert(pos, v);
                let pos = self.inn[v].binary_search(&u).unwrap_err();
                self.inn[v].insert(pos, u);
                self.arc_count += 1;
                Ok(true)
            }
        }
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() {
            return false;
        }
        match self.out[u].binary_search(&v) {
            Ok(pos) => {
                self.out[u].remove(pos);
                let pos = self.inn[v].binary_search(&u).unwrap();
                self.inn[v].remove(pos);
                self.arc_count -= 1;
                true
            }
            Err(_) => false,
        }
    }

    /// Deletes vertex `v`; vertices above it shift down by one.
    pub fn remove_vertex(&self, v: usize) -> Result<Digraph> {
        if v >= self.n() {
            return invalid(format!("vertex {v} out of range"));
        }
        let shift = |x: usize| if x > v { x - 1 } else { x };
        Digraph::from_arcs(
            self.n() - 1,
            self.arcs()
                .filter(|&(a, b)| a != v && b != v)
                .map(|(a, b)| (shift(a), shift(b))),
        )
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.out[u].binary_search(&v).is_ok()
    }

    pub fn has_digon(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) && self.has_arc(v, u)
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    /// Same vertices, every arc reversed.
    pub fn reverse(&self) -> Digraph {
        Digraph {
            out: self.inn.clone(),
            inn: self.out.clone(),
            arc_count: self.arc_count,
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Digraph {
        Digraph::from_arcs(self.n(), self.arcs().map(|(u, v)| (perm[u], perm[v])))
            .expect("a permutation preserves simplicity")
    }

    pub fn induced_subdigraph(&self, set: &VertexSet) -> Result<Induced> {
        set.check_within(self.n())?;
        let original: Vec<usize> = set.iter().collect();
        let mut d = Digraph::new(original.len());
        for (i, &u) in original.iter().enumerate() {
            for &v in self.out_neighbors(u) {
                if let Ok(j) = original.binary_search(&v) {
                    d.add_arc(i, j)?;
                }
            }
        }
        Ok(Induced {
            digraph: d,
            original,
        })
    }

    /// Strongly connected components (Tarjan), each sorted, listed by minimum vertex.
    pub fn scc(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut next = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            // (vertex, position in its out-list)
            let mut call = vec![(root, 0usize)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(&w) = self.out[v].get(*pos) {
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comps.push(VertexSet::from(comp));
                    }
                }
            }
        }
        comps.sort_by_key(|c| c.min_vertex());
        comps
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n() <= 1 || self.scc().len() == 1
    }

    /// Strong connectivity of `D[S]`.
    pub fn is_strongly_connected_set(&self, set: &VertexSet) -> Result<bool> {
        Ok(self.induced_subdigraph(set)?.digraph.is_strongly_connected())
    }

    /// Kahn's algorithm.
    pub fn is_acyclic(&self) -> bool {
        let mut indeg: Vec<usize> = (0..self.n()).map(|v| self.in_degree(v)).collect();
        let mut queue: Vec<usize> = (0..self.n()).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = queue.pop() {
            removed += 1;
            for &w in self.out_neighbors(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        removed == self.n()
    }

    pub fn is_acyclic_set(&self, set: &VertexSet) -> Result<bool> {
        Ok(self.induced_subdigraph(set)?.digraph.is_acyclic())
    }

    /// Shortest directed path from `from` to `to` inside `within`, ties broken
    /// towards lower vertex indices. Both endpoints must lie in `within`.
    pub fn shortest_path_within(
        &self,
        from: usize,
        to: usize,
        within: &VertexSet,
    ) -> Option<Vec<usize>> {
        if !within.contains(from) || !within.contains(to) {
            return None;
        }
        let mut parent = vec![usize::MAX; self.n()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &w in self.out_neighbors(v) {
                if parent[w] == usize::MAX && within.contains(w) {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Whether `path` is a directed path of this digraph with no repeated vertex.
    pub fn is_path(&self, path: &[usize]) -> bool {
        if path.is_empty() || path.iter().any(|&v| v >= self.n()) {
            return false;
        }
        let distinct: VertexSet = path.iter().copied().collect();
        distinct.len() == path.len() && path.windows(2).all(|w| self.has_arc(w[0], w[1]))
    }

    pub fn underlying_graph(&self) -> Graph {
        let mut g = Graph::new(self.n());
        for (u, v) in self.arcs() {
            g.add_edge(u, v).expect("arc endpoints are valid");
        }
        g
    }

    /// Undirected graph whose edges are exactly the digons.
    pub fn digon_graph(&self) -> Graph {
        let mut g = Graph::new(self.n());
        for (u, v) in self.arcs().filter(|&(u, v)| u < v && self.has_arc(v, u)) {
            g.add_edge(u, v).expect("arc endpoints are valid");
        }
        g
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs=", self.n())?;
        f.debug_list().entries(self.arcs()).finish()?;
        write!(f, ")")
    }
}

/// Both arcs for every edge of `g`.
pub fn biorient(g: &Graph) -> Digraph {
    let mut d = Digraph::new(g.n());
    for (u, v) in g.edges() {
        d.add_arc(u, v).expect("edge endpoints are valid");
        d.add_arc(v, u).expect("edge endpoints are valid");
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn rejects_malformed_arcs() {
        assert!(Digraph::from_arcs(2, [(0, 0)]).is_err());
        assert!(Digraph::from_arcs(2, [(0, 2)]).is_err());
        assert!(Digraph::from_arcs(2, [(0, 1), (0, 1)]).is_err());
        assert!(Digraph::from_arcs(2, [(0, 1), (1, 0)]).is_ok());
    }

    #[test]
    fn induced_examples() {
        let sub = cycle3().induced_subdigraph(&VertexSet::from(vec![0, 1])).unwrap();
        assert_eq!(sub.digraph.arcs().collect::<Vec<_>>(), vec![(0, 1)]);

        let whole = cycle3().induced_subdigraph(&VertexSet::range(3)).unwrap();
        assert_eq!(whole.digraph, cycle3());
        assert_eq!(whole.original, vec![0, 1, 2]);

        let path = biorient(&Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
        let ends = path.induced_subdigraph(&VertexSet::from(vec![0, 2])).unwrap();
        assert_eq!(ends.digraph.arc_count(), 0);
        assert_eq!(ends.local(2), Some(1));

        assert!(cycle3().induced_subdigraph(&VertexSet::from(vec![0, 5])).is_err());
    }

    #[test]
    fn scc_examples() {
        assert!(cycle3().is_strongly_connected());
        assert_eq!(cycle3().scc().len(), 1);
        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.scc().len(), 3);
        assert!(Digraph::new(0).is_strongly_connected());
        assert!(Digraph::new(1).is_strongly_connected());
        assert!(!Digraph::new(2).is_strongly_connected());
    }

    #[test]
    fn acyclic_examples() {
        let digon = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
        assert!(!digon.is_acyclic_set(&VertexSet::range(2)).unwrap());
        assert!(digon.is_acyclic_set(&VertexSet::singleton(1)).unwrap());
        assert!(Digraph::new(0).is_acyclic());
        assert!(!cycle3().is_acyclic());
    }

    #[test]
    fn biorientation_examples() {
        assert_eq!(biorient(&Graph::new(4)).arc_count(), 0);
        let k3 = biorient(&Graph::complete(3));
        assert_eq!(k3.arc_count(), 6);
        assert!(k3.has_digon(0, 2));

        let single = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(single.underlying_graph().edge_count(), 1);
        assert_eq!(single.digon_graph().edge_count(), 0);
    }

    #[test]
    fn shortest_paths_prefer_low_indices() {
        let d = Digraph::from_arcs(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let p = d.shortest_path_within(0, 3, &VertexSet::range(4)).unwrap();
        assert_eq!(p, vec![0, 1, 3]);
        assert!(d.is_path(&p));
        let q = d.shortest_path_within(0, 3, &VertexSet::from(vec![0, 2, 3])).unwrap();
        assert_eq!(q, vec![0, 2, 3]);
        assert!(d.shortest_path_within(3, 0, &VertexSet::range(4)).is_none());
    }

    #[test]
    fn serde_shape_validates() {
        let json = serde_json::to_string(&cycle3()).unwrap();
        assert_eq!(json, r#"{"n":3,"arcs":[[0,1],[1,2],[2,0]]}"#);
        let back: Digraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cycle3());
        assert!(serde_json::from_str::<Digraph>(r#"{"n":2,"arcs":[[0,0]]}"#).is_err());
    }
}
