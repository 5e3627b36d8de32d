//! Vertex-mask kernels shared by the exponential solvers.
//!
//! A mask is a `u64` whose bit `v` is set when vertex `v` belongs to the set.
//! All routines here assume `n <= 64`; callers obtain an [`Adjacency`] through
//! [`Adjacency::of`], which enforces that bound.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MASK_LIMIT: usize = 64;

pub type Mask = u64;

#[inline]
pub fn bit(v: usize) -> Mask {
    1u64 << v
}

#[inline]
pub fn full(n: usize) -> Mask {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the members of a mask in ascending order.
pub fn members(mut mask: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub fn from_iter(vs: impl IntoIterator<Item = usize>) -> Mask {
    vs.into_iter().fold(0, |m, v| m | bit(v))
}

/// Out- and in-neighbourhood masks of a digraph.
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub out: Vec<Mask>,
    pub inn: Vec<Mask>,
}

impl Adjacency {
    pub fn of(d: &Digraph) -> Result<Self> {
        check_size(d.n())?;
        let mut out = vec![0; d.n()];
        let mut inn = vec![0; d.n()];
        for (u, v) in d.arcs() {
            out[u] |= bit(v);
            inn[v] |= bit(u);
        }
        Ok(Adjacency { out, inn })
    }

    /// Symmetric adjacency of an undirected graph (each edge seen both ways).
    pub fn of_graph(g: &Graph) -> Result<Self> {
        check_size(g.n())?;
        let mut out = vec![0; g.n()];
        for (u, v) in g.edges() {
            out[u] |= bit(v);
            out[v] |= bit(u);
        }
        Ok(Adjacency {
            inn: out.clone(),
            out,
        })
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    /// Vertices reachable from `from` using only vertices of `within`.
    pub fn forward_closure(&self, from: Mask, within: Mask) -> Mask {
        closure(&self.out, from & within, within)
    }

    pub fn backward_closure(&self, from: Mask, within: Mask) -> Mask {
        closure(&self.inn, from & within, within)
    }

    /// Strong connectivity of the sub-digraph induced by `set`.
    /// The empty set counts as strongly connected.
    pub fn is_strong(&self, set: Mask) -> bool {
        if set == 0 {
            return true;
        }
        let root = bit(set.trailing_zeros() as usize);
        self.forward_closure(root, set) == set && self.backward_closure(root, set) == set
    }

    /// Acyclicity of the sub-digraph induced by `set`, by repeated source removal.
    pub fn is_acyclic(&self, set: Mask) -> bool {
        let mut rest = set;
        loop {
            let sources = members(rest)
                .filter(|&v| self.inn[v] & rest == 0)
                .fold(0, |m, v| m | bit(v));
            if sources == 0 {
                return rest == 0;
            }
            rest &= !sources;
        }
    }

    /// Whether adding `v` to the acyclic set `class` keeps it acyclic.
    #[inline]
    pub fn extends_acyclic(&self, class: Mask, v: usize) -> bool {
        let start = self.out[v] & class;
        if start == 0 || self.inn[v] & class == 0 {
            return true;
        }
        self.forward_closure(start, class) & self.inn[v] == 0
    }

    pub fn has_arc_between(&self, from: Mask, to: Mask) -> bool {
        members(from).any(|u| self.out[u] & to != 0)
    }
}

fn closure(adj: &[Mask], from: Mask, within: Mask) -> Mask {
    let mut seen = from;
    let mut frontier = from;
    while frontier != 0 {
        let mut next = 0;
        for v in members(frontier) {
            next |= adj[v];
        }
        next &= within & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

pub fn check_size(n: usize) -> Result<()> {
    if n > MASK_LIMIT {
        Err(Error::TooLarge {
            n,
            limit: MASK_LIMIT,
        })
    } else {
        Ok(())
    }
}
