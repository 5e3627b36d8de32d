//! Deterministic generators. Every random family is a pure function of its
//! parameters and a `u64` seed (ChaCha8 stream).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{biorient, Digraph};
use crate::error::{invalid, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    /// Undirected complete graph `K_n`.
    Complete,
    /// Biorientation of `K_n`.
    BidirectedComplete,
    RandomDigraph { p: f64 },
    RandomGraph { p: f64 },
    RandomTournament,
    DirectedCycle,
    BidirectedCycle,
    /// Biorientation of `K_{t+2}` minus the 5-cycle `0-1-2-3-4-0`.
    LowerBoundButterfly { t: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Digraph(Digraph),
    Graph(Graph),
}

impl Generated {
    pub fn into_digraph(self) -> Option<Digraph> {
        match self {
            Generated::Digraph(d) => Some(d),
            Generated::Graph(_) => None,
        }
    }

    pub fn into_graph(self) -> Option<Graph> {
        match self {
            Generated::Graph(g) => Some(g),
            Generated::Digraph(_) => None,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` is ignored by `LowerBoundButterfly`, whose order is `t + 2`.
pub fn generate(kind: Kind, n: usize, seed: u64) -> Result<Generated> {
    let mut rng = rng(seed);
    Ok(match kind {
        Kind::Complete => Generated::Graph(Graph::complete(n)),
        Kind::BidirectedComplete => Generated::Digraph(bidirected_complete(n)),
        Kind::RandomDigraph { p } => Generated::Digraph(random_digraph(n, check_p(p)?, &mut rng)),
        Kind::RandomGraph { p } => Generated::Graph(random_graph(n, check_p(p)?, &mut rng)),
        Kind::RandomTournament => Generated::Digraph(random_tournament(n, &mut rng)),
        Kind::DirectedCycle => Generated::Digraph(directed_cycle(n)?),
        Kind::BidirectedCycle => Generated::Digraph(biorient(&cycle_graph(n)?)),
        Kind::LowerBoundButterfly { t } => Generated::Digraph(lower_bound_butterfly(t)?),
    })
}

fn check_p(p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        invalid(format!("probability {p} not in [0, 1]"))
    }
}

pub fn bidirected_complete(n: usize) -> Digraph {
    biorient(&Graph::complete(n))
}

/// Each ordered pair independently with probability `p`.
pub fn random_digraph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Digraph {
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                d.add_arc(u, v).unwrap();
            }
        }
    }
    d
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

pub fn random_tournament<R: Rng>(n: usize, rng: &mut R) -> Digraph {
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let (a, b) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
            d.add_arc(a, b).unwrap();
        }
    }
    d
}

/// A random strongly connected digraph: a Hamiltonian cycle through a random
/// vertex order, plus each remaining ordered pair with probability `extra`.
pub fn random_strong_digraph<R: Rng>(n: usize, extra: f64, rng: &mut R) -> Digraph {
    let mut d = Digraph::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    if n >= 2 {
        for i in 0..n {
            d.add_arc(order[i], order[(i + 1) % n]).unwrap();
        }
    }
    for u in 0..n {
        for v in 0..n {
            if u != v && !d.has_arc(u, v) && rng.gen_bool(extra) {
                d.add_arc(u, v).unwrap();
            }
        }
    }
    d
}

pub fn directed_cycle(n: usize) -> Result<Digraph> {
    if n < 2 {
        return invalid("a directed cycle needs at least 2 vertices");
    }
    Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return invalid("an undirected cycle needs at least 3 vertices");
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path_graph(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

/// Biorientation of `K_{t+2}` with the edges of the 5-cycle on vertices
/// `0..5` removed: `t + 2` vertices and `2 * (C(t+2, 2) - 5)` arcs.
pub fn lower_bound_butterfly(t: usize) -> Result<Digraph> {
    if t < 3 {
        return invalid(format!("lower_bound_butterfly needs t >= 3, got {t}"));
    }
    let mut g = Graph::complete(t + 2);
    for i in 0..5 {
        g.remove_edge(i, (i + 1) % 5);
    }
    Ok(biorient(&g))
}
