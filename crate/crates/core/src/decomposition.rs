//! Reduction of the dichromatic number to the chromatic number of a quotient.
//!
//! The vertex set is split into parts `X_1, ..., X_m`, each grown from the
//! lowest uncovered vertex into a strongly connected set of dichromatic
//! number at most 2. The quotient graph joins two parts when arcs run both
//! ways between them. A proper `k`-colouring of the quotient combined with
//! each part's own 2-colouring gives a `2k`-colouring of the digraph.
//!
//! When the parts are inclusion-wise maximal the combined colouring is always
//! acyclic. If a monochromatic cycle does turn up, a shortest one pins down a
//! path `w_1, ..., w_s` that can be absorbed into the earliest part it meets;
//! [`repair_step`] performs that absorption. Each repair strictly increases
//! the part-size profile `(|X_1|, |X_2|, ...)` in lexicographic order, so the
//! loop in [`certify_decomposition_with`] terminates.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bits::{bit, from_iter, full, members, Adjacency, Mask};
use crate::coloring::{
    chromatic_number, find_monochromatic_cycle, two_dicolor, AcyclicColoring, ProperColoring,
    TwoDicoloring,
};
use crate::digraph::{biorient, Digraph, VertexSet};
use crate::error::{internal, invalid, Result};
use crate::graph::Graph;
use crate::strong_minor::StrongMinorModel;

/// A part together with an acyclic colouring of it using colours 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredPart {
    pub vertices: VertexSet,
    /// `colors[i]` is the colour of `vertices[i]`.
    pub colors: Vec<usize>,
}

impl ColoredPart {
    fn from_two(col: &TwoDicoloring) -> Self {
        let vertices = VertexSet::from_mask(col.set());
        let colors = vertices.iter().map(|v| col.color_of(v).unwrap()).collect();
        ColoredPart { vertices, colors }
    }

    fn to_two(&self) -> TwoDicoloring {
        let mut classes = [0, 0];
        for (v, &c) in self.vertices.iter().zip(&self.colors) {
            classes[c.min(1)] |= bit(v);
        }
        TwoDicoloring { classes }
    }

    pub fn color_of(&self, v: usize) -> Option<usize> {
        self.vertices
            .as_slice()
            .binary_search(&v)
            .ok()
            .map(|i| self.colors[i])
    }
}

/// Ordered partition into strongly connected parts with per-part 2-colourings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalPartition {
    pub parts: Vec<ColoredPart>,
}

impl MaximalPartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Index of the part containing each vertex.
    pub fn part_of(&self, n: usize) -> Vec<usize> {
        let mut part = vec![usize::MAX; n];
        for (i, p) in self.parts.iter().enumerate() {
            for v in &p.vertices {
                if v < n {
                    part[v] = i;
                }
            }
        }
        part
    }

    pub fn size_profile(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.vertices.len()).collect()
    }

    /// Structural invariants: the parts partition `V(D)`, each is strongly
    /// connected, and each carries a valid acyclic colouring with colours {0, 1}.
    pub fn check(&self, d: &Digraph) -> Result<()> {
        let part = self.part_of(d.n());
        let covered: usize = self.parts.iter().map(|p| p.vertices.len()).sum();
        if covered != d.n() || part.contains(&usize::MAX) {
            return invalid("parts do not partition the vertex set");
        }
        for (i, p) in self.parts.iter().enumerate() {
            p.vertices.check_within(d.n())?;
            if p.vertices.is_empty() {
                return invalid(format!("part {i} is empty"));
            }
            if p.colors.len() != p.vertices.len() || p.colors.iter().any(|&c| c > 1) {
                return invalid(format!("part {i} has a malformed 2-colouring"));
            }
            if !d.is_strongly_connected_set(&p.vertices)? {
                return invalid(format!("part {i} is not strongly connected"));
            }
            for c in 0..2 {
                let class: VertexSet = p
                    .vertices
                    .iter()
                    .zip(&p.colors)
                    .filter(|&(_, &col)| col == c)
                    .map(|(v, _)| v)
                    .collect();
                if !d.is_acyclic_set(&class)? {
                    return invalid(format!("colour class {c} of part {i} contains a cycle"));
                }
            }
        }
        Ok(())
    }
}

/// How [`grow_part`] enlarges a part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrowStrategy {
    /// Absorb any *ear* (a path leaving the part and re-entering it through
    /// unused vertices) that keeps the dichromatic number at most 2, until none
    /// is left. Every strongly connected proper superset contains such an ear,
    /// so the result is inclusion-wise maximal.
    #[default]
    Ears,
    /// Absorb single vertices, or a vertex together with a shortest path
    /// closing it back into the part, in vertex-index order. Cheaper, but may
    /// stop at a non-maximal part; the repair loop then finishes the job.
    Greedy,
}

/// Grows a strongly connected, 2-dicolourable part from `seed` inside `within`.
pub fn grow_part(
    d: &Digraph,
    within: &VertexSet,
    seed: usize,
    strategy: GrowStrategy,
) -> Result<ColoredPart> {
    within.check_within(d.n())?;
    if !within.contains(seed) {
        return invalid(format!("seed {seed} is not in the allowed set"));
    }
    let adj = Adjacency::of(d)?;
    Ok(ColoredPart::from_two(&grow_mask(
        &adj,
        within.to_mask(),
        seed,
        strategy,
    )))
}

fn grow_mask(adj: &Adjacency, within: Mask, seed: usize, strategy: GrowStrategy) -> TwoDicoloring {
    let mut part = TwoDicoloring::singleton(seed);
    loop {
        let next = match strategy {
            GrowStrategy::Ears => absorb_ear(adj, within, &part),
            GrowStrategy::Greedy => absorb_greedy(adj, within, &part),
        };
        match next {
            Some(bigger) => {
                debug_assert!(adj.is_strong(bigger.set()) && bigger.is_valid(adj));
                part = bigger;
            }
            None => return part,
        }
    }
}

/// Depth-first search over ears. Each search state is the set of path
/// vertices plus the current endpoint; states that already failed are skipped.
fn absorb_ear(adj: &Adjacency, within: Mask, part: &TwoDicoloring) -> Option<TwoDicoloring> {
    let x = part.set();
    let outside = within & !x;
    let mut failed: HashSet<(Mask, usize)> = HashSet::new();
    let mut path = Vec::new();
    for w in members(outside) {
        if adj.inn[w] & x == 0 {
            continue;
        }
        if let Some(found) = extend_ear(adj, outside, part, w, &mut path, 0, &mut failed) {
            return Some(found);
        }
    }
    None
}

fn extend_ear(
    adj: &Adjacency,
    outside: Mask,
    part: &TwoDicoloring,
    w: usize,
    path: &mut Vec<usize>,
    path_set: Mask,
    failed: &mut HashSet<(Mask, usize)>,
) -> Option<TwoDicoloring> {
    let set = path_set | bit(w);
    if failed.contains(&(set, w)) {
        return None;
    }
    path.push(w);
    let result = (|| {
        let coloring = part.extended(adj, path)?;
        if adj.out[w] & part.set() != 0 {
            return Some(coloring);
        }
        for next in members(adj.out[w] & outside & !set) {
            if let Some(found) = extend_ear(adj, outside, part, next, path, set, failed) {
                return Some(found);
            }
        }
        None
    })();
    path.pop();
    if result.is_none() {
        failed.insert((set, w));
    }
    result
}

fn absorb_greedy(adj: &Adjacency, within: Mask, part: &TwoDicoloring) -> Option<TwoDicoloring> {
    let x = part.set();
    let outside = within & !x;
    for w in members(outside) {
        let from_part = adj.inn[w] & x != 0;
        let into_part = adj.out[w] & x != 0;
        let candidate = match (from_part, into_part) {
            (true, true) => Some(vec![w]),
            (true, false) => shortest_path_mask(adj, bit(w), x, outside),
            (false, true) => shortest_path_mask(adj, x, bit(w), outside & !bit(w)).map(|mut p| {
                p.push(w);
                p
            }),
            (false, false) => None,
        };
        if let Some(path) = candidate {
            if let Some(bigger) = part.extended(adj, &path) {
                return Some(bigger);
            }
        }
    }
    None
}

/// Shortest path from `sources` to a vertex with an arc into `targets`, using
/// only vertices of `through` (plus the sources). For `sources` inside the
/// part the returned path excludes the sources and ends just before `targets`.
fn shortest_path_mask(adj: &Adjacency, sources: Mask, targets: Mask, through: Mask) -> Option<Vec<usize>> {
    let n = adj.n();
    let mut parent = vec![usize::MAX; n];
    let mut queue: VecDeque<usize> = members(sources).collect();
    for s in members(sources) {
        parent[s] = s;
    }
    while let Some(v) = queue.pop_front() {
        if adj.out[v] & targets != 0 && through & bit(v) != 0 {
            let mut path = vec![v];
            let mut cur = v;
            while parent[cur] != cur {
                cur = parent[cur];
                path.push(cur);
            }
            path.retain(|&p| through & bit(p) != 0);
            path.reverse();
            return Some(path);
        }
        for w in members(adj.out[v] & through) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Parts grown in order, each seeded at the lowest uncovered vertex.
pub fn build_partition(d: &Digraph, strategy: GrowStrategy) -> Result<MaximalPartition> {
    let adj = Adjacency::of(d)?;
    Ok(MaximalPartition {
        parts: partition_rest(&adj, full(d.n()), strategy)
            .iter()
            .map(ColoredPart::from_two)
            .collect(),
    })
}

fn partition_rest(adj: &Adjacency, mut rest: Mask, strategy: GrowStrategy) -> Vec<TwoDicoloring> {
    let mut parts = Vec::new();
    while rest != 0 {
        let seed = rest.trailing_zeros() as usize;
        let part = grow_mask(adj, rest, seed, strategy);
        rest &= !part.set();
        parts.push(part);
    }
    parts
}

/// Edge `ij` iff arcs run both from `X_i` to `X_j` and from `X_j` to `X_i`.
pub fn quotient_graph(d: &Digraph, partition: &MaximalPartition) -> Result<Graph> {
    let part = partition.part_of(d.n());
    if part.contains(&usize::MAX) {
        return invalid("partition does not cover the digraph");
    }
    let m = partition.len();
    let mut forward = vec![vec![false; m]; m];
    for (u, v) in d.arcs() {
        forward[part[u]][part[v]] = true;
    }
    let mut g = Graph::new(m);
    let pairs = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j)));
    for (i, j) in pairs.filter(|&(i, j)| forward[i][j] && forward[j][i]) {
        g.add_edge(i, j)?;
    }
    Ok(g)
}

/// Vertex `v` of part `i` gets colour `2 * f(i) + c(v)`, where `c` is the
/// part's own colouring. Validity is not checked here.
pub fn lift_coloring(
    d: &Digraph,
    partition: &MaximalPartition,
    quotient_coloring: &ProperColoring,
) -> Result<AcyclicColoring> {
    let quotient = quotient_graph(d, partition)?;
    if !quotient_coloring.is_valid_for(&quotient) {
        return invalid("quotient colouring is not proper");
    }
    let mut colors = vec![0; d.n()];
    for (i, p) in partition.parts.iter().enumerate() {
        for (v, &c) in p.vertices.iter().zip(&p.colors) {
            colors[v] = 2 * quotient_coloring.colors[i] + c;
        }
    }
    Ok(AcyclicColoring {
        k: 2 * quotient_coloring.k,
        colors,
    })
}

/// The objects a single repair step works with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairContext {
    pub cycle: Vec<usize>,
    /// Earliest part met by the cycle.
    pub part_index: usize,
    pub u: usize,
    /// The cycle's excursion `w_1, ..., w_l` outside the part.
    pub excursion: Vec<usize>,
    pub v: usize,
    /// 1-based index of the first excursion vertex with an arc back into the part.
    pub s: usize,
    /// Lowest out-neighbour of `w_s` inside the part.
    pub x: usize,
    pub enlarged: ColoredPart,
}

/// Absorbs `w_1, ..., w_s` into the earliest part met by the monochromatic
/// cycle `cycle`, with `w_1..w_{s-1}` coloured 0 and `w_s` coloured 1, then
/// rebuilds all later parts from the remaining vertices.
pub fn repair_step(
    d: &Digraph,
    partition: &MaximalPartition,
    lifted: &AcyclicColoring,
    cycle: &[usize],
    strategy: GrowStrategy,
) -> Result<(MaximalPartition, RepairContext)> {
    partition.check(d)?;
    if lifted.colors.len() != d.n() {
        return invalid("colouring does not match the digraph");
    }
    let len = cycle.len();
    let distinct: VertexSet = cycle.iter().copied().collect();
    if len < 2
        || distinct.len() != len
        || distinct.check_within(d.n()).is_err()
        || (0..len).any(|i| !d.has_arc(cycle[i], cycle[(i + 1) % len]))
    {
        return invalid("not a directed cycle");
    }
    let color = lifted.colors[cycle[0]];
    if cycle.iter().any(|&v| lifted.colors[v] != color) {
        return invalid("cycle is not monochromatic");
    }

    let adj = Adjacency::of(d)?;
    let part = partition.part_of(d.n());
    let i0 = cycle.iter().map(|&v| part[v]).min().unwrap();
    let home = partition.parts[i0].vertices.to_mask();
    let inside = |v: usize| home & bit(v) != 0;

    // Rotate so the cycle leaves the part right after position 0.
    let Some(start) = (0..len).find(|&i| inside(cycle[i]) && !inside(cycle[(i + 1) % len])) else {
        return internal("monochromatic cycle inside a single part with a valid 2-colouring");
    };
    let rotated: Vec<usize> = (0..len).map(|i| cycle[(start + i) % len]).collect();
    let u = rotated[0];
    let excursion: Vec<usize> = rotated[1..].iter().copied().take_while(|&w| !inside(w)).collect();
    let v = rotated[(excursion.len() + 1) % len];
    if excursion.is_empty() || !inside(v) {
        return internal("malformed excursion");
    }
    if excursion.iter().any(|&w| part[w] <= i0) {
        return internal("excursion meets an earlier part");
    }

    let s_index = excursion
        .iter()
        .position(|&w| adj.out[w] & home != 0)
        .expect("the last excursion vertex has an arc into the part");
    let ws = excursion[s_index];
    let x = (adj.out[ws] & home).trailing_zeros() as usize;
    if adj.inn[ws] & home != 0 {
        return internal(format!(
            "w_s = {ws} has both an in- and an out-neighbour in part {i0}, \
             so its colour differs from the part's; the cycle cannot be monochromatic"
        ));
    }
    if s_index == 0 {
        return internal("s = 1 although w_1 has an in-neighbour in the part");
    }

    let old = partition.parts[i0].to_two();
    let mut classes = old.classes;
    for &w in &excursion[..s_index] {
        classes[0] |= bit(w);
    }
    classes[1] |= bit(ws);
    let enlarged = TwoDicoloring { classes };
    if !adj.is_strong(enlarged.set()) {
        return internal("enlarged part is not strongly connected");
    }
    if !enlarged.is_valid(&adj) {
        return internal("extended 2-colouring of the enlarged part is not acyclic");
    }

    let mut parts: Vec<TwoDicoloring> =
        partition.parts[..i0].iter().map(ColoredPart::to_two).collect();
    parts.push(enlarged);
    let covered = parts.iter().fold(0, |m, p| m | p.set());
    parts.extend(partition_rest(&adj, full(d.n()) & !covered, strategy));

    let repaired = MaximalPartition {
        parts: parts.iter().map(ColoredPart::from_two).collect(),
    };
    let context = RepairContext {
        cycle: cycle.to_vec(),
        part_index: i0,
        u,
        excursion,
        v,
        s: s_index + 1,
        x,
        enlarged: ColoredPart::from_two(&enlarged),
    };
    Ok((repaired, context))
}

/// Witness that the dichromatic number of `host` is at most twice the
/// chromatic number of `quotient`, and that `host` is a strong model of the
/// quotient's biorientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    pub partition: MaximalPartition,
    pub quotient: Graph,
    pub quotient_coloring: ProperColoring,
    pub lifted: AcyclicColoring,
    pub model: StrongMinorModel,
}

impl DecompositionCertificate {
    pub fn host(&self) -> &Digraph {
        &self.model.host
    }

    /// Re-checks every certificate invariant against `d`.
    pub fn check(&self, d: &Digraph) -> Result<()> {
        if self.model.host != *d {
            return invalid("certificate belongs to a different digraph");
        }
        self.partition.check(d)?;
        if quotient_graph(d, &self.partition)? != self.quotient {
            return invalid("quotient graph does not match the partition");
        }
        if !self.quotient_coloring.is_valid_for(&self.quotient) {
            return invalid("quotient colouring is not proper");
        }
        let expected = lift_coloring(d, &self.partition, &self.quotient_coloring)?;
        if expected != self.lifted {
            return invalid("lifted colouring is not the combination of the part colourings");
        }
        if !self.lifted.is_valid_for(d) {
            return invalid("lifted colouring has a monochromatic cycle");
        }
        if self.lifted.k > 2 * self.quotient_coloring.k {
            return invalid("lifted colouring uses too many colours");
        }
        if self.model.pattern != biorient(&self.quotient) {
            return invalid("model pattern is not the biorientated quotient");
        }
        let parts: Vec<VertexSet> = self.partition.parts.iter().map(|p| p.vertices.clone()).collect();
        if self.model.branch_sets != parts {
            return invalid("model branch sets differ from the parts");
        }
        self.model.check(false)
    }
}

/// Trace of one certification run.
#[derive(Debug, Clone, Default)]
pub struct CertificationLog {
    pub repairs: Vec<RepairContext>,
    /// Part-size profile before the first and after every repair.
    pub profiles: Vec<Vec<usize>>,
}

pub fn certify_decomposition(d: &Digraph) -> Result<DecompositionCertificate> {
    certify_decomposition_with(d, GrowStrategy::default()).map(|(cert, _)| cert)
}

/// Partition, colour the quotient exactly, lift, and repair until the lifted
/// colouring is acyclic.
pub fn certify_decomposition_with(
    d: &Digraph,
    strategy: GrowStrategy,
) -> Result<(DecompositionCertificate, CertificationLog)> {
    certify_from_partition(d, build_partition(d, strategy)?, strategy)
}

/// Runs the repair loop from an arbitrary valid starting partition (for
/// example all singletons). Parts rebuilt during repairs use `strategy`.
pub fn certify_from_partition(
    d: &Digraph,
    mut partition: MaximalPartition,
    strategy: GrowStrategy,
) -> Result<(DecompositionCertificate, CertificationLog)> {
    partition.check(d)?;
    let mut log = CertificationLog {
        repairs: Vec::new(),
        profiles: vec![partition.size_profile()],
    };
    loop {
        let quotient = quotient_graph(d, &partition)?;
        let (_, quotient_coloring) = chromatic_number(&quotient)?;
        let lifted = lift_coloring(d, &partition, &quotient_coloring)?;
        match find_monochromatic_cycle(d, &lifted.colors)? {
            Some(cycle) => {
                let (next, context) = repair_step(d, &partition, &lifted, &cycle, strategy)?;
                let profile = next.size_profile();
                if profile <= *log.profiles.last().unwrap() {
                    return internal("repair did not increase the part-size profile");
                }
                log::debug!(
                    "repair: part {} absorbed {} vertices, profile {:?}",
                    context.part_index,
                    context.s,
                    profile
                );
                log.profiles.push(profile);
                log.repairs.push(context);
                partition = next;
            }
            None => {
                let model = StrongMinorModel {
                    host: d.clone(),
                    pattern: biorient(&quotient),
                    branch_sets: partition.parts.iter().map(|p| p.vertices.clone()).collect(),
                };
                let cert = DecompositionCertificate {
                    partition,
                    quotient,
                    quotient_coloring,
                    lifted,
                    model,
                };
                cert.check(d)?;
                return Ok((cert, log));
            }
        }
    }
}

/// Exhaustive maximality check: no part `X_i` has a strongly connected,
/// 2-dicolourable proper superset inside `X_i ∪ X_{i+1} ∪ ... ∪ X_m`.
/// Exponential in the size of those unions.
pub fn assert_maximality(d: &Digraph, partition: &MaximalPartition) -> Result<bool> {
    partition.check(d)?;
    let adj = Adjacency::of(d)?;
    let masks: Vec<Mask> = partition.parts.iter().map(|p| p.vertices.to_mask()).collect();
    for i in 0..masks.len() {
        let later = masks[i + 1..].iter().fold(0, |m, &p| m | p);
        let mut extra = later;
        // Iterate over the non-empty subsets of `later`.
        while extra != 0 {
            let candidate = masks[i] | extra;
            if adj.is_strong(candidate) && two_dicolor(&adj, candidate).is_some() {
                return Ok(false);
            }
            extra = (extra - 1) & later;
        }
    }
    Ok(true)
}

/// Part built from explicit vertex lists; colours are recomputed. Mainly for
/// constructing deliberately non-maximal partitions in tests.
pub fn partition_from_sets(d: &Digraph, sets: &[VertexSet]) -> Result<MaximalPartition> {
    let adj = Adjacency::of(d)?;
    let mut parts = Vec::new();
    for set in sets {
        set.check_within(d.n())?;
        let mask = from_iter(set.iter());
        let Some(classes) = two_dicolor(&adj, mask) else {
            return invalid("part is not 2-dicolourable");
        };
        parts.push(ColoredPart::from_two(&TwoDicoloring { classes }));
    }
    let partition = MaximalPartition { parts };
    partition.check(d)?;
    Ok(partition)
}
