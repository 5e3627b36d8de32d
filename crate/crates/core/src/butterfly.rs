//! Butterfly minors: contractibility, contraction with provenance, replayable
//! traces, extraction of a bidirected `K_t` from a strong bidirected
//! `K_{2t}`-model, and exhaustive butterfly-minor search for small digraphs.
//!
//! Contracting `(u, v)` while `(v, u)` is also present would create a loop;
//! loops are dropped.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, VertexSet};
use crate::error::{internal, invalid, Error, Result};
use crate::generate::random_strong_digraph;
use crate::iso::{are_isomorphic, canonical_code, find_subgraph};
use crate::strong_minor::{clique_minor_pipeline, StrongMinorModel};

/// `(u, v)` is contractible when `v` is the only out-neighbour of `u` or `u`
/// is the only in-neighbour of `v`.
pub fn is_contractible(d: &Digraph, (u, v): (usize, usize)) -> Result<bool> {
    if !d.has_arc(u, v) {
        return invalid(format!("({u}, {v}) is not an arc"));
    }
    Ok(d.out_degree(u) == 1 || d.in_degree(v) == 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub digraph: Digraph,
    /// Old vertex -> new vertex. Both ends of the arc map to `min(u, v)`;
    /// vertices above `max(u, v)` move down by one.
    pub relabel: Vec<usize>,
}

fn merge_relabel(n: usize, u: usize, v: usize) -> Vec<usize> {
    let (lo, hi) = (u.min(v), u.max(v));
    (0..n)
        .map(|x| match x.cmp(&hi) {
            std::cmp::Ordering::Equal => lo,
            std::cmp::Ordering::Greater => x - 1,
            std::cmp::Ordering::Less => x,
        })
        .collect()
}

/// Merges the ends of a contractible arc, uniting their neighbourhoods.
pub fn contract(d: &Digraph, arc: (usize, usize)) -> Result<Contraction> {
    if !is_contractible(d, arc)? {
        return Err(Error::NotContractible(arc.0, arc.1));
    }
    let relabel = merge_relabel(d.n(), arc.0, arc.1);
    let arcs = d
        .arcs()
        .map(|(a, b)| (relabel[a], relabel[b]))
        .filter(|(a, b)| a != b);
    let digraph = Digraph::from_arcs_dedup(d.n() - 1, arcs)?;
    Ok(Contraction { digraph, relabel })
}

/// One butterfly-minor operation, in the labels of the digraph it applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Step {
    DeleteVertex { v: usize },
    DeleteArc { tail: usize, head: usize },
    Contract { tail: usize, head: usize },
}

/// A replayable sequence of butterfly-minor operations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ButterflyTrace {
    pub initial: Digraph,
    pub steps: Vec<Step>,
    pub result: Digraph,
    /// For each result vertex, the initial vertices merged into it.
    pub provenance: Vec<VertexSet>,
}

/// Working digraph with provenance, used to apply steps.
#[derive(Debug, Clone)]
struct Replay {
    digraph: Digraph,
    members: Vec<VertexSet>,
}

impl Replay {
    fn new(d: &Digraph) -> Self {
        Replay {
            digraph: d.clone(),
            members: d.vertices().map(VertexSet::singleton).collect(),
        }
    }

    fn apply(&mut self, step: Step) -> Result<()> {
        match step {
            Step::DeleteVertex { v } => {
                self.digraph = self.digraph.remove_vertex(v)?;
                self.members.remove(v);
            }
            Step::DeleteArc { tail, head } => {
                if !self.digraph.remove_arc(tail, head) {
                    return invalid(format!("({tail}, {head}) is not an arc"));
                }
            }
            Step::Contract { tail, head } => {
                let c = contract(&self.digraph, (tail, head))?;
                let mut members = vec![VertexSet::new(); c.digraph.n()];
                for (old, set) in self.members.drain(..).enumerate() {
                    members[c.relabel[old]] = members[c.relabel[old]].union(&set);
                }
                self.members = members;
                self.digraph = c.digraph;
            }
        }
        Ok(())
    }

    /// Current label of an initial vertex.
    fn locate(&self, original: usize) -> Option<usize> {
        self.members.iter().position(|m| m.contains(original))
    }
}

impl ButterflyTrace {
    /// Replays the steps from the initial digraph, rejecting any step that is
    /// not applicable (including contraction of a non-contractible arc).
    pub fn replay(&self) -> Result<(Digraph, Vec<VertexSet>)> {
        let mut state = Replay::new(&self.initial);
        for (i, &step) in self.steps.iter().enumerate() {
            state
                .apply(step)
                .map_err(|e| Error::InvalidInput(format!("step {i}: {e}")))?;
        }
        Ok((state.digraph, state.members))
    }

    /// Replay reproduces the recorded result and provenance.
    pub fn check(&self) -> Result<()> {
        let (result, provenance) = self.replay()?;
        if result != self.result {
            return invalid("replayed digraph differs from the recorded result");
        }
        if provenance != self.provenance {
            return invalid("replayed provenance differs from the recorded one");
        }
        Ok(())
    }
}

/// Roots, in-arborescence of `X_i^-` and out-arborescence of `X_i^+` for one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArborescencePair {
    pub minus: VertexSet,
    pub plus: VertexSet,
    pub root_minus: usize,
    pub root_plus: usize,
    /// Arcs `(child, parent)` directed towards `root_minus`, in BFS discovery order.
    pub in_tree: Vec<(usize, usize)>,
    /// Arcs `(parent, child)` directed away from `root_plus`, in BFS discovery order.
    pub out_tree: Vec<(usize, usize)>,
}

impl ArborescencePair {
    pub fn check(&self, d: &Digraph) -> Result<()> {
        if !d.has_arc(self.root_minus, self.root_plus) {
            return invalid("root arc missing");
        }
        check_arborescence(d, &self.minus, self.root_minus, &self.in_tree, true)?;
        check_arborescence(d, &self.plus, self.root_plus, &self.out_tree, false)
    }
}

fn check_arborescence(
    d: &Digraph,
    set: &VertexSet,
    root: usize,
    arcs: &[(usize, usize)],
    towards_root: bool,
) -> Result<()> {
    if !set.contains(root) || arcs.len() + 1 != set.len() {
        return invalid("arborescence does not span its branch set");
    }
    let mut parent_arcs = vec![0usize; d.n()];
    for &(a, b) in arcs {
        if !d.has_arc(a, b) || !set.contains(a) || !set.contains(b) {
            return invalid(format!("tree arc ({a}, {b}) is not an arc inside the branch set"));
        }
        let child = if towards_root { a } else { b };
        parent_arcs[child] += 1;
    }
    for v in set {
        let expected = usize::from(v != root);
        if parent_arcs[v] != expected {
            return invalid(format!("vertex {v} has {} tree arcs towards its parent", parent_arcs[v]));
        }
    }
    // Every vertex must reach (or be reached from) the root along tree arcs.
    let mut reached = VertexSet::singleton(root);
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in arcs {
            let (child, parent) = if towards_root { (a, b) } else { (b, a) };
            if reached.contains(parent) && reached.insert(child) {
                changed = true;
            }
        }
    }
    if reached.len() != set.len() {
        return invalid("tree arcs do not form an arborescence");
    }
    Ok(())
}

/// Half the order of a symmetric complete pattern on an even number of vertices.
fn clique_half(pattern: &Digraph) -> Result<usize> {
    let n = pattern.n();
    if n == 0 || !n.is_multiple_of(2) || pattern.arc_count() != n * (n - 1) {
        return invalid("pattern is not a bidirected complete digraph of even order");
    }
    Ok(n / 2)
}

/// Pairs the `2t` branch sets (sorted by minimum vertex, consecutive sets
/// paired, the lower one as `X_i^-`), picks the least root arc from `X_i^-`
/// to `X_i^+`, and grows BFS arborescences inside each set.
pub fn build_arborescences(model: &StrongMinorModel) -> Result<Vec<ArborescencePair>> {
    model.check(false)?;
    let t = clique_half(&model.pattern)?;
    let d = &model.host;
    let mut sets: Vec<&VertexSet> = model.branch_sets.iter().collect();
    sets.sort_by_key(|s| s.min_vertex());
    let mut pairs = Vec::with_capacity(t);
    for i in 0..t {
        let (minus, plus) = (sets[2 * i], sets[2 * i + 1]);
        let (root_minus, root_plus) = minus
            .iter()
            .find_map(|u| d.out_neighbors(u).iter().find(|&&v| plus.contains(v)).map(|&v| (u, v)))
            .ok_or_else(|| Error::Internal("verified model lacks an arc between paired sets".into()))?;
        let pair = ArborescencePair {
            minus: minus.clone(),
            plus: plus.clone(),
            root_minus,
            root_plus,
            in_tree: bfs_tree(d, minus, root_minus, true),
            out_tree: bfs_tree(d, plus, root_plus, false),
        };
        pair.check(d)?;
        pairs.push(pair);
    }
    Ok(pairs)
}

fn bfs_tree(d: &Digraph, set: &VertexSet, root: usize, towards_root: bool) -> Vec<(usize, usize)> {
    let mut seen = VertexSet::singleton(root);
    let mut queue = VecDeque::from([root]);
    let mut arcs = Vec::new();
    while let Some(y) = queue.pop_front() {
        let next = if towards_root { d.in_neighbors(y) } else { d.out_neighbors(y) };
        for &z in next {
            if set.contains(z) && seen.insert(z) {
                arcs.push(if towards_root { (z, y) } else { (y, z) });
                queue.push_back(z);
            }
        }
    }
    arcs
}

/// Extracts bidirected `K_t` as a butterfly minor of a strong bidirected
/// `K_{2t}`-model: delete unused vertices, keep only the arborescence arcs, the
/// root arcs and the arcs from plus-sets into other pairs' minus-sets, then
/// contract every tree arc. Contractibility of every remaining tree arc is
/// asserted after each contraction.
pub fn extract_butterfly(model: &StrongMinorModel) -> Result<ButterflyTrace> {
    let pairs = build_arborescences(model)?;
    let d = &model.host;
    let t = pairs.len();

    let mut tree_arcs: Vec<(usize, usize)> = Vec::new();
    for p in &pairs {
        tree_arcs.extend(p.in_tree.iter().rev());
        tree_arcs.push((p.root_minus, p.root_plus));
        tree_arcs.extend(p.out_tree.iter());
    }
    let mut keep: HashSet<(usize, usize)> = tree_arcs.iter().copied().collect();
    for (i, pi) in pairs.iter().enumerate() {
        for (j, pj) in pairs.iter().enumerate() {
            if i != j {
                for (a, b) in d.arcs().filter(|&(a, b)| pi.plus.contains(a) && pj.minus.contains(b)) {
                    keep.insert((a, b));
                }
            }
        }
    }

    let mut state = Replay::new(d);
    let mut steps = Vec::new();
    let mut push = |state: &mut Replay, step: Step| -> Result<()> {
        state.apply(step)?;
        steps.push(step);
        Ok(())
    };

    let used: VertexSet = model.branch_sets.iter().flat_map(|s| s.iter()).collect();
    for v in d.vertices().rev().filter(|&v| !used.contains(v)) {
        let v = state.locate(v).unwrap();
        push(&mut state, Step::DeleteVertex { v })?;
    }
    let doomed: Vec<(usize, usize)> = d
        .arcs()
        .filter(|&(a, b)| used.contains(a) && used.contains(b) && !keep.contains(&(a, b)))
        .collect();
    for (a, b) in doomed {
        let (tail, head) = (state.locate(a).unwrap(), state.locate(b).unwrap());
        push(&mut state, Step::DeleteArc { tail, head })?;
    }

    let current = |state: &Replay, (a, b): (usize, usize)| (state.locate(a).unwrap(), state.locate(b).unwrap());
    for (k, &arc) in tree_arcs.iter().enumerate() {
        let (tail, head) = current(&state, arc);
        if !is_contractible(&state.digraph, (tail, head))? {
            return internal(format!("tree arc {arc:?} is not contractible when its turn comes"));
        }
        push(&mut state, Step::Contract { tail, head })?;
        for &later in &tree_arcs[k + 1..] {
            if !is_contractible(&state.digraph, current(&state, later))? {
                return internal(format!(
                    "contracting {arc:?} destroyed the contractibility of {later:?}"
                ));
            }
        }
    }

    let expected = crate::generate::bidirected_complete(t);
    if state.digraph.n() != t || are_isomorphic(&state.digraph, &expected).is_none() {
        return internal("contracted digraph is not a bidirected complete digraph");
    }
    for p in &pairs {
        let merged = p.minus.union(&p.plus);
        if !state.members.contains(&merged) {
            return internal("a final vertex is not the union of one branch-set pair");
        }
    }
    let trace = ButterflyTrace {
        initial: d.clone(),
        steps,
        result: state.digraph,
        provenance: state.members,
    };
    trace.check()?;
    Ok(trace)
}

/// Exhaustive search for `h` as a butterfly minor of `d`. States are
/// deduplicated up to isomorphism; a state containing `h` as a subgraph is a
/// hit, since the surplus can be deleted. Intended for `d` with at most ~7 vertices.
pub fn has_butterfly_minor(d: &Digraph, h: &Digraph) -> Result<bool> {
    if h.n() > d.n() {
        return Ok(false);
    }
    let mut seen = HashSet::new();
    let mut stack = vec![d.clone()];
    seen.insert(canonical_code(d)?);
    while let Some(state) = stack.pop() {
        if find_subgraph(h, &state).is_some() {
            return Ok(true);
        }
        for next in successors(&state)? {
            if next.n() < h.n() || next.arc_count() < h.arc_count() {
                continue;
            }
            if seen.insert(canonical_code(&next)?) {
                stack.push(next);
            }
        }
    }
    Ok(false)
}

/// Every digraph reachable by one deletion or contraction.
pub fn successors(d: &Digraph) -> Result<Vec<Digraph>> {
    let mut out = Vec::new();
    for v in d.vertices() {
        out.push(d.remove_vertex(v)?);
    }
    for (u, v) in d.arcs() {
        let mut smaller = d.clone();
        smaller.remove_arc(u, v);
        out.push(smaller);
        if is_contractible(d, (u, v))? {
            out.push(contract(d, (u, v))?.digraph);
        }
    }
    Ok(out)
}

/// Strong bidirected `K_{2t}` model from the clique-forcing pipeline, then
/// [`extract_butterfly`]. `None` when the pipeline does not produce the model.
pub fn butterfly_pipeline(d: &Digraph, t: usize) -> Result<Option<ButterflyTrace>> {
    if t == 0 {
        return invalid("t must be at least 1");
    }
    if 2 * t > 6 {
        return Err(Error::Unsupported(format!(
            "t = {t} needs the Hadwiger threshold at {}, known exactly only up to 6",
            2 * t
        )));
    }
    match clique_minor_pipeline(d, 2 * t)? {
        Some(model) => extract_butterfly(&model).map(Some),
        None => Ok(None),
    }
}

/// A random strong model of `pattern`: each pattern vertex becomes a random
/// strongly connected digraph on `1..=max_part` vertices, each pattern arc is
/// realised by a random host arc, and some noise arcs and unused vertices are
/// added. Host labels are shuffled.
pub fn inflate<R: Rng>(pattern: &Digraph, max_part: usize, rng: &mut R) -> StrongMinorModel {
    let max_part = max_part.max(1);
    let sizes: Vec<usize> = pattern.vertices().map(|_| rng.gen_range(1..=max_part)).collect();
    let unused = rng.gen_range(0..=1);
    let n: usize = sizes.iter().sum::<usize>() + unused;
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);

    let mut host = Digraph::new(n);
    let mut next = 0;
    let mut branch: Vec<Vec<usize>> = Vec::new();
    for &size in &sizes {
        let local = random_strong_digraph(size, 0.25, rng);
        let vs: Vec<usize> = labels[next..next + size].to_vec();
        next += size;
        for (a, b) in local.arcs() {
            host.add_arc(vs[a], vs[b]).unwrap();
        }
        branch.push(vs);
    }
    let spare: Vec<usize> = labels[next..].to_vec();
    for (a, b) in pattern.arcs() {
        let u = *branch[a].choose(rng).unwrap();
        let v = *branch[b].choose(rng).unwrap();
        host.add_arc(u, v).unwrap();
    }
    let owner: Vec<Option<usize>> = {
        let mut owner = vec![None; n];
        for (h, vs) in branch.iter().enumerate() {
            for &v in vs {
                owner[v] = Some(h);
            }
        }
        owner
    };
    for u in 0..n {
        for v in 0..n {
            let across = match (owner[u], owner[v]) {
                (Some(a), Some(b)) => a != b,
                _ => u != v,
            };
            let p = if spare.contains(&u) || spare.contains(&v) { 0.3 } else { 0.08 };
            if across && !host.has_arc(u, v) && rng.gen_bool(p) {
                host.add_arc(u, v).unwrap();
            }
        }
    }
    StrongMinorModel {
        host,
        pattern: pattern.clone(),
        branch_sets: branch.into_iter().map(VertexSet::from).collect(),
    }
}
