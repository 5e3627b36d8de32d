//! Strong minor models, their verification and exact search, composition of
//! models (the containment relation is transitive), and the pipeline that
//! forces a strong bidirected-clique minor from large dichromatic number.

use serde::{Deserialize, Serialize};

use crate::bits::{bit, members, Adjacency, Mask};
use crate::coloring::ProperColoring;
use crate::decomposition::{certify_decomposition, DecompositionCertificate};
use crate::digraph::{biorient, Digraph, VertexSet};
use crate::error::{internal, invalid, Error, Result};
use crate::graph::Graph;

/// Branch sets `X_h` in `host`, one per `pattern` vertex `h`. Host vertices in
/// no branch set are unused (the model lives in a sub-digraph of the host).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongMinorModel {
    pub host: Digraph,
    pub pattern: Digraph,
    pub branch_sets: Vec<VertexSet>,
}

/// A minor model in an undirected graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndirectedMinorModel {
    pub host: Graph,
    pub pattern: Graph,
    pub branch_sets: Vec<VertexSet>,
}

fn count_arcs(host: &Digraph, from: &VertexSet, to: &VertexSet) -> usize {
    from.iter()
        .map(|u| host.out_neighbors(u).iter().filter(|&&v| to.contains(v)).count())
        .sum()
}

fn check_branch_sets(n: usize, pattern_n: usize, sets: &[VertexSet]) -> Result<()> {
    if sets.len() != pattern_n {
        return invalid(format!(
            "{} branch sets for a pattern on {} vertices",
            sets.len(),
            pattern_n
        ));
    }
    let mut seen = vec![false; n];
    for (h, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return invalid(format!("branch set {h} is empty"));
        }
        set.check_within(n)?;
        for v in set {
            if std::mem::replace(&mut seen[v], true) {
                return invalid(format!("vertex {v} lies in two branch sets"));
            }
        }
    }
    Ok(())
}

impl StrongMinorModel {
    /// Checks every model invariant, naming the first violation. In
    /// strengthened mode each pair of branch sets joined in the pattern must
    /// also carry at least two arcs in each direction.
    pub fn check(&self, strengthened: bool) -> Result<()> {
        check_branch_sets(self.host.n(), self.pattern.n(), &self.branch_sets)?;
        for (h, set) in self.branch_sets.iter().enumerate() {
            if !self.host.is_strongly_connected_set(set)? {
                return invalid(format!("branch set {h} is not strongly connected"));
            }
        }
        for (a, b) in self.pattern.arcs() {
            let need = if strengthened { 2 } else { 1 };
            let have = count_arcs(&self.host, &self.branch_sets[a], &self.branch_sets[b]);
            if have < need {
                return invalid(format!(
                    "pattern arc ({a}, {b}) realised by {have} host arcs, need {need}"
                ));
            }
            if strengthened {
                let back = count_arcs(&self.host, &self.branch_sets[b], &self.branch_sets[a]);
                if back < 2 {
                    return invalid(format!(
                        "pattern pair {{{a}, {b}}} has {back} host arcs back, need 2"
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, strengthened: bool) -> bool {
        self.check(strengthened).is_ok()
    }

    /// The lexicographically least host arc realising pattern arc `(a, b)`.
    pub fn realizing_arc(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let to = &self.branch_sets[b];
        self.branch_sets[a].iter().find_map(|u| {
            self.host
                .out_neighbors(u)
                .iter()
                .find(|&&v| to.contains(v))
                .map(|&v| (u, v))
        })
    }

    /// The identity model of `d` in itself.
    pub fn identity(d: &Digraph) -> Self {
        StrongMinorModel {
            host: d.clone(),
            pattern: d.clone(),
            branch_sets: d.vertices().map(VertexSet::singleton).collect(),
        }
    }

    /// The same model with every arc of host and pattern reversed.
    pub fn reversed(&self) -> Self {
        StrongMinorModel {
            host: self.host.reverse(),
            pattern: self.pattern.reverse(),
            branch_sets: self.branch_sets.clone(),
        }
    }
}

pub fn verify_strong_model(model: &StrongMinorModel, strengthened: bool) -> bool {
    model.is_valid(strengthened)
}

impl UndirectedMinorModel {
    pub fn check(&self) -> Result<()> {
        check_branch_sets(self.host.n(), self.pattern.n(), &self.branch_sets)?;
        for (h, set) in self.branch_sets.iter().enumerate() {
            if !self.host.is_connected_set(set) {
                return invalid(format!("branch set {h} is not connected"));
            }
        }
        for (a, b) in self.pattern.edges() {
            let (xa, xb) = (&self.branch_sets[a], &self.branch_sets[b]);
            if !xa.iter().any(|u| self.host.neighbors(u).iter().any(|&v| xb.contains(v))) {
                return invalid(format!("pattern edge {{{a}, {b}}} is not realised"));
            }
        }
        Ok(())
    }
}

/// Exact search for a strong `pattern`-model in `host`. Vertices may stay unused.
pub fn find_strong_model(host: &Digraph, pattern: &Digraph) -> Result<Option<StrongMinorModel>> {
    let host_adj = Adjacency::of(host)?;
    let pattern_adj = Adjacency::of(pattern)?;
    let symmetric_complete = pattern.arc_count() == pattern.n() * pattern.n().saturating_sub(1);
    let Some(masks) = search_model(&host_adj, &pattern_adj, symmetric_complete) else {
        return Ok(None);
    };
    let model = StrongMinorModel {
        host: host.clone(),
        pattern: pattern.clone(),
        branch_sets: masks.into_iter().map(VertexSet::from_mask).collect(),
    };
    model.check(false)?;
    Ok(Some(model))
}

/// Exact search for a `K_t`-minor model in `g`.
pub fn find_clique_minor(g: &Graph, t: usize) -> Result<Option<UndirectedMinorModel>> {
    let host_adj = Adjacency::of_graph(g)?;
    let pattern = Graph::complete(t);
    let pattern_adj = Adjacency::of_graph(&pattern)?;
    let Some(masks) = search_model(&host_adj, &pattern_adj, true) else {
        return Ok(None);
    };
    let model = UndirectedMinorModel {
        host: g.clone(),
        pattern,
        branch_sets: masks.into_iter().map(VertexSet::from_mask).collect(),
    };
    model.check()?;
    Ok(Some(model))
}

/// Backtracking over branch sets. Pattern vertices are placed in decreasing
/// degree order; each receives a strongly connected set of still-free host
/// vertices, smallest sets first, that realises every pattern arc to the
/// already placed vertices. For symmetric complete patterns the branch sets
/// are additionally ordered by minimum vertex.
fn search_model(host: &Adjacency, pattern: &Adjacency, symmetric_complete: bool) -> Option<Vec<Mask>> {
    let k = pattern.n();
    if k > host.n() {
        return None;
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&h| {
        (
            std::cmp::Reverse(pattern.out[h].count_ones() + pattern.inn[h].count_ones()),
            h,
        )
    });
    let mut search = ModelSearch {
        host,
        pattern,
        order,
        symmetric_complete,
        assigned: vec![0; k],
    };
    search.place(0, 0).then_some(search.assigned)
}

struct ModelSearch<'a> {
    host: &'a Adjacency,
    pattern: &'a Adjacency,
    order: Vec<usize>,
    symmetric_complete: bool,
    assigned: Vec<Mask>,
}

impl ModelSearch<'_> {
    fn place(&mut self, depth: usize, used: Mask) -> bool {
        let Some(&h) = self.order.get(depth) else {
            return true;
        };
        let free = crate::bits::full(self.host.n()) & !used;
        let still_needed = self.order.len() - depth - 1;
        let max_size = (free.count_ones() as usize).saturating_sub(still_needed);
        let min_vertex = match (self.symmetric_complete, depth) {
            (true, d) if d > 0 => self.assigned[self.order[d - 1]].trailing_zeros() as usize + 1,
            _ => 0,
        };
        // Strongly connected sets never straddle two strong components.
        for comp in components(self.host, free) {
            let pool: Vec<usize> = members(comp).collect();
            for size in 1..=max_size.min(pool.len()) {
                let mut found = false;
                for_each_combination(&pool, size, &mut |set| {
                    if set.trailing_zeros() as usize >= min_vertex
                        && self.admissible(h, depth, set, used)
                    {
                        self.assigned[h] = set;
                        if self.place(depth + 1, used | set) {
                            found = true;
                            return true;
                        }
                        self.assigned[h] = 0;
                    }
                    false
                });
                if found {
                    return true;
                }
            }
        }
        false
    }

    fn admissible(&self, h: usize, depth: usize, set: Mask, used: Mask) -> bool {
        if !self.host.is_strong(set) {
            return false;
        }
        for &g in &self.order[..depth] {
            let other = self.assigned[g];
            if self.pattern.out[h] & bit(g) != 0 && !self.host.has_arc_between(set, other) {
                return false;
            }
            if self.pattern.inn[h] & bit(g) != 0 && !self.host.has_arc_between(other, set) {
                return false;
            }
        }
        // Every pattern arc between a placed vertex and an unplaced one must
        // still be realisable through free vertices.
        let free = crate::bits::full(self.host.n()) & !(used | set);
        for &g in &self.order[depth + 1..] {
            for &p in self.order[..depth].iter().chain(std::iter::once(&h)) {
                let xp = if p == h { set } else { self.assigned[p] };
                if self.pattern.out[p] & bit(g) != 0 && !self.host.has_arc_between(xp, free) {
                    return false;
                }
                if self.pattern.inn[p] & bit(g) != 0 && !self.host.has_arc_between(free, xp) {
                    return false;
                }
            }
        }
        true
    }
}

/// Strong components of the sub-digraph induced by `within`, as masks.
fn components(adj: &Adjacency, within: Mask) -> Vec<Mask> {
    let mut rest = within;
    let mut comps = Vec::new();
    while rest != 0 {
        let v = bit(rest.trailing_zeros() as usize);
        let comp = adj.forward_closure(v, within) & adj.backward_closure(v, within);
        comps.push(comp);
        rest &= !comp;
    }
    comps
}

/// Calls `f` on every `size`-subset of `pool` (as a mask) in lexicographic
/// order of positions; stops early when `f` returns true.
pub(crate) fn for_each_combination(pool: &[usize], size: usize, f: &mut dyn FnMut(Mask) -> bool) -> bool {
    fn go(pool: &[usize], start: usize, left: usize, acc: Mask, f: &mut dyn FnMut(Mask) -> bool) -> bool {
        if left == 0 {
            return f(acc);
        }
        for i in start..=pool.len() - left {
            if go(pool, i + 1, left - 1, acc | bit(pool[i]), f) {
                return true;
            }
        }
        false
    }
    if size > pool.len() {
        return false;
    }
    go(pool, 0, size, 0, f)
}

/// Turns a minor model in an undirected graph into a strong model of the
/// biorientated pattern in `host`. Needs every host edge the model relies on
/// (inside branch sets for connectivity, between them for the pattern edges)
/// to be a digon of `host`.
pub fn promote_to_bioriented(model: &UndirectedMinorModel, host: &Digraph) -> Result<StrongMinorModel> {
    model.check()?;
    if host.n() != model.host.n() {
        return invalid("host digraph and model graph differ in order");
    }
    let digons = host.digon_graph();
    for (h, set) in model.branch_sets.iter().enumerate() {
        if !digons.is_connected_set(set) {
            return invalid(format!("branch set {h} is not connected through digons of the host"));
        }
    }
    for (a, b) in model.pattern.edges() {
        let (xa, xb) = (&model.branch_sets[a], &model.branch_sets[b]);
        if !xa.iter().any(|u| digons.neighbors(u).iter().any(|&v| xb.contains(v))) {
            return invalid(format!("pattern edge {{{a}, {b}}} has no digon between its branch sets"));
        }
    }
    let strong = StrongMinorModel {
        host: host.clone(),
        pattern: biorient(&model.pattern),
        branch_sets: model.branch_sets.clone(),
    };
    strong.check(false)?;
    Ok(strong)
}

/// Given a model of `H` in `M` (outer) and of `M` in `D` (inner), the model of
/// `H` in `D` whose branch sets are unions of inner branch sets.
pub fn compose_models(outer: &StrongMinorModel, inner: &StrongMinorModel) -> Result<StrongMinorModel> {
    if outer.host != inner.pattern {
        return invalid("outer host differs from inner pattern");
    }
    let branch_sets = outer
        .branch_sets
        .iter()
        .map(|set| set.iter().flat_map(|m| inner.branch_sets[m].iter()).collect())
        .collect();
    let composed = StrongMinorModel {
        host: inner.host.clone(),
        pattern: outer.pattern.clone(),
        branch_sets,
    };
    composed
        .check(false)
        .map_err(|e| Error::Internal(format!("composition of valid models failed: {e}")))?;
    Ok(composed)
}

/// Largest number of label assignments [`find_strengthened_model`] will enumerate.
pub const STRENGTHENED_SEARCH_LIMIT: u64 = 50_000_000;

/// Exhaustive search for a strengthened model (at least two host arcs in each
/// direction between branch sets of adjacent pattern vertices). Tries every
/// assignment of host vertices to a pattern vertex or to no branch set.
pub fn find_strengthened_model(host: &Digraph, pattern: &Digraph) -> Result<Option<StrongMinorModel>> {
    let (n, p) = (host.n(), pattern.n());
    let states = (p as u64 + 1).checked_pow(n as u32).filter(|&s| s <= STRENGTHENED_SEARCH_LIMIT);
    if states.is_none() {
        return Err(Error::Unsupported(format!(
            "{} label choices for each of {n} host vertices exceed the search limit",
            p + 1
        )));
    }
    let mut labels = vec![0usize; n];
    loop {
        let mut sets = vec![VertexSet::new(); p];
        for (v, &l) in labels.iter().enumerate() {
            if l > 0 {
                sets[l - 1].insert(v);
            }
        }
        if sets.iter().all(|s| !s.is_empty()) {
            let model = StrongMinorModel {
                host: host.clone(),
                pattern: pattern.clone(),
                branch_sets: sets,
            };
            if model.is_valid(true) {
                return Ok(Some(model));
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(None);
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

/// Least chromatic number forcing a `K_t` minor, where known exactly.
/// Hadwiger's conjecture is proven for `t <= 6`, so the value there is `t`.
pub fn hadwiger_threshold(t: usize) -> Option<usize> {
    (1..=6).contains(&t).then_some(t)
}

/// Everything the clique-forcing pipeline computed.
#[derive(Debug, Clone)]
pub struct CliqueMinorRun {
    pub decomposition: DecompositionCertificate,
    /// `K_t` model in the quotient graph, when its chromatic number reaches `t`.
    pub clique_model: Option<UndirectedMinorModel>,
    /// The strong bidirected `K_t` model in the input digraph.
    pub model: Option<StrongMinorModel>,
}

impl CliqueMinorRun {
    pub fn quotient_coloring(&self) -> &ProperColoring {
        &self.decomposition.quotient_coloring
    }
}

/// Decomposes `d`; if the quotient graph needs at least `t` colours, finds a
/// `K_t` minor there, lifts it to a strong bidirected `K_t` model of the
/// quotient's biorientation, and composes with the decomposition's model.
pub fn clique_minor_run(d: &Digraph, t: usize) -> Result<CliqueMinorRun> {
    if t == 0 {
        return invalid("t must be at least 1");
    }
    let Some(threshold) = hadwiger_threshold(t) else {
        return Err(Error::Unsupported(format!(
            "t = {t}: the Hadwiger threshold is only known exactly for t <= 6"
        )));
    };
    let decomposition = certify_decomposition(d)?;
    if decomposition.quotient_coloring.k < threshold {
        return Ok(CliqueMinorRun {
            decomposition,
            clique_model: None,
            model: None,
        });
    }
    let quotient = &decomposition.quotient;
    let Some(clique) = find_clique_minor(quotient, t)? else {
        return internal(format!(
            "quotient graph with chromatic number {} >= {t} has no K_{t} minor",
            decomposition.quotient_coloring.k
        ));
    };
    let outer = promote_to_bioriented(&clique, &biorient(quotient))?;
    let model = compose_models(&outer, &decomposition.model)?;
    Ok(CliqueMinorRun {
        decomposition,
        clique_model: Some(clique),
        model: Some(model),
    })
}

pub fn clique_minor_pipeline(d: &Digraph, t: usize) -> Result<Option<StrongMinorModel>> {
    Ok(clique_minor_run(d, t)?.model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{bidirected_complete, cycle_graph, lower_bound_butterfly, path_graph};

    #[test]
    fn verification_examples() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(verify_strong_model(&StrongMinorModel::identity(&d), false));

        let broken = StrongMinorModel {
            host: Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 1)]).unwrap(),
            pattern: Digraph::new(1),
            branch_sets: vec![VertexSet::from(vec![0, 1])],
        };
        assert!(!verify_strong_model(&broken, false));

        let overlap = StrongMinorModel {
            host: bidirected_complete(3),
            pattern: Digraph::new(2),
            branch_sets: vec![VertexSet::from(vec![0, 1]), VertexSet::from(vec![1])],
        };
        assert!(!overlap.is_valid(false));
    }

    #[test]
    fn search_examples() {
        let k1 = Digraph::new(1);
        assert!(find_strong_model(&lower_bound_butterfly(3).unwrap(), &k1)
            .unwrap()
            .is_some());
        let k3 = bidirected_complete(3);
        // Contracting a bidirected path of three vertices in the bidirected 5-cycle.
        assert!(find_strong_model(&lower_bound_butterfly(3).unwrap(), &k3)
            .unwrap()
            .is_some());
        let c5 = Digraph::from_arcs(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert!(find_strong_model(&c5, &k3).unwrap().is_none());
        assert!(find_strong_model(&bidirected_complete(4), &k3).unwrap().is_some());
    }

    #[test]
    fn clique_minor_examples() {
        let m = find_clique_minor(&Graph::complete(4), 4).unwrap().unwrap();
        assert!(m.branch_sets.iter().all(|s| s.len() == 1));
        assert!(find_clique_minor(&cycle_graph(5).unwrap(), 3).unwrap().is_some());
        assert!(find_clique_minor(&path_graph(6), 3).unwrap().is_none());
    }

    #[test]
    fn promotion_needs_digons() {
        let c5 = cycle_graph(5).unwrap();
        let model = find_clique_minor(&c5, 3).unwrap().unwrap();
        assert!(promote_to_bioriented(&model, &biorient(&c5)).unwrap().is_valid(false));
        let oriented = Digraph::from_arcs(5, c5.edges()).unwrap();
        assert!(promote_to_bioriented(&model, &oriented).is_err());
    }

    #[test]
    fn composition_with_identity() {
        let k4 = bidirected_complete(4);
        let model = find_strong_model(&k4, &bidirected_complete(3)).unwrap().unwrap();
        let left = compose_models(&model, &StrongMinorModel::identity(&k4)).unwrap();
        assert_eq!(left, model);
        let right = compose_models(&StrongMinorModel::identity(&model.pattern), &model).unwrap();
        assert_eq!(right, model);
        assert!(compose_models(&model, &model).is_err());
    }

    #[test]
    fn pipeline_rejects_large_t() {
        assert!(matches!(
            clique_minor_pipeline(&bidirected_complete(3), 7),
            Err(Error::Unsupported(_))
        ));
        let acyclic = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(clique_minor_pipeline(&acyclic, 2).unwrap().is_none());
        let model = clique_minor_pipeline(&bidirected_complete(5), 3).unwrap().unwrap();
        assert!(model.is_valid(false));
    }
}
