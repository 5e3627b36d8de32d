//! Subdivisions of subcubic digraphs built from strong minor models.
//!
//! For each pattern vertex `u` a branch vertex `b(u)` is chosen inside `X_u`
//! and joined to the terminals of the host arcs realising the pattern arcs at
//! `u` by paths inside `X_u` that meet only in `b(u)`. Arc paths are then
//! `b(u1) -> ... -> v(e, u1) -> v(e, u2) -> ... -> b(u2)`.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, VertexSet};
use crate::error::{internal, invalid, Result};
use crate::strong_minor::{find_strong_model, StrongMinorModel};

/// No digons, total degree at most 3, in- and out-degree at most 2.
pub fn is_subcubic(f: &Digraph) -> bool {
    f.vertices().all(|v| {
        let (i, o) = (f.in_degree(v), f.out_degree(v));
        i <= 2 && o <= 2 && i + o <= 3 && f.out_neighbors(v).iter().all(|&w| !f.has_arc(w, v))
    })
}

/// Reporting helper: the dichromatic number bound at which every subcubic
/// digraph on `n` vertices is known to appear as a subdivision.
pub fn threshold(n: usize) -> usize {
    22 * n
}

/// One pattern arc at `u` together with its inner path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub arc: (usize, usize),
    /// The end in `X_u` of the host arc realising `arc`.
    pub terminal: usize,
    /// `b(u) -> terminal` when `u` is the tail of `arc`, `terminal -> b(u)` otherwise.
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub vertex: usize,
    pub branch_vertex: usize,
    /// Arcs entering `u` first, then arcs leaving it, each group in arc order.
    pub links: Vec<Link>,
}

impl PathSystem {
    pub fn degree(&self) -> usize {
        self.links.len()
    }

    /// Checks the per-vertex conditions: paths inside `set`, correctly
    /// oriented, and pairwise meeting only in the branch vertex.
    pub fn check(&self, d: &Digraph, set: &VertexSet) -> Result<()> {
        let b = self.branch_vertex;
        if !set.contains(b) {
            return invalid(format!("branch vertex {b} outside its branch set"));
        }
        for link in &self.links {
            let p = &link.path;
            if !d.is_path(p) || p.iter().any(|&v| !set.contains(v)) {
                return invalid(format!("path {p:?} is not a directed path inside the branch set"));
            }
            let (start, end) = if link.arc.0 == self.vertex {
                (b, link.terminal)
            } else {
                (link.terminal, b)
            };
            if p[0] != start || p[p.len() - 1] != end {
                return invalid(format!("path {p:?} should run from {start} to {end}"));
            }
        }
        for (i, x) in self.links.iter().enumerate() {
            for y in &self.links[i + 1..] {
                if let Some(&w) = x.path.iter().find(|&&w| w != b && y.path.contains(&w)) {
                    return invalid(format!("paths {:?} and {:?} share {w}", x.path, y.path));
                }
            }
        }
        Ok(())
    }

    fn reversed(self) -> PathSystem {
        PathSystem {
            links: self
                .links
                .into_iter()
                .map(|l| Link {
                    arc: (l.arc.1, l.arc.0),
                    terminal: l.terminal,
                    path: l.path.into_iter().rev().collect(),
                })
                .collect(),
            ..self
        }
    }
}

fn path(d: &Digraph, set: &VertexSet, from: usize, to: usize) -> Result<Vec<usize>> {
    match d.shortest_path_within(from, to, set) {
        Some(p) => Ok(p),
        None => internal(format!("no path {from} -> {to} inside a strongly connected branch set")),
    }
}

/// Builds the system for vertex `u` from explicit terminals. `ins` and `outs`
/// hold `(pattern arc, terminal)` for the arcs entering and leaving `u`. Cases
/// with more leaving than entering arcs are solved on the reverse digraph.
pub fn path_system_with_terminals(
    d: &Digraph,
    set: &VertexSet,
    u: usize,
    ins: &[((usize, usize), usize)],
    outs: &[((usize, usize), usize)],
) -> Result<PathSystem> {
    for &(arc, t) in ins.iter().chain(outs) {
        if !set.contains(t) {
            return invalid(format!("terminal {t} of arc {arc:?} outside the branch set of {u}"));
        }
    }
    if ins.iter().any(|&(a, _)| a.1 != u) || outs.iter().any(|&(a, _)| a.0 != u) {
        return invalid(format!("arcs not incident with {u} in the stated direction"));
    }
    let link = |(arc, terminal): ((usize, usize), usize), path: Vec<usize>| Link { arc, terminal, path };
    let system = match (ins.len(), outs.len()) {
        (0, 0) => PathSystem {
            vertex: u,
            branch_vertex: set.min_vertex().ok_or_else(|| crate::Error::InvalidInput("empty branch set".into()))?,
            links: vec![],
        },
        (1, 0) => PathSystem { vertex: u, branch_vertex: ins[0].1, links: vec![link(ins[0], vec![ins[0].1])] },
        (0, 1) => PathSystem { vertex: u, branch_vertex: outs[0].1, links: vec![link(outs[0], vec![outs[0].1])] },
        (1, 1) => {
            let b = ins[0].1;
            PathSystem {
                vertex: u,
                branch_vertex: b,
                links: vec![link(ins[0], vec![b]), link(outs[0], path(d, set, b, outs[0].1)?)],
            }
        }
        (2, 0) => {
            let b = ins[0].1;
            PathSystem {
                vertex: u,
                branch_vertex: b,
                links: vec![link(ins[0], vec![b]), link(ins[1], path(d, set, ins[1].1, b)?)],
            }
        }
        (1, 2) => {
            let (v1, v2, v3) = (ins[0].1, outs[0].1, outs[1].1);
            let p12 = path(d, set, v1, v2)?;
            let p13 = path(d, set, v1, v3)?;
            let (j, b) = p13
                .iter()
                .copied()
                .enumerate()
                .rev()
                .find(|(_, w)| p12.contains(w))
                .expect("both paths start at v1");
            let i = p12.iter().position(|&w| w == b).unwrap();
            PathSystem {
                vertex: u,
                branch_vertex: b,
                links: vec![
                    link(ins[0], p12[..=i].to_vec()),
                    link(outs[0], p12[i..].to_vec()),
                    link(outs[1], p13[j..].to_vec()),
                ],
            }
        }
        (0, 2) | (2, 1) => {
            let flip = |xs: &[((usize, usize), usize)]| -> Vec<_> {
                xs.iter().map(|&((a, b), t)| ((b, a), t)).collect()
            };
            let mirrored = path_system_with_terminals(&d.reverse(), set, u, &flip(outs), &flip(ins))?;
            let mut s = mirrored.reversed();
            // Restore the entering-first order.
            s.links.sort_by_key(|l| (l.arc.0 == u, l.arc));
            s
        }
        (i, o) => return invalid(format!("vertex {u} has in-degree {i} and out-degree {o}; not subcubic")),
    };
    system.check(d, set)?;
    Ok(system)
}

/// Path system for pattern vertex `u`, with terminals taken from the least
/// host arc realising each incident pattern arc.
pub fn build_path_system(model: &StrongMinorModel, u: usize) -> Result<PathSystem> {
    let f = &model.pattern;
    if !is_subcubic(f) {
        return invalid("pattern is not subcubic");
    }
    if u >= f.n() {
        return invalid(format!("pattern vertex {u} out of range"));
    }
    let terminal = |a: usize, b: usize, head: bool| -> Result<usize> {
        match model.realizing_arc(a, b) {
            Some((x, y)) => Ok(if head { y } else { x }),
            None => invalid(format!("pattern arc ({a}, {b}) is not realised")),
        }
    };
    let ins = f
        .in_neighbors(u)
        .iter()
        .map(|&w| Ok(((w, u), terminal(w, u, true)?)))
        .collect::<Result<Vec<_>>>()?;
    let outs = f
        .out_neighbors(u)
        .iter()
        .map(|&w| Ok(((u, w), terminal(u, w, false)?)))
        .collect::<Result<Vec<_>>>()?;
    path_system_with_terminals(&model.host, &model.branch_sets[u], u, &ins, &outs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcPath {
    pub arc: (usize, usize),
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionEmbedding {
    pub host: Digraph,
    pub pattern: Digraph,
    pub branch_vertex: Vec<usize>,
    /// One entry per pattern arc, in arc order.
    pub arc_paths: Vec<ArcPath>,
}

impl SubdivisionEmbedding {
    /// Checks every embedding invariant, naming the first violation.
    pub fn check(&self) -> Result<()> {
        let (d, f) = (&self.host, &self.pattern);
        if self.branch_vertex.len() != f.n() {
            return invalid("one branch vertex per pattern vertex expected");
        }
        let mut is_branch = vec![false; d.n()];
        for &b in &self.branch_vertex {
            if b >= d.n() || std::mem::replace(&mut is_branch[b], true) {
                return invalid(format!("branch vertex {b} out of range or repeated"));
            }
        }
        let arcs: Vec<_> = f.arcs().collect();
        if self.arc_paths.len() != arcs.len() || self.arc_paths.iter().zip(&arcs).any(|(p, a)| p.arc != *a) {
            return invalid("arc paths do not match the pattern arcs");
        }
        let mut used = vec![false; d.n()];
        for ArcPath { arc: (a, c), path } in &self.arc_paths {
            if path.len() < 2 || !d.is_path(path) {
                return invalid(format!("{path:?} is not a directed path of the host"));
            }
            if path[0] != self.branch_vertex[*a] || path[path.len() - 1] != self.branch_vertex[*c] {
                return invalid(format!("path {path:?} has wrong ends for arc ({a}, {c})"));
            }
            for &w in &path[1..path.len() - 1] {
                if is_branch[w] {
                    return invalid(format!("inner vertex {w} is a branch vertex"));
                }
                if std::mem::replace(&mut used[w], true) {
                    return invalid(format!("inner vertex {w} lies on two paths"));
                }
            }
        }
        Ok(())
    }
}

pub fn verify_subdivision(emb: &SubdivisionEmbedding) -> bool {
    emb.check().is_ok()
}

/// Assembles the per-vertex path systems and the realising arcs into a
/// subdivision of the pattern. Also returns the path systems.
pub fn build_subdivision_with_systems(
    model: &StrongMinorModel,
) -> Result<(SubdivisionEmbedding, Vec<PathSystem>)> {
    model.check(false)?;
    let systems = model
        .pattern
        .vertices()
        .map(|u| build_path_system(model, u))
        .collect::<Result<Vec<_>>>()?;
    let inner = |u: usize, arc: (usize, usize)| -> &[usize] {
        &systems[u].links.iter().find(|l| l.arc == arc).expect("every incident arc has a link").path
    };
    let arc_paths = model
        .pattern
        .arcs()
        .map(|(a, c)| {
            let mut path = inner(a, (a, c)).to_vec();
            path.extend_from_slice(inner(c, (a, c)));
            ArcPath { arc: (a, c), path }
        })
        .collect();
    let emb = SubdivisionEmbedding {
        host: model.host.clone(),
        pattern: model.pattern.clone(),
        branch_vertex: systems.iter().map(|s| s.branch_vertex).collect(),
        arc_paths,
    };
    if let Err(e) = emb.check() {
        return internal(format!("assembled subdivision fails verification: {e}"));
    }
    Ok((emb, systems))
}

pub fn build_subdivision(model: &StrongMinorModel) -> Result<SubdivisionEmbedding> {
    build_subdivision_with_systems(model).map(|(e, _)| e)
}

/// Exact strong model search for `f` in `d`, then [`build_subdivision`].
pub fn subdivision_pipeline(d: &Digraph, f: &Digraph) -> Result<Option<SubdivisionEmbedding>> {
    if !is_subcubic(f) {
        return invalid("pattern is not subcubic");
    }
    match find_strong_model(d, f)? {
        Some(model) => build_subdivision(&model).map(Some),
        None => Ok(None),
    }
}
