//! Plain-text edge-list files and DOT export.
//!
//! Format: a header line `n m`, then `m` lines `u v` with 0-indexed vertices.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_error<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

/// `(line number, first, second)` for one content line.
type Numbered = (usize, usize, usize);

/// Content lines, plus the number of the last line.
fn pairs(text: &str) -> Result<(Vec<Numbered>, usize)> {
    let mut out = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return parse_error(line, format!("expected two integers, found {:?}", trimmed));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse { line, message: format!("{s:?} is not a non-negative integer") })
        };
        out.push((line, num(fields[0])?, num(fields[1])?));
    }
    Ok((out, last))
}

/// Shared reader: header, range and loop checks; `add` reports whether the
/// item was new.
fn read_items(
    text: &str,
    mut add: impl FnMut(usize, usize) -> bool,
) -> Result<usize> {
    let (lines, last) = pairs(text)?;
    let Some(&(_, n, m)) = lines.first() else {
        return parse_error(last.max(1), "missing header line \"n m\"");
    };
    let body = &lines[1..];
    if body.len() != m {
        let line = body.get(m).map_or(last + 1, |&(l, _, _)| l);
        return parse_error(line, format!("header announces {m} lines, found {}", body.len()));
    }
    for &(line, u, v) in body {
        if u >= n || v >= n {
            return parse_error(line, format!("vertex out of range for n = {n}"));
        }
        if u == v {
            return parse_error(line, format!("loop at {u}"));
        }
        if !add(u, v) {
            return parse_error(line, format!("duplicate ({u}, {v})"));
        }
    }
    Ok(n)
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let (lines, _) = pairs(text)?;
    let n = lines.first().map_or(0, |&(_, n, _)| n);
    let mut d = Digraph::new(n);
    read_items(text, |u, v| d.add_arc(u, v).unwrap_or(false))?;
    Ok(d)
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut s = format!("{} {}\n", d.n(), d.arc_count());
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// Undirected variant; `u v` and `v u` name the same edge.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let (lines, _) = pairs(text)?;
    let n = lines.first().map_or(0, |&(_, n, _)| n);
    let mut g = Graph::new(n);
    read_items(text, |u, v| g.add_edge(u, v).unwrap_or(false))?;
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// DOT rendering. `groups`, when given, assigns each vertex a cluster label
/// (for example the branch set or part containing it).
pub fn digraph_to_dot(d: &Digraph, groups: Option<&[Option<usize>]>) -> String {
    let mut s = String::from("digraph G {\n");
    for v in d.vertices() {
        match groups.and_then(|g| g.get(v).copied().flatten()) {
            Some(c) => {
                let _ = writeln!(s, "  {v} [label=\"{v}\", group=\"{c}\", colorscheme=set312, style=filled, fillcolor={}];", c % 12 + 1);
            }
            None => {
                let _ = writeln!(s, "  {v};");
            }
        }
    }
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "  {u} -> {v};");
    }
    s.push_str("}\n");
    s
}

pub fn graph_to_dot(g: &Graph) -> String {
    let mut s = String::from("graph G {\n");
    for v in 0..g.n() {
        let _ = writeln!(s, "  {v};");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}
