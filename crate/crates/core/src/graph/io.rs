//! Edge-list and DIMACS graph formats.
//!
//! Edge lists hold one 0-based `u v` pair per line; `#` starts a comment. An
//! optional `n <count>` line fixes the vertex count (otherwise one past the
//! largest endpoint). DIMACS uses `p edge n m` and 1-based `e u v` lines,
//! with `c` comment lines.

use super::{Graph, GraphError};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Dimacs,
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

pub fn parse(text: &str, format: Format) -> Result<Graph, GraphError> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Dimacs => parse_dimacs(text),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        let first = toks.next().expect("non-empty line");
        if first == "n" {
            n = Some(parse_usize(toks.next(), line, "vertex count")?);
        } else {
            let u = parse_usize(Some(first), line, "vertex")?;
            let v = parse_usize(toks.next(), line, "vertex")?;
            edges.push((u, v, line));
        }
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0));
    for &(u, v, line) in &edges {
        if u == v {
            return Err(parse_err(line, format!("self-loop at {u}")));
        }
        if u >= n || v >= n {
            return Err(parse_err(line, format!("vertex out of range for n = {n}")));
        }
    }
    Graph::new(n, edges.into_iter().map(|(u, v, _)| (u, v)))
}

pub fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if n.is_some() {
                    return Err(parse_err(line, "duplicate problem line"));
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    _ => return Err(parse_err(line, "expected `p edge n m`")),
                }
                n = Some(parse_usize(toks.next(), line, "vertex count")?);
                parse_usize(toks.next(), line, "edge count")?;
            }
            Some("e") => {
                let count = n.ok_or_else(|| parse_err(line, "edge before problem line"))?;
                let u = parse_usize(toks.next(), line, "vertex")?;
                let v = parse_usize(toks.next(), line, "vertex")?;
                if u == 0 || v == 0 || u > count || v > count {
                    return Err(parse_err(line, format!("vertex out of range 1..={count}")));
                }
                if u == v {
                    return Err(parse_err(line, format!("self-loop at {u}")));
                }
                edges.push((u - 1, v - 1));
            }
            Some(other) => return Err(parse_err(line, format!("unknown line type `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "missing problem line"))?;
    Graph::new(n, edges)
}

pub fn emit(g: &Graph, format: Format) -> String {
    match format {
        Format::EdgeList => emit_edge_list(g),
        Format::Dimacs => emit_dimacs(g),
    }
}

pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn emit_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}
