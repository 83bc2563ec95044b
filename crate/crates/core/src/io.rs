//! Plain-text instance formats (1-indexed on disk, 0-indexed in memory).
//!
//! ```text
//! p ssbve <n> <n'> <k>      p mku <elements> <m> <k>      p ssve <n> <k>
//! e <u> <v>                 s <size> <e1> ... <e_size>    e <u> <v>
//! ```
//!
//! Blank lines and lines starting with `c` or `#` are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Hypergraph, SsbveInstance, UndirectedGraph};

/// Ground truth written next to a planted instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSidecar {
    pub planted_s: Vec<usize>,
    pub planted_t: Vec<usize>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('#') {
            None
        } else {
            Some((i + 1, t.split_whitespace().collect()))
        }
    })
}

fn num(tok: Option<&&str>, line: usize) -> Result<usize> {
    tok.ok_or_else(|| perr(line, "missing field"))?
        .parse()
        .map_err(|_| perr(line, format!("not a non-negative integer: {}", tok.unwrap())))
}

fn index(tok: Option<&&str>, line: usize, bound: usize) -> Result<usize> {
    let x = num(tok, line)?;
    if x == 0 || x > bound {
        return Err(perr(line, format!("index {x} outside 1..={bound}")));
    }
    Ok(x - 1)
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    kind: &str,
    fields: usize,
) -> Result<(usize, Vec<usize>)> {
    let (line, toks) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    if toks.first() != Some(&"p") || toks.get(1) != Some(&kind) {
        return Err(perr(line, format!("expected header `p {kind} ...`")));
    }
    if toks.len() != 2 + fields {
        return Err(perr(line, format!("header needs {fields} numbers")));
    }
    let vals = (0..fields).map(|i| num(toks.get(2 + i), line)).collect::<Result<_>>()?;
    Ok((line, vals))
}

pub fn parse_ssbve(text: &str) -> Result<SsbveInstance> {
    let mut lines = content_lines(text);
    let (hline, h) = header(&mut lines, "ssbve", 3)?;
    let (n, nr, k) = (h[0], h[1], h[2]);
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (line, toks) in lines {
        if toks[0] != "e" || toks.len() != 3 {
            return Err(perr(line, "expected `e <u> <v>`"));
        }
        let u = index(toks.get(1), line, n)?;
        let v = index(toks.get(2), line, nr)?;
        if !seen.insert((u, v)) {
            return Err(perr(line, "duplicate edge"));
        }
        edges.push((u, v));
    }
    let g = BipartiteGraph::from_edges(n, nr, &edges)?;
    SsbveInstance::new(g, k).map_err(|e| perr(hline, e.to_string()))
}

pub fn write_ssbve(inst: &SsbveInstance) -> String {
    let g = &inst.graph;
    let mut out = format!("p ssbve {} {} {}\n", g.n(), g.n_right(), inst.k);
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

pub fn parse_mku(text: &str) -> Result<(Hypergraph, usize)> {
    let mut lines = content_lines(text);
    let (hline, h) = header(&mut lines, "mku", 3)?;
    let (ne, m, k) = (h[0], h[1], h[2]);
    let mut sets = Vec::with_capacity(m);
    for (line, toks) in lines {
        if toks[0] != "s" {
            return Err(perr(line, "expected `s <size> ...`"));
        }
        let size = num(toks.get(1), line)?;
        if toks.len() != 2 + size {
            return Err(perr(line, format!("set declares {size} elements")));
        }
        let set = (0..size).map(|i| index(toks.get(2 + i), line, ne)).collect::<Result<Vec<_>>>()?;
        sets.push(set);
    }
    if sets.len() != m {
        return Err(perr(hline, format!("header declares {m} sets, found {}", sets.len())));
    }
    let hg = Hypergraph::new(ne, sets)?;
    if k == 0 || k > m {
        return Err(perr(hline, Error::InvalidBudget { k, max: m }.to_string()));
    }
    Ok((hg, k))
}

pub fn write_mku(h: &Hypergraph, k: usize) -> String {
    let mut out = format!("p mku {} {} {}\n", h.n_elements(), h.m(), k);
    for set in h.sets() {
        let _ = write!(out, "s {}", set.len());
        for &e in set {
            let _ = write!(out, " {}", e + 1);
        }
        out.push('\n');
    }
    out
}

pub fn parse_ssve(text: &str) -> Result<(UndirectedGraph, usize)> {
    let mut lines = content_lines(text);
    let (_, h) = header(&mut lines, "ssve", 2)?;
    let (n, k) = (h[0], h[1]);
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (line, toks) in lines {
        if toks[0] != "e" || toks.len() != 3 {
            return Err(perr(line, "expected `e <u> <v>`"));
        }
        let a = index(toks.get(1), line, n)?;
        let b = index(toks.get(2), line, n)?;
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(perr(line, "duplicate edge"));
        }
        edges.push((a, b));
    }
    Ok((UndirectedGraph::from_edges(n, &edges)?, k))
}

pub fn write_ssve(g: &UndirectedGraph, k: usize) -> String {
    let mut out = format!("p ssve {} {}\n", g.n(), k);
    for (a, b) in g.edges() {
        let _ = writeln!(out, "e {} {}", a + 1, b + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ssbve_round_trip() {
        let text = "p ssbve 2 3 1\ne 1 1\ne 1 2\ne 2 3\n";
        let inst = parse_ssbve(text).unwrap();
        assert_eq!(inst.graph.edge_count(), 3);
        assert_eq!(write_ssbve(&inst), text);
    }

    #[test]
    fn rejects_duplicates_and_ranges() {
        assert!(parse_ssbve("p ssbve 1 1 1\ne 1 1\ne 1 1\n").is_err());
        assert!(parse_ssbve("p ssbve 1 1 1\ne 2 1\n").is_err());
        assert!(parse_ssbve("p ssbve 1 1 1\ne 0 1\n").is_err());
        assert!(parse_ssbve("p ssbve 1 1 2\n").is_err());
        assert!(parse_ssve("p ssve 2 1\ne 1 2\ne 2 1\n").is_err());
    }

    #[test]
    fn mku_round_trip() {
        let text = "p mku 4 2 1\ns 2 1 4\ns 0\n";
        let (h, k) = parse_mku(text).unwrap();
        assert_eq!(h.sets(), &[vec![0, 3], vec![]]);
        assert_eq!(write_mku(&h, k), text);
        assert!(parse_mku("p mku 4 2 1\ns 2 1\n").is_err());
    }

    #[test]
    fn ssve_round_trip() {
        let text = "p ssve 3 2\ne 1 2\ne 2 3\n";
        let (g, k) = parse_ssve(text).unwrap();
        assert_eq!(write_ssve(&g, k), text);
    }
}
