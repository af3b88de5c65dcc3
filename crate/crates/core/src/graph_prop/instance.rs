use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kset::{bit, full_mask, range_mask, KSet, Vertex, MAX_VERTICES};

/// A graph on `[n]` with special vertices `[b]` and disjoint k-cells.
///
/// Cells are kept in lexicographic order and edges as sorted 2-sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PropInstance {
    pub n: u32,
    pub b: u32,
    pub k: u32,
    pub cells: Vec<KSet>,
    pub edges: Vec<KSet>,
}

/// A broken hypothesis of a [`PropInstance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EdgeMissesSpecial {
        edge: KSet,
    },
    CellsOverlap {
        first: KSet,
        second: KSet,
    },
    CellMissesSpecial {
        cell: KSet,
    },
    SpecialOutsideCells {
        vertex: Vertex,
    },
    VertexOneNotMaxDegree {
        vertex: Vertex,
        degree_one: usize,
        degree: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeMissesSpecial { edge } => write!(f, "edge misses [b]: {edge}"),
            Violation::CellsOverlap { first, second } => {
                write!(f, "cells overlap: {first} and {second}")
            }
            Violation::CellMissesSpecial { cell } => write!(f, "cell misses [b]: {cell}"),
            Violation::SpecialOutsideCells { vertex } => {
                write!(f, "special vertex {vertex} lies in no cell")
            }
            Violation::VertexOneNotMaxDegree {
                vertex,
                degree_one,
                degree,
            } => write!(
                f,
                "vertex 1 not max degree: deg({vertex}) = {degree} > deg(1) = {degree_one}"
            ),
        }
    }
}

impl PropInstance {
    /// Checks ranges and shapes; hypothesis failures are left to [`validate`](Self::validate).
    pub fn new(
        n: u32,
        b: u32,
        k: u32,
        cells: &[Vec<Vertex>],
        edges: &[(Vertex, Vertex)],
    ) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::Input(format!("n = {n} outside [1, {MAX_VERTICES}]")));
        }
        if b == 0 || b > n {
            return Err(Error::Input(format!("b = {b} outside [1, n]")));
        }
        if k < 2 {
            return Err(Error::Input(format!(
                "cell size k = {k} must be at least 2"
            )));
        }
        let mut cell_sets = Vec::with_capacity(cells.len());
        for c in cells {
            let s = KSet::new(n, c)?;
            if s.len() != k as usize {
                return Err(Error::Input(format!("cell {s} does not have {k} vertices")));
            }
            cell_sets.push(s);
        }
        cell_sets.sort_unstable();
        if let Some((c, _)) = cell_sets.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(Error::Input(format!("cell {c} listed twice")));
        }
        let mut edge_sets = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::Input(format!("loop at vertex {u}")));
            }
            edge_sets.push(KSet::new(n, &[u, v])?);
        }
        edge_sets.sort_unstable();
        if let Some((e, _)) = edge_sets.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(Error::Input(format!("edge {e} listed twice")));
        }
        Ok(PropInstance {
            n,
            b,
            k,
            cells: cell_sets,
            edges: edge_sets,
        })
    }

    pub(crate) fn special_mask(&self) -> u64 {
        range_mask(1, self.b)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertices other than 1 that lie in no cell.
    pub fn exterior(&self) -> Vec<Vertex> {
        let in_cells = self.cells.iter().fold(0u64, |m, c| m | c.mask());
        KSet::from_mask(full_mask(self.n) & !in_cells & !bit(1)).members()
    }

    /// Every broken hypothesis; empty when the instance is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let special = self.special_mask();
        let mut out = Vec::new();
        for &e in &self.edges {
            if e.mask() & special == 0 {
                out.push(Violation::EdgeMissesSpecial { edge: e });
            }
        }
        for (i, &c) in self.cells.iter().enumerate() {
            for &d in &self.cells[i + 1..] {
                if !c.is_disjoint(d) {
                    out.push(Violation::CellsOverlap {
                        first: c,
                        second: d,
                    });
                }
            }
            if c.mask() & special == 0 {
                out.push(Violation::CellMissesSpecial { cell: c });
            }
        }
        let in_cells = self.cells.iter().fold(0u64, |m, c| m | c.mask());
        for v in KSet::from_mask(range_mask(2, self.b) & !in_cells).iter() {
            out.push(Violation::SpecialOutsideCells { vertex: v });
        }
        let d1 = self.degree(1);
        for v in 2..=self.b {
            let d = self.degree(v);
            if d > d1 {
                out.push(Violation::VertexOneNotMaxDegree {
                    vertex: v,
                    degree_one: d1,
                    degree: d,
                });
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.n, self.b, self.k, self.cells.len());
        for c in self.cells.iter().chain(&self.edges) {
            let _ = writeln!(out, "{}", c.iter().map(|v| v.to_string()).join(" "));
        }
        out
    }

    /// Parses `n b k a`, then `a` cell lines, then sorted `u v` edge lines.
    pub fn parse_text(text: &str) -> Result<Self> {
        let perr = |line: usize, message: String| Error::Parse { line, message };
        if text.contains('\r') {
            return Err(perr(
                1,
                "CR characters are not allowed; use LF line endings".into(),
            ));
        }
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let numbers = |(i, l): (usize, &str)| -> Result<(usize, Vec<u32>)> {
            let vs = l
                .split_ascii_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| perr(i + 1, format!("`{t}` is not an integer")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((i + 1, vs))
        };
        let (hl, header) = numbers(
            lines
                .next()
                .ok_or_else(|| perr(1, "missing `n b k a` header".into()))?,
        )?;
        let [n, b, k, a] = header[..] else {
            return Err(perr(hl, "header must be `n b k a`".into()));
        };
        let mut cells = Vec::new();
        for _ in 0..a {
            let (ln, vs) = numbers(
                lines
                    .next()
                    .ok_or_else(|| perr(hl, format!("expected {a} cell lines")))?,
            )?;
            if vs.len() != k as usize || !vs.windows(2).all(|w| w[0] < w[1]) {
                return Err(perr(
                    ln,
                    format!("a cell line needs {k} strictly ascending ids"),
                ));
            }
            cells.push(vs);
        }
        let mut edges = Vec::new();
        let mut prev: Option<(u32, u32)> = None;
        for line in lines {
            let (ln, vs) = numbers(line)?;
            let [u, v] = vs[..] else {
                return Err(perr(ln, "an edge line is `u v`".into()));
            };
            if u >= v {
                return Err(perr(ln, "edge endpoints must satisfy u < v".into()));
            }
            if prev.is_some_and(|p| p >= (u, v)) {
                return Err(perr(ln, "edges must be sorted and distinct".into()));
            }
            prev = Some((u, v));
            edges.push((u, v));
        }
        PropInstance::new(n, b, k, &cells, &edges)
    }
}

/// One unit of a mixed matching.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MixedItem {
    Edge { vertices: KSet },
    Cell { index: usize, vertices: KSet },
}

impl MixedItem {
    pub fn vertices(&self) -> KSet {
        match self {
            MixedItem::Edge { vertices } | MixedItem::Cell { vertices, .. } => *vertices,
        }
    }
}

/// Disjoint edges and cells of one instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MixedMatching {
    pub items: Vec<MixedItem>,
}

impl MixedMatching {
    pub fn union(&self) -> KSet {
        self.items
            .iter()
            .fold(KSet::EMPTY, |a, i| a.union(i.vertices()))
    }

    /// Disjointness plus membership of every item in `inst`.
    pub fn is_valid_for(&self, inst: &PropInstance) -> bool {
        let mut seen = 0u64;
        for item in &self.items {
            let m = item.vertices().mask();
            if seen & m != 0 {
                return false;
            }
            seen |= m;
            let member = match item {
                MixedItem::Edge { vertices } => inst.edges.contains(vertices),
                MixedItem::Cell { index, vertices } => inst.cells.get(*index) == Some(vertices),
            };
            if !member {
                return false;
            }
        }
        true
    }
}

/// Covering units per special vertex, sorted lexicographically by vertex set.
pub(crate) fn units(inst: &PropInstance) -> Vec<Vec<(KSet, Option<usize>)>> {
    let mut out = vec![Vec::new(); inst.b as usize];
    for (i, unit) in out.iter_mut().enumerate() {
        let v = i as Vertex + 1;
        unit.extend(
            inst.edges
                .iter()
                .filter(|e| e.contains(v))
                .map(|&e| (e, None)),
        );
        unit.extend(
            inst.cells
                .iter()
                .enumerate()
                .filter(|(_, c)| c.contains(v))
                .map(|(j, &c)| (c, Some(j))),
        );
        unit.sort();
    }
    out
}

pub(crate) fn cover_search(
    special: u64,
    units: &[Vec<(KSet, Option<usize>)>],
    used: u64,
    failed: &mut HashSet<u64>,
    chosen: &mut Vec<(KSet, Option<usize>)>,
) -> bool {
    let remaining = special & !used;
    if remaining == 0 {
        return true;
    }
    if failed.contains(&used) {
        return false;
    }
    let v = remaining.trailing_zeros() as usize;
    for &(set, cell) in &units[v] {
        if set.mask() & used == 0 {
            chosen.push((set, cell));
            if cover_search(special, units, used | set.mask(), failed, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    failed.insert(used);
    false
}

/// A matching of edges and cells covering `[b]`, or `None` when `[b]` cannot
/// be covered. Errors on instances that break a hypothesis.
pub fn cover_b(inst: &PropInstance) -> Result<Option<MixedMatching>> {
    let violations = inst.validate();
    if let Some(v) = violations.first() {
        return Err(Error::Domain(format!("invalid instance: {v}")));
    }
    Ok(cover_b_unchecked(inst))
}

pub(crate) fn cover_b_unchecked(inst: &PropInstance) -> Option<MixedMatching> {
    let units = units(inst);
    let mut chosen = Vec::new();
    if !cover_search(
        inst.special_mask(),
        &units,
        0,
        &mut HashSet::new(),
        &mut chosen,
    ) {
        return None;
    }
    let mut items: Vec<MixedItem> = chosen
        .into_iter()
        .map(|(vertices, cell)| match cell {
            Some(index) => MixedItem::Cell { index, vertices },
            None => MixedItem::Edge { vertices },
        })
        .collect();
    items.sort_by_key(|i| i.vertices());
    Some(MixedMatching { items })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_prop::build_fig1;

    #[test]
    fn validate_examples() {
        assert!(build_fig1(2, 4).unwrap().validate().is_empty());

        let bad_edge =
            PropInstance::new(8, 4, 2, &[vec![2, 5], vec![3, 7], vec![4, 8]], &[(5, 6)]).unwrap();
        let v = bad_edge.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().starts_with("edge misses [b]"));

        let bad_degree = PropInstance::new(5, 2, 2, &[vec![2, 3]], &[(2, 4), (2, 5)]).unwrap();
        let v = bad_degree.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().starts_with("vertex 1 not max degree"));
    }

    #[test]
    fn validate_structural_violations() {
        let inst = PropInstance::new(7, 3, 2, &[vec![2, 4], vec![4, 5], vec![6, 7]], &[]).unwrap();
        let msgs: Vec<String> = inst.validate().iter().map(|v| v.to_string()).collect();
        assert!(msgs.iter().any(|m| m.starts_with("cells overlap")));
        assert!(msgs.iter().any(|m| m.starts_with("cell misses [b]")));
        assert!(msgs.iter().any(|m| m.contains("special vertex 3")));
    }

    #[test]
    fn new_rejects_malformed() {
        assert!(PropInstance::new(5, 2, 3, &[vec![2, 3]], &[]).is_err());
        assert!(PropInstance::new(5, 2, 2, &[vec![2, 3]], &[(1, 1)]).is_err());
        assert!(PropInstance::new(5, 2, 2, &[vec![2, 3]], &[(1, 4), (4, 1)]).is_err());
        assert!(PropInstance::new(5, 0, 2, &[], &[]).is_err());
        assert!(PropInstance::new(5, 2, 2, &[vec![2, 6]], &[]).is_err());
    }

    #[test]
    fn cover_examples() {
        let fig = build_fig1(2, 4).unwrap();
        assert_eq!(cover_b(&fig).unwrap(), None);

        // add an exterior vertex 6 joined to vertex 1
        let mut edges: Vec<(u32, u32)> = fig
            .edges
            .iter()
            .map(|e| (e.first().unwrap(), e.last().unwrap()))
            .collect();
        edges.push((1, 6));
        let cells: Vec<Vec<u32>> = fig.cells.iter().map(|c| c.members()).collect();
        let grown = PropInstance::new(6, 2, 4, &cells, &edges).unwrap();
        let m = cover_b(&grown).unwrap().unwrap();
        assert!(m.is_valid_for(&grown));
        assert_eq!(
            m.items,
            vec![
                MixedItem::Edge {
                    vertices: KSet::new(6, &[1, 6]).unwrap()
                },
                MixedItem::Cell {
                    index: 0,
                    vertices: fig.cells[0]
                },
            ]
        );

        let lone = PropInstance::new(1, 1, 2, &[], &[]).unwrap();
        assert_eq!(cover_b(&lone).unwrap(), None);
    }

    #[test]
    fn cover_rejects_invalid() {
        let inst = PropInstance::new(5, 2, 2, &[vec![2, 3]], &[(2, 4), (2, 5)]).unwrap();
        assert!(matches!(cover_b(&inst), Err(Error::Domain(_))));
    }

    #[test]
    fn text_round_trip() {
        let fig = build_fig1(3, 3).unwrap();
        let text = fig.to_text();
        assert!(text.starts_with("7 3 3 2\n"));
        assert_eq!(PropInstance::parse_text(&text).unwrap(), fig);
        assert!(PropInstance::parse_text("5 2 2 1\n2 3\n1 4\n1 4\n").is_err());
        assert!(PropInstance::parse_text("5 2 2 1\n2 3\n4 1\n").is_err());
        assert!(PropInstance::parse_text("5 2 2 2\n2 3\n").is_err());
    }
}
