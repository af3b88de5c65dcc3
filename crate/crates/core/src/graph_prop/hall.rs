//! Deficiency witnesses for sets that no matching covers.
//!
//! If no matching of a graph covers `A`, some `S` in `A` has a closed
//! neighbourhood `N(S)` (neighbours plus `S` itself) of size at most
//! `2|S| - 1`. The witness is built the constructive way: take a matching `M`
//! covering as many vertices of `A` as possible, start `S` at an uncovered
//! vertex of `A`, and whenever `S` has a neighbour `u` outside `S u T` whose
//! `M`-partner lies in `A`, put `u` into `T` and the partner into `S`. When
//! this stops, `N(S) = S u T` and `|T| = |S| - 1`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::kset::{bit, mask_vertices, vertices_mask, KSet, Vertex, MAX_VERTICES};

/// A simple undirected graph on `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(n: u32, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::Input(format!("n = {n} outside [1, {MAX_VERTICES}]")));
        }
        let mut adj = vec![0u64; n as usize];
        for &(u, v) in edges {
            KSet::new(n, &[u, v]).map_err(|_| Error::Input(format!("bad edge ({u}, {v})")))?;
            adj[(u - 1) as usize] |= bit(v);
            adj[(v - 1) as usize] |= bit(u);
        }
        Ok(Graph { n, adj })
    }

    /// Reads a 2-uniform family as a graph.
    pub fn from_family(family: &SetFamily) -> Result<Self> {
        if family.k() != 2 {
            return Err(Error::Input(format!(
                "a graph file must be 2-uniform, got k = {}",
                family.k()
            )));
        }
        let edges: Vec<(Vertex, Vertex)> = family
            .sets()
            .iter()
            .map(|e| (e.first().unwrap(), e.last().unwrap()))
            .collect();
        Graph::new(family.n(), &edges)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn neighbors(&self, v: Vertex) -> u64 {
        self.adj[(v - 1) as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u) & bit(v) != 0
    }

    pub fn edges(&self) -> Vec<[Vertex; 2]> {
        let mut out = Vec::new();
        for u in 1..=self.n {
            for v in mask_vertices(self.neighbors(u)) {
                if u < v {
                    out.push([u, v]);
                }
            }
        }
        out
    }
}

/// `S` together with all neighbours of `S`.
pub fn closed_neighborhood(g: &Graph, s: u64) -> u64 {
    mask_vertices(s)
        .into_iter()
        .fold(s, |m, v| m | g.neighbors(v))
}

/// A matching, using only edges that touch `A`, that covers as many vertices
/// of `A` as possible. Exact; exponential in the worst case.
pub fn max_cover_matching(g: &Graph, a: u64) -> Vec<[Vertex; 2]> {
    struct Dp<'a> {
        g: &'a Graph,
        a_mask: u64,
        order: Vec<Vertex>,
        memo: HashMap<(usize, u64), u32>,
    }
    impl Dp<'_> {
        fn gain(&self, u: Vertex) -> u32 {
            1 + (self.a_mask & bit(u) != 0) as u32
        }
        fn best(&mut self, idx: usize, used: u64) -> u32 {
            if idx == self.order.len() {
                return 0;
            }
            if let Some(&b) = self.memo.get(&(idx, used)) {
                return b;
            }
            let v = self.order[idx];
            let mut best = self.best(idx + 1, used);
            if used & bit(v) == 0 {
                for u in mask_vertices(self.g.neighbors(v) & !used) {
                    let with = self.gain(u) + self.best(idx + 1, used | bit(v) | bit(u));
                    best = best.max(with);
                }
            }
            self.memo.insert((idx, used), best);
            best
        }
    }
    let mut dp = Dp {
        g,
        a_mask: a,
        order: mask_vertices(a),
        memo: HashMap::new(),
    };
    let mut used = 0u64;
    let mut matching = Vec::new();
    for idx in 0..dp.order.len() {
        let v = dp.order[idx];
        if used & bit(v) != 0 {
            continue;
        }
        let target = dp.best(idx, used);
        // match the earliest vertex whenever that stays optimal
        let Some(u) = mask_vertices(g.neighbors(v) & !used)
            .into_iter()
            .find(|&u| dp.gain(u) + dp.best(idx + 1, used | bit(v) | bit(u)) == target)
        else {
            continue;
        };
        used |= bit(v) | bit(u);
        matching.push([v.min(u), v.max(u)]);
    }
    matching.sort_unstable();
    matching
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallWitness {
    /// The deficient set `S`, a subset of `A`.
    pub set: Vec<Vertex>,
    /// `N(S)`, including `S` itself.
    pub neighborhood: Vec<Vertex>,
    /// The maximum-coverage matching the witness was grown from.
    pub matching: Vec<[Vertex; 2]>,
}

/// A set `S` in `A` with `|N(S)| <= 2|S| - 1`. Fails with
/// [`Error::Coverable`] carrying a covering matching when one exists.
pub fn hall_witness(g: &Graph, a: &[Vertex]) -> Result<HallWitness> {
    let a_mask = vertices_mask(g.n, a)?;
    let matching = max_cover_matching(g, a_mask);
    let mut partner = vec![0 as Vertex; g.n as usize + 1];
    let mut covered = 0u64;
    for &[u, v] in &matching {
        partner[u as usize] = v;
        partner[v as usize] = u;
        covered |= bit(u) | bit(v);
    }
    let uncovered = a_mask & !covered;
    if uncovered == 0 {
        return Err(Error::Coverable { matching });
    }
    let start = uncovered.trailing_zeros() + 1;
    let mut s = bit(start);
    let mut t = 0u64;
    loop {
        let grow = mask_vertices(s).into_iter().find_map(|w| {
            mask_vertices(g.neighbors(w) & !s & !t)
                .into_iter()
                .find(|&u| partner[u as usize] != 0 && a_mask & bit(partner[u as usize]) != 0)
        });
        match grow {
            Some(u) => {
                t |= bit(u);
                s |= bit(partner[u as usize]);
            }
            None => break,
        }
    }
    let neighborhood = closed_neighborhood(g, s);
    // any neighbour left outside S u T would give an augmenting path
    debug_assert_eq!(neighborhood, s | t);
    debug_assert_eq!(t.count_ones() + 1, s.count_ones());
    Ok(HallWitness {
        set: mask_vertices(s),
        neighborhood: mask_vertices(neighborhood),
        matching,
    })
}
