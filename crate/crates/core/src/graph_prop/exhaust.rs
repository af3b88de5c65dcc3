//! Desk-scale exhaustive (and sampled) verification of the edge bound.
//!
//! Instances are generated in a compressed canonical form: cells are given by
//! how many special vertices they hold (a partition of `b - 1` into
//! non-increasing parts, specials assigned consecutively), and every
//! non-special vertex is described only by its neighbourhood inside `[b]`,
//! listed in non-decreasing order within its cell and within the exterior.
//! Vertex 1 is never placed in a cell since such instances are always
//! coverable. Branches that are already coverable are cut, because adding
//! edges never destroys a covering.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph_prop::instance::cover_b_unchecked;
use crate::graph_prop::{build_fig1, build_fig2, edge_bound, PropInstance};
use crate::kset::{bit, mask_vertices, range_mask, KSet, Vertex};

pub const EXHAUSTIVE_MAX_B: u32 = 3;
pub const EXHAUSTIVE_MAX_K: u32 = 5;
pub const EXHAUSTIVE_MAX_EXTERIOR: u32 = 2;

/// Canonical classification largest `b` (permutations of `[2, b]` are tried).
const CANONICAL_MAX_B: u32 = 8;

/// Instance up to relabelling of non-special vertices. Masks are over `[b]`,
/// bit `i - 1` for special vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Shape {
    b: u32,
    k: u32,
    special_edges: Vec<(Vertex, Vertex)>,
    cells: Vec<(u64, Vec<u64>)>,
    exterior: Vec<u64>,
}

/// Isomorphism-invariant key: vertex 1 fixed, `[2, b]` permuted, cells
/// permuted, non-special vertices permuted within their cell or the exterior.
/// Isolated exterior vertices are ignored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct InstanceKey {
    special_edges: Vec<(Vertex, Vertex)>,
    cells: Vec<(u64, Vec<u64>)>,
    exterior: Vec<u64>,
}

impl Shape {
    fn to_instance(&self) -> PropInstance {
        let b = self.b;
        let mut next = b + 1;
        let mut cells = Vec::new();
        let mut edges: Vec<(Vertex, Vertex)> = self.special_edges.clone();
        let mut attach = |types: &[u64], next: &mut u32| -> Vec<Vertex> {
            let mut vs = Vec::new();
            for &t in types {
                let v = *next;
                *next += 1;
                edges.extend(mask_vertices(t).into_iter().map(|i| (i, v)));
                vs.push(v);
            }
            vs
        };
        for (specials, rest) in &self.cells {
            let mut c = mask_vertices(*specials);
            c.extend(attach(rest, &mut next));
            cells.push(c);
        }
        attach(&self.exterior, &mut next);
        PropInstance::new(next - 1, b, self.k, &cells, &edges)
            .expect("shape yields a well-formed instance")
    }

    fn from_instance(inst: &PropInstance) -> Option<Shape> {
        let b = inst.b;
        let special = range_mask(1, b);
        if inst.cells.iter().any(|c| c.contains(1)) {
            return None;
        }
        let mut neighbours = vec![0u64; inst.n as usize + 1];
        let mut special_edges = Vec::new();
        for e in &inst.edges {
            let (u, v) = (e.first().unwrap(), e.last().unwrap());
            if u > b {
                return None;
            }
            if v <= b {
                special_edges.push((u, v));
            } else {
                neighbours[v as usize] |= bit(u);
            }
        }
        let mut cells = Vec::new();
        let mut in_cells = 0u64;
        for c in &inst.cells {
            let specials = c.mask() & special;
            let rest = KSet::from_mask(c.mask() & !special)
                .iter()
                .map(|v| neighbours[v as usize])
                .collect();
            cells.push((specials, rest));
            in_cells |= c.mask();
        }
        if in_cells & special != range_mask(2, b) {
            return None;
        }
        let exterior = KSet::from_mask(range_mask(b + 1, inst.n) & !in_cells)
            .iter()
            .map(|v| neighbours[v as usize])
            .collect();
        Some(Shape {
            b,
            k: inst.k,
            special_edges,
            cells,
            exterior,
        })
    }

    fn key_under(&self, perm: &[Vertex]) -> InstanceKey {
        let map = |m: u64| {
            mask_vertices(m)
                .into_iter()
                .fold(0u64, |acc, v| acc | bit(perm[(v - 1) as usize]))
        };
        let mut special_edges: Vec<(Vertex, Vertex)> = self
            .special_edges
            .iter()
            .map(|&(u, v)| {
                let (x, y) = (perm[(u - 1) as usize], perm[(v - 1) as usize]);
                (x.min(y), x.max(y))
            })
            .collect();
        special_edges.sort_unstable();
        let mut cells: Vec<(u64, Vec<u64>)> = self
            .cells
            .iter()
            .map(|(s, rest)| (map(*s), rest.iter().map(|&t| map(t)).sorted().collect()))
            .collect();
        cells.sort();
        let exterior = self
            .exterior
            .iter()
            .filter(|&&t| t != 0)
            .map(|&t| map(t))
            .sorted()
            .collect();
        InstanceKey {
            special_edges,
            cells,
            exterior,
        }
    }

    fn canonical(&self) -> InstanceKey {
        (2..=self.b)
            .permutations((self.b - 1) as usize)
            .map(|tail| {
                let mut perm = vec![1];
                perm.extend(tail);
                self.key_under(&perm)
            })
            .min()
            .expect("at least the identity permutation")
    }

    fn edge_count(&self) -> u64 {
        let from_rest: u32 = self
            .cells
            .iter()
            .flat_map(|(_, r)| r.iter())
            .chain(&self.exterior)
            .map(|t| t.count_ones())
            .sum();
        from_rest as u64 + self.special_edges.len() as u64
    }
}

/// Canonical key of a valid instance, or `None` when vertex 1 lies in a cell,
/// an edge misses `[b]`, or `b` is too large to canonicalise.
pub fn canonical_key(inst: &PropInstance) -> Option<InstanceKey> {
    if inst.b > CANONICAL_MAX_B {
        return None;
    }
    Shape::from_instance(inst).map(|s| s.canonical())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityClass {
    /// `fig1`, `fig2` or `other`.
    pub label: String,
    pub instance: PropInstance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustReport {
    pub b: u32,
    pub k: u32,
    pub exterior: u32,
    pub mode: String,
    pub edge_bound: u64,
    /// Valid instances examined whose `[b]` cannot be covered.
    pub checked: u64,
    pub max_edges: u64,
    /// One representative per isomorphism class exceeding the bound.
    pub violations: Vec<PropInstance>,
    /// Instances of the stream attaining the bound exactly.
    pub equality_instances: u64,
    /// One entry per isomorphism class attaining the bound.
    pub classification: Vec<EqualityClass>,
}

impl ExhaustReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn labels(&self) -> BTreeSet<String> {
        self.classification
            .iter()
            .map(|c| c.label.clone())
            .collect()
    }
}

/// Partitions of `total` into non-increasing parts of size at most `max_part`.
fn partitions(total: u32, max_part: u32) -> Vec<Vec<u32>> {
    fn go(total: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if total == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=max_part.min(total)).rev() {
            prefix.push(p);
            go(total - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, max_part, &mut Vec::new(), &mut out);
    out
}

/// Whether `[b]` can be covered, given special adjacency masks over all
/// vertices and cell masks.
fn coverable(special: u64, adj: &[u64], cells: &[u64]) -> bool {
    fn go(special: u64, adj: &[u64], cells: &[u64], used: u64, failed: &mut HashSet<u64>) -> bool {
        let rem = special & !used;
        if rem == 0 {
            return true;
        }
        if failed.contains(&used) {
            return false;
        }
        let v = rem.trailing_zeros() as usize;
        let mut opts = adj[v] & !used;
        while opts != 0 {
            let u = opts & opts.wrapping_neg();
            opts &= opts - 1;
            if go(special, adj, cells, used | (1 << v) | u, failed) {
                return true;
            }
        }
        for &c in cells {
            if c & (1 << v) != 0 && c & used == 0 && go(special, adj, cells, used | c, failed) {
                return true;
            }
        }
        failed.insert(used);
        false
    }
    go(special, adj, cells, 0, &mut HashSet::new())
}

#[derive(Default)]
struct Tally {
    checked: u64,
    max_edges: u64,
    equality: u64,
    /// Canonical class -> (edge count, representative).
    at_or_above: BTreeMap<InstanceKey, (u64, Shape)>,
}

impl Tally {
    fn record(&mut self, shape: Shape, bound: u64) {
        let edges = shape.edge_count();
        self.checked += 1;
        self.max_edges = self.max_edges.max(edges);
        if edges == bound {
            self.equality += 1;
        }
        if edges >= bound {
            self.at_or_above
                .entry(shape.canonical())
                .or_insert((edges, shape));
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.max_edges = self.max_edges.max(other.max_edges);
        self.equality += other.equality;
        for (k, v) in other.at_or_above {
            self.at_or_above.entry(k).or_insert(v);
        }
        self
    }
}

/// One enumeration task: fixed cell layout and fixed edges inside `[b]`.
struct Task {
    b: u32,
    k: u32,
    parts: Vec<u32>,
    special_edges: Vec<(Vertex, Vertex)>,
    exterior: u32,
}

impl Task {
    fn run(&self, bound: u64) -> Tally {
        let b = self.b;
        let special = range_mask(1, b);
        let mut adj = vec![0u64; b as usize];
        for &(u, v) in &self.special_edges {
            adj[(u - 1) as usize] |= bit(v);
            adj[(v - 1) as usize] |= bit(u);
        }
        // slot -> group; groups 0..a are cells, a is the exterior
        let mut cell_specials = Vec::new();
        let mut groups = Vec::new();
        let mut next_special = 2;
        for (g, &p) in self.parts.iter().enumerate() {
            cell_specials.push(range_mask(next_special, next_special + p - 1));
            next_special += p;
            groups.extend(std::iter::repeat_n(g, (self.k - p) as usize));
        }
        groups.extend(std::iter::repeat_n(
            self.parts.len(),
            self.exterior as usize,
        ));
        let mut cells = cell_specials.clone();
        let mut slot_cell_masks = Vec::new();
        for (slot, &g) in groups.iter().enumerate() {
            let v = b + 1 + slot as u32;
            if g < cells.len() {
                cells[g] |= bit(v);
            }
            slot_cell_masks.push(v);
        }
        let mut tally = Tally::default();
        if coverable(special, &adj, &cells) {
            return tally;
        }
        let mut types = Vec::with_capacity(groups.len());
        self.dfs(
            special,
            &groups,
            &cells,
            &mut adj,
            &mut types,
            bound,
            &cell_specials,
            &mut tally,
        );
        tally
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        special: u64,
        groups: &[usize],
        cells: &[u64],
        adj: &mut Vec<u64>,
        types: &mut Vec<u64>,
        bound: u64,
        cell_specials: &[u64],
        tally: &mut Tally,
    ) {
        let slot = types.len();
        if slot == groups.len() {
            let d1 = adj[0].count_ones();
            if adj.iter().skip(1).all(|a| a.count_ones() <= d1) {
                tally.record(self.shape(groups, types, cell_specials), bound);
            }
            return;
        }
        let v = self.b + 1 + slot as u32;
        let lo = if slot > 0 && groups[slot - 1] == groups[slot] {
            types[slot - 1]
        } else {
            0
        };
        for t in lo..(1u64 << self.b) {
            for i in mask_vertices(t) {
                adj[(i - 1) as usize] |= bit(v);
            }
            if !coverable(special, adj, cells) {
                types.push(t);
                self.dfs(
                    special,
                    groups,
                    cells,
                    adj,
                    types,
                    bound,
                    cell_specials,
                    tally,
                );
                types.pop();
            }
            for i in mask_vertices(t) {
                adj[(i - 1) as usize] &= !bit(v);
            }
        }
    }

    fn shape(&self, groups: &[usize], types: &[u64], cell_specials: &[u64]) -> Shape {
        let a = self.parts.len();
        let mut cells: Vec<(u64, Vec<u64>)> =
            cell_specials.iter().map(|&s| (s, Vec::new())).collect();
        let mut exterior = Vec::new();
        for (&g, &t) in groups.iter().zip(types) {
            if g < a {
                cells[g].1.push(t);
            } else {
                exterior.push(t);
            }
        }
        Shape {
            b: self.b,
            k: self.k,
            special_edges: self.special_edges.clone(),
            cells,
            exterior,
        }
    }
}

fn reference_keys(b: u32, k: u32) -> Vec<(&'static str, InstanceKey)> {
    let mut refs = Vec::new();
    if k >= 3 {
        if let Some(key) = build_fig1(b, k).ok().as_ref().and_then(canonical_key) {
            refs.push(("fig1", key));
        }
    }
    if k == 3 && b >= 2 {
        if let Some(key) = build_fig2(b).ok().as_ref().and_then(canonical_key) {
            refs.push(("fig2", key));
        }
    }
    refs
}

fn finish(b: u32, k: u32, exterior: u32, mode: &str, bound: u64, tally: Tally) -> ExhaustReport {
    let refs = reference_keys(b, k);
    let mut violations = Vec::new();
    let mut classification = Vec::new();
    for (key, (edges, shape)) in &tally.at_or_above {
        if *edges > bound {
            violations.push(shape.to_instance());
        } else {
            let label = refs
                .iter()
                .find(|(_, r)| r == key)
                .map(|(l, _)| l.to_string())
                .unwrap_or_else(|| "other".into());
            classification.push(EqualityClass {
                label,
                instance: shape.to_instance(),
            });
        }
    }
    classification.sort_by(|x, y| x.label.cmp(&y.label));
    ExhaustReport {
        b,
        k,
        exterior,
        mode: mode.into(),
        edge_bound: bound,
        checked: tally.checked,
        max_edges: tally.max_edges,
        violations,
        equality_instances: tally.equality,
        classification,
    }
}

fn check_params(b: u32, k: u32) -> Result<()> {
    if b < 1 || k < 2 {
        return Err(Error::Domain(format!(
            "need b >= 1 and k >= 2, got b = {b}, k = {k}"
        )));
    }
    Ok(())
}

/// Every canonical instance with `b` specials, cell size `k` and
/// `exterior_cap` exterior vertices, on the current rayon pool.
pub fn exhaustive_verify(b: u32, k: u32, exterior_cap: u32) -> Result<ExhaustReport> {
    check_params(b, k)?;
    if b > EXHAUSTIVE_MAX_B || k > EXHAUSTIVE_MAX_K || exterior_cap > EXHAUSTIVE_MAX_EXTERIOR {
        return Err(Error::Domain(format!(
            "exhaustive mode covers b <= {EXHAUSTIVE_MAX_B}, k <= {EXHAUSTIVE_MAX_K}, exterior <= {EXHAUSTIVE_MAX_EXTERIOR}; \
             use sampling mode for (b, k, exterior) = ({b}, {k}, {exterior_cap})"
        )));
    }
    let bound = edge_bound(b, k);
    let pairs: Vec<(Vertex, Vertex)> = (1..=b).tuple_combinations().collect();
    let mut tasks = Vec::new();
    for parts in partitions(b - 1, k) {
        for mask in 0u64..(1 << pairs.len()) {
            let special_edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect();
            tasks.push(Task {
                b,
                k,
                parts: parts.clone(),
                special_edges,
                exterior: exterior_cap,
            });
        }
    }
    let tally = tasks
        .par_iter()
        .map(|t| t.run(bound))
        .reduce(Tally::default, Tally::merge);
    Ok(finish(b, k, exterior_cap, "exhaustive", bound, tally))
}

/// [`exhaustive_verify`] on a dedicated pool of `workers` threads.
pub fn exhaustive_verify_with(
    b: u32,
    k: u32,
    exterior_cap: u32,
    workers: usize,
) -> Result<ExhaustReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
    pool.install(|| exhaustive_verify(b, k, exterior_cap))
}

/// Random instances beyond the exhaustive tier.
///
/// Each sample draws a cell layout and a dense random edge set, then deletes
/// edges of a covering matching one at a time until `[b]` is uncoverable, so
/// every kept sample is a maximal-looking uncoverable instance.
pub fn sampled_verify(
    b: u32,
    k: u32,
    exterior_cap: u32,
    samples: u64,
    seed: u64,
) -> Result<ExhaustReport> {
    check_params(b, k)?;
    if b > CANONICAL_MAX_B {
        return Err(Error::Domain(format!(
            "sampling supports b <= {CANONICAL_MAX_B}"
        )));
    }
    let bound = edge_bound(b, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    for _ in 0..samples {
        let Some(inst) = random_uncoverable(b, k, exterior_cap, &mut rng) else {
            continue;
        };
        if !inst.validate().is_empty() {
            continue;
        }
        if let Some(shape) = Shape::from_instance(&inst) {
            tally.record(shape, bound);
        }
    }
    Ok(finish(b, k, exterior_cap, "sampled", bound, tally))
}

fn random_uncoverable(b: u32, k: u32, exterior: u32, rng: &mut ChaCha8Rng) -> Option<PropInstance> {
    // random set partition of [2, b] into cells of at most k specials
    let mut slots: Vec<Vec<Vertex>> = vec![Vec::new(); b.saturating_sub(1) as usize];
    for v in 2..=b {
        let slot = rng.gen_range(0..slots.len());
        slots[slot].push(v);
    }
    slots.retain(|s| !s.is_empty());
    if slots.iter().any(|s| s.len() > k as usize) {
        return None;
    }
    let mut next = b + 1;
    let cells: Vec<Vec<Vertex>> = slots
        .into_iter()
        .map(|mut c| {
            while c.len() < k as usize {
                c.push(next);
                next += 1;
            }
            c
        })
        .collect();
    let n = next - 1 + exterior;
    if n > 64 {
        return None;
    }
    let density: f64 = rng.gen_range(0.1..0.9);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for i in 1..=b {
        for v in i + 1..=n {
            if rng.gen_bool(density) {
                edges.push((i, v));
            }
        }
    }
    loop {
        let inst = PropInstance::new(n, b, k, &cells, &edges).ok()?;
        let Some(cover) = cover_b_unchecked(&inst) else {
            return Some(inst);
        };
        let used: Vec<(Vertex, Vertex)> = cover
            .items
            .iter()
            .filter_map(|item| match item {
                crate::graph_prop::MixedItem::Edge { vertices } => {
                    Some((vertices.first()?, vertices.last()?))
                }
                _ => None,
            })
            .collect();
        let drop = *used.choose(rng)?;
        edges.retain(|&e| e != drop);
    }
}
