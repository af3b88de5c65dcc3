//! Exact matching deciders.
//!
//! All searches branch on the smallest vertex that still has to be covered and
//! try candidate sets in lexicographic order, so the first matching found is the
//! lexicographically least one for that branching rule. Failed states are
//! memoised by their used-vertex mask.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::kset::{full_mask, mask_vertices, vertices_mask, KSet, Vertex};

/// Largest ground set accepted by perfect-matching queries.
pub const PERFECT_MATCHING_MAX_N: u32 = 24;

/// Pairwise-disjoint sets, stored in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Matching {
    sets: Vec<KSet>,
}

impl Matching {
    pub fn new(mut sets: Vec<KSet>) -> Result<Self> {
        if !is_disjoint(&sets) {
            return Err(Error::Input(
                "sets of a matching must be pairwise disjoint".into(),
            ));
        }
        sets.sort_unstable();
        Ok(Matching { sets })
    }

    pub fn empty() -> Self {
        Matching { sets: Vec::new() }
    }

    pub fn sets(&self) -> &[KSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn union(&self) -> KSet {
        self.sets.iter().fold(KSet::EMPTY, |a, &s| a.union(s))
    }

    /// True when the union is all of `[n]`.
    pub fn is_perfect(&self, n: u32) -> bool {
        self.union().mask() == full_mask(n)
    }

    pub fn covers(&self, target: KSet) -> bool {
        target.mask() & !self.union().mask() == 0
    }
}

fn is_disjoint(sets: &[KSet]) -> bool {
    let mut seen = 0u64;
    for s in sets {
        if seen & s.mask() != 0 {
            return false;
        }
        seen |= s.mask();
    }
    true
}

/// Whether the given vertex lists are pairwise disjoint. Lists may differ in size.
pub fn is_matching(n: u32, sets: &[Vec<Vertex>]) -> Result<bool> {
    let masks = sets
        .iter()
        .map(|s| KSet::new(n, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(is_disjoint(&masks))
}

/// Sets of `family` bucketed by their smallest vertex (index `v - 1`).
fn by_min(family: &SetFamily) -> Vec<Vec<KSet>> {
    let mut buckets = vec![Vec::new(); family.n() as usize];
    for &s in family.sets() {
        if let Some(v) = s.first() {
            buckets[(v - 1) as usize].push(s);
        }
    }
    buckets
}

/// Sets of `family` containing each vertex (index `v - 1`), lexicographic order.
fn by_vertex(family: &SetFamily) -> Vec<Vec<KSet>> {
    let mut buckets = vec![Vec::new(); family.n() as usize];
    for &s in family.sets() {
        for v in s.iter() {
            buckets[(v - 1) as usize].push(s);
        }
    }
    buckets
}

struct ExactCover {
    full: u64,
    by_min: Vec<Vec<KSet>>,
    failed: HashSet<u64>,
}

impl ExactCover {
    fn solve(&mut self, covered: u64, chosen: &mut Vec<KSet>) -> bool {
        if covered == self.full {
            return true;
        }
        if self.failed.contains(&covered) {
            return false;
        }
        // every vertex below `v` is covered, so a usable set containing v has min v
        let v = (!covered & self.full).trailing_zeros() as usize;
        for i in 0..self.by_min[v].len() {
            let s = self.by_min[v][i];
            if s.mask() & covered == 0 {
                chosen.push(s);
                if self.solve(covered | s.mask(), chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        self.failed.insert(covered);
        false
    }
}

fn check_pm_tier(family: &SetFamily) -> Result<()> {
    family.require_s("a perfect-matching query")?;
    if family.n() > PERFECT_MATCHING_MAX_N {
        return Err(Error::Domain(format!(
            "perfect-matching queries support n <= {PERFECT_MATCHING_MAX_N}, got n = {}",
            family.n()
        )));
    }
    Ok(())
}

/// A perfect matching of `family`, or `None` when none exists.
pub fn find_perfect_matching(family: &SetFamily) -> Result<Option<Matching>> {
    check_pm_tier(family)?;
    Ok(perfect_matching_avoiding(family, KSet::EMPTY))
}

/// A matching of `family` that partitions `[n] \ avoid`.
pub(crate) fn perfect_matching_avoiding(family: &SetFamily, avoid: KSet) -> Option<Matching> {
    let mut search = ExactCover {
        full: full_mask(family.n()),
        by_min: by_min(family),
        failed: HashSet::new(),
    };
    let mut chosen = Vec::new();
    search
        .solve(avoid.mask(), &mut chosen)
        .then(|| Matching::new(chosen).expect("search keeps sets disjoint"))
}

struct CoverSearch<'a> {
    k: usize,
    cap: usize,
    containing: &'a [Vec<KSet>],
    failed: HashSet<u64>,
}

impl CoverSearch<'_> {
    fn solve(&mut self, used: u64, target: u64, chosen: &mut Vec<KSet>) -> bool {
        let remaining = target & !used;
        if remaining == 0 {
            return true;
        }
        let left = self.cap - chosen.len();
        if left == 0 || remaining.count_ones() as usize > left * self.k {
            return false;
        }
        // with k-uniform sets the number chosen is a function of `used`
        if self.failed.contains(&used) {
            return false;
        }
        let v = remaining.trailing_zeros() as usize;
        for i in 0..self.containing[v].len() {
            let s = self.containing[v][i];
            if s.mask() & used == 0 {
                chosen.push(s);
                if self.solve(used | s.mask(), target, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        self.failed.insert(used);
        false
    }
}

fn covering_search(family: &SetFamily, target: KSet, cap: usize) -> Option<Matching> {
    let containing = by_vertex(family);
    let mut search = CoverSearch {
        k: family.k().max(1) as usize,
        cap,
        containing: &containing,
        failed: HashSet::new(),
    };
    let mut chosen = Vec::new();
    search
        .solve(0, target.mask(), &mut chosen)
        .then(|| Matching::new(chosen).expect("search keeps sets disjoint"))
}

/// A matching of at most `cap` sets whose union contains `target`.
pub fn covering_matching(
    family: &SetFamily,
    target: &[Vertex],
    cap: usize,
) -> Result<Option<Matching>> {
    let t = KSet::from_mask(vertices_mask(family.n(), target)?);
    Ok(covering_search(family, t, cap))
}

fn blocking_target(family: &SetFamily, b: &[Vertex]) -> Result<KSet> {
    let s = family.require_s("a blocking-set query")?;
    let t = KSet::from_mask(vertices_mask(family.n(), b)?);
    if t.len() > s as usize {
        return Err(Error::Domain(format!(
            "blocking sets have at most s = {s} vertices, got {}",
            t.len()
        )));
    }
    Ok(t)
}

/// `B` is blocking when no matching of `|B|` sets covers it.
pub fn is_blocking_set(family: &SetFamily, b: &[Vertex]) -> Result<bool> {
    let t = blocking_target(family, b)?;
    Ok(covering_search(family, t, t.len()).is_none())
}

/// The size-free variant: no matching of any size covers `B`.
pub fn is_uncoverable(family: &SetFamily, b: &[Vertex]) -> Result<bool> {
    let t = blocking_target(family, b)?;
    let any_size = (family.n() / family.k().max(1)) as usize;
    Ok(covering_search(family, t, any_size).is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockingWitness {
    pub vertices: Vec<Vertex>,
    pub checked_cap: usize,
}

/// Smallest blocking set of size at most `cap`, lexicographically least among
/// those of that size.
pub fn min_blocking_size(
    family: &SetFamily,
    cap: usize,
) -> Result<Option<(usize, BlockingWitness)>> {
    let s = family.require_s("a blocking-set query")? as usize;
    if cap > s {
        return Err(Error::Domain(format!("blocking cap {cap} exceeds s = {s}")));
    }
    let containing = by_vertex(family);
    // an isolated vertex is the least possible witness
    if cap >= 1 {
        if let Some(v) = containing.iter().position(Vec::is_empty) {
            let witness = BlockingWitness {
                vertices: vec![v as Vertex + 1],
                checked_cap: cap,
            };
            return Ok(Some((1, witness)));
        }
    }
    for size in 1..=cap {
        for combo in (1..=family.n()).combinations(size) {
            let t = KSet::new(family.n(), &combo)?;
            let mut search = CoverSearch {
                k: family.k().max(1) as usize,
                cap: size,
                containing: &containing,
                failed: HashSet::new(),
            };
            if !search.solve(0, t.mask(), &mut Vec::new()) {
                let witness = BlockingWitness {
                    vertices: combo,
                    checked_cap: cap,
                };
                return Ok(Some((size, witness)));
            }
        }
    }
    Ok(None)
}

/// True when `family` has no blocking set of size below `b`.
pub fn no_blocking_below(family: &SetFamily, b: usize) -> Result<bool> {
    Ok(b <= 1 || min_blocking_size(family, b - 1)?.is_none())
}

/// A maximum matching (largest number of pairwise disjoint sets).
pub fn max_matching(family: &SetFamily) -> Matching {
    struct Dp<'a> {
        n: u32,
        by_min: &'a [Vec<KSet>],
        memo: HashMap<(u32, u64), usize>,
    }
    impl Dp<'_> {
        // best number of sets with min vertex >= v, given `used`
        fn best(&mut self, v: u32, used: u64) -> usize {
            if v > self.n {
                return 0;
            }
            let key = (v, used >> (v - 1));
            if let Some(&b) = self.memo.get(&key) {
                return b;
            }
            let mut best = self.best(v + 1, used);
            for &s in &self.by_min[(v - 1) as usize] {
                if s.mask() & used == 0 {
                    best = best.max(1 + self.best(v + 1, used | s.mask()));
                }
            }
            self.memo.insert(key, best);
            best
        }
    }
    let buckets = by_min(family);
    let mut dp = Dp {
        n: family.n(),
        by_min: &buckets,
        memo: HashMap::new(),
    };
    let mut chosen = Vec::new();
    let mut used = 0u64;
    let mut v = 1;
    while v <= family.n() {
        let target = dp.best(v, used);
        if target == 0 {
            break;
        }
        let pick = buckets[(v - 1) as usize]
            .iter()
            .copied()
            .find(|s| s.mask() & used == 0 && 1 + dp.best(v + 1, used | s.mask()) == target);
        if let Some(s) = pick {
            chosen.push(s);
            used |= s.mask();
        }
        v += 1;
    }
    Matching::new(chosen).expect("dp keeps sets disjoint")
}

/// Vertices of `[n]` covered by no set.
pub fn isolated_vertices(family: &SetFamily) -> Vec<Vertex> {
    let covered = family.sets().iter().fold(0u64, |m, s| m | s.mask());
    mask_vertices(full_mask(family.n()) & !covered)
}
