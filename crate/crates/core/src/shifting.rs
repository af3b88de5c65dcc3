//! The shift operator `S_{x,y}` and the constrained shift-to-fixpoint loop.
//!
//! `S_{x,y}` replaces `y` by `x` in every set containing `y` but not `x`,
//! unless the replacement is already in the family. It is only defined when
//! `|F(x)| >= |F(y)|`. Every meaningful shift strictly increases the potential
//! `sum_i |F(i)|^2`, which bounds the length of any shift sequence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::kset::{mask_vertices, vertices_mask, KSet, Vertex};
use crate::matching::no_blocking_below;

/// `sum_i |F(i)|^2`.
pub fn potential(family: &SetFamily) -> u64 {
    family.degrees().iter().map(|&d| (d * d) as u64).sum()
}

fn check_pair(family: &SetFamily, x: Vertex, y: Vertex) -> Result<()> {
    family.check_vertex(x)?;
    family.check_vertex(y)?;
    if x == y {
        return Err(Error::Domain(format!(
            "shift needs two distinct vertices, got x = y = {x}"
        )));
    }
    let (dx, dy) = (family.degree(x), family.degree(y));
    if dx < dy {
        return Err(Error::Domain(format!(
            "S_{{{x},{y}}} needs |F({x})| >= |F({y})|, got {dx} < {dy}"
        )));
    }
    Ok(())
}

#[inline]
fn image(family: &SetFamily, s: KSet, x: Vertex, y: Vertex) -> Option<KSet> {
    if s.contains(y) && !s.contains(x) {
        let t = s.without(y).with(x);
        (!family.contains(t)).then_some(t)
    } else {
        None
    }
}

fn shift_unchecked(family: &SetFamily, x: Vertex, y: Vertex) -> SetFamily {
    let sets = family
        .sets()
        .iter()
        .map(|&s| image(family, s, x, y).unwrap_or(s))
        .collect();
    SetFamily::new(family.n(), family.k(), sets).expect("shift keeps sets distinct")
}

fn meaningful_unchecked(family: &SetFamily, x: Vertex, y: Vertex) -> bool {
    family
        .sets()
        .iter()
        .any(|&s| image(family, s, x, y).is_some())
}

/// `S_{x,y}(F)`.
pub fn shift(family: &SetFamily, x: Vertex, y: Vertex) -> Result<SetFamily> {
    check_pair(family, x, y)?;
    Ok(shift_unchecked(family, x, y))
}

/// Whether `S_{x,y}` changes the family.
pub fn is_meaningful(family: &SetFamily, x: Vertex, y: Vertex) -> Result<bool> {
    check_pair(family, x, y)?;
    Ok(meaningful_unchecked(family, x, y))
}

fn region_mask(family: &SetFamily, region: &[Vertex]) -> Result<u64> {
    vertices_mask(family.n(), region)
}

fn shifted_on_mask(family: &SetFamily, region: u64) -> bool {
    let ys = mask_vertices(region);
    let deg = family.degrees();
    if ys
        .windows(2)
        .any(|w| deg[(w[0] - 1) as usize] < deg[(w[1] - 1) as usize])
    {
        return false;
    }
    for (i, &x) in ys.iter().enumerate() {
        for &y in &ys[i + 1..] {
            if meaningful_unchecked(family, x, y) {
                return false;
            }
        }
    }
    true
}

/// Degrees are non-increasing along `region` and no meaningful `S_{x,y}` with
/// `x < y` both in `region` exists.
pub fn is_shifted_on(family: &SetFamily, region: &[Vertex]) -> Result<bool> {
    Ok(shifted_on_mask(family, region_mask(family, region)?))
}

/// A set that breaks the closure property, with the offending pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureViolation {
    pub set: KSet,
    pub x: Vertex,
    pub y: Vertex,
}

/// On a family shifted on `region`, checks that `(F \ {y}) u {x}` is present
/// for every `F`, `y` in `F` and `x < y` outside `F`, both in `region`.
pub fn closure_property_check(
    family: &SetFamily,
    region: &[Vertex],
) -> Result<Option<ClosureViolation>> {
    let mask = region_mask(family, region)?;
    if !shifted_on_mask(family, mask) {
        return Err(Error::Domain(
            "family is not shifted on the given region".into(),
        ));
    }
    for &s in family.sets() {
        for y in KSet::from_mask(s.mask() & mask).iter() {
            for x in KSet::from_mask(mask & !s.mask())
                .iter()
                .take_while(|&x| x < y)
            {
                if !family.contains(s.without(y).with(x)) {
                    return Ok(Some(ClosureViolation { set: s, x, y }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftStep {
    pub x: Vertex,
    pub y: Vertex,
    pub potential_before: u64,
    pub potential_after: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftTrace {
    /// Shifts in application order, in the labels current at each step.
    pub steps: Vec<ShiftStep>,
    /// `permutation[v - 1]` is the final label of input vertex `v`.
    pub permutation: Vec<Vertex>,
    /// The longest prefix `[1, m]` on which the final family is shifted.
    pub shifted_region: Vec<Vertex>,
    /// Vertices are re-sorted by degree before every shift.
    pub relabel_policy: &'static str,
    #[serde(rename = "final")]
    pub final_family: SetFamily,
}

/// Relabelling sorting vertices by non-increasing degree; ties keep label order.
fn degree_sort(family: &SetFamily) -> Vec<Vertex> {
    let deg = family.degrees();
    let mut order: Vec<Vertex> = (1..=family.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(deg[(v - 1) as usize]));
    let mut perm = vec![0; family.n() as usize];
    for (new, &old) in order.iter().enumerate() {
        perm[(old - 1) as usize] = new as Vertex + 1;
    }
    perm
}

/// Shifts `family` as far as possible without creating a blocking set of size
/// below `b`.
///
/// Each round relabels vertices by non-increasing degree, then applies the
/// lexicographically first meaningful `S_{x,y}` (`x < y`) whose result still
/// has no blocking set below `b`. The loop stops when no such shift exists.
pub fn shift_closure(family: &SetFamily, b: usize) -> Result<ShiftTrace> {
    let s = family.require_s("shift_closure")? as usize;
    if b == 0 {
        return Err(Error::Domain("shift_closure needs b >= 1".into()));
    }
    if b - 1 > s {
        return Err(Error::Domain(format!("b - 1 = {} exceeds s = {s}", b - 1)));
    }
    if !no_blocking_below(family, b)? {
        return Err(Error::Domain(format!(
            "input already has a blocking set of size below {b}"
        )));
    }
    let n = family.n();
    let mut current = family.clone();
    let mut permutation: Vec<Vertex> = (1..=n).collect();
    let mut steps = Vec::new();
    loop {
        let perm = degree_sort(&current);
        current = current.relabel(&perm)?;
        for p in permutation.iter_mut() {
            *p = perm[(*p - 1) as usize];
        }
        let before = potential(&current);
        let mut applied = None;
        'search: for x in 1..=n {
            for y in x + 1..=n {
                if !meaningful_unchecked(&current, x, y) {
                    continue;
                }
                let next = shift_unchecked(&current, x, y);
                if no_blocking_below(&next, b)? {
                    applied = Some((x, y, next));
                    break 'search;
                }
            }
        }
        let Some((x, y, next)) = applied else { break };
        let after = potential(&next);
        debug_assert!(after > before);
        steps.push(ShiftStep {
            x,
            y,
            potential_before: before,
            potential_after: after,
        });
        current = next;
    }
    let mut m = 0;
    while m < n && shifted_on_mask(&current, crate::kset::full_mask(m + 1)) {
        m += 1;
    }
    Ok(ShiftTrace {
        steps,
        permutation,
        shifted_region: (1..=m).collect(),
        relabel_policy: "per-step",
        final_family: current,
    })
}
