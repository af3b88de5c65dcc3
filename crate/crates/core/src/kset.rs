//! Subsets of `[n]` stored as 64-bit masks. Vertex `v` occupies bit `v - 1`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// 1-based vertex id.
pub type Vertex = u32;

/// Largest supported ground set.
pub const MAX_VERTICES: u32 = 64;

#[inline]
pub(crate) fn bit(v: Vertex) -> u64 {
    1u64 << (v - 1)
}

/// Mask with bits for vertices `1..=n`.
#[inline]
pub(crate) fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Mask for the interval `[lo, hi]`, empty when `lo > hi`.
#[inline]
pub(crate) fn range_mask(lo: Vertex, hi: Vertex) -> u64 {
    if lo > hi {
        0
    } else {
        full_mask(hi) & !full_mask(lo - 1)
    }
}

/// Ascending vertex list of a mask.
pub(crate) fn mask_vertices(mut mask: u64) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() + 1);
        mask &= mask - 1;
    }
    out
}

/// Mask of a vertex list, validated against `[1, n]`.
pub(crate) fn vertices_mask(n: u32, vertices: &[Vertex]) -> Result<u64> {
    let mut mask = 0u64;
    for &v in vertices {
        if v == 0 || v > n {
            return Err(Error::Input(format!("vertex {v} outside [1, {n}]")));
        }
        if mask & bit(v) != 0 {
            return Err(Error::Input(format!("vertex {v} repeated")));
        }
        mask |= bit(v);
    }
    Ok(mask)
}

/// A finite subset of `[n]`, canonically the ascending list of its members.
///
/// The ordering is lexicographic on those ascending lists, so `{1,4} < {2,3}`
/// and `{1,2} < {1,2,3}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct KSet(u64);

impl KSet {
    pub const EMPTY: KSet = KSet(0);

    #[inline]
    pub fn from_mask(mask: u64) -> Self {
        KSet(mask)
    }

    /// Builds a set from arbitrary-order distinct vertices in `[1, n]`.
    pub fn new(n: u32, vertices: &[Vertex]) -> Result<Self> {
        vertices_mask(n, vertices).map(KSet)
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: Vertex) -> bool {
        (1..=MAX_VERTICES).contains(&v) && self.0 & bit(v) != 0
    }

    #[inline]
    pub fn is_disjoint(self, other: KSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member.
    #[inline]
    pub fn first(self) -> Option<Vertex> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    /// Largest member.
    #[inline]
    pub fn last(self) -> Option<Vertex> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    pub fn members(self) -> Vec<Vertex> {
        mask_vertices(self.0)
    }

    pub fn iter(self) -> impl Iterator<Item = Vertex> {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let v = mask.trailing_zeros() + 1;
                mask &= mask - 1;
                Some(v)
            }
        })
    }

    #[inline]
    pub fn with(self, v: Vertex) -> KSet {
        KSet(self.0 | bit(v))
    }

    #[inline]
    pub fn without(self, v: Vertex) -> KSet {
        KSet(self.0 & !bit(v))
    }

    #[inline]
    pub fn union(self, other: KSet) -> KSet {
        KSet(self.0 | other.0)
    }

    /// Image under a vertex relabelling `perm[v - 1] = new label of v`.
    pub fn relabel(self, perm: &[Vertex]) -> KSet {
        KSet(self.iter().fold(0, |m, v| m | bit(perm[(v - 1) as usize])))
    }
}

impl Ord for KSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        // The sorted lists first differ at min(A xor B). The set owning it is
        // smaller, unless the other set simply ends there.
        let diff = self.0 ^ other.0;
        let lowest = diff & diff.wrapping_neg();
        let (owner, rest) = if self.0 & lowest != 0 {
            (Ordering::Less, other.0)
        } else {
            (Ordering::Greater, self.0)
        };
        let above = !(lowest | (lowest - 1));
        if rest & above == 0 {
            owner.reverse()
        } else {
            owner
        }
    }
}

impl PartialOrd for KSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for KSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let vs = Vec::<Vertex>::deserialize(deserializer)?;
        KSet::new(MAX_VERTICES, &vs).map_err(serde::de::Error::custom)
    }
}
