//! Explicit families without perfect matchings and their exact sizes.
//!
//! All builders use the canonical blocks `E_i = [b + (i-1)(k-1) + 1, b + i(k-1)]`
//! for `i = 1, ..., b-1`. Builders only require `n >= bk + b`; divisibility of
//! `n` by `k` is checked by the matching queries that need it.

use serde::{Deserialize, Serialize};

use crate::binom::{binom, binom_i};
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::kset::{range_mask, KSet, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionKind {
    /// The conjectured extremal family `E(k, n, b)`.
    E,
    /// The larger 3-uniform family `E'(3, n, b)`.
    Eprime3,
    /// All k-sets avoiding vertex 1.
    Kleitman,
    /// `E(2, n, b)` plus every edge from `[b]` to the blocks.
    AugmentedE2,
}

/// Parameters of one construction, plus the blocks it uses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    pub k: u32,
    pub n: u32,
    pub b: u32,
    /// `E_1, ..., E_{b-1}` (empty for kinds that do not use blocks).
    pub blocks: Vec<Vec<Vertex>>,
}

impl ConstructionSpec {
    pub fn new(kind: ConstructionKind, k: u32, n: u32, b: u32) -> Result<Self> {
        match kind {
            ConstructionKind::E => check_e(k, n, b)?,
            ConstructionKind::AugmentedE2 => {
                if k != 2 {
                    return Err(Error::Domain(format!("aug-e2 requires k = 2, got k = {k}")));
                }
                check_e(2, n, b)?
            }
            ConstructionKind::Eprime3 => {
                if k != 3 {
                    return Err(Error::Domain(format!(
                        "eprime3 requires k = 3, got k = {k}"
                    )));
                }
                check_eprime3(n, b)?
            }
            ConstructionKind::Kleitman => check_kleitman(k, n)?,
        }
        let blocks = match kind {
            ConstructionKind::E | ConstructionKind::AugmentedE2 => (1..b)
                .map(|i| KSet::from_mask(block_mask(k, b, i)).members())
                .collect(),
            _ => Vec::new(),
        };
        Ok(ConstructionSpec {
            kind,
            k,
            n,
            b,
            blocks,
        })
    }

    pub fn build(&self) -> Result<SetFamily> {
        match self.kind {
            ConstructionKind::E => build_e(self.k, self.n, self.b),
            ConstructionKind::Eprime3 => build_eprime3(self.n, self.b),
            ConstructionKind::Kleitman => build_kleitman(self.k, self.n),
            ConstructionKind::AugmentedE2 => build_augmented_e2(self.n, self.b),
        }
    }
}

fn check_e(k: u32, n: u32, b: u32) -> Result<()> {
    if k < 2 || b < 1 {
        return Err(Error::Domain(format!(
            "E(k, n, b) needs k >= 2 and b >= 1, got k = {k}, b = {b}"
        )));
    }
    if (n as u64) < (b as u64) * (k as u64 + 1) {
        return Err(Error::Domain(format!(
            "E(k, n, b) needs n >= bk + b = {}, got n = {n}",
            b * k + b
        )));
    }
    Ok(())
}

fn check_eprime3(n: u32, b: u32) -> Result<()> {
    if b < 1 || n < 4 * b {
        return Err(Error::Domain(format!(
            "E'(3, n, b) needs b >= 1 and n >= 4b, got n = {n}, b = {b}"
        )));
    }
    Ok(())
}

fn check_kleitman(k: u32, n: u32) -> Result<()> {
    if k < 1 || n < k {
        return Err(Error::Domain(format!(
            "kleitman needs 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

/// Mask of the block `E_i`.
fn block_mask(k: u32, b: u32, i: u32) -> u64 {
    range_mask(b + (i - 1) * (k - 1) + 1, b + i * (k - 1))
}

/// Union `E_1 u ... u E_j` (a contiguous interval).
fn blocks_prefix_mask(k: u32, b: u32, j: u32) -> u64 {
    range_mask(b + 1, b + j * (k - 1))
}

/// Membership test for `E(k, n, b)`, shared with `aug-e2`.
fn in_e(k: u32, b: u32, s: KSet) -> bool {
    let special = range_mask(1, b);
    let hit = s.mask() & special;
    if hit == 0 {
        return true;
    }
    if hit.count_ones() != 1 {
        return false;
    }
    let i = hit.trailing_zeros() + 1;
    let rest = s.mask() & !hit;
    (i < b && rest == block_mask(k, b, i)) || rest & blocks_prefix_mask(k, b, i - 1) != 0
}

/// `E(k, n, b)`: every k-subset of `[b+1, n]`, and for each `i` in `[b]` the
/// set `{i} u E_i` (skipped for `i = b`) plus all `{i} u S` with `S` a
/// (k-1)-subset of `[b+1, n]` meeting `E_1 u ... u E_{i-1}`.
pub fn build_e(k: u32, n: u32, b: u32) -> Result<SetFamily> {
    check_e(k, n, b)?;
    SetFamily::from_predicate(n, k, |s| in_e(k, b, s))
}

/// `E'(3, n, b)`: 3-sets with exactly one vertex of `[b]` and at least one of
/// `[b+1, 2b-1]`, plus all 3-subsets of `[b+1, n]`.
pub fn build_eprime3(n: u32, b: u32) -> Result<SetFamily> {
    check_eprime3(n, b)?;
    let special = range_mask(1, b);
    let middle = range_mask(b + 1, 2 * b - 1);
    SetFamily::from_predicate(n, 3, |s| {
        let hit = (s.mask() & special).count_ones();
        hit == 0 || (hit == 1 && s.mask() & middle != 0)
    })
}

/// Every k-subset of `[n]` avoiding vertex 1.
pub fn build_kleitman(k: u32, n: u32) -> Result<SetFamily> {
    check_kleitman(k, n)?;
    SetFamily::from_predicate(n, k, |s| !s.contains(1))
}

/// `E(2, n, b)` together with every pair `{i, e}`, `i` in `[b]`, `e` in a block.
pub fn build_augmented_e2(n: u32, b: u32) -> Result<SetFamily> {
    check_e(2, n, b)?;
    let special = range_mask(1, b);
    let blocks = blocks_prefix_mask(2, b, b - 1);
    SetFamily::from_predicate(n, 2, |s| {
        let hit = s.mask() & special;
        in_e(2, b, s) || (hit.count_ones() == 1 && s.mask() & !hit & blocks != 0)
    })
}

/// `|E(k, n, b)|` from the closed form
/// `C(n-b, k) + b C(n-b, k-1) - sum_{i=1}^{b} C(n-b-(k-1)(i-1), k-1) + (b-1)`.
pub fn size_e(k: u32, n: u32, b: u32) -> Result<u128> {
    check_e(k, n, b)?;
    let (n, k, b) = (n as i64, k as u64, b as i64);
    let mut total = binom_i(n - b, k) + b as i128 * binom_i(n - b, k - 1) + (b - 1) as i128;
    for i in 1..=b {
        total -= binom_i(n - b - (k as i64 - 1) * (i - 1), k - 1);
    }
    Ok(total as u128)
}

/// `|E'(3, n, b)| = C(n-b, 3) + b C(n-b, 2) - b C(n-2b+1, 2)`.
pub fn size_eprime3(n: u32, b: u32) -> Result<u128> {
    check_eprime3(n, b)?;
    let (n, b) = (n as i64, b as i64);
    let total =
        binom_i(n - b, 3) + b as i128 * binom_i(n - b, 2) - b as i128 * binom_i(n - 2 * b + 1, 2);
    Ok(total as u128)
}

/// `(b^3 - 7b + 6) / 6 = (b-1)(b-2)(b+3) / 6`, the excess of `E'(3, n, b)` over `E(3, n, b)`.
pub fn delta3(b: u32) -> i128 {
    let b = b as i128;
    (b * b * b - 7 * b + 6) / 6
}

/// `C(n, k) - |E(k, n, b)| - [b C(n, k-1) - (b + b(b-1)k/2) C(n, k-2)]`: the
/// part of the missing-set count below the two leading binomial terms.
pub fn missing_remainder(k: u32, n: u32, b: u32) -> Result<i128> {
    if k < 2 {
        return Err(Error::Domain("missing_remainder needs k >= 2".into()));
    }
    let size = size_e(k, n, b)? as i128;
    let (nu, ku, bi) = (n as u64, k as u64, b as i128);
    // b(b-1)k/2 is an integer because b(b-1) is even
    let second = bi + bi * (bi - 1) * ku as i128 / 2;
    let leading = bi * binom(nu, ku - 1) as i128 - second * binom(nu, ku - 2) as i128;
    Ok(binom(nu, ku) as i128 - size - leading)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{find_perfect_matching, min_blocking_size};

    fn set(vs: &[u32]) -> KSet {
        KSet::new(64, vs).unwrap()
    }

    #[test]
    fn e_3_12_2() {
        let f = build_e(3, 12, 2).unwrap();
        assert_eq!(f.len(), 138);
        assert!(f.contains(set(&[1, 3, 4])));
        assert_eq!(size_e(3, 12, 2).unwrap(), 138);
        assert_eq!(f.link(1).unwrap().len(), 1);
    }

    #[test]
    fn e_2_10_3_hand_expansion() {
        let f = build_e(2, 10, 3).unwrap();
        assert_eq!(f.len(), 26);
        let with =
            |i: u32| -> Vec<KSet> { f.sets().iter().copied().filter(|s| s.contains(i)).collect() };
        assert_eq!(with(1), vec![set(&[1, 4])]);
        assert_eq!(with(2), vec![set(&[2, 4]), set(&[2, 5])]);
        assert_eq!(with(3), vec![set(&[3, 4]), set(&[3, 5])]);
        assert_eq!(size_e(2, 10, 3).unwrap(), 26);
    }

    #[test]
    fn e_3_12_3() {
        assert_eq!(build_e(3, 12, 3).unwrap().len(), 127);
        assert_eq!(size_e(3, 12, 3).unwrap(), 127);
    }

    #[test]
    fn e_rejects_small_n() {
        assert!(matches!(build_e(3, 11, 3), Err(Error::Domain(_))));
        assert!(matches!(size_e(3, 11, 3), Err(Error::Domain(_))));
        assert!(matches!(build_e(1, 11, 3), Err(Error::Domain(_))));
        assert!(matches!(build_e(3, 11, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn eprime3_examples() {
        let f = build_eprime3(12, 3).unwrap();
        assert_eq!(f.len(), 129);
        assert_eq!(size_eprime3(12, 3).unwrap(), 129);
        let (size, w) = min_blocking_size(&f, 3).unwrap().unwrap();
        assert_eq!((size, w.vertices), (3, vec![1, 2, 3]));

        let g = build_eprime3(12, 2).unwrap();
        assert_eq!(g.len(), 138);
        assert_eq!(size_eprime3(12, 2).unwrap(), size_e(3, 12, 2).unwrap());
        assert_eq!(min_blocking_size(&g, 3).unwrap().unwrap().0, 2);

        assert_eq!(build_eprime3(16, 3).unwrap().len(), 355);
        assert_eq!(size_eprime3(16, 3).unwrap(), 355);
        assert!(build_eprime3(11, 3).is_err());
    }

    #[test]
    fn kleitman_examples() {
        assert_eq!(build_kleitman(2, 6).unwrap().len(), 10);
        assert_eq!(build_kleitman(3, 6).unwrap().len(), 10);
        let (size, w) = min_blocking_size(&build_kleitman(3, 12).unwrap(), 1)
            .unwrap()
            .unwrap();
        assert_eq!((size, w.vertices), (1, vec![1]));
        assert!(build_kleitman(4, 3).is_err());
    }

    #[test]
    fn augmented_e2_examples() {
        let aug = build_augmented_e2(10, 3).unwrap();
        let e = build_e(2, 10, 3).unwrap();
        assert_eq!(aug.len(), 27);
        assert_eq!(aug.without_set(set(&[1, 5])), e);
        let (size, w) = min_blocking_size(&aug, 3).unwrap().unwrap();
        assert_eq!((size, w.vertices), (3, vec![1, 2, 3]));
        assert_eq!(find_perfect_matching(&aug).unwrap(), None);

        assert_eq!(
            build_augmented_e2(10, 2).unwrap(),
            build_e(2, 10, 2).unwrap()
        );
        assert!(build_augmented_e2(8, 3).is_err());
    }

    #[test]
    fn delta3_values() {
        assert_eq!(delta3(1), 0);
        assert_eq!(delta3(2), 0);
        assert_eq!(delta3(3), 2);
        assert_eq!(delta3(4), 7);
        assert_eq!(
            size_eprime3(20, 4).unwrap() as i128 - size_e(3, 20, 4).unwrap() as i128,
            7
        );
    }

    #[test]
    fn spec_records_blocks() {
        let spec = ConstructionSpec::new(ConstructionKind::E, 3, 12, 3).unwrap();
        assert_eq!(spec.blocks, vec![vec![4, 5], vec![6, 7]]);
        assert_eq!(spec.build().unwrap().len(), 127);
        assert!(ConstructionSpec::new(ConstructionKind::Eprime3, 4, 16, 2).is_err());
        assert!(ConstructionSpec::new(ConstructionKind::AugmentedE2, 3, 16, 2).is_err());
    }
}
