//! Maximality checks and extremal family search.
//!
//! The exhaustive search works on complements. A family has no perfect
//! matching exactly when its missing sets meet every perfect matching of the
//! complete family, and dropping sets can only create blocking sets, so the
//! largest feasible family is the complement of a minimum *minimal* hitting
//! set of perfect matchings. Those are enumerated by the usual bounded search
//! tree: find a perfect matching of the current family and branch on which of
//! its sets to drop, keeping the earlier siblings fixed.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::build_e;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::kset::KSet;
use crate::matching::{find_perfect_matching, no_blocking_below, perfect_matching_avoiding};

/// A missing set whose addition keeps the family free of perfect matchings,
/// or `None` when every missing set creates one.
pub fn maximality_check(family: &SetFamily) -> Result<Option<KSet>> {
    if let Some(m) = find_perfect_matching(family)? {
        return Err(Error::Domain(format!(
            "family already has a perfect matching: {:?}",
            m.sets()
        )));
    }
    // a new perfect matching must use the added set
    Ok(family
        .missing_sets()
        .into_iter()
        .find(|&s| perfect_matching_avoiding(family, s).is_none()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub mode: SearchMode,
    /// Exhaustive: search-tree node limit (0 = unlimited). Randomized: restarts.
    pub node_cap: u64,
    pub seed: u64,
}

impl SearchBudget {
    pub fn exhaustive() -> Self {
        SearchBudget {
            mode: SearchMode::Exhaustive,
            node_cap: 0,
            seed: 0,
        }
    }

    pub fn randomized(restarts: u64, seed: u64) -> Self {
        SearchBudget {
            mode: SearchMode::Randomized,
            node_cap: restarts,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub max_size: usize,
    pub witness: SetFamily,
    /// True only for a completed exhaustive search.
    pub exact: bool,
}

/// Whether `(k, n)` is small enough for exhaustive search.
pub fn exhaustive_tier(k: u32, n: u32) -> bool {
    (k == 2 && n <= 8) || (k == 3 && n <= 6)
}

fn feasible(family: &SetFamily, b: usize) -> Result<bool> {
    Ok(find_perfect_matching(family)?.is_none() && no_blocking_below(family, b)?)
}

/// Largest family on `[n]` with no perfect matching and no blocking set of
/// size below `b`.
pub fn extremal_search(k: u32, n: u32, b: u32, budget: SearchBudget) -> Result<SearchResult> {
    if k == 0 || !n.is_multiple_of(k) || n < k {
        return Err(Error::Domain(format!(
            "extremal search needs k | n, got k = {k}, n = {n}"
        )));
    }
    if b == 0 || b - 1 > n / k {
        return Err(Error::Domain(format!(
            "b = {b} must satisfy 1 <= b <= s + 1"
        )));
    }
    match budget.mode {
        SearchMode::Exhaustive => {
            if !exhaustive_tier(k, n) {
                return Err(Error::Domain(format!(
                    "exhaustive search covers k = 2 with n <= 8 and k = 3 with n <= 6, got k = {k}, n = {n}"
                )));
            }
            exhaustive(k, n, b as usize, budget.node_cap)
        }
        SearchMode::Randomized => randomized(k, n, b as usize, budget),
    }
}

/// Tie-break between equal-size witnesses. Families are read as bit vectors
/// over the k-sets in colex order (the order of their masks) and the smaller
/// number wins, so `{12, 13, 23}` beats the star `{12, 13, 14}`.
fn before(a: &SetFamily, b: &SetFamily) -> bool {
    colex_key(a) < colex_key(b)
}

fn colex_key(f: &SetFamily) -> Vec<u64> {
    let mut masks: Vec<u64> = f.sets().iter().map(|s| s.mask()).collect();
    masks.sort_unstable_by(|x, y| y.cmp(x));
    masks
}

struct Hitting {
    b: usize,
    node_cap: u64,
    nodes: u64,
    best: Option<SetFamily>,
}

impl Hitting {
    /// Drops at most `budget` more sets from `family`; `fixed` sets must stay.
    fn go(&mut self, family: &SetFamily, fixed: &[KSet], budget: usize) -> Result<()> {
        self.nodes += 1;
        if self.node_cap > 0 && self.nodes > self.node_cap {
            return Err(Error::Domain(format!(
                "node cap {} exhausted",
                self.node_cap
            )));
        }
        // removing sets never destroys a blocking set
        if !no_blocking_below(family, self.b)? {
            return Ok(());
        }
        let Some(pm) = perfect_matching_avoiding(family, KSet::EMPTY) else {
            if budget == 0 && self.best.as_ref().is_none_or(|w| before(family, w)) {
                self.best = Some(family.clone());
            }
            return Ok(());
        };
        if budget == 0 {
            return Ok(());
        }
        let mut fixed = fixed.to_vec();
        for &s in pm.sets() {
            if !fixed.contains(&s) {
                self.go(&family.without_set(s), &fixed, budget - 1)?;
                fixed.push(s);
            }
        }
        Ok(())
    }
}

fn exhaustive(k: u32, n: u32, b: usize, node_cap: u64) -> Result<SearchResult> {
    let complete = SetFamily::complete(n, k)?;
    let mut search = Hitting {
        b,
        node_cap,
        nodes: 0,
        best: None,
    };
    for removed in 0..=complete.len() {
        search.go(&complete, &[], removed)?;
        if let Some(witness) = search.best.take() {
            return Ok(SearchResult {
                max_size: witness.len(),
                witness,
                exact: true,
            });
        }
    }
    Err(Error::Domain(format!(
        "no family on [{n}] avoids perfect matchings with no blocking set below {b}"
    )))
}

/// Greedy completion: add missing sets in random order while feasible.
fn complete_greedily(start: &SetFamily, b: usize, rng: &mut ChaCha8Rng) -> Result<SetFamily> {
    let mut current = start.clone();
    let mut missing = current.missing_sets();
    missing.shuffle(rng);
    for s in missing {
        let next = current.with_set(s)?;
        if find_perfect_matching(&next)?.is_none() && no_blocking_below(&next, b)? {
            current = next;
        }
    }
    Ok(current)
}

fn randomized(k: u32, n: u32, b: usize, budget: SearchBudget) -> Result<SearchResult> {
    let base = if (n as u64) >= (b as u64) * (k as u64 + 1) {
        build_e(k, n, b as u32)?
    } else if b == 1 {
        SetFamily::new(n, k, Vec::new())?
    } else {
        return Err(Error::Domain(format!(
            "randomized search starts from E(k, n, b) and needs n >= bk + b = {}",
            b as u32 * (k + 1)
        )));
    };
    if !feasible(&base, b)? {
        return Err(Error::Domain(
            "the starting family violates the constraints".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut best = complete_greedily(&base, b, &mut rng)?;
    let mut current = best.clone();
    for _ in 0..budget.node_cap.max(1) {
        // perturb: drop a few random sets, then complete again
        let mut sets = current.sets().to_vec();
        sets.shuffle(&mut rng);
        let keep = sets.len() - sets.len().min(1 + sets.len() / 10);
        let perturbed = SetFamily::new(n, k, sets[..keep].to_vec())?;
        if !no_blocking_below(&perturbed, b)? {
            current = best.clone();
            continue;
        }
        let candidate = complete_greedily(&perturbed, b, &mut rng)?;
        if candidate.len() > best.len()
            || (candidate.len() == best.len() && before(&candidate, &best))
        {
            best = candidate.clone();
        }
        // restart from the best family on stagnation
        current = if candidate.len() >= current.len() {
            candidate
        } else {
            best.clone()
        };
    }
    Ok(SearchResult {
        max_size: best.len(),
        witness: best,
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_e, size_e};
    use crate::matching::min_blocking_size;

    #[test]
    fn e_3_12_2_is_maximal() {
        let e = build_e(3, 12, 2).unwrap();
        assert_eq!(e.missing_sets().len(), 82);
        assert_eq!(maximality_check(&e).unwrap(), None);
    }

    #[test]
    fn removed_set_is_a_witness() {
        let e = build_e(3, 12, 2).unwrap();
        let s = KSet::new(12, &[1, 3, 4]).unwrap();
        assert_eq!(maximality_check(&e.without_set(s)).unwrap(), Some(s));
    }

    #[test]
    fn e_2_10_3_is_not_maximal() {
        let e = build_e(2, 10, 3).unwrap();
        assert_eq!(
            maximality_check(&e).unwrap(),
            Some(KSet::new(10, &[1, 5]).unwrap())
        );
    }

    #[test]
    fn maximality_needs_no_perfect_matching() {
        let c = SetFamily::complete(4, 2).unwrap();
        assert!(matches!(maximality_check(&c), Err(Error::Domain(_))));
    }

    #[test]
    fn kleitman_small() {
        let r = extremal_search(2, 4, 1, SearchBudget::exhaustive()).unwrap();
        assert_eq!(r.max_size, 3);
        assert!(r.exact);
        let triangle = SetFamily::from_lists(4, 2, &[vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        assert_eq!(r.witness, triangle);

        let r = extremal_search(3, 6, 1, SearchBudget::exhaustive()).unwrap();
        assert_eq!(r.max_size, 10);
    }

    #[test]
    fn b2_search_beats_construction() {
        let r = extremal_search(2, 6, 2, SearchBudget::exhaustive()).unwrap();
        assert!(r.max_size as u128 >= size_e(2, 6, 2).unwrap());
        assert_eq!(size_e(2, 6, 2).unwrap(), 8);
        assert!(find_perfect_matching(&r.witness).unwrap().is_none());
        assert!(min_blocking_size(&r.witness, 1).unwrap().is_none());
    }

    #[test]
    fn tier_and_parameter_errors() {
        assert!(extremal_search(2, 10, 1, SearchBudget::exhaustive()).is_err());
        assert!(extremal_search(3, 9, 1, SearchBudget::exhaustive()).is_err());
        assert!(extremal_search(2, 5, 1, SearchBudget::exhaustive()).is_err());
        assert!(extremal_search(2, 4, 0, SearchBudget::exhaustive()).is_err());
        assert!(extremal_search(
            2,
            6,
            1,
            SearchBudget {
                node_cap: 3,
                ..SearchBudget::exhaustive()
            }
        )
        .is_err());
    }

    #[test]
    fn randomized_is_reproducible_and_feasible() {
        let a = extremal_search(2, 10, 3, SearchBudget::randomized(5, 42)).unwrap();
        let b = extremal_search(2, 10, 3, SearchBudget::randomized(5, 42)).unwrap();
        assert_eq!(a, b);
        assert!(!a.exact);
        assert!(a.max_size >= 27);
        assert!(feasible(&a.witness, 3).unwrap());
    }
}
