//! Slow, obviously-correct reference implementations working on plain vectors.
//! Nothing here touches the bitmask code paths of the library.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// All `k`-subsets of `items`, in lexicographic order.
pub fn combinations(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut tail in combinations(&items[i + 1..], k - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

pub fn range(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).collect()
}

fn meets(a: &[u32], b: &[u32]) -> bool {
    a.iter().any(|x| b.contains(x))
}

/// Direct transcription of the definition of `E(k, n, b)` with
/// `E_i = [b + (i-1)(k-1) + 1, b + i(k-1)]`.
pub fn naive_e(k: u32, n: u32, b: u32) -> Vec<Vec<u32>> {
    let block = |i: u32| range(b + (i - 1) * (k - 1) + 1, b + i * (k - 1));
    let outside = range(b + 1, n);
    let mut fam: Vec<Vec<u32>> = combinations(&outside, k as usize);
    for i in 1..=b {
        if i < b {
            let mut s = vec![i];
            s.extend(block(i));
            fam.push(s);
        }
        let earlier: Vec<u32> = (1..i).flat_map(block).collect();
        for t in combinations(&outside, k as usize - 1) {
            if meets(&t, &earlier) {
                let mut s = vec![i];
                s.extend(t);
                fam.push(s);
            }
        }
    }
    fam.sort();
    fam.dedup();
    fam
}

/// Any matching at all, found by trying every subset of sets in index order.
/// Calls `visit` with the union of every matching; stops when it returns true.
fn any_matching(
    sets: &[Vec<u32>],
    from: usize,
    used: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    if visit(used) {
        return true;
    }
    for i in from..sets.len() {
        if !meets(&sets[i], used) {
            let before = used.len();
            used.extend(&sets[i]);
            if any_matching(sets, i + 1, used, visit) {
                return true;
            }
            used.truncate(before);
        }
    }
    false
}

pub fn has_perfect_matching(n: u32, sets: &[Vec<u32>]) -> bool {
    any_matching(sets, 0, &mut Vec::new(), &mut |u| u.len() == n as usize)
}

/// Whether some matching with exactly `r` sets exists.
pub fn has_matching_of_size(sets: &[Vec<u32>], r: usize, k: usize) -> bool {
    any_matching(sets, 0, &mut Vec::new(), &mut |u| u.len() == r * k)
}

pub fn coverable(sets: &[Vec<u32>], target: &[u32]) -> bool {
    any_matching(sets, 0, &mut Vec::new(), &mut |u| {
        target.iter().all(|t| u.contains(t))
    })
}

/// Smallest `b <= cap` with an uncoverable `b`-set, and the first such set.
pub fn min_blocking(n: u32, sets: &[Vec<u32>], cap: usize) -> Option<(usize, Vec<u32>)> {
    (1..=cap).find_map(|size| {
        combinations(&range(1, n), size)
            .into_iter()
            .find(|b| !coverable(sets, b))
            .map(|b| (size, b))
    })
}

pub fn random_family(rng: &mut ChaCha8Rng, n: u32, k: u32, density: f64) -> Vec<Vec<u32>> {
    combinations(&range(1, n), k as usize)
        .into_iter()
        .filter(|_| rng.gen_bool(density))
        .collect()
}

/// Largest number of `target` vertices some matching of the graph covers.
/// Walks the target vertices in order, trying every free partner for each.
pub fn max_target_cover(edges: &[[u32; 2]], target: &[u32]) -> usize {
    fn go(edges: &[[u32; 2]], target: &[u32], idx: usize, used: &mut Vec<u32>) -> usize {
        let Some(&v) = target.get(idx) else {
            return target.iter().filter(|t| used.contains(t)).count();
        };
        if used.contains(&v) {
            return go(edges, target, idx + 1, used);
        }
        let mut best = go(edges, target, idx + 1, used);
        for e in edges {
            let u = match *e {
                [a, b] if a == v => b,
                [a, b] if b == v => a,
                _ => continue,
            };
            if !used.contains(&u) {
                used.extend([u, v]);
                best = best.max(go(edges, target, idx + 1, used));
                used.truncate(used.len() - 2);
            }
        }
        best
    }
    go(edges, target, 0, &mut Vec::new())
}
