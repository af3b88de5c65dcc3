//! k-uniform families over `[n]` and their file formats.
//!
//! Text format (LF line endings):
//!
//! ```text
//! n k
//! v1 v2 ... vk
//! ...
//! ```
//!
//! Each set line is strictly ascending, lines are in ascending lexicographic
//! order and repeated lines are rejected. The JSON form is
//! `{"n": .., "k": .., "sets": [[..], ..]}` with the same ordering rules.

use std::fmt::Write as _;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kset::{bit, full_mask, KSet, Vertex, MAX_VERTICES};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: u32,
    k: u32,
    sets: Vec<KSet>,
}

impl SetFamily {
    /// Builds a family from sets in any order. Duplicates are an error.
    pub fn new(n: u32, k: u32, mut sets: Vec<KSet>) -> Result<Self> {
        check_dims(n, k)?;
        let full = full_mask(n);
        for s in &sets {
            if s.mask() & !full != 0 {
                return Err(Error::Input(format!("set {s} leaves [1, {n}]")));
            }
            if s.len() != k as usize {
                return Err(Error::Input(format!("set {s} does not have {k} elements")));
            }
        }
        sets.sort_unstable();
        if let Some((a, _)) = sets.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(Error::Input(format!("set {a} appears twice")));
        }
        Ok(SetFamily { n, k, sets })
    }

    /// Builds a family from vertex lists.
    pub fn from_lists(n: u32, k: u32, lists: &[Vec<Vertex>]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| KSet::new(n, l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, k, sets)
    }

    /// Caller guarantees sorted, distinct, valid sets.
    pub(crate) fn from_sorted_unchecked(n: u32, k: u32, sets: Vec<KSet>) -> Self {
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        SetFamily { n, k, sets }
    }

    /// All k-subsets of `[n]` accepted by `keep`, in lexicographic order.
    pub fn from_predicate(n: u32, k: u32, mut keep: impl FnMut(KSet) -> bool) -> Result<Self> {
        check_dims(n, k)?;
        let sets = (1..=n)
            .combinations(k as usize)
            .map(|c| KSet::from_mask(c.iter().fold(0, |m, &v| m | bit(v))))
            .filter(|&s| keep(s))
            .collect();
        Ok(Self::from_sorted_unchecked(n, k, sets))
    }

    /// Every k-subset of `[n]`.
    pub fn complete(n: u32, k: u32) -> Result<Self> {
        Self::from_predicate(n, k, |_| true)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
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

    /// `n / k` when `k` divides `n`.
    pub fn s(&self) -> Option<u32> {
        (self.k > 0 && self.n.is_multiple_of(self.k)).then(|| self.n / self.k)
    }

    /// `s`, or a domain error naming the operation that needed it.
    pub(crate) fn require_s(&self, what: &str) -> Result<u32> {
        self.s().ok_or_else(|| {
            Error::Domain(format!(
                "{what} requires k | n (n = {}, k = {})",
                self.n, self.k
            ))
        })
    }

    pub fn contains(&self, s: KSet) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    pub fn check_vertex(&self, x: Vertex) -> Result<()> {
        if x == 0 || x > self.n {
            Err(Error::Input(format!("vertex {x} outside [1, {}]", self.n)))
        } else {
            Ok(())
        }
    }

    /// `|F(x)|` for every vertex, indexed by `x - 1`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n as usize];
        for s in &self.sets {
            for v in s.iter() {
                deg[(v - 1) as usize] += 1;
            }
        }
        deg
    }

    pub fn degree(&self, x: Vertex) -> usize {
        self.sets.iter().filter(|s| s.contains(x)).count()
    }

    /// The link `F(x) = { F \ {x} : x in F in F }`, a (k-1)-uniform family on `[n]`.
    pub fn link(&self, x: Vertex) -> Result<SetFamily> {
        self.check_vertex(x)?;
        if self.k == 0 {
            return Err(Error::Domain(
                "the link of a 0-uniform family is undefined".into(),
            ));
        }
        let sets = self
            .sets
            .iter()
            .filter(|s| s.contains(x))
            .map(|s| s.without(x))
            .collect();
        SetFamily::new(self.n, self.k - 1, sets)
    }

    /// A new family with `extra` added; error if it is already present or invalid.
    pub fn with_set(&self, extra: KSet) -> Result<SetFamily> {
        let mut sets = self.sets.clone();
        sets.push(extra);
        SetFamily::new(self.n, self.k, sets)
    }

    /// A new family with `gone` removed (no-op when absent).
    pub fn without_set(&self, gone: KSet) -> SetFamily {
        let sets = self.sets.iter().copied().filter(|&s| s != gone).collect();
        SetFamily::from_sorted_unchecked(self.n, self.k, sets)
    }

    /// Image under `perm[v - 1] = new label of v`; `perm` must be a permutation of `[n]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<SetFamily> {
        if perm.len() != self.n as usize || !perm.iter().copied().sorted().eq(1..=self.n) {
            return Err(Error::Input(format!(
                "relabelling is not a permutation of [1, {}]",
                self.n
            )));
        }
        let sets = self.sets.iter().map(|s| s.relabel(perm)).collect();
        SetFamily::new(self.n, self.k, sets)
    }

    /// k-subsets of `[n]` not in the family, lexicographic order.
    pub fn missing_sets(&self) -> Vec<KSet> {
        let mut present = self.sets.iter().peekable();
        let mut out = Vec::new();
        for c in (1..=self.n).combinations(self.k as usize) {
            let s = KSet::from_mask(c.iter().fold(0, |m, &v| m | bit(v)));
            if present.peek() == Some(&&s) {
                present.next();
            } else {
                out.push(s);
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for s in &self.sets {
            let line = s.iter().map(|v| v.to_string()).join(" ");
            let _ = writeln!(out, "{line}");
        }
        out
    }

    /// Strict parser for the text format.
    pub fn parse_text(text: &str) -> Result<SetFamily> {
        if text.contains('\r') {
            return Err(Error::Parse {
                line: 1,
                message: "CR characters are not allowed; use LF line endings".into(),
            });
        }
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `n k` header".into(),
        })?;
        let nums = parse_numbers(header, hl + 1)?;
        let [n, k] = nums[..] else {
            return Err(Error::Parse {
                line: hl + 1,
                message: "header must be `n k`".into(),
            });
        };
        check_dims(n, k).map_err(|e| Error::Parse {
            line: hl + 1,
            message: e.to_string(),
        })?;
        let mut sets: Vec<KSet> = Vec::new();
        for (i, line) in lines {
            let vs = parse_numbers(line, i + 1)?;
            let s = parse_set_line(n, k, &vs, i + 1)?;
            check_order(sets.last().copied(), s, i + 1)?;
            sets.push(s);
        }
        Ok(SetFamily::from_sorted_unchecked(n, k, sets))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FamilyJson::from(self)).expect("family serialises")
    }

    /// Strict parser for the JSON format.
    pub fn parse_json(text: &str) -> Result<SetFamily> {
        let raw: FamilyJson = serde_json::from_str(text)?;
        raw.try_into()
    }

    /// Dispatches on the first non-blank character: `{` selects JSON.
    pub fn parse_any(text: &str) -> Result<SetFamily> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }
}

fn check_dims(n: u32, k: u32) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::Input(format!("n = {n} outside [1, {MAX_VERTICES}]")));
    }
    if k > n {
        return Err(Error::Input(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u32>> {
    line.split_ascii_whitespace()
        .map(|t| {
            t.parse::<u32>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("`{t}` is not a non-negative integer"),
            })
        })
        .collect()
}

fn parse_set_line(n: u32, k: u32, vs: &[u32], lineno: usize) -> Result<KSet> {
    if vs.len() != k as usize {
        return Err(Error::Parse {
            line: lineno,
            message: format!("expected {k} vertices, found {}", vs.len()),
        });
    }
    if !vs.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Parse {
            line: lineno,
            message: "vertices must be strictly ascending".into(),
        });
    }
    KSet::new(n, vs).map_err(|e| Error::Parse {
        line: lineno,
        message: e.to_string(),
    })
}

fn check_order(prev: Option<KSet>, s: KSet, lineno: usize) -> Result<()> {
    match prev {
        Some(p) if p == s => Err(Error::Parse {
            line: lineno,
            message: format!("duplicate set {s}"),
        }),
        Some(p) if p > s => Err(Error::Parse {
            line: lineno,
            message: format!("set {s} is out of lexicographic order (after {p})"),
        }),
        _ => Ok(()),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct FamilyJson {
    n: u32,
    k: u32,
    sets: Vec<Vec<u32>>,
}

impl From<&SetFamily> for FamilyJson {
    fn from(f: &SetFamily) -> Self {
        FamilyJson {
            n: f.n,
            k: f.k,
            sets: f.sets.iter().map(|s| s.members()).collect(),
        }
    }
}

impl TryFrom<FamilyJson> for SetFamily {
    type Error = Error;

    fn try_from(raw: FamilyJson) -> Result<Self> {
        check_dims(raw.n, raw.k).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })?;
        let mut sets: Vec<KSet> = Vec::with_capacity(raw.sets.len());
        for (i, vs) in raw.sets.iter().enumerate() {
            let s = parse_set_line(raw.n, raw.k, vs, i)?;
            check_order(sets.last().copied(), s, i)?;
            sets.push(s);
        }
        Ok(SetFamily::from_sorted_unchecked(raw.n, raw.k, sets))
    }
}

impl Serialize for SetFamily {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        FamilyJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SetFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FamilyJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}
