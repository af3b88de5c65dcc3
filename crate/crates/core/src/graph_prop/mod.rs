//! Graph instances made of edges touching the special vertices `[b]` and
//! disjoint k-cells, and the question whether `[b]` can be covered by a
//! matching of edges and cells.
//!
//! When no such covering exists the graph has at most `b(b-1)/2 * (k-1)`
//! edges for the values of `k` where that bound is known, with the extremal
//! configurations built by [`build_fig1`] and, for `k = 3`, [`build_fig2`].
//! [`exhaustive_verify`] checks the bound and the list of extremal
//! configurations on every small instance.

mod exhaust;
mod figures;
mod hall;
mod instance;

pub use exhaust::{
    canonical_key, exhaustive_verify, exhaustive_verify_with, sampled_verify, EqualityClass,
    ExhaustReport, InstanceKey, EXHAUSTIVE_MAX_B, EXHAUSTIVE_MAX_EXTERIOR, EXHAUSTIVE_MAX_K,
};
pub use figures::{build_fig1, build_fig2};
pub use hall::{closed_neighborhood, hall_witness, max_cover_matching, Graph, HallWitness};
pub use instance::{cover_b, MixedItem, MixedMatching, PropInstance, Violation};

/// `b(b-1)/2 * (k-1)`.
pub fn edge_bound(b: u32, k: u32) -> u64 {
    let (b, k) = (b as u64, k as u64);
    b * b.saturating_sub(1) / 2 * k.saturating_sub(1)
}
