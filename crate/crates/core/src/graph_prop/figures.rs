//! The two extremal configurations.

use crate::error::{Error, Result};
use crate::graph_prop::PropInstance;
use crate::kset::Vertex;

/// `b - 1` cells, cell `j` holding special vertex `j + 1` and `k - 1` fresh
/// vertices; each `i < j` is joined to every vertex of the cell of `j` except
/// `j` itself.
///
/// Non-special vertices are numbered from `b + 1` cell by cell.
pub fn build_fig1(b: u32, k: u32) -> Result<PropInstance> {
    if b < 1 || k < 3 {
        return Err(Error::Domain(format!(
            "build_fig1 needs b >= 1 and k >= 3, got b = {b}, k = {k}"
        )));
    }
    let n = b + (b - 1) * (k - 1);
    let rest = |j: u32| -> Vec<Vertex> { (b + (j - 1) * (k - 1) + 1..=b + j * (k - 1)).collect() };
    let cells: Vec<Vec<Vertex>> = (1..b)
        .map(|j| {
            let mut c = vec![j + 1];
            c.extend(rest(j));
            c
        })
        .collect();
    let mut edges = Vec::new();
    for j in 2..=b {
        for i in 1..j {
            edges.extend(rest(j - 1).into_iter().map(|w| (i, w)));
        }
    }
    PropInstance::new(n, b, k, &cells, &edges)
}

/// `k = 3`: cell `j` is `{j + 1, w_j, x_j}` and every special vertex is joined
/// to every designated vertex `w_j`.
///
/// `w_j = b + 2j - 1` and `x_j = b + 2j`.
pub fn build_fig2(b: u32) -> Result<PropInstance> {
    if b < 2 {
        return Err(Error::Domain(format!(
            "build_fig2 needs b >= 2, got b = {b}"
        )));
    }
    let n = b + 2 * (b - 1);
    let cells: Vec<Vec<Vertex>> = (1..b)
        .map(|j| vec![j + 1, b + 2 * j - 1, b + 2 * j])
        .collect();
    let edges: Vec<(Vertex, Vertex)> = (1..=b)
        .flat_map(|i| (1..b).map(move |j| (i, b + 2 * j - 1)))
        .collect();
    PropInstance::new(n, b, 3, &cells, &edges)
}
