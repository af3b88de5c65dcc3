mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use blockset::graph_prop::{
    build_fig1, build_fig2, canonical_key, closed_neighborhood, cover_b, edge_bound,
    exhaustive_verify, exhaustive_verify_with, hall_witness, Graph, PropInstance,
};
use blockset::kset::Vertex;
use blockset::Error;

use common::max_target_cover;

fn random_graph(rng: &mut ChaCha8Rng, n: u32, p: f64) -> Vec<(Vertex, Vertex)> {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

#[test]
fn hall_witness_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut deficient, mut coverable) = (0, 0);
    for _ in 0..400 {
        let n = rng.gen_range(2..=12);
        let p = rng.gen_range(0.05..0.4);
        let edges = random_graph(&mut rng, n, p);
        let g = Graph::new(n, &edges).unwrap();
        let size = rng.gen_range(1..=n.min(6));
        let mut target: Vec<Vertex> = (1..=n).collect();
        for i in 0..size as usize {
            let j = rng.gen_range(i..target.len());
            target.swap(i, j);
        }
        target.truncate(size as usize);
        target.sort_unstable();
        let pairs: Vec<[u32; 2]> = edges.iter().map(|&(u, v)| [u, v]).collect();
        let full = max_target_cover(&pairs, &target) == target.len();
        match hall_witness(&g, &target) {
            Ok(w) => {
                assert!(!full);
                deficient += 1;
                let mask = w.set.iter().fold(0u64, |m, &v| m | 1 << (v - 1));
                let nb = closed_neighborhood(&g, mask).count_ones() as usize;
                assert!(nb < 2 * w.set.len());
                assert!(!w.set.is_empty() && w.set.iter().all(|v| target.contains(v)));
            }
            Err(Error::Coverable { matching }) => {
                assert!(full);
                coverable += 1;
                let mut seen = Vec::new();
                for [u, v] in &matching {
                    assert!(g.has_edge(*u, *v));
                    assert!(!seen.contains(u) && !seen.contains(v));
                    seen.extend([*u, *v]);
                }
                assert!(target.iter().all(|t| seen.contains(t)));
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert!(
        deficient > 50 && coverable > 50,
        "{deficient} / {coverable}"
    );
}

#[test]
fn an_edge_from_one_to_outside_covers_fig1() {
    for b in 2..=4 {
        for k in 3..=5 {
            let f = build_fig1(b, k).unwrap();
            let cells: Vec<Vec<u32>> = f.cells.iter().map(|c| c.members()).collect();
            let mut edges: Vec<(u32, u32)> = f
                .edges
                .iter()
                .map(|e| (e.first().unwrap(), e.last().unwrap()))
                .collect();
            let outside = f.n + 1;
            edges.push((1, outside));
            let g = PropInstance::new(outside, b, k, &cells, &edges).unwrap();
            let m = cover_b(&g)
                .unwrap()
                .expect("1 can now be matched outside the cells");
            assert!(m.is_valid_for(&g));
        }
    }
}

#[test]
fn figures_survive_a_round_trip_and_canonicalise() {
    let f = build_fig1(3, 3).unwrap();
    let back = PropInstance::parse_text(&f.to_text()).unwrap();
    assert_eq!(back, f);
    let g = build_fig2(3).unwrap();
    assert_ne!(canonical_key(&f), canonical_key(&g));
    assert_eq!(f.edge_count() as u64, edge_bound(3, 3));
    assert_eq!(g.edge_count() as u64, edge_bound(3, 3));
}

#[test]
fn exhaustive_results_do_not_depend_on_worker_count() {
    let one = exhaustive_verify_with(3, 3, 1, 1).unwrap();
    let many = exhaustive_verify_with(3, 3, 1, 4).unwrap();
    assert_eq!(one, many);
    assert!(one.holds());
}

/// With three specials and 3-cells a third bound-attaining layout shows up:
/// 1 and 2 both see the rest of the lonely cell of 3 and share a single
/// neighbour in the cell of 2.
#[test]
fn three_specials_with_3_cells_have_a_hybrid_equality_case() {
    let r = exhaustive_verify(3, 3, 1).unwrap();
    assert!(r.holds());
    assert_eq!(
        r.labels().into_iter().collect::<Vec<_>>(),
        vec!["fig1", "fig2", "other"]
    );
    let hybrid = PropInstance::new(
        7,
        3,
        3,
        &[vec![2, 4, 5], vec![3, 6, 7]],
        &[(1, 5), (1, 6), (1, 7), (2, 5), (2, 6), (2, 7)],
    )
    .unwrap();
    assert!(hybrid.validate().is_empty());
    assert_eq!(cover_b(&hybrid).unwrap(), None);
    let others: Vec<_> = r
        .classification
        .iter()
        .filter(|c| c.label == "other")
        .collect();
    assert_eq!(others.len(), 1);
    assert_eq!(canonical_key(&others[0].instance), canonical_key(&hybrid));

    for k in 4..=5 {
        let r = exhaustive_verify(3, k, 1).unwrap();
        assert_eq!(r.labels().into_iter().collect::<Vec<_>>(), vec!["fig1"]);
    }
}

#[test]
fn every_enumerated_bound_attaining_instance_is_uncoverable() {
    let r = exhaustive_verify(3, 4, 1).unwrap();
    assert!(r.holds());
    assert_eq!(r.max_edges, edge_bound(3, 4));
    for class in &r.classification {
        assert!(class.instance.validate().is_empty());
        assert_eq!(cover_b(&class.instance).unwrap(), None);
        assert_eq!(class.instance.edge_count() as u64, edge_bound(3, 4));
    }
}
