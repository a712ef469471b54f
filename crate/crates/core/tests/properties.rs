//! Invariants of graph construction, the modularity operator and I/O.

use std::io::Cursor;
use std::path::Path;

use proptest::prelude::*;
use sbm_phase::ingest::{parse_edge_list, write_edge_list, IdDialect};
use sbm_phase::{dense_modularity, swap_labels, Community, Graph, ModularityOperator64};

fn edge_lists() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..40).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..120)))
}

fn graphs_with_edges() -> impl Strategy<Value = Graph> {
    edge_lists()
        .prop_map(|(n, e)| Graph::from_edges(n, &e).unwrap())
        .prop_filter("needs an edge", |g| g.edge_count() > 0)
}

fn vectors(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0f64..1.0, n)
}

proptest! {
    #[test]
    fn rebuilding_from_own_edges_is_identity((n, edges) in edge_lists()) {
        let g = Graph::from_edges(n, &edges).unwrap();
        let again = Graph::from_edges(n, &g.edges().collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(&g, &again);
        for (i, j) in g.edges() {
            prop_assert!(i < j);
            prop_assert!(g.has_edge(j, i));
        }
    }

    #[test]
    fn degree_sum_is_twice_edge_count((n, edges) in edge_lists()) {
        let g = Graph::from_edges(n, &edges).unwrap();
        let total: usize = (0..n).map(|i| g.degree(i)).sum();
        prop_assert_eq!(total as u64, g.m2());
        prop_assert_eq!(g.m2(), 2 * g.edge_count() as u64);
    }

    #[test]
    fn cut_counts_survive_label_swap(
        (n, edges, labels) in (2usize..30).prop_flat_map(|n| (
            Just(n),
            proptest::collection::vec((0..n, 0..n), 0..80),
            proptest::collection::vec(prop_oneof![Just(Community::One), Just(Community::Two)], n),
        ))
    ) {
        let g = Graph::from_edges(n, &edges).unwrap();
        let c = g.cut_counts(&labels).unwrap();
        let s = g.cut_counts(&swap_labels(&labels)).unwrap();
        prop_assert_eq!(c.total(), g.edge_count() as u64);
        prop_assert_eq!((c.within_one, c.within_two, c.cross), (s.within_two, s.within_one, s.cross));
    }

    #[test]
    fn operator_is_linear_and_symmetric(
        (g, x, y, a) in graphs_with_edges().prop_flat_map(|g| {
            let n = g.node_count();
            (Just(g), vectors(n), vectors(n), -3.0f64..3.0)
        })
    ) {
        let op = ModularityOperator64::new(&g).unwrap();
        let combo: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + v).collect();
        let lhs = op.apply(&combo).unwrap();
        let (bx, by) = (op.apply(&x).unwrap(), op.apply(&y).unwrap());
        for i in 0..lhs.len() {
            prop_assert!((lhs[i] - (a * bx[i] + by[i])).abs() < 1e-9);
        }
        let ybx: f64 = y.iter().zip(&bx).map(|(u, v)| u * v).sum();
        let xby: f64 = x.iter().zip(&by).map(|(u, v)| u * v).sum();
        prop_assert!((ybx - xby).abs() < 1e-9);
        let b1 = op.apply(&vec![1.0; lhs.len()]).unwrap();
        prop_assert!(b1.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn dense_modularity_rows_sum_to_zero(g in graphs_with_edges()) {
        let b = dense_modularity::<f64>(&g, 64).unwrap();
        for i in 0..g.node_count() {
            prop_assert!(b.row(i).sum().abs() < 1e-9);
            for j in 0..g.node_count() {
                prop_assert_eq!(b[(i, j)], b[(j, i)]);
            }
        }
    }

    #[test]
    fn edge_list_round_trip((n, edges) in edge_lists()) {
        let g = Graph::from_edges(n, &edges).unwrap();
        prop_assume!(g.edge_count() > 0);
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let parsed = parse_edge_list(Cursor::new(buf), Path::new("<mem>"), IdDialect::Integer).unwrap();
        // Isolated nodes do not appear in an edge list; compare on the
        // nodes that do.
        let ids: Vec<usize> = parsed.id_map.ids().iter().map(|s| s.parse().unwrap()).collect();
        prop_assert_eq!(parsed.graph.edge_count(), g.edge_count());
        for (i, j) in parsed.graph.edges() {
            prop_assert!(g.has_edge(ids[i], ids[j]));
        }
    }
}
