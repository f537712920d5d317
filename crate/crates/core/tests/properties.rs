use kcover_core::cover::{self, improved_invariant_violations, Algorithm, CoverConfig};
use kcover_core::exact::{exact_min_cover, ExactConfig, ExactError};
use kcover_core::graph::{parse_graph, Edge, EdgeSet, WeightedGraph};
use kcover_core::lp::{integer, rational, solve_covering_lp};
use kcover_core::structures::{build_incidence, enumerate, has_structure, verify_cover, EnumConfig, StructureKind};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (3..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(proptest::option::weighted(0.6, 1u64..=10), pairs).prop_map(move |slots| {
            let mut edges = Vec::new();
            let mut it = slots.into_iter();
            for a in 0..n {
                for b in a + 1..n {
                    if let Some(w) = it.next().unwrap() {
                        edges.push((Edge::new(a, b), w));
                    }
                }
            }
            WeightedGraph::new(n, edges).unwrap()
        })
    })
}

fn subset_strategy(g: WeightedGraph) -> impl Strategy<Value = (WeightedGraph, EdgeSet)> {
    let m = g.edge_count();
    proptest::collection::vec(any::<bool>(), m).prop_map(move |mask| {
        let s = g.edges().iter().zip(&mask).filter(|(_, &keep)| keep).map(|(e, _)| *e).collect();
        (g.clone(), s)
    })
}

const CASES: [(StructureKind, usize); 4] =
    [(StructureKind::Cycle, 3), (StructureKind::Cycle, 5), (StructureKind::Clique, 3), (StructureKind::Clique, 4)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn remove_then_union_restores((g, s) in graph_strategy(8).prop_flat_map(subset_strategy)) {
        let rest = g.remove_edges(&s).unwrap();
        prop_assert_eq!(rest.edge_set().union(&s), g.edge_set());
        prop_assert!(rest.edge_set().is_disjoint(&s));
        prop_assert_eq!(rest.vertices(), g.vertices());
    }

    #[test]
    fn total_weight_is_additive((g, s) in graph_strategy(8).prop_flat_map(subset_strategy)) {
        let rest = g.edge_set().difference(&s);
        prop_assert_eq!(
            g.total_weight(&s).unwrap() + g.total_weight(&rest).unwrap(),
            g.total_weight(&g.edge_set()).unwrap()
        );
    }

    #[test]
    fn edge_list_round_trips(g in graph_strategy(9)) {
        let text = g.to_edge_list();
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(back.to_edge_list(), text);
        prop_assert_eq!(back, g);
    }

    #[test]
    fn enumeration_is_canonical_and_local(g in graph_strategy(8)) {
        for (kind, k) in CASES {
            let found = enumerate(&g, kind, k, &EnumConfig::default()).unwrap();
            let keys: Vec<_> = found.iter().map(|s| s.canonical_key().to_vec()).collect();
            let mut sorted = keys.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(&sorted, &keys);
            for s in &found {
                prop_assert_eq!(s.edges().len(), kind.edge_count(k));
                prop_assert!(s.edges().iter().all(|e| g.edge_index(e).is_some()));
            }
        }
    }

    #[test]
    fn verify_agrees_with_recount((g, s) in graph_strategy(8).prop_flat_map(subset_strategy)) {
        for (kind, k) in CASES {
            let rest = g.remove_edges(&s).unwrap();
            let recount = enumerate(&rest, kind, k, &EnumConfig::default()).unwrap().is_empty();
            prop_assert_eq!(verify_cover(&g, k, kind, &s).unwrap(), recount);
            prop_assert_eq!(has_structure(&rest, kind, k), !recount);
        }
    }

    #[test]
    fn lp_solution_is_feasible_and_bounded(g in graph_strategy(8)) {
        for (kind, k) in CASES {
            let m = build_incidence(&g, enumerate(&g, kind, k, &EnumConfig::default()).unwrap()).unwrap();
            let x = solve_covering_lp(&m, &g).unwrap();
            let pigeon = rational(1, kind.edge_count(k) as i64);
            for row in m.rows() {
                let vals: Vec<_> = row.iter().map(|&c| &x.values()[c]).collect();
                let sum = vals.iter().fold(integer(0), |a, v| a + *v);
                prop_assert!(sum >= integer(1));
                prop_assert!(vals.iter().any(|v| **v >= pigeon));
            }
            prop_assert!(x.values().iter().all(|v| *v >= integer(0) && *v <= integer(1)));
            let dual_obj = x.dual().iter().fold(integer(0), |a, y| a + y);
            prop_assert_eq!(&dual_obj, x.objective());
            let config = ExactConfig { node_budget: 5_000, ..ExactConfig::default() };
            match exact_min_cover(&g, k, kind, &config) {
                Ok(exact) => prop_assert!(*x.objective() <= integer(exact.weight)),
                Err(ExactError::Unsolved { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn algorithms_are_feasible_and_certified(g in graph_strategy(9)) {
        let config = CoverConfig::default();
        for algorithm in Algorithm::ALL {
            for k in [3, 4, 5] {
                if algorithm == Algorithm::CycleOdd && k % 2 == 0 {
                    continue;
                }
                let r = cover::run(algorithm, &g, k, &config).unwrap();
                prop_assert!(verify_cover(&g, k, algorithm.kind(), &r.cover).unwrap(), "{} k={}", algorithm, k);
                prop_assert!(r.within_ratio(), "{} k={} weight {} lp {}", algorithm, k, r.cover_weight, r.lp_objective());
                let violations = improved_invariant_violations(&g, &r);
                prop_assert!(violations.is_empty(), "{:?}", violations);
            }
        }
    }

    #[test]
    fn triangle_pipelines_agree(g in graph_strategy(9)) {
        let config = CoverConfig::default();
        for improved in [false, true] {
            let c = cover::run(Algorithm::select(StructureKind::Cycle, improved), &g, 3, &config).unwrap();
            let q = cover::run(Algorithm::select(StructureKind::Clique, improved), &g, 3, &config).unwrap();
            prop_assert_eq!(c.lp_objective(), q.lp_objective());
            prop_assert_eq!(&c.ratio_bound, &q.ratio_bound);
            prop_assert_eq!(c.cover, q.cover);
        }
    }
}
