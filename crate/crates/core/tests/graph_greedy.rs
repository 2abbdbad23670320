use bcds_core::generators::{gen_random_connected, gen_random_set_system};
use bcds_core::greedy::{greedy_max_k_cover, greedy_partial_cover, harmonic};
use bcds_core::{greedy_dominating_set, Edge, Graph, SetSystem, VertexSet};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=12, 0u32..=100, any::<u64>())
        .prop_map(|(n, p, seed)| gen_random_connected(n, p as f64 / 100.0, seed).unwrap())
}

fn with_subsets() -> impl Strategy<Value = (Graph, Vec<usize>, Vec<usize>)> {
    graph().prop_flat_map(|g| {
        let n = g.n();
        (
            Just(g),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(g, a, b)| {
                let small: Vec<usize> = (0..a.len()).filter(|&i| a[i] && b[i]).collect();
                let big: Vec<usize> = (0..a.len()).filter(|&i| a[i]).collect();
                (g, small, big)
            })
    })
}

fn brute_max_cover(sys: &SetSystem, k: usize) -> usize {
    (1..=k.min(sys.len()))
        .flat_map(|r| (0..sys.len()).combinations(r))
        .map(|c| sys.covered_by(&c))
        .max()
        .unwrap_or(0)
}

fn brute_partial(sys: &SetSystem, quota: usize) -> usize {
    (1..=sys.len())
        .find(|&r| (0..sys.len()).combinations(r).any(|c| sys.covered_by(&c) >= quota))
        .expect("quota within the union")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn instance_text_round_trips(g in graph()) {
        let text = g.to_instance_string();
        let back = Graph::parse(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_instance_string(), text);
    }

    #[test]
    fn edge_neighborhood_at_most_twice_max_degree(g in graph()) {
        for &e in g.edges() {
            prop_assert!(g.edge_neighborhood(e).unwrap().len() <= 2 * g.max_degree());
        }
    }

    #[test]
    fn closed_neighborhood_is_monotone((g, small, big) in with_subsets()) {
        let a = g.closed_neighborhood(&small).unwrap();
        let b = g.closed_neighborhood(&big).unwrap();
        prop_assert!(a.is_subset(&b));
        let small_edges: Vec<Edge> = g.edges().iter().copied()
            .filter(|e| small.contains(&e.u()) && small.contains(&e.v())).collect();
        let big_edges: Vec<Edge> = g.edges().iter().copied()
            .filter(|e| big.contains(&e.u()) && big.contains(&e.v())).collect();
        let ea = g.edge_set_neighborhood(&small_edges).unwrap();
        let eb = g.edge_set_neighborhood(&big_edges).unwrap();
        prop_assert!(ea.is_subset(&eb));
    }

    #[test]
    fn edge_set_neighborhood_is_union(g in graph(), mask in any::<u64>()) {
        let es: Vec<Edge> = g.edges().iter().enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, e)| *e).collect();
        let whole = g.edge_set_neighborhood(&es).unwrap();
        let union: VertexSet = es.iter()
            .flat_map(|&e| g.edge_set_neighborhood(&[e]).unwrap().into_vec()).collect();
        prop_assert_eq!(whole, union);
    }

    #[test]
    fn profit_labeling_partitions_vertices(g in graph()) {
        let labels = greedy_dominating_set(&g);
        prop_assert_eq!(labels.profits().iter().sum::<u64>(), g.n() as u64);
        prop_assert_eq!(g.dominated_count(labels.dominating_set()).unwrap(), g.n());
        let gains: Vec<u64> = labels.pick_order().iter().map(|&v| labels.profit(v)).collect();
        prop_assert!(gains.windows(2).all(|w| w[0] >= w[1]), "gains {:?}", gains);
        for v in g.vertices() {
            prop_assert_eq!(labels.profit(v) > 0, labels.dominating_set().contains(v));
        }
    }

    #[test]
    fn max_k_cover_within_one_minus_inv_e(
        universe in 1usize..=10, m in 1usize..=12, k in 1usize..=4,
        density in 5u32..=60, seed in any::<u64>(),
    ) {
        let sys = gen_random_set_system(universe, m, density as f64 / 100.0, seed).unwrap();
        let choice = greedy_max_k_cover(&sys, k).unwrap();
        let opt = brute_max_cover(&sys, k);
        prop_assert!(choice.indices.len() <= k);
        prop_assert_eq!(choice.covered, sys.covered_by(&choice.indices));
        prop_assert!(choice.covered as u64 * 1_000_000 >= 632_120 * opt as u64);
    }

    #[test]
    fn partial_cover_within_harmonic(
        universe in 1usize..=10, m in 1usize..=12,
        density in 5u32..=60, seed in any::<u64>(), pick in any::<usize>(),
    ) {
        let sys = gen_random_set_system(universe, m, density as f64 / 100.0, seed).unwrap();
        let reachable = sys.union().len();
        let quota = 1 + pick % reachable;
        let choice = greedy_partial_cover(&sys, quota).unwrap();
        prop_assert!(choice.covered >= quota);
        let opt = brute_partial(&sys, quota);
        let bound = harmonic(quota as u64).unwrap() * BigRational::from_integer(BigInt::from(opt));
        prop_assert!(BigRational::from_integer(BigInt::from(choice.indices.len())) <= bound);
    }
}

#[test]
fn set_system_json_round_trip() {
    let sys = SetSystem::from_json(r#"{"n": 4, "sets": [[3, 1], [0], [2, 2]]}"#).unwrap();
    assert_eq!(sys.sets(), &[vec![1, 3], vec![0], vec![2]]);
    let text = serde_json::to_string(&sys).unwrap();
    assert_eq!(SetSystem::from_json(&text).unwrap(), sys);
    assert!(SetSystem::from_json(r#"{"n": 2, "sets": [[5]]}"#).is_err());
}
