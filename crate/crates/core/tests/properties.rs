//! Cross-module property tests: group axioms on sampled groups, translation
//! invariance of weight distinctness, the pigeonhole law, serialization
//! round trips, and the master verifier oracle over constructor outputs.

use esg_core::abelian::{enumerate_groups, AbelianGroup};
use esg_core::constructors::{label_forest, label_greedy_col, WeightPlan};
use esg_core::graphs::{Digraph, Graph, TopoResult};
use esg_core::labeling::{edge_weights, is_edge_irregular, Labeling};
use esg_core::solvers::col_upper_bound;
use proptest::prelude::*;

fn group_strategy(max_order: u64) -> impl Strategy<Value = AbelianGroup> {
    (1..=max_order, any::<prop::sample::Index>()).prop_map(|(order, idx)| {
        let groups = enumerate_groups(order);
        groups[idx.index(groups.len())].clone()
    })
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..0.7f64, any::<u64>())
        .prop_map(|(n, p, seed)| Graph::random_graph(n, p, seed).unwrap())
}

proptest! {
    #[test]
    fn group_axioms_hold_on_sampled_groups(
        grp in group_strategy(60),
        ia in any::<prop::sample::Index>(),
        ib in any::<prop::sample::Index>(),
        ic in any::<prop::sample::Index>(),
    ) {
        let n = grp.order();
        let a = grp.element_at(ia.index(n as usize) as u64);
        let b = grp.element_at(ib.index(n as usize) as u64);
        let c = grp.element_at(ic.index(n as usize) as u64);
        prop_assert_eq!(grp.add(&a, &b).unwrap(), grp.add(&b, &a).unwrap());
        let ab_c = grp.add(&grp.add(&a, &b).unwrap(), &c).unwrap();
        let a_bc = grp.add(&a, &grp.add(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(grp.add(&a, &grp.neg(&a).unwrap()).unwrap(), grp.zero());
        prop_assert_eq!(grp.sub(&a, &b).unwrap(), grp.add(&a, &grp.neg(&b).unwrap()).unwrap());
    }

    #[test]
    fn enumerated_groups_have_the_order_and_are_pairwise_nonisomorphic(order in 1..=64u64) {
        let groups = enumerate_groups(order);
        for g in &groups {
            prop_assert_eq!(g.order(), order);
        }
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                prop_assert!(!groups[i].is_isomorphic(&groups[j]),
                    "{} ≅ {}", groups[i], groups[j]);
            }
        }
    }

    /// Adding a constant to every vertex of one component shifts that
    /// component's weights by 2c and preserves distinctness within it.
    #[test]
    fn translation_invariance_within_a_component(
        g in graph_strategy(8),
        grp in group_strategy(24),
        seed_labels in prop::collection::vec(any::<u64>(), 8),
        shift_raw in any::<u64>(),
        comp_idx in any::<prop::sample::Index>(),
    ) {
        let values: Vec<_> = (0..g.n())
            .map(|v| grp.element_at(seed_labels[v % seed_labels.len()] % grp.order()))
            .collect();
        let labeling = Labeling::new(grp.clone(), values.clone()).unwrap();
        let comps = g.components();
        let comp = &comps[comp_idx.index(comps.len())];
        let c = grp.element_at(shift_raw % grp.order());
        let shifted_values: Vec<_> = (0..g.n())
            .map(|v| {
                if comp.contains(&v) {
                    grp.add(&values[v], &c).unwrap()
                } else {
                    values[v].clone()
                }
            })
            .collect();
        let shifted = Labeling::new(grp.clone(), shifted_values).unwrap();

        let before = edge_weights(&g, &labeling).unwrap();
        let after = edge_weights(&g, &shifted).unwrap();
        let two_c = grp.add(&c, &c).unwrap();
        let in_comp = |v: usize| comp.contains(&v);

        let mut seen_before = std::collections::HashSet::new();
        let mut dup_before = false;
        let mut seen_after = std::collections::HashSet::new();
        let mut dup_after = false;
        for (((u, v), w_before), (_, w_after)) in before.weights.iter().zip(&after.weights) {
            if in_comp(*u) && in_comp(*v) {
                prop_assert_eq!(w_after.clone(), grp.add(w_before, &two_c).unwrap());
                dup_before |= !seen_before.insert(w_before.clone());
                dup_after |= !seen_after.insert(w_after.clone());
            } else {
                prop_assert_eq!(w_after, w_before);
            }
        }
        prop_assert_eq!(dup_before, dup_after);
    }

    /// m > |G| forces a duplicate weight (the pigeonhole floor).
    #[test]
    fn pigeonhole_floor(
        n in 4..8usize,
        p in 0.5..1.0f64,
        seed in any::<u64>(),
        grp_pick in any::<prop::sample::Index>(),
        seed_labels in prop::collection::vec(any::<u64>(), 8),
    ) {
        let g = Graph::random_graph(n, p, seed).unwrap();
        prop_assume!(g.m() >= 2);
        // any group strictly smaller than the edge count
        let order = 1 + grp_pick.index(g.m() - 1) as u64;
        let groups = enumerate_groups(order);
        let grp = &groups[grp_pick.index(groups.len())];
        let values: Vec<_> = (0..g.n())
            .map(|v| grp.element_at(seed_labels[v % seed_labels.len()] % grp.order()))
            .collect();
        let labeling = Labeling::new(grp.clone(), values).unwrap();
        let verdict = is_edge_irregular(&g, &labeling).unwrap();
        prop_assert!(!verdict.irregular);
        prop_assert!(verdict.conflict.is_some());
    }

    #[test]
    fn labeling_json_round_trip(
        grp in group_strategy(30),
        raw in prop::collection::vec(any::<u64>(), 1..10),
    ) {
        let values: Vec<_> = raw.iter().map(|&r| grp.element_at(r % grp.order())).collect();
        let labeling = Labeling::new(grp.clone(), values).unwrap();
        let json = labeling.to_json();
        let back = Labeling::from_json(&json).unwrap();
        prop_assert_eq!(back, labeling);
    }

    #[test]
    fn graph_io_round_trips(g in graph_strategy(10)) {
        let text = g.to_edge_list_text();
        prop_assert_eq!(&Graph::from_edge_list_text(&text).unwrap(), &g);
        let json = g.to_json();
        prop_assert_eq!(&Graph::from_json(&json).unwrap(), &g);
    }

    /// Witness property of the degeneracy ordering.
    #[test]
    fn coloring_witness_is_valid(g in graph_strategy(12)) {
        let w = g.coloring_number();
        let mut pos = vec![0usize; g.n()];
        for (i, &v) in w.order.iter().enumerate() {
            pos[v] = i;
        }
        for (i, &v) in w.order.iter().enumerate() {
            let back = g.neighbors(v).iter().filter(|&&u| pos[u] < i).count();
            prop_assert!(back <= w.col - 1);
        }
    }

    /// Master oracle over the forest constructor: any distinct-target plan
    /// on any forest is realized exactly and verifies.
    #[test]
    fn forest_constructor_obeys_the_oracle(
        n in 2..10usize,
        seed in any::<u64>(),
        extra in 0..5u64,
    ) {
        let f = Graph::random_forest(n, seed).unwrap();
        prop_assume!(f.m() >= 1);
        let order = f.m() as u64 + extra;
        let groups = enumerate_groups(order);
        let grp = &groups[(seed % groups.len() as u64) as usize];
        let targets: Vec<_> = f
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, grp.element_at(i as u64)))
            .collect();
        let anchors: Vec<_> = f
            .components()
            .iter()
            .map(|comp| (comp[0], grp.element_at(seed % grp.order())))
            .collect();
        let plan = WeightPlan::new(targets, anchors);
        let labeling = label_forest(&f, grp, &plan).unwrap();
        prop_assert!(is_edge_irregular(&f, &labeling).unwrap().irregular);
        let table = edge_weights(&f, &labeling).unwrap();
        for (i, (_, w)) in table.weights.iter().enumerate() {
            prop_assert_eq!(w.clone(), grp.element_at(i as u64));
        }
    }

    /// Master oracle over the greedy constructor at the guarantee order.
    #[test]
    fn greedy_constructor_obeys_the_oracle(
        n in 3..8usize,
        p in 0.1..0.6f64,
        seed in any::<u64>(),
    ) {
        let g = Graph::random_graph(n, p, seed).unwrap();
        prop_assume!(g.m() >= 1);
        let order = col_upper_bound(g.coloring_number().col, g.m());
        let groups = enumerate_groups(order);
        let grp = &groups[(seed % groups.len() as u64) as usize];
        let labeling = label_greedy_col(&g, grp, None).unwrap();
        prop_assert!(is_edge_irregular(&g, &labeling).unwrap().irregular);
    }

    /// A topological order puts every arc forward; a cycle witness is a
    /// closed walk along arcs.
    #[test]
    fn topological_order_or_closed_walk(
        n in 1..9usize,
        p in 0.0..0.8f64,
        seed in any::<u64>(),
        flips in prop::collection::vec(any::<bool>(), 36),
    ) {
        let g = Graph::random_graph(n, p, seed).unwrap();
        let arcs: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| if flips[i % flips.len()] { (v, u) } else { (u, v) })
            .collect();
        let d = Digraph::new(n, arcs).unwrap();
        match d.topological_order() {
            TopoResult::Order(order) => {
                prop_assert_eq!(order.len(), n);
                let mut pos = vec![0usize; n];
                for (i, &v) in order.iter().enumerate() {
                    pos[v] = i;
                }
                for &(u, v) in d.arcs() {
                    prop_assert!(pos[u] < pos[v], "arc {u}->{v} points backwards");
                }
            }
            TopoResult::Cycle(c) => {
                prop_assert!(c.len() >= 2);
                for i in 0..c.len() {
                    let (u, v) = (c[i], c[(i + 1) % c.len()]);
                    prop_assert!(d.arcs().contains(&(u, v)), "{u}->{v} missing from witness");
                }
            }
        }
    }
}
