//! Cross-module properties checked on randomized instances: witnesses must
//! verify against the predicates they claim, bounds must sandwich, and the
//! polynomial solvers must agree with the exhaustive references wherever the
//! references can reach.

use proptest::prelude::*;

use bookemb::approx_pages::greedy_pages;
use bookemb::circle_mis::max_noncrossing_subset;
use bookemb::edge_deletion::{balanced_separator, solve, Instance};
use bookemb::exact_pages::{crossing_numbers_up_to, page_number};
use bookemb::hitting_flow::{greedy_hitting_set, solve_h1};
use bookemb::oracles::{oracle_max_noncrossing, oracle_min_deletion, oracle_track_crossings};
use bookemb::tracks::{layout_crossings, min_crossings, min_track_count, TrackInstance};
use bookemb::OrderedGraph;

fn graphs(max_n: u32, max_m: usize) -> impl Strategy<Value = OrderedGraph> {
    (2u32..=max_n).prop_flat_map(move |n| {
        let all: Vec<(u32, u32)> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .collect();
        let cap = max_m.min(all.len());
        prop::sample::subsequence(all, 0..=cap)
            .prop_map(move |edges| OrderedGraph::new(n, &edges).unwrap())
    })
}

/// Graphs whose every edge spans one fixed gap, so the greedy hitting set
/// has exactly one point.
fn split_graphs() -> impl Strategy<Value = OrderedGraph> {
    (2u32..=6).prop_flat_map(|n| {
        (1u32..n).prop_flat_map(move |cut| {
            let all: Vec<(u32, u32)> = (1..=cut)
                .flat_map(|u| (cut + 1..=n).map(move |v| (u, v)))
                .collect();
            let cap = all.len();
            prop::sample::subsequence(all, 1..=cap)
                .prop_map(move |edges| OrderedGraph::new(n, &edges).unwrap())
        })
    })
}

fn track_instances(max_a: u32, max_b: u32) -> impl Strategy<Value = TrackInstance> {
    (1u32..=max_a, 1u32..=max_b).prop_flat_map(|(a, b)| {
        let all: Vec<(u32, u32)> = (1..=a)
            .flat_map(|s| (0..b).map(move |x| (s, x)))
            .collect();
        let cap = all.len();
        prop::sample::subsequence(all, 0..=cap)
            .prop_map(move |edges| TrackInstance::new(a, b, &edges).unwrap())
    })
}

/// Drops the most-crossed edge until every survivor has at most `d`
/// crossings, mirroring how callers prepare separator inputs.
fn thin_to_d_planar(g: &OrderedGraph, d: u32) -> OrderedGraph {
    let mut alive = g.all_edges();
    loop {
        let worst = alive
            .iter()
            .max_by_key(|&e| g.cross_set_in(e, alive).len());
        match worst {
            Some(e) if g.cross_set_in(e, alive).len() > d as usize => alive.remove(e),
            _ => break,
        }
    }
    let edges: Vec<(u32, u32)> = alive.iter().map(|e| g.edges()[e]).collect();
    OrderedGraph::new(g.vertex_count(), &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn crossing_levels_decrease_and_their_witness_verifies(g in graphs(7, 12)) {
        let p = 3;
        let (levels, assignment) = crossing_numbers_up_to(&g, p).unwrap();
        prop_assert_eq!(levels.len(), p as usize);
        for w in levels.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        prop_assert!(assignment.deleted().is_empty());
        prop_assert_eq!(g.crossing_count(&assignment), levels[p as usize - 1]);
    }

    #[test]
    fn page_number_witness_is_crossing_free(g in graphs(7, 14)) {
        let (pn, assignment) = page_number(&g).unwrap();
        if g.edge_count() == 0 {
            prop_assert_eq!(pn, 0);
        } else {
            prop_assert_eq!(assignment.page_count(), pn);
            prop_assert!(assignment.deleted().is_empty());
            prop_assert!(g.is_d_planar(&assignment, 0));
        }
    }

    #[test]
    fn greedy_pages_sit_between_the_page_number_and_its_log_blowup(g in graphs(7, 14)) {
        prop_assume!(g.edge_count() > 0);
        let (pn, _) = page_number(&g).unwrap();
        let greedy = greedy_pages(&g).len() as u32;
        prop_assert!(pn <= greedy);
        let bound = f64::from(pn) * ((g.edge_count() as f64).ln() + 1.0);
        prop_assert!(f64::from(greedy) <= bound + 1e-9);
    }

    #[test]
    fn separators_validate_on_thinned_graphs(g in graphs(9, 24), d in 0u32..=2) {
        let thin = thin_to_d_planar(&g, d);
        let sep = balanced_separator(&thin, d).unwrap();
        sep.validate(&thin, d).unwrap();
    }

    #[test]
    fn greedy_hitting_points_cover_and_ascend(g in graphs(9, 20)) {
        let hs = greedy_hitting_set(&g);
        prop_assert!(hs.covers(&g));
        for w in hs.points().windows(2) {
            prop_assert!(w[0].gap() < w[1].gap());
        }
        prop_assert!(hs.len() <= g.edge_count());
    }

    #[test]
    fn chosen_noncrossing_sets_are_optimal(g in graphs(7, 12)) {
        let chosen = max_noncrossing_subset(&g, g.all_edges());
        for e in chosen.iter() {
            for f in chosen.iter() {
                prop_assert!(!g.crosses(e, f));
            }
        }
        let reference = oracle_max_noncrossing(&g, g.all_edges()).unwrap();
        prop_assert_eq!(chosen.len(), reference.len());
    }

    #[test]
    fn track_layouts_reproduce_their_reported_cost(inst in track_instances(4, 6), t in 1u32..=3) {
        let (value, layout) = min_crossings(&inst, t).unwrap();
        prop_assert!(layout.is_partition(inst.track_vertex_count()));
        prop_assert_eq!(layout_crossings(&inst, &layout), value);
        let used: std::collections::HashSet<usize> = (0..inst.track_vertex_count())
            .filter_map(|x| layout.track_of(x))
            .collect();
        prop_assert!(used.len() as u32 <= t);
        prop_assert_eq!(value, oracle_track_crossings(&inst, t).unwrap());
    }

    #[test]
    fn minimum_track_layouts_are_crossing_free(inst in track_instances(4, 6)) {
        let (count, layout) = min_track_count(&inst).unwrap();
        prop_assert!(layout.is_partition(inst.track_vertex_count()));
        prop_assert_eq!(layout_crossings(&inst, &layout), 0);
        if count > 1 {
            prop_assert!(min_crossings(&inst, count - 1).unwrap().0 > 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chain_flow_matches_the_deletion_oracle(g in split_graphs(), p in 1u32..=3) {
        let hs = greedy_hitting_set(&g);
        prop_assert_eq!(hs.len(), 1);
        let (deleted, assignment) = solve_h1(&g, p).unwrap();
        prop_assert!(g.is_d_planar(&assignment, 0));
        prop_assert_eq!(assignment.deleted(), deleted);
        prop_assert_eq!(deleted.len() as u64, oracle_min_deletion(&g, p, 0).unwrap());
    }

    #[test]
    fn budgeted_deletion_agrees_with_the_oracle(g in graphs(6, 10), k in 0u32..=3, d in 0u32..=1) {
        let reference = oracle_min_deletion(&g, 1, d).unwrap();
        let inst = Instance { g, k, d };
        match solve(&inst).unwrap() {
            Some(set) => {
                prop_assert!(set.len() as u32 <= k);
                prop_assert_eq!(set.len() as u64, reference);
                let rest = inst.g.all_edges() - set;
                for e in rest.iter() {
                    prop_assert!(inst.g.cross_set_in(e, rest).len() <= inst.d as usize);
                }
            }
            None => prop_assert!(reference > u64::from(k)),
        }
    }
}
