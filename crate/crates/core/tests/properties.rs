use proptest::prelude::*;

use fairdiv::algorithms::{capped_round_robin, crr_two_agents, surplus, Algorithm, SolveOptions};
use fairdiv::fairness::{is_ef1, is_fef1, is_weak_fef1, positive_feasible_envy, EnvyGraph, FairnessReport};
use fairdiv::generate::{self, Setting, Shape};
use fairdiv::io::{emit_allocation, emit_instance, parse_allocation, parse_instance};
use fairdiv::model::check_feasible;
use fairdiv::optimize::max_weight_swm;
use fairdiv::oracle::{Notion, Oracle};
use fairdiv::value::{int, Value};
use fairdiv::Instance;

/// Default family shape shrunk to oracle-friendly sizes.
fn small(setting: Setting) -> Shape {
    let d = setting.default_shape();
    Shape {
        agents: *d.agents.start()..=(*d.agents.end()).min(3),
        items: 1..=7,
        categories: 1..=3,
        max_value: d.max_value.min(4),
    }
}

fn setting() -> impl Strategy<Value = Setting> {
    prop::sample::select(Setting::ALL.to_vec())
}

fn small_instance() -> impl Strategy<Value = Instance> {
    (setting(), any::<u64>()).prop_map(|(s, seed)| generate::instance(s, &small(s), seed, 0))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 150, ..ProptestConfig::default() })]

    #[test]
    fn envy_notions_are_nested(inst in small_instance(), pick in any::<prop::sample::Index>()) {
        let all = Oracle::default().enumerate_feasible(&inst).unwrap();
        prop_assume!(!all.is_empty());
        let x = &all[pick.index(all.len())];
        let r = FairnessReport::new(x, &inst, false).unwrap();
        prop_assert!(!r.fef || r.fef1);
        prop_assert!(!r.fef1 || r.weak_fef1);
        prop_assert!(!r.efx || r.fef1);
        prop_assert!(r.envy.iter().flatten().all(|e| *e >= int(0)));
        prop_assert_eq!(r.fef1, is_fef1(x, &inst).unwrap());
        prop_assert_eq!(r.weak_fef1, is_weak_fef1(x, &inst).unwrap());
    }

    #[test]
    fn envy_graph_matches_envy_matrix(inst in small_instance(), pick in any::<prop::sample::Index>()) {
        let all = Oracle::default().enumerate_feasible(&inst).unwrap();
        prop_assume!(!all.is_empty());
        let x = &all[pick.index(all.len())];
        let envy = positive_feasible_envy(x, &inst).unwrap();
        let g = EnvyGraph::new(x, &inst, true).unwrap();
        for i in inst.agents() {
            for j in inst.agents() {
                prop_assert_eq!(g.has_edge(i, j), envy[i][j] > Value::from_integer(0));
            }
        }
        match g.topological_order() {
            Ok(order) => {
                let pos = |a: usize| order.iter().position(|&b| b == a).unwrap();
                for (i, j) in g.edges() {
                    prop_assert!(pos(i) < pos(j));
                }
            }
            Err(cycle) => {
                for k in 0..cycle.len() {
                    prop_assert!(g.has_edge(cycle[k], cycle[(k + 1) % cycle.len()]));
                }
            }
        }
    }

    #[test]
    fn dispatch_output_is_fair_when_it_runs(inst in small_instance()) {
        if let Ok(s) = fairdiv::algorithms::dispatch(&inst, &SolveOptions::verified()) {
            prop_assert!(check_feasible(&s.allocation, &inst).is_feasible());
            prop_assert!(is_fef1(&s.allocation, &inst).unwrap());
        }
    }

    #[test]
    fn oracle_agrees_with_dispatch_on_existence(inst in small_instance()) {
        prop_assume!(fairdiv::algorithms::dispatch(&inst, &SolveOptions::default()).is_ok());
        prop_assert!(Oracle::default().exists_fair(&inst, Notion::Fef1).unwrap().is_some());
    }

    #[test]
    fn max_weight_matches_oracle(inst in small_instance()) {
        let (best, _) = Oracle::default().swm(&inst).unwrap();
        let x = max_weight_swm(&inst).unwrap();
        prop_assert!(check_feasible(&x, &inst).is_feasible());
        prop_assert_eq!(x.welfare(&inst), best);
    }

    #[test]
    fn instance_files_round_trip(inst in small_instance()) {
        let text = emit_instance(&inst).unwrap();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(emit_instance(&back).unwrap(), text);
    }

    #[test]
    fn allocation_files_round_trip(inst in small_instance()) {
        let x = max_weight_swm(&inst).unwrap();
        prop_assert_eq!(parse_allocation(&emit_allocation(&x)).unwrap(), x);
    }

    #[test]
    fn crr_any_order_is_fef1(seed in any::<u64>(), rot in 0usize..5) {
        let inst = generate::instance(Setting::SingleCategory, &Setting::SingleCategory.default_shape(), seed, 0);
        let n = inst.num_agents();
        let sigma: Vec<usize> = (0..n).map(|k| (k + rot) % n).collect();
        let s = Algorithm::Crr.run(&inst, &SolveOptions { order: Some(sigma), verify: true }).unwrap();
        prop_assert!(is_fef1(&s.allocation, &inst).unwrap());
    }

    #[test]
    fn two_agent_crr_surplus_favours_leader(values in prop::collection::vec((0i64..6, 0i64..6), 1..8), caps in (0usize..5, 0usize..5)) {
        let m = values.len();
        prop_assume!(caps.0 + caps.1 >= m);
        let a: Vec<Value> = values.iter().map(|p| int(p.0)).collect();
        let b: Vec<Value> = values.iter().map(|p| int(p.1)).collect();
        let items: Vec<usize> = (0..m).collect();
        let split = crr_two_agents(&items, [caps.0, caps.1], [&a, &b], 0).unwrap();
        prop_assert!(surplus(&a, caps.0, &split[0], &split[1]) >= int(0));
        let general = capped_round_robin(&items, &[caps.0, caps.1], &[a.clone(), b.clone()], &[0, 1]).unwrap();
        prop_assert_eq!(general, split.to_vec());
    }
}

#[test]
fn swaps_reach_ef1_for_identical_valuations() {
    for k in 0..100 {
        let inst = generate::instance(Setting::IdenticalMatroid, &Setting::IdenticalMatroid.default_shape(), 99, k);
        let s = Algorithm::IteratedSwaps.run(&inst, &SolveOptions::verified()).unwrap();
        assert!(is_ef1(&s.allocation, &inst).unwrap());
    }
}
