use super::*;
use crate::fairness::{is_ef1, is_fef1, EnvyGraph};
use crate::generate::{self, Setting};
use crate::matroid::Matroid;
use crate::model::check_feasible;
use crate::oracle::fixtures;
use crate::value::int;

fn ints(v: &[i64]) -> Vec<Value> {
    v.iter().map(|&x| int(x)).collect()
}

fn partition_instance(rows: &[&[i64]], categories: Vec<Vec<usize>>, caps: &[&[usize]]) -> Instance {
    let constraints = caps.iter().map(|c| Matroid::partition(categories.clone(), c.to_vec()).unwrap().into()).collect();
    Instance::new(rows.iter().map(|r| ints(r)).collect(), constraints).unwrap()
}

fn assert_fef1(inst: &Instance, s: &Solution) {
    assert!(check_feasible(&s.allocation, inst).is_feasible(), "{:?}", s.allocation);
    assert!(is_fef1(&s.allocation, inst).unwrap(), "{} output {:?} is not F-EF1", s.algorithm, s.allocation);
}

#[test]
fn algorithm_names_parse() {
    for a in Algorithm::ALL {
        assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
    }
    assert_eq!("cut-and-choose-two-agents".parse::<Algorithm>().unwrap(), Algorithm::CutAndChoose);
    assert!("nope".parse::<Algorithm>().is_err());
}

#[test]
fn orders_are_validated() {
    let inst = partition_instance(&[&[1, 2], &[2, 1]], vec![vec![0, 1]], &[&[1], &[1]]);
    for bad in [vec![0], vec![0, 0], vec![0, 2]] {
        let opts = SolveOptions { order: Some(bad), verify: false };
        assert!(matches!(Algorithm::Crr.run(&inst, &opts), Err(Error::Input(_))));
    }
    let opts = SolveOptions { order: Some(vec![1, 0]), verify: true };
    let s = Algorithm::Crr.run(&inst, &opts).unwrap();
    assert_eq!(s.allocation.bundles(), &[vec![1], vec![0]]);
}

#[test]
fn crr_earlier_agents_never_envy_later_ones() {
    for k in 0..200 {
        let inst = generate::instance(Setting::SingleCategory, &Setting::SingleCategory.default_shape(), 11, k);
        let n = inst.num_agents();
        let sigma: Vec<Agent> = (0..n).rev().collect();
        let s = crr_single_category(&inst, &SolveOptions { order: Some(sigma.clone()), verify: true }).unwrap();
        assert_fef1(&inst, &s);
        let envy = crate::fairness::positive_feasible_envy(&s.allocation, &inst).unwrap();
        for p in 0..n {
            for q in p + 1..n {
                assert_eq!(envy[sigma[p]][sigma[q]], int(0), "instance {k}");
            }
        }
    }
}

#[test]
fn back_and_forth_reverses_on_second_category() {
    // Both agents want item 0 in the first category and item 2 in the second.
    let inst = partition_instance(&[&[2, 1, 2, 1], &[2, 1, 2, 1]], vec![vec![0, 1], vec![2, 3]], &[&[1, 1], &[1, 1]]);
    let s = back_and_forth_crr(&inst, &SolveOptions::verified()).unwrap();
    assert_eq!(s.allocation.bundles(), &[vec![0, 3], vec![1, 2]]);
    assert_fef1(&inst, &s);
    let three = partition_instance(&[&[1, 1, 1], &[1, 1, 1]], vec![vec![0], vec![1], vec![2]], &[&[1, 1, 1], &[1, 1, 1]]);
    assert!(matches!(back_and_forth_crr(&three, &SolveOptions::default()), Err(Error::Capability(_))));
}

#[test]
fn per_category_crr_orders_by_envy_graph() {
    for k in 0..200 {
        let inst = generate::instance(Setting::IdenticalValuations, &Setting::IdenticalValuations.default_shape(), 3, k);
        let s = per_category_crr(&inst, &SolveOptions::verified()).unwrap();
        assert_fef1(&inst, &s);
        assert!(EnvyGraph::new(&s.allocation, &inst, true).unwrap().is_acyclic());
    }
}

#[test]
fn per_category_rr_rotates_cycles() {
    let mut rotations = 0;
    for k in 0..300 {
        let inst = generate::instance(Setting::IdenticalCapacities, &Setting::IdenticalCapacities.default_shape(), 5, k);
        let s = per_category_rr(&inst, &SolveOptions::verified()).unwrap();
        assert!(is_ef1(&s.allocation, &inst).unwrap());
        assert_fef1(&inst, &s);
        rotations += s.stats.rotations;
    }
    assert!(rotations > 0, "the sample never exercised a rotation");
}

#[test]
fn ipm_reproduces_non_pareto_trace() {
    let fx = fixtures::get("sec6.1-non-pe").unwrap();
    let s = iterated_priority_matching(&fx.instance, &SolveOptions::verified()).unwrap();
    assert_eq!(Some(&s.allocation), fx.highlighted.as_ref());
    assert!(s.stats.invariant_checks > 0);
}

#[test]
fn ipm_handles_random_binary_instances() {
    for k in 0..200 {
        let inst = generate::instance(Setting::BinaryPartition, &Setting::BinaryPartition.default_shape(), 9, k);
        let s = iterated_priority_matching(&inst, &SolveOptions::verified()).unwrap();
        assert_fef1(&inst, &s);
    }
}

#[test]
fn rr_squared_chooser_is_envy_free() {
    for k in 0..200 {
        let inst = generate::instance(Setting::TwoAgentPartition, &Setting::TwoAgentPartition.default_shape(), 4, k);
        for first in [0, 1] {
            let order = vec![first, 1 - first];
            let s = rr_squared(&inst, &SolveOptions { order: Some(order), verify: true }).unwrap();
            assert_fef1(&inst, &s);
            let envy = crate::fairness::positive_feasible_envy(&s.allocation, &inst).unwrap();
            assert_eq!(envy[first][1 - first], int(0));
        }
    }
}

#[test]
fn rr_squared_refuses_three_agents() {
    let inst = partition_instance(&[&[1], &[1], &[1]], vec![vec![0]], &[&[1], &[1], &[1]]);
    assert!(matches!(rr_squared(&inst, &SolveOptions::default()), Err(Error::Capability(_))));
}

#[test]
fn dispatch_routes_table2_to_ipm() {
    let fx = fixtures::get("table2-mnw").unwrap();
    assert_eq!(select(&fx.instance), Selection::Run(Algorithm::IteratedPriorityMatching));
    let s = dispatch(&fx.instance, &SolveOptions::verified()).unwrap();
    assert_fef1(&fx.instance, &s);
}

#[test]
fn dispatch_refuses_counterexample_settings() {
    for id in ["ex3.2-heterogeneous-categories", "ex3.3-matching", "ex3.4-conflict", "ex3.5-budget"] {
        let fx = fixtures::get(id).unwrap();
        match dispatch(&fx.instance, &SolveOptions::default()) {
            Err(Error::Impossible { fixture, .. }) => assert_eq!(fixture, id),
            other => panic!("{id}: {other:?}"),
        }
    }
}

#[test]
fn swaps_fail_on_k4_double_copy() {
    let inst = fixtures::k4_instance(2);
    let start = fixtures::k4_allocation(2);
    assert!(matches!(
        iterated_swaps_from(&inst, &start, &SolveOptions::default()),
        Err(Error::NotBaseOrderable { envious: 0, envied: 1 })
    ));
}

#[test]
fn binary_swaps_keep_welfare_and_drop_potential() {
    for k in 0..150 {
        let inst = generate::instance(Setting::BinaryMatroid, &Setting::BinaryMatroid.default_shape(), 2, k);
        let s = iterated_swaps(&inst, &SolveOptions::verified()).unwrap();
        assert!(is_ef1(&s.allocation, &inst).unwrap());
        assert!(s.stats.potential.windows(2).all(|w| w[1] < w[0]));
        assert!(s.stats.iterations <= inst.num_items().max(1));
        let (best, _) = crate::oracle::swm_oracle(&inst).unwrap();
        assert_eq!(s.allocation.welfare(&inst), best, "instance {k}");
    }
}

#[test]
fn identical_swaps_and_cut_and_choose() {
    for k in 0..150 {
        let inst = generate::instance(Setting::IdenticalMatroid, &Setting::IdenticalMatroid.default_shape(), 6, k);
        let s = iterated_swaps(&inst, &SolveOptions::verified()).unwrap();
        assert!(is_ef1(&s.allocation, &inst).unwrap());
        let inst = generate::instance(Setting::TwoAgentMatroid, &Setting::TwoAgentMatroid.default_shape(), 6, k);
        let s = cut_and_choose(&inst, &SolveOptions::verified()).unwrap();
        assert!(is_ef1(&s.allocation, &inst).unwrap());
        let envy = crate::fairness::positive_feasible_envy(&s.allocation, &inst).unwrap();
        assert_eq!(envy[1][0], int(0), "the chooser envies the other bundle");
    }
}

#[test]
fn single_agent_takes_everything() {
    let inst = Instance::with_shared_matroid(vec![ints(&[1, 2])], Matroid::uniform(2, 2)).unwrap();
    let s = dispatch(&inst, &SolveOptions::default()).unwrap();
    assert_eq!(s.allocation.bundles(), &[vec![0, 1]]);
    let small = Instance::with_shared_matroid(vec![ints(&[1, 2])], Matroid::uniform(2, 1)).unwrap();
    assert!(matches!(dispatch(&small, &SolveOptions::default()), Err(Error::Infeasible(_))));
}
