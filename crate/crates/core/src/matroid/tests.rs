use super::*;

fn k4() -> Matroid {
    // edges 12,13,14,23,24,34 on vertices 0..4
    Matroid::graphic(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

fn samples() -> Vec<Matroid> {
    vec![
        Matroid::uniform(5, 2),
        Matroid::partition(vec![vec![0, 3], vec![1, 2, 4]], vec![1, 2]).unwrap(),
        Matroid::from_spec(
            &MatroidSpec::Laminar {
                sets: vec![vec![0, 1, 2, 3, 4, 5], vec![0, 1, 2], vec![0, 1]],
                capacities: vec![3, 2, 1],
            },
            6,
        )
        .unwrap(),
        Matroid::from_spec(
            &MatroidSpec::Transversal { adjacency: vec![vec![0], vec![0, 1], vec![1], vec![1, 2], vec![]] },
            5,
        )
        .unwrap(),
        k4(),
        Matroid::uniform(3, 2).free_extend(2),
    ]
}

#[test]
fn built_in_kinds_satisfy_axioms() {
    for m in samples() {
        m.check_axioms().unwrap_or_else(|e| panic!("{m:?}: {e}"));
    }
}

#[test]
fn non_matroid_custom_is_rejected() {
    // {0,1} and {2} maximal: {2} cannot be augmented from {0,1}
    let spec = MatroidSpec::Custom { maximal: vec![vec![0, 1], vec![2]] };
    assert!(Matroid::from_spec(&spec, 3).is_err());
    let ok = MatroidSpec::Custom { maximal: vec![vec![0, 1], vec![1, 2], vec![0, 2]] };
    let custom = Matroid::from_spec(&ok, 3).unwrap();
    let uniform = Matroid::uniform(3, 2);
    for mask in 0u32..8 {
        let s = mask_items(mask);
        assert_eq!(custom.is_independent(&s), uniform.is_independent(&s));
    }
}

#[test]
fn uniform_equals_single_category_partition() {
    let p = Matroid::partition(vec![vec![0, 1, 2]], vec![2]).unwrap();
    assert_eq!(Matroid::uniform(3, 2), p);
    assert_ne!(Matroid::uniform(3, 1), p);
}

#[test]
fn rank_and_augment() {
    let m = Matroid::partition(vec![vec![0, 1], vec![2, 3]], vec![1, 1]).unwrap();
    assert_eq!(m.rank(&[0, 1, 2]).unwrap(), 2);
    assert_eq!(m.full_rank(), 2);
    assert_eq!(m.augment(&[0], &[1, 3]).unwrap(), 3);
    assert!(m.augment(&[0, 2], &[1]).is_err());
    assert!(m.rank(&[7]).is_err());
}

#[test]
fn graphic_cycles_are_dependent() {
    let m = k4();
    assert!(m.is_independent(&[0, 1, 2]));
    assert!(!m.is_independent(&[0, 1, 3]));
    assert_eq!(m.full_rank(), 3);
    assert_eq!(m.bases().unwrap().len(), 16);
}

#[test]
fn k4_bases_without_exchange_bijection() {
    let m = k4();
    // {12,23,34} and {14,13,24}
    let x = vec![0, 3, 5];
    let y = vec![1, 2, 4];
    assert!(m.is_base(&x) && m.is_base(&y));
    assert!(m.is_feasible_swap(&x, &y, 0, 2));
    assert!(!m.is_feasible_swap(&x, &y, 0, 1));
    assert!(!m.is_feasible_swap(&x, &y, 0, 4));
    assert_eq!(m.feasible_exchange_bijection(&x, &y).unwrap(), None);
    assert!(!m.is_base_orderable().unwrap());
    assert!(!m.free_extend(2).is_base_orderable().unwrap());
}

#[test]
fn partition_laminar_transversal_are_base_orderable() {
    for m in &samples()[..4] {
        assert!(m.is_base_orderable().unwrap(), "{m:?}");
    }
    assert!(Matroid::uniform(4, 2).free_extend(3).is_base_orderable().unwrap());
}

#[test]
fn bijection_pairs_are_feasible_swaps() {
    let m = Matroid::partition(vec![vec![0, 1, 2], vec![3, 4, 5]], vec![2, 1]).unwrap();
    let (x, y) = (vec![0, 1, 3], vec![2, 4, 1]);
    let mu = m.feasible_exchange_bijection(&x, &y).unwrap().unwrap();
    assert_eq!(mu.len(), 3);
    for (a, b) in mu {
        assert!(m.is_feasible_swap(&x, &[1, 2, 4], a, b));
    }
    assert!(m.feasible_exchange_bijection(&[0], &y).is_err());
}

#[test]
fn free_extension_pads_to_rank() {
    let m = Matroid::partition(vec![vec![0, 1], vec![2]], vec![1, 1]).unwrap().free_extend(2);
    assert_eq!(m.ground_size(), 5);
    assert_eq!(m.kind(), MatroidKind::FreeExtension);
    assert!(m.is_independent(&[0, 3]));
    assert!(m.is_independent(&[3, 4]));
    assert!(!m.is_independent(&[0, 1]));
    assert!(!m.is_independent(&[0, 3, 4]));
    assert_eq!(m.full_rank(), 2);
}

#[test]
fn spec_validation() {
    assert!(Matroid::partition(vec![vec![0, 1], vec![1]], vec![1, 1]).is_err());
    assert!(Matroid::from_spec(&MatroidSpec::Partition { categories: vec![vec![0]], capacities: vec![1] }, 2).is_err());
    let overlapping = MatroidSpec::Laminar { sets: vec![vec![0, 1], vec![1, 2]], capacities: vec![1, 1] };
    assert!(Matroid::from_spec(&overlapping, 3).is_err());
    assert!(Matroid::graphic(2, vec![(0, 2)]).is_err());
}

#[test]
fn guards() {
    assert!(Matroid::uniform(13, 2).bases().is_err());
    assert!(Matroid::uniform(11, 2).check_axioms().is_err());
}

#[test]
fn spec_round_trips_through_json() {
    for m in samples() {
        let spec = m.spec().unwrap();
        let text = serde_json::to_string(spec).unwrap();
        let back: MatroidSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, spec);
    }
}
