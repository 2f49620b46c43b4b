use spikes_core::essplit::{psi_union, relabel_to_spike, SpikeVariant};
use spikes_core::matroid::{matroids_equal, spike_isomorphic, GroundSet};
use spikes_core::spike::{
    binary_spike, binary_spike_matrix, build_spike, circuit_count_formula, free_spike, phi_family,
    phi_union, recognize_spike,
};
use spikes_core::{es_split_matrix, Label, SplitSpec};

#[test]
fn spike_counts_follow_the_formula() {
    for (r, expected) in [(3, 14), (4, 26), (5, 47), (6, 85), (7, 156)] {
        let z = binary_spike(r).unwrap();
        assert_eq!(z.circuits().len(), expected);
        assert_eq!(circuit_count_formula(r), expected as u64);
        assert_eq!(*z.circuits(), phi_union(r).unwrap());
    }
}

#[test]
fn spikes_are_three_connected() {
    for r in 3..=5 {
        assert!(binary_spike(r).unwrap().is_3connected().unwrap());
        assert!(free_spike(r).unwrap().is_3connected().unwrap());
    }
}

#[test]
fn phi3_members_are_circuit_hyperplanes() {
    for r in 3..=6 {
        let z = binary_spike(r).unwrap();
        for c in phi_family(r, 3).unwrap().iter() {
            assert!(z.is_circuit_hyperplane(c));
        }
    }
}

#[test]
fn circuit_built_spike_matches_matrix() {
    for r in 3..=5 {
        let built = build_spike(r, &phi_family(r, 3).unwrap()).unwrap();
        assert!(matroids_equal(&built, &binary_spike(r).unwrap()));
    }
}

#[test]
fn odd_phi3_split_is_the_next_spike() {
    let r = 5;
    let g = GroundSet::spike(r);
    let a = binary_spike_matrix(r).unwrap();
    let z6 = binary_spike(r + 1).unwrap();
    for c in phi_family(r, 3).unwrap().iter() {
        let spec = SplitSpec::from_set(&g, c.with(2 * r), 2 * r).unwrap();
        let res = es_split_matrix(&a, &spec).unwrap();
        assert_eq!(
            *res.matroid.circuits(),
            psi_union(r, SpikeVariant::OddPhi3).unwrap()
        );
        let relabeled = relabel_to_spike(&res.matroid, SpikeVariant::OddPhi3).unwrap();
        assert!(matroids_equal(&relabeled, &z6));
    }
}

#[test]
fn leg_split_with_tip_gamma_is_a_spike() {
    // X = {t} ∪ {x1, y1}: not covered by the even-rank characterization,
    // yet the result is Z_5 with tip gamma
    let a = binary_spike_matrix(4).unwrap();
    let spec = SplitSpec::new([Label::tip(), Label::x(1), Label::y(1)], Label::tip()).unwrap();
    let res = es_split_matrix(&a, &spec).unwrap();
    let descs = recognize_spike(&res.matroid);
    assert_eq!(descs.len(), 1);
    assert_eq!(descs[0].tip, Label::gamma());
    let z5 = binary_spike(5).unwrap();
    let d5 = &recognize_spike(&z5)[0];
    assert!(spike_isomorphic(&res.matroid, &z5, &descs[0], d5).is_some());
}

#[test]
fn tip_only_split_is_not_a_spike() {
    let a = binary_spike_matrix(4).unwrap();
    let spec = SplitSpec::new([Label::tip()], Label::tip()).unwrap();
    let res = es_split_matrix(&a, &spec).unwrap();
    assert!(recognize_spike(&res.matroid).is_empty());
    let h = res.matroid.circuits().size_histogram();
    assert_eq!(h.get(&4), Some(&18));
}
