//! The square-bit tensor products: vertex labels, the restricted custom
//! product, its entangled effects and the decompositions of entangled states.

use boxworld_core::boxworld::{self, KEPT_ENTANGLED, LABEL_BY_CANONICAL_POSITION};
use boxworld_core::geometry::{cone_membership, dual_cone_rays, Cone};
use boxworld_core::scalar::{frac, half, int};
use boxworld_core::system::{make_modified_square, make_square};
use boxworld_core::tensor::{
    affine_decomposition, custom_from_max, is_separable, max_tensor, min_tensor, recombine, tensor_vectors,
    JointSystem, Separability, TensorKind,
};
use boxworld_core::{Error, Scalar, Vector};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn square_max() -> JointSystem {
    let sq = make_square();
    max_tensor(&sq, &sq).unwrap()
}

fn square_custom(max: &JointSystem) -> JointSystem {
    let kept: Vec<Vector> = KEPT_ENTANGLED.iter().map(|&l| boxworld::joint_state(l)).collect();
    custom_from_max(max, &kept).unwrap()
}

#[test]
fn label_table_matches_vertex_order() {
    let max = square_max();
    assert_eq!(max.joint_states.len(), 24);
    for (pos, v) in max.joint_states.iter().enumerate() {
        let label = LABEL_BY_CANONICAL_POSITION[pos];
        assert_eq!(&boxworld::joint_state(label), v, "position {pos}");
        assert_eq!(boxworld::label_of(v), Some(label));
    }
    let mut labels = LABEL_BY_CANONICAL_POSITION.to_vec();
    labels.sort();
    assert_eq!(labels, (1..=24).collect::<Vec<_>>());
}

#[test]
fn product_labels_follow_local_indices() {
    for a in 1..=4 {
        for b in 1..=4 {
            let expected = tensor_vectors(&boxworld::state(a), &boxworld::state(b));
            assert_eq!(boxworld::joint_state(4 * (a - 1) + b), expected);
        }
    }
}

#[test]
fn entangled_vertices_are_exactly_the_eight_combinations() {
    let max = square_max();
    let mut entangled = max.entangled_states();
    entangled.sort();
    let mut expected: Vec<Vector> = (17..=24).map(boxworld::joint_state).collect();
    expected.sort();
    assert_eq!(entangled, expected);
}

#[test]
fn minimal_product_has_sixteen_states() {
    let sq = make_square();
    let min = min_tensor(&sq, &sq).unwrap();
    assert_eq!(min.joint_states.len(), 16);
    assert_eq!(min.kind, TensorKind::Minimal);
    assert!(min.entangled_states().is_empty());
    assert_eq!(min.joint_effect_rays.len(), 24);
}

#[test]
fn empty_keep_is_minimal() {
    let max = square_max();
    let sq = make_square();
    let custom = custom_from_max(&max, &[]).unwrap();
    let min = min_tensor(&sq, &sq).unwrap();
    assert_eq!(custom.joint_states, min.joint_states);
    assert_eq!(custom.joint_effect_rays, min.joint_effect_rays);
}

#[test]
fn keeping_everything_gives_product_effects_only() {
    let max = square_max();
    let all: Vec<Vector> = (17..=24).map(boxworld::joint_state).collect();
    let custom = custom_from_max(&max, &all).unwrap();
    assert_eq!(custom.joint_states, max.joint_states);
    assert_eq!(custom.joint_effect_rays.len(), 16);
    assert!(custom.entangled_effect_rays().unwrap().is_empty());
    let dual = dual_cone_rays(&max.state_cone()).unwrap();
    assert_eq!(dual.rays.len(), 16);
}

#[test]
fn custom_entangled_effects_match_published_ones() {
    let max = square_max();
    let custom = square_custom(&max);
    assert_eq!(custom.joint_states.len(), 20);
    assert_eq!(custom.joint_effect_rays.len(), 20);
    let entangled = custom.entangled_effect_rays().unwrap();
    assert_eq!(entangled.len(), 4);
    let mut normalized: Vec<Vector> = entangled
        .iter()
        .map(|r| custom.normalize_effect(r).unwrap().1)
        .collect();
    normalized.sort();
    let mut published: Vec<Vector> = (17..=20).map(boxworld::entangled_effect).collect();
    published.sort();
    assert_eq!(normalized, published);
    for label in 17..=20 {
        let e = boxworld::entangled_effect(label);
        let ray = e.canonical_ray();
        assert!(entangled.contains(&ray));
        let (factor, _) = custom.normalize_effect(&ray).unwrap();
        assert_eq!(ray.scale(&factor), e);
    }
}

#[test]
fn entangled_effects_are_valid_only_on_the_kept_states() {
    let max = square_max();
    let custom = square_custom(&max);
    for label in 17..=20 {
        let e = boxworld::entangled_effect(label);
        for s in &custom.joint_states {
            let p = e.dot(s);
            assert!(p >= Scalar::zero() && p <= Scalar::one(), "e{label} on {s}");
        }
        assert!(
            (21..=24).any(|l| e.dot(&boxworld::joint_state(l)).is_negative()),
            "e{label} should be negative on an excluded state"
        );
    }
}

#[test]
fn cones_are_nested() {
    let sq = make_square();
    let max = square_max();
    let custom = square_custom(&max);
    let min = min_tensor(&sq, &sq).unwrap();
    for (inner, outer) in [(&min, &custom), (&custom, &max)] {
        let cone = outer.state_cone();
        for s in &inner.joint_states {
            assert!(cone_membership(s, &cone).unwrap().is_inside());
        }
        let effects = inner.effect_cone();
        for f in &outer.joint_effect_rays {
            assert!(cone_membership(f, &effects).unwrap().is_inside());
        }
    }
}

#[test]
fn excluded_states_are_outside_custom() {
    let max = square_max();
    let custom = square_custom(&max);
    let cone = custom.state_cone();
    for label in 21..=24 {
        let s = boxworld::joint_state(label);
        let m = cone_membership(&s, &cone).unwrap();
        let sep = m.separator().expect("outside");
        assert!(sep.dot(&s).is_negative());
        assert!(custom.joint_states.iter().all(|k| !sep.dot(k).is_negative()));
    }
}

#[test]
fn keeping_a_non_vertex_is_rejected() {
    let max = square_max();
    let mid = &boxworld::joint_state(17).scale(&half()) + &boxworld::joint_state(1).scale(&half());
    assert!(matches!(custom_from_max(&max, &[mid]), Err(Error::Invalid(_))));
}

#[test]
fn modified_square_products() {
    for (x, y, states) in [
        (half(), frac(1, 4), 24),
        (half(), int(0), 24),
        (frac(1, 8), frac(7, 8), 24),
    ] {
        let m = make_modified_square(x.clone(), y.clone()).unwrap();
        let j = max_tensor(&m, &m).unwrap();
        assert_eq!(j.joint_states.len(), states, "x={x} y={y}");
        assert_eq!(j.product_states.len(), 16);
    }
    let triangle = make_modified_square(int(0), int(0)).unwrap();
    let j = max_tensor(&triangle, &triangle).unwrap();
    assert_eq!(j.joint_states.len(), 9);
    assert!(j.entangled_states().is_empty());
}

#[test]
fn entangled_state_decompositions() {
    let max = square_max();
    for label in 17..=24 {
        let s = boxworld::joint_state(label);
        let terms = affine_decomposition(&s, &max).unwrap();
        assert_eq!(recombine(&terms, &max), s);
        assert!(terms.len() <= 4, "w{label} uses {} products", terms.len());
        let total: Scalar = terms.iter().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, Scalar::one());
        assert!(terms.iter().any(|(_, c)| c.is_negative()));
        assert!(matches!(
            is_separable(&s, &max).unwrap(),
            Separability::Entangled { .. }
        ));
    }
}

#[test]
fn mixture_of_kept_entangled_states_is_separable() {
    let max = square_max();
    let quarter = frac(1, 4);
    let mix = KEPT_ENTANGLED
        .iter()
        .map(|&l| boxworld::joint_state(l).scale(&quarter))
        .fold(Vector::zeros(9), |acc, v| &acc + &v);
    match is_separable(&mix, &max).unwrap() {
        Separability::Separable { weights } => {
            let back = weights
                .iter()
                .fold(Vector::zeros(9), |acc, (i, w)| &acc + &max.product_states[*i].scale(w));
            assert_eq!(back, mix);
            assert!(weights.iter().all(|(_, w)| w.is_positive()));
        }
        other => panic!("expected separable, got {other:?}"),
    }
}

#[test]
fn product_and_mixture_decompositions() {
    let max = square_max();
    let s = tensor_vectors(&boxworld::state(1), &boxworld::state(3));
    let terms = affine_decomposition(&s, &max).unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0].1, Scalar::one());
    let m = &boxworld::joint_state(1).scale(&half()) + &boxworld::joint_state(6).scale(&half());
    let terms = affine_decomposition(&m, &max).unwrap();
    assert_eq!(
        terms.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>(),
        vec![half(), half()]
    );
}

#[test]
fn joint_system_json_round_trip() {
    let max = square_max();
    let custom = square_custom(&max);
    let back = JointSystem::from_json(&custom.to_json().unwrap()).unwrap();
    assert_eq!(back, custom);
}

#[test]
fn product_cone_is_min_cone() {
    let max = square_max();
    let sq = make_square();
    let min = min_tensor(&sq, &sq).unwrap();
    let pc = max.product_cone().unwrap();
    assert_eq!(pc.rays, Cone::from_rays(9, min.joint_states.clone()).unwrap().rays);
}

fn local_vec() -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3i64..=3, 3).prop_map(|v| Vector::from_ints(&v))
}

proptest! {
    #[test]
    fn tensor_product_is_bilinear(a in local_vec(), a2 in local_vec(), b in local_vec(), k in -3i64..=3) {
        let k = int(k);
        prop_assert_eq!(tensor_vectors(&(&a + &a2), &b), &tensor_vectors(&a, &b) + &tensor_vectors(&a2, &b));
        prop_assert_eq!(tensor_vectors(&a.scale(&k), &b), tensor_vectors(&a, &b).scale(&k));
        prop_assert_eq!(tensor_vectors(&a, &b.scale(&k)), tensor_vectors(&a, &b).scale(&k));
    }

    /// Product functionals evaluate on product vectors as the product of the
    /// local pairings.
    #[test]
    fn product_pairing_factorizes(f in local_vec(), g in local_vec(), s in local_vec(), t in local_vec()) {
        prop_assert_eq!(tensor_vectors(&f, &g).dot(&tensor_vectors(&s, &t)), f.dot(&s) * g.dot(&t));
    }
}
