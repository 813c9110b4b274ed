//! Double-description results checked against the brute-force enumerator,
//! plus round-trip and duality invariants on every polytope and cone the
//! toolkit builds.

use boxworld_core::geometry::{
    self, brute_force_vertices, cone_membership, dual_cone_rays, enumerate_vertices, facets_of_points,
    verify_separator, Cone, Halfspace, Hyperplane, Membership,
};
use boxworld_core::scalar::{frac, half, int};
use boxworld_core::system::{make_modified_square, make_simplex, make_square, SystemSpec};
use boxworld_core::tensor::{custom_from_max, max_tensor, min_tensor};
use boxworld_core::{boxworld, Scalar, Vector};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn effect_constraints(system: &SystemSpec) -> Vec<Halfspace> {
    system
        .states
        .iter()
        .flat_map(|s| {
            [
                Halfspace::ge(s.clone(), Scalar::zero()),
                Halfspace::le(s.clone(), Scalar::one()),
            ]
        })
        .collect()
}

/// States satisfying `0 <= e_i(w) <= 1` for the four square effects, `u(w) = 1`.
#[test]
fn square_states_from_effect_constraints() {
    let mut ineq = Vec::new();
    for i in 1..=4 {
        ineq.push(Halfspace::ge(boxworld::effect(i), Scalar::zero()));
        ineq.push(Halfspace::le(boxworld::effect(i), Scalar::one()));
    }
    let eq = [Hyperplane::new(boxworld::unit(), Scalar::one())];
    let v = enumerate_vertices(&ineq, &eq).unwrap();
    let mut expected: Vec<Vector> = (1..=4).map(boxworld::state).collect();
    expected.sort();
    assert_eq!(v, expected);
    assert_eq!(brute_force_vertices(&ineq, &eq), expected);
}

#[test]
fn max_tensor_vertices_match_brute_force() {
    let sq = make_square();
    let mut ineq = Vec::new();
    for i in 1..=4 {
        for j in 1..=4 {
            ineq.push(Halfspace::ge(
                boxworld::effect(i).kron(&boxworld::effect(j)),
                Scalar::zero(),
            ));
        }
    }
    let eq = [Hyperplane::new(sq.unit.kron(&sq.unit), Scalar::one())];
    let dd = enumerate_vertices(&ineq, &eq).unwrap();
    assert_eq!(dd.len(), 24);
    assert_eq!(brute_force_vertices(&ineq, &eq), dd);
    assert_eq!(max_tensor(&sq, &sq).unwrap().joint_states, dd);
}

#[test]
fn effect_polytopes_match_brute_force() {
    let mut systems = vec![make_square(), make_simplex(2).unwrap(), make_simplex(3).unwrap()];
    for (x, y) in [
        (half(), int(0)),
        (half(), frac(1, 4)),
        (int(0), int(0)),
        (int(0), int(1)),
        (frac(1, 8), frac(-7, 8)),
    ] {
        systems.push(make_modified_square(x, y).unwrap());
    }
    for s in &systems {
        let c = effect_constraints(s);
        let dd = enumerate_vertices(&c, &[]).unwrap();
        assert_eq!(brute_force_vertices(&c, &[]), dd, "{}", s.name);
        for v in &dd {
            for w in &s.states {
                let p = v.dot(w);
                assert!(p >= Scalar::zero() && p <= Scalar::one());
            }
        }
    }
}

#[test]
fn modified_square_effects_at_half_zero() {
    // frozen from the double-description run, confirmed by the brute-force enumerator above
    let m = make_modified_square(half(), int(0)).unwrap();
    let effects = boxworld_core::system::effect_extremals(&m).unwrap();
    assert_eq!(effects.len(), 10);
    assert_eq!(effects.iter().filter(|e| !e.is_trivial(&m)).count(), 8);
    let c = effect_constraints(&m);
    let oracle = brute_force_vertices(&c, &[]);
    let got: Vec<Vector> = effects.into_iter().map(|e| e.functional).collect();
    assert_eq!(got, oracle);
}

fn all_polytope_vertex_sets() -> Vec<(String, Vec<Vector>)> {
    let sq = make_square();
    let max = max_tensor(&sq, &sq).unwrap();
    let mut out = vec![
        ("square states".into(), sq.states.clone()),
        ("square max tensor".into(), max.joint_states.clone()),
    ];
    for (x, y) in [(half(), frac(1, 4)), (int(0), int(0)), (frac(3, 4), frac(-1, 8))] {
        let m = make_modified_square(x, y).unwrap();
        let effects = boxworld_core::system::effect_extremals(&m).unwrap();
        out.push((
            format!("{} effects", m.name),
            effects.into_iter().map(|e| e.functional).collect(),
        ));
        out.push((format!("{} states", m.name), m.states.clone()));
    }
    out
}

#[test]
fn facets_then_vertices_round_trip() {
    for (name, vertices) in all_polytope_vertex_sets() {
        let dim = vertices[0].dim();
        let (ineq, eq) = facets_of_points(dim, &vertices);
        let mut sorted = vertices.clone();
        sorted.sort();
        let back = enumerate_vertices(&ineq, &eq).unwrap();
        assert_eq!(back, sorted, "{name}");
        // every vertex saturates enough facets to pin it inside the affine hull
        let hull_dim = dim - eq.len();
        for v in &vertices {
            let tight = ineq.iter().filter(|h| h.slack(v).is_zero()).count();
            assert!(tight >= hull_dim, "{name}: {v} saturates {tight}");
            assert!(ineq.iter().all(|h| h.slack(v) >= Scalar::zero()));
        }
    }
}

fn all_cones() -> Vec<(String, Cone)> {
    let sq = make_square();
    let max = max_tensor(&sq, &sq).unwrap();
    let min = min_tensor(&sq, &sq).unwrap();
    let kept: Vec<Vector> = boxworld::KEPT_ENTANGLED
        .iter()
        .map(|&l| boxworld::joint_state(l))
        .collect();
    let custom = custom_from_max(&max, &kept).unwrap();
    let generic = make_modified_square(half(), frac(1, 4)).unwrap();
    let generic_max = max_tensor(&generic, &generic).unwrap();
    vec![
        ("orthant".into(), Cone::orthant(4)),
        ("square".into(), sq.state_cone()),
        (
            "triangle".into(),
            make_modified_square(int(0), int(0)).unwrap().state_cone(),
        ),
        ("max".into(), Cone::from_rays(9, max.joint_states).unwrap()),
        ("min".into(), Cone::from_rays(9, min.joint_states).unwrap()),
        ("custom".into(), Cone::from_rays(9, custom.joint_states).unwrap()),
        (
            "generic max".into(),
            Cone::from_rays(9, generic_max.joint_states).unwrap(),
        ),
    ]
}

#[test]
fn double_duality_on_constructed_cones() {
    for (name, cone) in all_cones() {
        let dual = dual_cone_rays(&cone).unwrap();
        let back = dual_cone_rays(&dual).unwrap();
        let extreme = cone.clone().extreme();
        assert_eq!(back.rays, extreme.rays, "{name}");
        for f in &dual.rays {
            for r in &cone.rays {
                assert!(f.dot(r) >= Scalar::zero(), "{name}");
            }
        }
    }
}

#[test]
fn midpoint_of_entangled_states_is_in_max_cone() {
    let sq = make_square();
    let max = max_tensor(&sq, &sq).unwrap();
    let mid = &boxworld::joint_state(17).scale(&half()) + &boxworld::joint_state(19).scale(&half());
    assert!(cone_membership(&mid, &max.state_cone()).unwrap().is_inside());
    for v in &max.joint_states {
        assert!(cone_membership(v, &max.state_cone()).unwrap().is_inside());
    }
}

fn small_int() -> impl Strategy<Value = i64> {
    -4i64..=4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Hull of random integer points: DD vertices, brute-force vertices and
    /// the extreme-point filter all agree, and facets round-trip.
    #[test]
    fn random_hulls_agree(points in prop::collection::vec((small_int(), small_int(), small_int()), 4..9)) {
        let pts: Vec<Vector> = points.iter().map(|&(a, b, c)| Vector::from_ints(&[a, b, c])).collect();
        let extreme = geometry::extreme_points(&pts);
        let (ineq, eq) = facets_of_points(3, &pts);
        let dd = enumerate_vertices(&ineq, &eq).unwrap();
        prop_assert_eq!(&dd, &extreme);
        if eq.is_empty() {
            prop_assert_eq!(brute_force_vertices(&ineq, &eq), dd);
        }
    }

    /// Every OUTSIDE verdict carries a separator that is exactly valid.
    #[test]
    fn separators_are_sound(point in prop::collection::vec(small_int(), 9)) {
        let sq = make_square();
        let max = max_tensor(&sq, &sq).unwrap();
        let p = Vector::from_ints(&point);
        let cone = max.state_cone();
        match cone_membership(&p, &cone).unwrap() {
            Membership::Outside { separator } => prop_assert!(verify_separator(&separator, &p, &cone.rays)),
            Membership::Inside { .. } => {
                for f in &max.joint_effect_rays {
                    prop_assert!(f.dot(&p) >= Scalar::zero());
                }
            }
        }
    }
}
