use boxworld_core::boxworld::{self, KEPT_ENTANGLED};
use boxworld_core::geometry::Cone;
use boxworld_core::scalar::{frac, half};
use boxworld_core::selfdual::{check_weak_self_duality, verify_certificate, z_rotation_eighths, SelfDualityOutcome};
use boxworld_core::system::{make_modified_square, make_simplex, make_square};
use boxworld_core::tensor::{custom_from_max, max_tensor};
use boxworld_core::Vector;
use num_traits::Signed;

#[test]
fn square_is_weakly_self_dual_by_a_rotation() {
    let report = check_weak_self_duality(&make_square().state_cone(), 8).unwrap();
    assert_eq!(report.outcome, SelfDualityOutcome::Certified);
    assert!(!report.certificates.is_empty());
    for cert in &report.certificates {
        assert!(verify_certificate(cert, &report.state_rays, &report.effect_rays));
        assert!(cert.scales.iter().all(|s| s.is_positive()));
    }
    let rotations: Vec<u8> = report
        .certificates
        .iter()
        .filter_map(|c| z_rotation_eighths(&c.map))
        .collect();
    assert!(rotations.contains(&3), "{rotations:?}");
}

#[test]
fn simplex_and_generic_modified_square() {
    let report = check_weak_self_duality(&make_simplex(3).unwrap().state_cone(), 1).unwrap();
    assert_eq!(report.outcome, SelfDualityOutcome::Certified);
    let m = make_modified_square(half(), frac(1, 4)).unwrap();
    let report = check_weak_self_duality(&m.state_cone(), 1).unwrap();
    assert_eq!(report.state_rays.len(), 4);
    assert_eq!(report.effect_rays.len(), 4);
    if let Some(cert) = report.certificate() {
        assert!(verify_certificate(cert, &report.state_rays, &report.effect_rays));
    }
}

#[test]
fn maximal_square_product_is_not_self_dual() {
    let sq = make_square();
    let max = max_tensor(&sq, &sq).unwrap();
    let report = check_weak_self_duality(&Cone::from_rays(9, max.joint_states).unwrap(), 1).unwrap();
    assert_eq!(
        report.outcome,
        SelfDualityOutcome::RayCountMismatch {
            state_rays: 24,
            effect_rays: 16
        }
    );
    assert!(report.certificate().is_none());
}

#[test]
fn restricted_square_product_is_weakly_self_dual() {
    let sq = make_square();
    let max = max_tensor(&sq, &sq).unwrap();
    let kept: Vec<Vector> = KEPT_ENTANGLED.iter().map(|&l| boxworld::joint_state(l)).collect();
    let custom = custom_from_max(&max, &kept).unwrap();
    let report = check_weak_self_duality(&Cone::from_rays(9, custom.joint_states).unwrap(), 1).unwrap();
    assert_eq!(report.outcome, SelfDualityOutcome::Certified);
    let cert = report.certificate().unwrap();
    assert!(verify_certificate(cert, &report.state_rays, &report.effect_rays));
}
