use anyhow::Result;
use boxworld_core::boxworld;
use boxworld_core::geometry::Cone;
use boxworld_core::linalg::Matrix;
use boxworld_core::selfdual::{check_weak_self_duality, z_rotation_eighths, DualityCertificate, SelfDualityOutcome};
use boxworld_core::system::make_square;
use serde_json::{json, Value};

use crate::output::{q, vector, Sink};
use crate::setup::{self, SelfdualTarget, SystemArgs, SystemKind, TensorChoice};
use crate::SelfdualArgs;

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows).map(|i| vector(&m.row(i))).collect())
}

fn rotation_name(k: u8) -> String {
    match k {
        0 => "identity".into(),
        4 => "π".into(),
        k if k % 2 == 0 => format!("{}π/2", k / 2).replace("1π", "π"),
        k => format!("{k}π/4").replace("1π", "π"),
    }
}

fn certificate_json(cert: &DualityCertificate) -> Value {
    let inverse = cert.map.inverse();
    let rotation = inverse.as_ref().and_then(z_rotation_eighths);
    json!({
        "state_to_effect": matrix_json(&cert.map),
        "effect_to_state": inverse.as_ref().map(matrix_json),
        "pairing": cert.pairing,
        "scales": cert.scales.iter().map(q).collect::<Vec<_>>(),
        "rotation": rotation.map(rotation_name),
    })
}

/// On the square, prefer the map sending each `e_i` onto `w_i`.
fn preferred(certs: &[DualityCertificate], square: bool) -> Option<usize> {
    if certs.is_empty() {
        return None;
    }
    if square {
        let hit = certs.iter().position(|c| {
            c.map.inverse().is_some_and(|inv| {
                (1..=4).all(|i| {
                    inv.mul_vec(&boxworld::effect(i))
                        .is_positive_multiple_of(&boxworld::state(i))
                })
            })
        });
        if hit.is_some() {
            return hit;
        }
    }
    Some(0)
}

pub fn run(args: &SelfdualArgs, out: &Sink) -> Result<bool> {
    out.require_json()?;
    let system_args = SystemArgs {
        system: None,
        params: args.params.clone(),
    };
    let (name, cone, square) = match args.system {
        SelfdualTarget::Square => {
            let s = make_square();
            (s.name.clone(), s.state_cone(), true)
        }
        SelfdualTarget::Modified => {
            let s = args.params.modified()?;
            (s.name.clone(), s.state_cone(), false)
        }
        target => {
            let tensor = match target {
                SelfdualTarget::Max => TensorChoice::Max,
                SelfdualTarget::Min => TensorChoice::Min,
                _ => TensorChoice::Custom,
            };
            let local = SystemArgs {
                system: Some(if system_args.params.x.is_some() || system_args.params.y.is_some() {
                    SystemKind::Modified
                } else {
                    SystemKind::Square
                }),
                ..system_args
            };
            let setup = setup::build(&local, tensor, &args.keep.keep)?;
            let name = format!("{:?} tensor product of {}", tensor, setup.local.name).to_lowercase();
            (
                name,
                Cone::from_rays(setup.joint.dim(), setup.joint.joint_states)?,
                false,
            )
        }
    };
    let report = check_weak_self_duality(&cone, args.limit)?;
    let certified = report.outcome == SelfDualityOutcome::Certified;
    let outcome = match &report.outcome {
        SelfDualityOutcome::Certified => json!({"result": "certified"}),
        SelfDualityOutcome::RayCountMismatch {
            state_rays,
            effect_rays,
        } => json!({"result": "ray-count-mismatch", "state_rays": state_rays, "effect_rays": effect_rays}),
        SelfDualityOutcome::NotFound => json!({"result": "not-found"}),
    };
    let chosen = preferred(&report.certificates, square);
    out.json(&json!({
        "cone": name,
        "state_ray_count": report.state_rays.len(),
        "effect_ray_count": report.effect_rays.len(),
        "outcome": outcome,
        "pairings_tried": report.pairings_tried,
        "certificate": chosen.map(|i| certificate_json(&report.certificates[i])),
        "certificates_found": report.certificates.len(),
        "all_certificates": report.certificates.iter().map(certificate_json).collect::<Vec<_>>(),
        "state_rays": report.state_rays.iter().map(vector).collect::<Vec<_>>(),
        "effect_rays": report.effect_rays.iter().map(vector).collect::<Vec<_>>(),
    }))?;
    Ok(certified)
}
