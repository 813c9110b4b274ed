use anyhow::Result;
use boxworld_core::tensor::{JointSystem, TensorKind};
use serde_json::{json, Value};

use crate::output::{csv_vector, q, vector, Format, Sink};
use crate::setup::{self, TensorArgs};

fn kind_name(joint: &JointSystem) -> &'static str {
    match joint.kind {
        TensorKind::Maximal => "max",
        TensorKind::Minimal => "min",
        TensorKind::Custom { .. } => "custom",
    }
}

pub fn run(args: &TensorArgs, out: &Sink) -> Result<bool> {
    let setup = args.build()?;
    let joint = &setup.joint;
    let entangled = setup::entangled_effects(&setup)?;
    let product_rays: Vec<_> = joint
        .joint_effect_rays
        .iter()
        .filter(|r| !entangled.iter().any(|e| e.ray == **r))
        .collect();
    match out.format(Format::Json) {
        Format::Json => {
            let states: Vec<Value> = joint
                .joint_states
                .iter()
                .map(|v| {
                    json!({
                        "label": setup.labels.name(v),
                        "product": joint.product_states.contains(v),
                        "vector": vector(v),
                    })
                })
                .collect();
            let entangled_json: Vec<Value> = entangled
                .iter()
                .map(|e| {
                    json!({
                        "label": e.label,
                        "ray": vector(&e.ray),
                        "normalization": q(&e.factor),
                        "normalized": vector(&e.normalized),
                        "reference_prefactor": e.reference_prefactor.as_ref().map(q),
                    })
                })
                .collect();
            out.json(&json!({
                "system": setup.local.name,
                "tensor": kind_name(joint),
                "layout": "A-major",
                "dim": joint.dim(),
                "state_count": joint.joint_states.len(),
                "product_state_count": joint.joint_states.iter().filter(|v| joint.product_states.contains(v)).count(),
                "entangled_state_count": joint.entangled_states().len(),
                "effect_ray_count": joint.joint_effect_rays.len(),
                "entangled_effect_ray_count": entangled.len(),
                "states": states,
                "product_effect_rays": product_rays.iter().map(|r| vector(r)).collect::<Vec<_>>(),
                "entangled_effects": entangled_json,
            }))?;
        }
        Format::Csv => {
            let coords: Vec<String> = (1..=joint.dim()).map(|i| format!("c{i}")).collect();
            let mut text = format!("kind,label,{}\n", coords.join(","));
            for v in &joint.joint_states {
                text += &format!("state,{},{}\n", setup.labels.name(v), csv_vector(v));
            }
            for (k, r) in product_rays.iter().enumerate() {
                text += &format!("effect_ray,p{},{}\n", k + 1, csv_vector(r));
            }
            for e in &entangled {
                text += &format!("effect,{},{}\n", e.label, csv_vector(&e.normalized));
            }
            out.write(&text)?;
        }
    }
    Ok(true)
}
