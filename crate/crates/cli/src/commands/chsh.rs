use anyhow::Result;
use boxworld_core::correlations::{chsh_formula, max_chsh, witness_behavior, ChshResult};
use boxworld_core::scalar::frac;
use boxworld_core::system::{make_modified_square, SystemSpec};
use boxworld_core::tensor::{max_tensor, TensorKind};
use boxworld_core::{scalar, Scalar, Vector};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{q, vector, Format, Sink};
use crate::setup::{self, Setup, TensorArgs};

/// 1-based position of `effect` among the system's numbered effects.
fn effect_number(system: &SystemSpec, effect: &Vector) -> Option<usize> {
    (1..)
        .map_while(|i| setup::local_effect(system, i).ok())
        .position(|e| e == *effect)
        .map(|p| p + 1)
}

fn witness_json(setup: &Setup, result: &ChshResult) -> Result<Value> {
    let Some(w) = &result.witness else {
        return Ok(Value::Null);
    };
    let effects = |list: &[Vector; 2]| -> Vec<Value> {
        list.iter()
            .map(|e| json!({"index": effect_number(&setup.local, e), "effect": vector(e)}))
            .collect()
    };
    let behavior = witness_behavior(&setup.joint, w)?;
    Ok(json!({
        "state": setup.labels.name(&w.state),
        "state_vector": vector(&w.state),
        "alice": effects(&w.effects_a),
        "bob": effects(&w.effects_b),
        "behavior": serde_json::to_value(&behavior)?,
    }))
}

pub fn run(args: &TensorArgs, out: &Sink) -> Result<bool> {
    let setup = args.build()?;
    let result = max_chsh(&setup.joint)?;
    let (x, y) = setup::transition_params(&setup.local);
    // the closed form describes the maximal product only
    let formula = matches!(setup.joint.kind, TensorKind::Maximal).then(|| chsh_formula(&x, &y));
    let matched = formula.as_ref().map(|f| *f == result.value);
    match out.format(Format::Json) {
        Format::Json => out.json(&json!({
            "system": setup.local.name,
            "x": q(&x),
            "y": q(&y),
            "bruteforce": q(&result.value),
            "formula": formula.as_ref().map(q),
            "match": matched,
            "variant": result.variant.to_string(),
            "witness": witness_json(&setup, &result)?,
        }))?,
        Format::Csv => {
            let formula_cell = formula.as_ref().map(scalar::format).unwrap_or_default();
            let match_cell = matched.map(|m| m.to_string()).unwrap_or_default();
            out.write(&format!(
                "{}\n{},{},{},{},{}",
                SURFACE_HEADER,
                scalar::format(&x),
                scalar::format(&y),
                scalar::format(&result.value),
                formula_cell,
                match_cell
            ))?;
        }
    }
    Ok(matched.unwrap_or(true))
}

pub const SURFACE_HEADER: &str = "x,y,bruteforce,formula,match";

struct SurfacePoint {
    x: Scalar,
    y: Scalar,
    bruteforce: Scalar,
    formula: Scalar,
}

/// Admissible grid points `(i/n, j/n)` with `|j| <= n - i`, x-major then y
/// ascending.
fn grid(n: u32) -> Vec<(Scalar, Scalar)> {
    let n = i64::from(n);
    (0..=n)
        .flat_map(|i| (-(n - i)..=n - i).map(move |j| (frac(i, n), frac(j, n))))
        .collect()
}

pub fn surface(n: u32, out: &Sink) -> Result<bool> {
    let points: Vec<SurfacePoint> = grid(n)
        .into_par_iter()
        .map(|(x, y)| -> Result<SurfacePoint> {
            let system = make_modified_square(x.clone(), y.clone())?;
            let joint = max_tensor(&system, &system)?;
            let bruteforce = max_chsh(&joint)?.value;
            let formula = chsh_formula(&x, &y);
            Ok(SurfacePoint {
                x,
                y,
                bruteforce,
                formula,
            })
        })
        .collect::<Result<_>>()?;
    let mut all_match = true;
    for p in points.iter().filter(|p| p.bruteforce != p.formula) {
        all_match = false;
        eprintln!(
            "mismatch at x={} y={}: brute force {} vs formula {}",
            scalar::format(&p.x),
            scalar::format(&p.y),
            scalar::format(&p.bruteforce),
            scalar::format(&p.formula)
        );
    }
    match out.format(Format::Csv) {
        Format::Csv => {
            let mut text = format!("{SURFACE_HEADER}\n");
            for p in &points {
                text += &format!(
                    "{},{},{},{},{}\n",
                    scalar::format(&p.x),
                    scalar::format(&p.y),
                    scalar::format(&p.bruteforce),
                    scalar::format(&p.formula),
                    p.bruteforce == p.formula
                );
            }
            out.write(&text)?;
        }
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .map(|p| {
                    json!({
                        "x": q(&p.x),
                        "y": q(&p.y),
                        "bruteforce": q(&p.bruteforce),
                        "formula": q(&p.formula),
                        "match": p.bruteforce == p.formula,
                    })
                })
                .collect();
            out.json(&json!({ "grid": n, "points": rows, "all_match": all_match }))?;
        }
    }
    Ok(all_match)
}
