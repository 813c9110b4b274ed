use anyhow::{anyhow, bail, Result};
use boxworld_core::geometry::{cone_membership, Membership};
use boxworld_core::swapping::{collapse, product_state, swap_scan, SwapRow, SCAN_CSV_HEADER};
use boxworld_core::Vector;
use serde_json::{json, Value};

use crate::output::{q, vector, Format, Sink};
use crate::setup::{self, Setup, TensorChoice};
use crate::SwapArgs;

fn row_json(row: &SwapRow) -> Value {
    json!({
        "stateAB": row.state_ab,
        "stateCD": row.state_cd,
        "effectBD": row.effect_bd,
        "probability": q(&row.probability),
        "posterior": row.posterior.as_ref().map(vector),
        "posterior_id": row.posterior_id,
        "in_max": row.in_max,
        "in_custom": row.in_custom,
        "custom_separator": row.custom_separator.as_ref().map(vector),
    })
}

/// A posterior allowed by the maximal product but not by the custom one.
fn is_obstruction(row: &SwapRow) -> bool {
    row.in_max == Some(true) && row.in_custom == Some(false)
}

pub fn run(args: &SwapArgs, out: &Sink) -> Result<bool> {
    let setup = setup::build(&args.system, TensorChoice::Custom, &args.keep.keep)?;
    let effects: Vec<(String, Vector)> = setup::entangled_effects(&setup)?
        .into_iter()
        .map(|e| (e.label, e.normalized))
        .collect();
    if effects.is_empty() {
        bail!("the custom product has no entangled effects to measure");
    }
    if args.scan {
        return scan(&setup, &args.keep.keep, &effects, out);
    }
    let (Some(ab), Some(cd), Some(effect)) = (args.ab, args.cd, args.effect) else {
        bail!("give --scan or all of --ab, --cd and --effect");
    };
    single(&setup, [ab, cd], effect, &effects, out)
}

fn scan(setup: &Setup, keep: &[usize], effects: &[(String, Vector)], out: &Sink) -> Result<bool> {
    let states: Vec<(String, Vector)> = keep
        .iter()
        .map(|&l| Ok((format!("w{l}"), setup.labels.vertex(l)?)))
        .collect::<Result<_>>()?;
    let rows = swap_scan(&states, effects, &setup.max, &setup.joint, |v| {
        setup.labels.label(v).map(|l| format!("w{l}"))
    })?;
    let found = rows.iter().any(is_obstruction);
    match out.format(Format::Csv) {
        Format::Csv => {
            let mut text = format!("{SCAN_CSV_HEADER}\n");
            for r in &rows {
                text += &r.csv_line();
                text.push('\n');
            }
            out.write(&text)?;
        }
        Format::Json => out.json(&json!({
            "rows": rows.iter().map(row_json).collect::<Vec<_>>(),
            "obstruction_found": found,
        }))?,
    }
    Ok(found)
}

fn single(
    setup: &Setup,
    [ab, cd]: [usize; 2],
    effect: usize,
    effects: &[(String, Vector)],
    out: &Sink,
) -> Result<bool> {
    out.require_json()?;
    let name = format!("e{effect}");
    let e = effects
        .iter()
        .find(|(l, _)| *l == name)
        .map(|(_, v)| v)
        .ok_or_else(|| anyhow!("no entangled effect labelled {name}"))?;
    let u = &setup.local.unit;
    let state = product_state(&setup.labels.vertex(ab)?, &setup.labels.vertex(cd)?, [u, u, u, u])?;
    let c = collapse(&state, e)?;
    let (in_max, in_custom, separator) = match &c.posterior {
        None => (None, None, None),
        Some(p) => {
            let in_max = cone_membership(p, &setup.max.state_cone())?.is_inside();
            match cone_membership(p, &setup.joint.state_cone())? {
                Membership::Inside { .. } => (Some(in_max), Some(true), None),
                Membership::Outside { separator } => (Some(in_max), Some(false), Some(separator)),
            }
        }
    };
    let obstruction = in_max == Some(true) && in_custom == Some(false);
    out.json(&json!({
        "stateAB": format!("w{ab}"),
        "stateCD": format!("w{cd}"),
        "effectBD": name,
        "effect": vector(e),
        "probability": q(&c.probability),
        "posterior": c.posterior.as_ref().map(vector),
        "posterior_id": c.posterior.as_ref().map(|p| setup.labels.name(p)),
        "in_max": in_max,
        "in_custom": in_custom,
        "custom_separator": separator.as_ref().map(vector),
        "obstruction": obstruction,
    }))?;
    Ok(obstruction)
}
