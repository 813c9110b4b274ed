use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use boxworld_core::correlations::{
    behavior_from, check_no_signalling, chsh_value, is_pr_box, Behavior, Party, SignallingWitness,
};
use boxworld_core::system::{Effect, Measurement, SystemSpec};
use serde_json::{json, Value};

use crate::output::{q, Format, Sink};
use crate::setup;
use crate::BehaviorArgs;

fn measurements(system: &SystemSpec, indices: &[usize]) -> Result<[Measurement; 2]> {
    let [i0, i1] = indices else {
        bail!("give exactly two effect indices, one per input (e.g. 3,2)");
    };
    let make = |i: usize| -> Result<Measurement> {
        let e = Effect::new(system, setup::local_effect(system, i)?)?;
        Ok(Measurement::binary(system, e)?)
    };
    Ok([make(*i0)?, make(*i1)?])
}

fn witness_json(w: &SignallingWitness) -> Value {
    let party = match w.party {
        Party::Alice => "Alice",
        Party::Bob => "Bob",
    };
    json!({
        "party": party,
        "input": w.input,
        "outcome": w.outcome,
        "marginal_by_other_input": w.marginals.iter().map(q).collect::<Vec<_>>(),
    })
}

/// Report fields shared by all behavior commands; the `p` table is kept at
/// the top level so the report can be read back as a behavior file.
fn summary(b: &Behavior) -> Result<serde_json::Map<String, Value>> {
    let Value::Object(mut map) = serde_json::to_value(b)? else {
        unreachable!("behaviors serialize to objects")
    };
    let witness = check_no_signalling(b);
    map.insert("no_signalling".into(), json!(witness.is_none()));
    map.insert(
        "signalling_witness".into(),
        witness.as_ref().map_or(Value::Null, witness_json),
    );
    if witness.is_none() {
        let chsh = chsh_value(b);
        map.insert("chsh".into(), q(&chsh.value));
        map.insert("chsh_variant".into(), json!(chsh.variant.to_string()));
        map.insert("local".into(), json!(chsh.value <= boxworld_core::scalar::int(2)));
        map.insert("pr_box".into(), serde_json::to_value(is_pr_box(b))?);
    }
    Ok(map)
}

pub fn run(args: &BehaviorArgs, out: &Sink) -> Result<bool> {
    let setup = args.tensor.build()?;
    let state = setup.labels.vertex(args.state)?;
    if !setup.joint.joint_states.contains(&state) {
        bail!("w{} is not a state of the selected tensor product", args.state);
    }
    let meas_a = measurements(&setup.local, &args.meas_a)?;
    let meas_b = measurements(&setup.local, &args.meas_b)?;
    let b = behavior_from(&state, &meas_a, &meas_b)?;
    let no_signalling = check_no_signalling(&b).is_none();
    match out.format(Format::Json) {
        Format::Json => {
            let mut map = summary(&b)?;
            map.insert("state".into(), json!(format!("w{}", args.state)));
            map.insert("meas_a".into(), json!(args.meas_a));
            map.insert("meas_b".into(), json!(args.meas_b));
            out.json(&Value::Object(map))?;
        }
        Format::Csv => {
            let mut text = String::from("x,y,a,b,p\n");
            for x in 0..2 {
                for y in 0..2 {
                    for a in 0..2 {
                        for bb in 0..2 {
                            text += &format!("{x},{y},{a},{bb},{}\n", boxworld_core::scalar::format(b.p(a, bb, x, y)));
                        }
                    }
                }
            }
            out.write(&text)?;
        }
    }
    Ok(no_signalling)
}

fn load(path: &Path) -> Result<Behavior> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Behavior::from_json(&text).with_context(|| format!("{} is not a valid behavior", path.display()))
}

pub fn check_nosignalling(path: &Path, out: &Sink) -> Result<bool> {
    out.require_json()?;
    let b = load(path)?;
    let witness = check_no_signalling(&b);
    out.json(&json!({
        "no_signalling": witness.is_none(),
        "witness": witness.as_ref().map_or(Value::Null, witness_json),
    }))?;
    Ok(witness.is_none())
}

pub fn check_local(path: &Path, out: &Sink) -> Result<bool> {
    out.require_json()?;
    let b = load(path)?;
    if let Some(w) = check_no_signalling(&b) {
        let party = if w.party == Party::Alice { "Alice" } else { "Bob" };
        bail!("the behavior is signalling ({party}'s marginal depends on the other input); locality is undefined");
    }
    let summary = summary(&b)?;
    out.json(&json!({
        "local": summary["local"],
        "chsh": summary["chsh"],
        "chsh_variant": summary["chsh_variant"],
        "pr_box": summary["pr_box"],
    }))?;
    Ok(summary["local"] == json!(true))
}
