//! Four-party product states `w_AB ⊗ w_CD` and their collapse under a joint
//! effect on the inner parties `B, D`.
//!
//! Layout contract: a four-party vector is flattened in party order
//! `A, B, C, D`, component `(i, j, k, l)` at `((i*dB + j)*dC + k)*dD + l`.
//! Effects on `BD` are B-major (`j*dD + l`) and posteriors on `AC` are A-major
//! (`i*dC + k`).

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{self, Membership};
use crate::scalar::{self, Scalar};
use crate::tensor::JointSystem;
use crate::vector::Vector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiState {
    /// Local dimensions of `A, B, C, D`.
    pub dims: [usize; 4],
    pub data: Vector,
    /// `u_A ⊗ u_B ⊗ u_C ⊗ u_D`.
    pub unit: Vector,
    local_units: [Vector; 4],
}

pub fn index4(dims: [usize; 4], i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * dims[1] + j) * dims[2] + k) * dims[3] + l
}

impl MultiState {
    pub fn local_unit(&self, party: usize) -> &Vector {
        &self.local_units[party]
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Scalar {
        &self.data[index4(self.dims, i, j, k, l)]
    }

    /// Reduced state on `A, C` (the `B, D` unit contraction).
    pub fn marginal_ac(&self) -> Vector {
        let ubd = self.local_units[1].kron(&self.local_units[3]);
        contract_bd(self, &ubd)
    }
}

/// Builds `w_AB ⊗ w_CD` in the `A, B, C, D` layout. `units` are the local
/// unit measures of `A, B, C, D` and fix the local dimensions.
pub fn product_state(ab: &Vector, cd: &Vector, units: [&Vector; 4]) -> Result<MultiState> {
    let dims = units.map(Vector::dim);
    let uab = units[0].kron(units[1]);
    let ucd = units[2].kron(units[3]);
    if ab.dim() != uab.dim() {
        return Err(Error::DimensionMismatch {
            expected: uab.dim(),
            got: ab.dim(),
        });
    }
    if cd.dim() != ucd.dim() {
        return Err(Error::DimensionMismatch {
            expected: ucd.dim(),
            got: cd.dim(),
        });
    }
    if !uab.dot(ab).is_one() || !ucd.dot(cd).is_one() {
        return Err(Error::Invalid("bipartite inputs must be normalized".into()));
    }
    let mut data = vec![Scalar::zero(); dims.iter().product()];
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            let x = &ab[i * dims[1] + j];
            if x.is_zero() {
                continue;
            }
            for k in 0..dims[2] {
                for l in 0..dims[3] {
                    data[index4(dims, i, j, k, l)] = x * &cd[k * dims[3] + l];
                }
            }
        }
    }
    Ok(MultiState {
        dims,
        data: Vector::new(data),
        unit: uab.kron(&ucd),
        local_units: units.map(Clone::clone),
    })
}

fn contract_bd(s: &MultiState, effect_bd: &Vector) -> Vector {
    let [da, db, dc, dd] = s.dims;
    let mut out = vec![Scalar::zero(); da * dc];
    for i in 0..da {
        for k in 0..dc {
            let mut acc = Scalar::zero();
            for j in 0..db {
                for l in 0..dd {
                    let e = &effect_bd[j * dd + l];
                    if !e.is_zero() {
                        acc += e * s.get(i, j, k, l);
                    }
                }
            }
            out[i * dc + k] = acc;
        }
    }
    Vector::new(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collapse {
    pub probability: Scalar,
    /// Unnormalized posterior on `A, C`.
    pub unnormalized: Vector,
    /// Normalized posterior, absent when the outcome has probability zero.
    pub posterior: Option<Vector>,
}

/// Applies `effect_bd` to the inner parties and returns the outcome
/// probability and the post-measurement state on `A, C`.
pub fn collapse(s: &MultiState, effect_bd: &Vector) -> Result<Collapse> {
    let expected = s.dims[1] * s.dims[3];
    if effect_bd.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: effect_bd.dim(),
        });
    }
    let unnormalized = contract_bd(s, effect_bd);
    let uac = s.local_units[0].kron(&s.local_units[2]);
    let probability = uac.dot(&unnormalized);
    let posterior = (!probability.is_zero()).then(|| unnormalized.scale(&probability.recip()));
    Ok(Collapse {
        probability,
        unnormalized,
        posterior,
    })
}

/// One `(w_AB, w_CD, e_BD)` combination of a swapping scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwapRow {
    pub state_ab: String,
    pub state_cd: String,
    pub effect_bd: String,
    #[serde(with = "scalar::serde_scalar")]
    pub probability: Scalar,
    pub posterior: Option<Vector>,
    /// Label of the matching maximal-tensor vertex, or `mixed/other`.
    pub posterior_id: String,
    pub in_max: Option<bool>,
    pub in_custom: Option<bool>,
    /// Functional separating the posterior from the custom cone.
    pub custom_separator: Option<Vector>,
}

pub const SCAN_CSV_HEADER: &str = "stateAB,stateCD,effectBD,probability,posterior_id,in_max,in_custom";

impl SwapRow {
    pub fn csv_line(&self) -> String {
        let flag = |f: Option<bool>| match f {
            Some(true) => "true",
            Some(false) => "false",
            None => "-",
        };
        format!(
            "{},{},{},{},{},{},{}",
            self.state_ab,
            self.state_cd,
            self.effect_bd,
            scalar::format(&self.probability),
            self.posterior_id,
            flag(self.in_max),
            flag(self.in_custom)
        )
    }
}

/// Collapses every `states × states × effects` combination and checks each
/// posterior against the maximal and the custom tensor product. Rows come back
/// in input order (AB state, then CD state, then effect).
///
/// `label` names a posterior that is a vertex of `max`; other posteriors are
/// reported as `mixed/other`.
pub fn swap_scan(
    states: &[(String, Vector)],
    effects: &[(String, Vector)],
    max: &JointSystem,
    custom: &JointSystem,
    label: impl Fn(&Vector) -> Option<String> + Sync,
) -> Result<Vec<SwapRow>> {
    let a = &max.party_a;
    let b = &max.party_b;
    let units = [&a.unit, &b.unit, &a.unit, &b.unit];
    let max_cone = max.state_cone();
    let custom_cone = custom.state_cone();
    let triples: Vec<(usize, usize, usize)> = (0..states.len())
        .flat_map(|i| (0..states.len()).flat_map(move |j| (0..effects.len()).map(move |k| (i, j, k))))
        .collect();
    triples
        .par_iter()
        .map(|&(i, j, k)| {
            let s = product_state(&states[i].1, &states[j].1, units)?;
            let c = collapse(&s, &effects[k].1)?;
            let (posterior_id, in_max, in_custom, custom_separator) = match &c.posterior {
                None => ("none".to_string(), None, None, None),
                Some(p) => {
                    let id = if max.joint_states.contains(p) {
                        label(p).unwrap_or_else(|| "vertex".into())
                    } else {
                        "mixed/other".into()
                    };
                    let in_max = geometry::cone_membership(p, &max_cone)?.is_inside();
                    let (in_custom, sep) = match geometry::cone_membership(p, &custom_cone)? {
                        Membership::Inside { .. } => (true, None),
                        Membership::Outside { separator } => (false, Some(separator)),
                    };
                    (id, Some(in_max), Some(in_custom), sep)
                }
            };
            Ok(SwapRow {
                state_ab: states[i].0.clone(),
                state_cd: states[j].0.clone(),
                effect_bd: effects[k].0.clone(),
                probability: c.probability,
                posterior: c.posterior,
                posterior_id,
                in_max,
                in_custom,
                custom_separator,
            })
        })
        .collect()
}

/// Checks `0 <= p <= 1` for a collapse probability.
pub fn is_probability(p: &Scalar) -> bool {
    !p.is_negative() && *p <= Scalar::one()
}
